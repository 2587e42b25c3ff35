//! Abstract finite algebras and their representations.
//!
//! A finite algebra is stored through its atoms: elements are atom masks,
//! and each substitution generator is a table mapping atoms to elements
//! (its additive extension). For additive normal operators this atom view
//! is exact: an operator is a Boolean endomorphism iff its atom images
//! are pairwise disjoint and jointly cover the top element, and two
//! additive operators agree iff they agree on atoms. Axiom validation
//! therefore reduces to fast atom-level table checks.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::bits::Bits;
use crate::config::Config;
use crate::decide::{transformation_point, DecideError};
use crate::free::FreeAlgebraHandle;
use crate::perm::{
    decompose, enumerate_monoid, generators, Letter, PermError, SigKind, Transformation,
};
use crate::rng::SweepRng;
use crate::set::{AlgebraDesc, DenseSet, SetAlgebra, SetError, UnitSpec};
use crate::term::{instantiate_axioms, SchemaId, Signature, Term};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RepError {
    AxiomViolations { count: usize },
    ZeroRelativizer,
    WrongSignature { expected: &'static str },
    TooManyAtoms { atoms: usize, cap: usize },
    DimensionTooSmall { dim: usize },
    Perm(PermError),
    Set(SetError),
    Decide(DecideError),
}

impl fmt::Display for RepError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RepError::AxiomViolations { count } => {
                write!(f, "algebra fails {count} axiom instance(s)")
            }
            RepError::ZeroRelativizer => write!(f, "cannot relativize to the zero element"),
            RepError::WrongSignature { expected } => {
                write!(f, "operation requires the {expected} signature")
            }
            RepError::TooManyAtoms { atoms, cap } => {
                write!(f, "algebra has {atoms} atoms, cap is {cap}")
            }
            RepError::DimensionTooSmall { dim } => {
                write!(f, "dimension must be at least 2, got {dim}")
            }
            RepError::Perm(e) => write!(f, "{e}"),
            RepError::Set(e) => write!(f, "{e}"),
            RepError::Decide(e) => write!(f, "{e}"),
        }
    }
}

impl From<PermError> for RepError {
    fn from(e: PermError) -> Self {
        RepError::Perm(e)
    }
}

impl From<SetError> for RepError {
    fn from(e: SetError) -> Self {
        RepError::Set(e)
    }
}

impl From<DecideError> for RepError {
    fn from(e: DecideError) -> Self {
        RepError::Decide(e)
    }
}

const ATOM_CAP: usize = 4096;

/// A finite BAO of one of the three signatures, given by atoms and
/// generator tables. Elements are atom masks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteAlgebra {
    sig: Signature,
    atoms: usize,
    /// `s[i,j]` tables, keyed by `i < j`: atom index to element mask.
    transpositions: BTreeMap<(usize, usize), Vec<Bits>>,
    /// `s[i/j]` tables, keyed by the ordered pair.
    replacements: BTreeMap<(usize, usize), Vec<Bits>>,
    /// Diagonal constants, keyed by `i < j` (`d_ii` is the top element).
    diagonals: BTreeMap<(usize, usize), Bits>,
    /// Concrete origin, when the algebra came from a set algebra.
    provenance: Option<Provenance>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Provenance {
    pub algebra: AlgebraDesc,
    /// Unit points of each atom.
    pub atom_points: Vec<Vec<usize>>,
}

/// Outcome of validating every axiom instance at the atom level.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomReport {
    pub violations: Vec<String>,
}

impl AxiomReport {
    pub fn clean(&self) -> bool {
        self.violations.is_empty()
    }
}

/// A principal ultrafilter of a finite algebra, named by its atom.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Ultrafilter {
    pub atom: usize,
}

impl FiniteAlgebra {
    pub fn signature(&self) -> &Signature {
        &self.sig
    }

    pub fn atom_count(&self) -> usize {
        self.atoms
    }

    pub fn element_count_log2(&self) -> usize {
        self.atoms
    }

    pub fn provenance(&self) -> Option<&Provenance> {
        self.provenance.as_ref()
    }

    pub fn top(&self) -> Bits {
        Bits::ones(self.atoms)
    }

    pub fn bottom(&self) -> Bits {
        Bits::zeros(self.atoms)
    }

    pub fn atom(&self, k: usize) -> Bits {
        Bits::from_indices(self.atoms, &[k])
    }

    pub fn meet(&self, x: &Bits, y: &Bits) -> Bits {
        x.and(y)
    }

    pub fn join(&self, x: &Bits, y: &Bits) -> Bits {
        x.or(y)
    }

    pub fn complement(&self, x: &Bits) -> Bits {
        x.not()
    }

    pub fn le(&self, x: &Bits, y: &Bits) -> bool {
        x.subset_of(y)
    }

    pub fn diagonal(&self, i: usize, j: usize) -> Result<Bits, RepError> {
        if self.sig.kind != SigKind::Sad {
            return Err(RepError::WrongSignature { expected: "SAD" });
        }
        if i == j {
            return Ok(self.top());
        }
        Ok(self.diagonals[&(i.min(j), i.max(j))].clone())
    }

    fn table(&self, l: Letter) -> &Vec<Bits> {
        match l {
            Letter::Transpose(i, j) => &self.transpositions[&(i.min(j), i.max(j))],
            Letter::Replace(i, j) => &self.replacements[&(i, j)],
        }
    }

    /// Additive extension of one generator.
    pub fn apply_letter(&self, l: Letter, x: &Bits) -> Bits {
        let table = self.table(l);
        let mut out = Bits::zeros(self.atoms);
        for a in x.iter_ones() {
            out = out.or(&table[a]);
        }
        out
    }

    /// `s_tau` through a shortest word for `tau`.
    pub fn apply_transformation(
        &self,
        tau: &Transformation,
        x: &Bits,
        config: &Config,
    ) -> Result<Bits, RepError> {
        let word = decompose(tau, self.sig.kind, config)?;
        let mut out = x.clone();
        for l in word.letters().iter().rev() {
            out = self.apply_letter(*l, &out);
        }
        Ok(out)
    }

    /// Builds the abstract copy of a concrete set algebra: atoms are the
    /// unit points.
    pub fn from_set_algebra(alg: &SetAlgebra, config: &Config) -> Result<FiniteAlgebra, RepError> {
        let member_points: Vec<usize> = alg.unit().membership().iter_ones().collect();
        Self::subalgebra_impl(alg, &member_points, config)
    }

    /// The subalgebra of `alg` generated by the given elements: closes the
    /// generators (plus diagonals for SAD) under the substitutions, takes
    /// membership-pattern classes of points as atoms, and reads off the
    /// generator tables.
    pub fn subalgebra(
        alg: &SetAlgebra,
        gens: &[DenseSet],
        config: &Config,
    ) -> Result<FiniteAlgebra, RepError> {
        // close the generating family under the substitution letters
        let letters = generators(alg.dim(), alg.kind());
        let mut family: BTreeSet<Bits> = BTreeSet::new();
        let mut work: Vec<Bits> = Vec::new();
        for g in gens {
            if family.insert(g.bits().clone()) {
                work.push(g.bits().clone());
            }
        }
        if alg.kind() == SigKind::Sad {
            for i in 0..alg.dim() {
                for j in i + 1..alg.dim() {
                    let d = alg.diagonal(i, j)?;
                    if family.insert(d.bits().clone()) {
                        work.push(d.bits().clone());
                    }
                }
            }
        }
        while let Some(x) = work.pop() {
            for &l in &letters {
                let t = l.transformation(alg.dim())?;
                let y = alg.apply_subst(&alg.from_bits(x.clone())?, &t)?;
                if family.insert(y.bits().clone()) {
                    work.push(y.bits().clone());
                }
            }
        }
        // atoms = pattern classes of unit points across the family
        let family: Vec<Bits> = family.into_iter().collect();
        let mut class_of_pattern: BTreeMap<Vec<bool>, Vec<usize>> = BTreeMap::new();
        for p in alg.unit().membership().iter_ones() {
            let pattern: Vec<bool> = family.iter().map(|y| y.get(p)).collect();
            class_of_pattern.entry(pattern).or_default().push(p);
        }
        // order atoms by least member point
        let mut classes: Vec<Vec<usize>> = class_of_pattern.into_values().collect();
        classes.sort_by_key(|pts| pts[0]);
        Self::subalgebra_from_classes(alg, classes, config)
    }

    fn subalgebra_impl(
        alg: &SetAlgebra,
        member_points: &[usize],
        config: &Config,
    ) -> Result<FiniteAlgebra, RepError> {
        let classes: Vec<Vec<usize>> = member_points.iter().map(|&p| alloc::vec![p]).collect();
        Self::subalgebra_from_classes(alg, classes, config)
    }

    fn subalgebra_from_classes(
        alg: &SetAlgebra,
        classes: Vec<Vec<usize>>,
        config: &Config,
    ) -> Result<FiniteAlgebra, RepError> {
        let _ = config;
        let atoms = classes.len();
        if atoms > ATOM_CAP {
            return Err(RepError::TooManyAtoms {
                atoms,
                cap: ATOM_CAP,
            });
        }
        let mut class_of_point: BTreeMap<usize, usize> = BTreeMap::new();
        for (c, pts) in classes.iter().enumerate() {
            for &p in pts {
                class_of_point.insert(p, c);
            }
        }
        let dim = alg.dim();
        let letters = generators(dim, alg.kind());
        let mut transpositions = BTreeMap::new();
        let mut replacements = BTreeMap::new();
        for &l in &letters {
            let t = l.transformation(dim)?;
            let mut table: Vec<Bits> = Vec::with_capacity(atoms);
            for pts in &classes {
                let atom_set = alg.from_points(pts)?;
                let image = alg.apply_subst(&atom_set, &t)?;
                let mut mask = Bits::zeros(atoms);
                let mut covered = 0usize;
                for p in image.bits().iter_ones() {
                    mask.set(class_of_point[&p], true);
                }
                for c in mask.iter_ones() {
                    covered += classes[c].len();
                }
                // the image must be a union of classes, or the family was
                // not closed
                debug_assert_eq!(covered, image.count(), "atom image splits a class");
                table.push(mask);
            }
            match l {
                Letter::Transpose(i, j) => {
                    transpositions.insert((i.min(j), i.max(j)), table);
                }
                Letter::Replace(i, j) => {
                    replacements.insert((i, j), table);
                }
            }
        }
        let mut diagonals = BTreeMap::new();
        if alg.kind() == SigKind::Sad {
            for i in 0..dim {
                for j in i + 1..dim {
                    let d = alg.diagonal(i, j)?;
                    let mut mask = Bits::zeros(atoms);
                    for p in d.bits().iter_ones() {
                        mask.set(class_of_point[&p], true);
                    }
                    diagonals.insert((i, j), mask);
                }
            }
        }
        Ok(FiniteAlgebra {
            sig: Signature {
                dim,
                kind: alg.kind(),
            },
            atoms,
            transpositions,
            replacements,
            diagonals,
            provenance: Some(Provenance {
                algebra: alg.describe(),
                atom_points: classes,
            }),
        })
    }

    /// The abstract free algebra: atoms are the minterms of the alphabet.
    pub fn from_free(h: &FreeAlgebraHandle) -> Result<FiniteAlgebra, RepError> {
        let k = h.alphabet().len();
        if k > 16 {
            return Err(RepError::TooManyAtoms {
                atoms: 1 << k.min(30),
                cap: ATOM_CAP,
            });
        }
        let atoms = 1usize << k;
        if atoms > ATOM_CAP {
            return Err(RepError::TooManyAtoms {
                atoms,
                cap: ATOM_CAP,
            });
        }
        let sig = *h.signature();
        let letters = generators(sig.dim, sig.kind);
        let alphabet = h.alphabet();
        let mut transpositions = BTreeMap::new();
        let mut replacements = BTreeMap::new();
        for &l in &letters {
            let g = l.transformation(sig.dim)?;
            // s_g maps minterm r to the conjunction of relabeled literals:
            // empty if two literals clash, else all rows extending the
            // partial assignment
            let mut table: Vec<Bits> = Vec::with_capacity(atoms);
            for r in 0..atoms {
                let mut constraint: BTreeMap<usize, bool> = BTreeMap::new();
                let mut clash = false;
                for (pos, v) in alphabet.iter().enumerate() {
                    let (var, tau) = match v {
                        crate::decide::DecoratedVar::Subst { var, tau } => (var, tau),
                        crate::decide::DecoratedVar::Diag(..) => unreachable!("diagonal-free"),
                    };
                    let target = crate::perm::compose(&g, tau)?;
                    let target_pos = alphabet
                        .iter()
                        .position(|u| {
                            matches!(u, crate::decide::DecoratedVar::Subst { var: v2, tau: t2 }
                                if v2 == var && *t2 == target)
                        })
                        .expect("monoid is closed under composition");
                    let bit = r >> pos & 1 == 1;
                    match constraint.get(&target_pos) {
                        None => {
                            constraint.insert(target_pos, bit);
                        }
                        Some(&b) if b == bit => {}
                        Some(_) => {
                            clash = true;
                            break;
                        }
                    }
                }
                let mut mask = Bits::zeros(atoms);
                if !clash {
                    for row in 0..atoms {
                        if constraint.iter().all(|(&p, &b)| (row >> p & 1 == 1) == b) {
                            mask.set(row, true);
                        }
                    }
                }
                table.push(mask);
            }
            match l {
                Letter::Transpose(i, j) => {
                    transpositions.insert((i.min(j), i.max(j)), table);
                }
                Letter::Replace(i, j) => {
                    replacements.insert((i, j), table);
                }
            }
        }
        Ok(FiniteAlgebra {
            sig,
            atoms,
            transpositions,
            replacements,
            diagonals: BTreeMap::new(),
            provenance: None,
        })
    }

    /// Validates every axiom instance of the signature at the atom level:
    /// each generator must be a Boolean endomorphism (disjoint atom images
    /// covering the top), and every unary schema instance must agree on
    /// atoms; diagonal schemas are checked on the constants.
    pub fn validate(&self) -> AxiomReport {
        let mut violations = Vec::new();
        let letters = generators(self.sig.dim, self.sig.kind);
        for &l in &letters {
            let table = self.table(l);
            let mut seen = Bits::zeros(self.atoms);
            for (a, img) in table.iter().enumerate() {
                if !seen.and(img).is_zero() {
                    violations.push(format!("{l:?}: atom {a} image overlaps an earlier image"));
                }
                seen = seen.or(img);
            }
            if seen != self.top() {
                violations.push(format!("{l:?}: atom images do not cover the top element"));
            }
        }

        for inst in instantiate_axioms(&self.sig) {
            match inst.schema {
                SchemaId::Bool(_) | SchemaId::MeetHom | SchemaId::ComplHom => continue,
                _ => {}
            }
            let lhs = unary_chain(&inst.equation.lhs);
            let rhs = unary_chain(&inst.equation.rhs);
            let (Some((lc, lcore)), Some((rc, rcore))) = (lhs, rhs) else {
                continue;
            };
            let eval_core = |core: &ChainCore| -> Option<Bits> {
                match core {
                    ChainCore::Var => None,
                    ChainCore::Top => Some(self.top()),
                    ChainCore::Bottom => Some(self.bottom()),
                    ChainCore::Diag(i, j) => Some(self.diagonal(*i, *j).expect("SAD signature")),
                    ChainCore::DiagMeet(pairs) => {
                        let mut out = self.top();
                        for (i, j) in pairs {
                            out = out.and(&self.diagonal(*i, *j).expect("SAD signature"));
                        }
                        Some(out)
                    }
                }
            };
            let apply_chain = |chain: &[Letter], x: &Bits| -> Bits {
                let mut out = x.clone();
                for l in chain.iter().rev() {
                    out = self.apply_letter(*l, &out);
                }
                out
            };
            match (eval_core(&lcore), eval_core(&rcore)) {
                (None, None) => {
                    for a in 0..self.atoms {
                        let atom = self.atom(a);
                        if apply_chain(&lc, &atom) != apply_chain(&rc, &atom) {
                            violations.push(format!(
                                "schema {} instance {} fails at atom {a}",
                                inst.schema, inst.equation
                            ));
                            break;
                        }
                    }
                }
                (Some(l), Some(r)) if apply_chain(&lc, &l) != apply_chain(&rc, &r) => {
                    violations.push(format!(
                        "schema {} instance {} fails",
                        inst.schema, inst.equation
                    ));
                }
                _ => {}
            }
        }
        AxiomReport { violations }
    }
}

enum ChainCore {
    Var,
    Top,
    Bottom,
    Diag(usize, usize),
    DiagMeet(Vec<(usize, usize)>),
}

/// Splits a term of the shape `s_l1 ... s_lk core` into its letter chain
/// and core; also accepts meets of diagonals as cores (schema D3).
fn unary_chain(t: &Term) -> Option<(Vec<Letter>, ChainCore)> {
    let mut chain = Vec::new();
    let mut cur = t;
    loop {
        match cur {
            Term::SubstT(i, j, sub) => {
                chain.push(Letter::Transpose(*i, *j));
                cur = sub;
            }
            Term::SubstR(i, j, sub) => {
                chain.push(Letter::Replace(*i, *j));
                cur = sub;
            }
            Term::Var(0) => return Some((chain, ChainCore::Var)),
            Term::Top => return Some((chain, ChainCore::Top)),
            Term::Bottom => return Some((chain, ChainCore::Bottom)),
            Term::Diag(i, j) => return Some((chain, ChainCore::Diag(*i, *j))),
            Term::And(..) if chain.is_empty() => {
                let mut pairs = Vec::new();
                if collect_diag_meet(cur, &mut pairs) {
                    return Some((chain, ChainCore::DiagMeet(pairs)));
                }
                return None;
            }
            _ => return None,
        }
    }
}

fn collect_diag_meet(t: &Term, out: &mut Vec<(usize, usize)>) -> bool {
    match t {
        Term::Diag(i, j) => {
            out.push((*i, *j));
            true
        }
        Term::And(a, b) => collect_diag_meet(a, out) && collect_diag_meet(b, out),
        _ => false,
    }
}

/// An additive map from a finite algebra into a set algebra, given by the
/// images of the atoms.
#[derive(Clone, Debug)]
pub struct Representation {
    pub source_atoms: usize,
    pub target: SetAlgebra,
    pub per_atom: Vec<DenseSet>,
}

/// What a verification pass established.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RepReport {
    pub homomorphism: bool,
    pub injective: bool,
    pub atom_cover: bool,
    /// For finite algebras, completeness coincides with the atom cover.
    pub complete: bool,
}

impl RepReport {
    pub fn all_good(&self) -> bool {
        self.homomorphism && self.injective && self.atom_cover && self.complete
    }
}

impl Representation {
    /// Image of an element (the union of its atom images).
    pub fn map(&self, elem: &Bits) -> DenseSet {
        let mut out = self.target.bottom();
        for a in elem.iter_ones() {
            out = self.target.join(&out, &self.per_atom[a]);
        }
        out
    }

    /// Atom-level verification: the map is a homomorphism iff the atom
    /// images are pairwise disjoint, cover the unit, and intertwine every
    /// generator table; it is injective iff every atom image is nonempty.
    pub fn verify(&self, source: &FiniteAlgebra, config: &Config) -> Result<RepReport, RepError> {
        let mut hom = true;
        let mut seen = self.target.bottom();
        for img in &self.per_atom {
            if !self.target.meet(&seen, img).is_empty() {
                hom = false;
            }
            seen = self.target.join(&seen, img);
        }
        let atom_cover = seen == self.target.top();
        if !atom_cover {
            hom = false;
        }
        for &l in &generators(source.sig.dim, source.sig.kind) {
            let t = l.transformation(source.sig.dim)?;
            for a in 0..source.atoms {
                let lhs = self.map(&source.apply_letter(l, &source.atom(a)));
                let rhs = self.target.apply_subst(&self.per_atom[a], &t)?;
                if lhs != rhs {
                    hom = false;
                }
            }
        }
        if source.sig.kind == SigKind::Sad {
            for i in 0..source.sig.dim {
                for j in i + 1..source.sig.dim {
                    let lhs = self.map(&source.diagonal(i, j)?);
                    let rhs = self.target.diagonal(i, j)?;
                    if lhs != rhs {
                        hom = false;
                    }
                }
            }
        }
        let injective = self.per_atom.iter().all(|img| !img.is_empty());
        let _ = config;
        Ok(RepReport {
            homomorphism: hom,
            injective,
            atom_cover,
            complete: atom_cover,
        })
    }

    /// Direct sweep confirming meets are preserved: exhaustive over all
    /// element subsets when the algebra has at most 16 elements, over all
    /// atom subsets plus sampled element subsets otherwise.
    pub fn verify_meets(
        &self,
        source: &FiniteAlgebra,
        config: &Config,
    ) -> Result<MeetReport, RepError> {
        let atoms = source.atoms;
        let mut checked = 0u64;
        let mut failures = 0u64;

        let mut check_subset = |elems: &[Bits]| {
            let mut meet = source.top();
            let mut inter = self.target.top();
            for e in elems {
                meet = meet.and(e);
                inter = self.target.meet(&inter, &self.map(e));
            }
            checked += 1;
            if self.map(&meet) != inter {
                failures += 1;
            }
        };

        let exhaustive = atoms <= 4;
        if exhaustive {
            // all subsets of the (at most 16) elements
            let elems: Vec<Bits> = (0..1usize << atoms)
                .map(|m| {
                    let mut b = Bits::zeros(atoms);
                    for k in 0..atoms {
                        if m >> k & 1 == 1 {
                            b.set(k, true);
                        }
                    }
                    b
                })
                .collect();
            let n = elems.len();
            for subset in 0..1u64 << n {
                let chosen: Vec<Bits> = (0..n)
                    .filter(|k| subset >> k & 1 == 1)
                    .map(|k| elems[k].clone())
                    .collect();
                check_subset(&chosen);
            }
        } else {
            // all atom subsets, then sampled element subsets
            for subset in 0..1u64 << atoms.min(20) {
                let chosen: Vec<Bits> = (0..atoms.min(20))
                    .filter(|k| subset >> k & 1 == 1)
                    .map(|k| source.atom(k))
                    .collect();
                check_subset(&chosen);
            }
            let mut rng = SweepRng::new(config.seed, 0x3e37);
            for _ in 0..1000 {
                let size = rng.below(4) + 1;
                let chosen: Vec<Bits> = (0..size).map(|_| rng.bits(atoms)).collect();
                check_subset(&chosen);
            }
        }
        Ok(MeetReport {
            checked,
            failures,
            exhaustive,
        })
    }

    /// If any subset of atoms meets to zero, its image intersection must
    /// be empty.
    pub fn verify_omission(&self, source: &FiniteAlgebra) -> Result<bool, RepError> {
        let atoms = source.atoms.min(20);
        for subset in 0..1u64 << atoms {
            if subset.count_ones() < 2 {
                continue; // the meet is not zero
            }
            let mut inter = self.target.top();
            for k in 0..atoms {
                if subset >> k & 1 == 1 {
                    inter = self.target.meet(&inter, &self.per_atom[k]);
                }
            }
            if !inter.is_empty() {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MeetReport {
    pub checked: u64,
    pub failures: u64,
    pub exhaustive: bool,
}

fn require_clean(a: &FiniteAlgebra) -> Result<(), RepError> {
    let report = a.validate();
    if !report.clean() {
        return Err(RepError::AxiomViolations {
            count: report.violations.len(),
        });
    }
    Ok(())
}

/// The target unit for single-ultrafilter representations: permutations
/// inside `^nn` for TA, the full square for SA.
fn monoid_unit(sig: &Signature, config: &Config) -> Result<SetAlgebra, RepError> {
    let desc = match sig.kind {
        SigKind::Ta => {
            let points = enumerate_monoid(sig.dim, SigKind::Ta, config)?
                .iter()
                .map(|t| transformation_point(sig.dim, t))
                .collect();
            AlgebraDesc {
                dim: sig.dim,
                base: sig.dim,
                unit: UnitSpec::Points(points),
                kind: SigKind::Ta,
            }
        }
        _ => AlgebraDesc {
            dim: sig.dim,
            base: sig.dim,
            unit: UnitSpec::Square,
            kind: if sig.kind == SigKind::Sad {
                SigKind::Sad
            } else {
                SigKind::Sa
            },
        },
    };
    Ok(desc.build(config)?)
}

/// The ultrafilter representation `h(z) = {xi : s_xi z in F}` into the
/// algebra over `S_n` (TA) or `^nn` (SA).
pub fn ultrafilter_rep(
    a: &FiniteAlgebra,
    f: &Ultrafilter,
    config: &Config,
) -> Result<Representation, RepError> {
    require_clean(a)?;
    let target = monoid_unit(&a.sig, config)?;
    let monoid = enumerate_monoid(a.sig.dim, a.sig.kind, config)?;
    let mut per_atom = Vec::with_capacity(a.atoms);
    for atom in 0..a.atoms {
        let mut points = Vec::new();
        for tau in &monoid {
            let image = a.apply_transformation(tau, &a.atom(atom), config)?;
            if image.get(f.atom) {
                points.push(transformation_point(a.sig.dim, tau));
            }
        }
        points.sort_unstable();
        per_atom.push(target.from_points(&points)?);
    }
    Ok(Representation {
        source_atoms: a.atoms,
        target,
        per_atom,
    })
}

/// Embeds each copy of the monoid unit into `^n(n*atoms)` with base
/// offset `copy * n`, so the disjoint union is itself a permutable (for
/// SA: dipermutable) unit.
fn disjoint_union_target(
    sig: &Signature,
    copies: usize,
    config: &Config,
) -> Result<SetAlgebra, RepError> {
    let monoid = enumerate_monoid(sig.dim, sig.kind, config)?;
    let base = sig.dim * copies;
    let mut points = Vec::new();
    for copy in 0..copies {
        for tau in &monoid {
            let digits: Vec<usize> = (0..sig.dim)
                .map(|k| tau.apply(k) + copy * sig.dim)
                .collect();
            let mut idx = 0;
            for &d in digits.iter().rev() {
                idx = idx * base + d;
            }
            points.push(idx);
        }
    }
    let kind = if sig.kind == SigKind::Ta {
        SigKind::Ta
    } else {
        SigKind::Sa
    };
    let desc = AlgebraDesc {
        dim: sig.dim,
        base,
        unit: UnitSpec::Points(points),
        kind,
    };
    Ok(desc.build(config)?)
}

/// The complete representation of a finite (hence atomic) TA algebra:
/// the disjoint union over atoms of the per-atom ultrafilter
/// representations.
pub fn complete_rep(
    a: &FiniteAlgebra,
    config: &Config,
) -> Result<(Representation, RepReport), RepError> {
    if a.sig.kind != SigKind::Ta {
        return Err(RepError::WrongSignature { expected: "TA" });
    }
    require_clean(a)?;
    let rep = complete_rep_impl(a, config)?;
    let report = rep.verify(a, config)?;
    Ok((rep, report))
}

#[allow(clippy::needless_range_loop)]
fn complete_rep_impl(a: &FiniteAlgebra, config: &Config) -> Result<Representation, RepError> {
    let copies = a.atoms.max(1);
    let target = disjoint_union_target(&a.sig, copies, config)?;
    let monoid = enumerate_monoid(a.sig.dim, a.sig.kind, config)?;
    let base = a.sig.dim * copies;
    let mut per_atom = alloc::vec![Vec::new(); a.atoms];
    for copy in 0..copies {
        for tau in &monoid {
            let digits: Vec<usize> = (0..a.sig.dim)
                .map(|k| tau.apply(k) + copy * a.sig.dim)
                .collect();
            let mut idx = 0;
            for &d in digits.iter().rev() {
                idx = idx * base + d;
            }
            for atom in 0..a.atoms {
                let image = a.apply_transformation(tau, &a.atom(atom), config)?;
                if image.get(copy) {
                    per_atom[atom].push(idx);
                }
            }
        }
    }
    let per_atom = per_atom
        .into_iter()
        .map(|mut pts| {
            pts.sort_unstable();
            target.from_points(&pts)
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Representation {
        source_atoms: a.atoms,
        target,
        per_atom,
    })
}

/// Outcome of the atom-sum criterion.
#[derive(Clone, Debug)]
pub struct AtomSumOutcome {
    pub holds: bool,
    pub witness_tau: Option<Transformation>,
    /// A verified complete representation, built when `b = 1` and the
    /// criterion holds.
    pub rep: Option<(Representation, RepReport)>,
}

/// Checks that the join of `{s_tau x : x atom}` equals `b` for every
/// `tau` in `^nn`; when `b = 1` and the criterion holds, constructs and
/// verifies a complete representation.
pub fn atom_sum_criterion(
    a: &FiniteAlgebra,
    b: &Bits,
    config: &Config,
) -> Result<AtomSumOutcome, RepError> {
    if a.sig.kind == SigKind::Ta {
        return Err(RepError::WrongSignature {
            expected: "SA or SAD",
        });
    }
    require_clean(a)?;
    let monoid = enumerate_monoid(a.sig.dim, SigKind::Sa, config)?;
    for tau in &monoid {
        let mut join = a.bottom();
        for atom in 0..a.atoms {
            join = join.or(&a.apply_transformation(tau, &a.atom(atom), config)?);
        }
        if join != *b {
            return Ok(AtomSumOutcome {
                holds: false,
                witness_tau: Some(tau.clone()),
                rep: None,
            });
        }
    }
    let rep = if *b == a.top() {
        let rep = complete_rep_impl(a, config)?;
        let report = rep.verify(a, config)?;
        Some((rep, report))
    } else {
        None
    };
    Ok(AtomSumOutcome {
        holds: true,
        witness_tau: None,
        rep,
    })
}

/// `Rl_b A`: elements below `b` with relativized operations; the axioms
/// are re-validated, not assumed.
pub fn relativize_rl(
    a: &FiniteAlgebra,
    b: &Bits,
    config: &Config,
) -> Result<(FiniteAlgebra, AxiomReport), RepError> {
    let _ = config;
    if b.is_zero() {
        return Err(RepError::ZeroRelativizer);
    }
    let kept: Vec<usize> = b.iter_ones().collect();
    let atoms = kept.len();
    let reindex = |mask: &Bits| -> Bits {
        let mut out = Bits::zeros(atoms);
        for (new, &old) in kept.iter().enumerate() {
            if mask.get(old) {
                out.set(new, true);
            }
        }
        out
    };
    let letters = generators(a.sig.dim, a.sig.kind);
    let mut transpositions = BTreeMap::new();
    let mut replacements = BTreeMap::new();
    for &l in &letters {
        let table: Vec<Bits> = kept
            .iter()
            .map(|&old| reindex(&a.apply_letter(l, &a.atom(old)).and(b)))
            .collect();
        match l {
            Letter::Transpose(i, j) => {
                transpositions.insert((i.min(j), i.max(j)), table);
            }
            Letter::Replace(i, j) => {
                replacements.insert((i, j), table);
            }
        }
    }
    let mut diagonals = BTreeMap::new();
    if a.sig.kind == SigKind::Sad {
        for i in 0..a.sig.dim {
            for j in i + 1..a.sig.dim {
                diagonals.insert((i, j), reindex(&a.diagonal(i, j)?.and(b)));
            }
        }
    }
    let out = FiniteAlgebra {
        sig: a.sig,
        atoms,
        transpositions,
        replacements,
        diagonals,
        provenance: None,
    };
    let report = out.validate();
    Ok((out, report))
}

/// A frame: states with one binary relation per transposition pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Frame {
    pub dim: usize,
    pub states: usize,
    /// Edges of `S_ij`, keyed by `i < j`.
    pub relations: BTreeMap<(usize, usize), Vec<(usize, usize)>>,
}

impl Frame {
    /// The functional transposition frame of a unit: `(s, t)` related iff
    /// `s ∘ [i,j] = t`.
    pub fn functional(alg: &SetAlgebra) -> Result<Frame, RepError> {
        let dim = alg.dim();
        let members: Vec<usize> = alg.unit().membership().iter_ones().collect();
        let index_of: BTreeMap<usize, usize> =
            members.iter().enumerate().map(|(k, &p)| (p, k)).collect();
        let mut relations = BTreeMap::new();
        for i in 0..dim {
            for j in i + 1..dim {
                let t = Transformation::transposition(dim, i, j)?;
                let mut edges = Vec::new();
                for (k, &p) in members.iter().enumerate() {
                    let q = alg.unit().point_apply(p, &t);
                    if let Some(&m) = index_of.get(&q) {
                        edges.push((k, m));
                    }
                }
                relations.insert((i, j), edges);
            }
        }
        Ok(Frame {
            dim,
            states: members.len(),
            relations,
        })
    }
}

/// The complex algebra of a frame: the powerset with existential-image
/// operators `s_ij(X) = {s : exists t in X with (t,s) in S_ij}`.
pub fn complex_algebra(frame: &Frame) -> Result<(FiniteAlgebra, AxiomReport), RepError> {
    if frame.dim < 2 {
        return Err(RepError::DimensionTooSmall { dim: frame.dim });
    }
    let atoms = frame.states;
    if atoms > ATOM_CAP {
        return Err(RepError::TooManyAtoms {
            atoms,
            cap: ATOM_CAP,
        });
    }
    let mut transpositions = BTreeMap::new();
    for i in 0..frame.dim {
        for j in i + 1..frame.dim {
            let empty = Vec::new();
            let edges = frame.relations.get(&(i, j)).unwrap_or(&empty);
            let mut table = alloc::vec![Bits::zeros(atoms); atoms];
            for &(t, s) in edges {
                table[t].set(s, true);
            }
            transpositions.insert((i, j), table);
        }
    }
    let out = FiniteAlgebra {
        sig: Signature {
            dim: frame.dim,
            kind: SigKind::Ta,
        },
        atoms,
        transpositions,
        replacements: BTreeMap::new(),
        diagonals: BTreeMap::new(),
        provenance: None,
    };
    let report = out.validate();
    Ok((out, report))
}

/// Report of the diagonal quotient construction. The finite-dimensional
/// outcome is reported, not asserted.
#[derive(Clone, Debug)]
pub struct DiagQuotientReport {
    /// Class of each base index under `i ~ j iff d_ij in F`.
    pub classes: Vec<usize>,
    pub well_defined: bool,
    pub respects_substitutions: bool,
    pub respects_diagonals: bool,
    /// Per-atom images over the quotient square unit.
    pub rep: Representation,
}

/// Builds the ultrafilter representation, quotients the base by the
/// diagonal kernel of `F`, and reports which laws survive.
#[allow(clippy::needless_range_loop)]
pub fn diagonal_quotient_rep(
    a: &FiniteAlgebra,
    f: &Ultrafilter,
    config: &Config,
) -> Result<DiagQuotientReport, RepError> {
    if a.sig.kind != SigKind::Sad {
        return Err(RepError::WrongSignature { expected: "SAD" });
    }
    require_clean(a)?;
    let n = a.sig.dim;
    // i ~ j iff d_ij belongs to the principal ultrafilter at f.atom
    let mut classes = alloc::vec![usize::MAX; n];
    let mut next = 0usize;
    for i in 0..n {
        if classes[i] != usize::MAX {
            continue;
        }
        classes[i] = next;
        for j in i + 1..n {
            if classes[j] == usize::MAX && a.diagonal(i, j)?.get(f.atom) {
                classes[j] = next;
            }
        }
        next += 1;
    }
    let blocks = next;
    let target = AlgebraDesc {
        dim: n,
        base: blocks,
        unit: UnitSpec::Square,
        kind: SigKind::Sad,
    }
    .build(config)?;
    let monoid = enumerate_monoid(n, SigKind::Sa, config)?;
    let bar = |tau: &Transformation| -> usize {
        let mut idx = 0;
        for k in (0..n).rev() {
            idx = idx * blocks + classes[tau.apply(k)];
        }
        idx
    };

    // f(z) = { bar(xi) : s_xi z in F }, built per atom; well-definedness
    // asks that bar-equal transformations agree on membership
    let mut per_atom = Vec::with_capacity(a.atoms);
    let mut in_f: Vec<BTreeMap<usize, bool>> = alloc::vec![BTreeMap::new(); a.atoms];
    let mut well_defined = true;
    for atom in 0..a.atoms {
        let mut points = BTreeSet::new();
        for tau in &monoid {
            let member = a
                .apply_transformation(tau, &a.atom(atom), config)?
                .get(f.atom);
            let key = bar(tau);
            match in_f[atom].get(&key) {
                None => {
                    in_f[atom].insert(key, member);
                }
                Some(&prev) if prev != member => {
                    well_defined = false;
                }
                _ => {}
            }
            if member {
                points.insert(key);
            }
        }
        let points: Vec<usize> = points.into_iter().collect();
        per_atom.push(target.from_points(&points)?);
    }
    let rep = Representation {
        source_atoms: a.atoms,
        target: target.clone(),
        per_atom,
    };

    // does the quotient respect the substitutions and the diagonals?
    let mut respects_substitutions = true;
    for &l in &generators(n, SigKind::Sa) {
        let t = l.transformation(n)?;
        for atom in 0..a.atoms {
            let lhs = rep.map(&a.apply_letter(l, &a.atom(atom)));
            let rhs = target.apply_subst(&rep.per_atom[atom], &t)?;
            if lhs != rhs {
                respects_substitutions = false;
            }
        }
    }
    let mut respects_diagonals = true;
    for i in 0..n {
        for j in i + 1..n {
            let lhs = rep.map(&a.diagonal(i, j)?);
            let rhs = target.diagonal(i, j)?;
            if lhs != rhs {
                respects_diagonals = false;
            }
        }
    }
    Ok(DiagQuotientReport {
        classes,
        well_defined,
        respects_substitutions,
        respects_diagonals,
        rep,
    })
}

/// Which construction a non-variety certificate used.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NonVarietyVariant {
    /// Base-2 unit of the indicator sequences `e_i`, `f` pairing all
    /// indices (even dimensions).
    IndicatorEven,
    /// The unit `S_n` with `f = [0,1]` and `X = {p : p(0) < p(1)}` (odd
    /// dimensions, where no base-2 indicator unit admits a fixed-point
    /// free involution action).
    SymmetricOdd,
}

/// How the quasi-equation was verified in one small algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SmallAlgebraMethod {
    Exhaustive {
        assignments: u64,
    },
    /// Constant points are fixed by every substitution, so no `Y` can
    /// satisfy `S_f(Y) = -Y`; a seeded sample backs the argument up.
    ConstantPoint {
        point: usize,
        samples: u64,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmallAlgebraVerdict {
    pub k: usize,
    pub method: SmallAlgebraMethod,
    pub holds: bool,
}

/// Certificate that `RTA_n` is not a variety: a permutable unit `G`, a
/// permutation `f` and a set `X` with `S_f(X) = -X` in the relativized
/// algebra, while the quasi-equation `s_f(x) = -x => 0 = 1` holds in
/// every small algebra `A_nk`.
#[derive(Clone, Debug)]
pub struct NonVarietyCertificate {
    pub n: usize,
    pub variant: NonVarietyVariant,
    pub unit: AlgebraDesc,
    pub f: Transformation,
    pub x_points: Vec<usize>,
    pub sf_equals_complement: bool,
    pub small_algebras: Vec<SmallAlgebraVerdict>,
}

impl NonVarietyCertificate {
    pub fn succeeded(&self) -> bool {
        self.sf_equals_complement && self.small_algebras.iter().all(|v| v.holds)
    }

    /// Re-derives the relativized half of the certificate from set
    /// algebra operations.
    pub fn replay(&self, config: &Config) -> Result<bool, RepError> {
        let alg = self.unit.build(config)?;
        let x = alg.from_points(&self.x_points)?;
        let sfx = alg.apply_subst(&x, &self.f)?;
        Ok(sfx == alg.complement(&x))
    }
}

/// Constructs and verifies the non-variety certificate for dimension `n`.
pub fn non_variety_certificate(
    n: usize,
    config: &Config,
) -> Result<NonVarietyCertificate, RepError> {
    if n < 2 {
        return Err(RepError::DimensionTooSmall { dim: n });
    }
    let (variant, unit, f, x_points) = if n.is_multiple_of(2) {
        // G = indicator sequences e_i in ^n2 (exactly one zero),
        // f = [0,1]∘[2,3]∘..., X = {e_i : i odd}; e_i ∘ f = e_{f(i)}
        let e_point = |i: usize| -> usize {
            let mut idx = 0;
            for k in (0..n).rev() {
                idx = idx * 2 + usize::from(k != i);
            }
            idx
        };
        let mut images: Vec<usize> = (0..n).collect();
        for k in 0..n / 2 {
            images.swap(2 * k, 2 * k + 1);
        }
        let f = Transformation::new(images).expect("indices in range");
        let mut g_points: Vec<usize> = (0..n).map(e_point).collect();
        g_points.sort_unstable();
        let unit = AlgebraDesc {
            dim: n,
            base: 2,
            unit: UnitSpec::Points(g_points),
            kind: SigKind::Ta,
        };
        let mut x_points: Vec<usize> = (0..n).filter(|i| i % 2 == 1).map(e_point).collect();
        x_points.sort_unstable();
        (NonVarietyVariant::IndicatorEven, unit, f, x_points)
    } else {
        // every union of base-2 indicator classes contains a point fixed
        // by any involution when n is odd, so use the unit S_n instead:
        // right composition with [0,1] is fixed-point free on it
        let perms = enumerate_monoid(n, SigKind::Ta, config)?;
        let mut points: Vec<usize> = perms.iter().map(|t| transformation_point(n, t)).collect();
        points.sort_unstable();
        let mut x_points: Vec<usize> = perms
            .iter()
            .filter(|t| t.apply(0) < t.apply(1))
            .map(|t| transformation_point(n, t))
            .collect();
        x_points.sort_unstable();
        let f = Transformation::transposition(n, 0, 1)?;
        let unit = AlgebraDesc {
            dim: n,
            base: n,
            unit: UnitSpec::Points(points),
            kind: SigKind::Ta,
        };
        (NonVarietyVariant::SymmetricOdd, unit, f, x_points)
    };

    let alg = unit.build(config)?;
    let x = alg.from_points(&x_points)?;
    let sfx = alg.apply_subst(&x, &f)?;
    let sf_equals_complement = sfx == alg.complement(&x);

    // sigma: s_f(x) = -x => 0 = 1, verified in every A_nk
    let word = decompose(&f, SigKind::Ta, config)?;
    let sf_x0 = Term::subst_word(&word, Term::Var(0));
    let premise = crate::term::Equation::new(sf_x0, Term::not(Term::Var(0)));
    let sigma = crate::term::QuasiEquation {
        premises: alloc::vec![premise.clone()],
        conclusion: crate::term::Equation::new(Term::Bottom, Term::Top),
    };

    let mut small_algebras = Vec::new();
    for k in 0..=n {
        let points = (k as u64).checked_pow(n as u32);
        let exhaustive =
            matches!(points, Some(p) if p < 63 && (1u64 << p) <= config.assignment_budget);
        if exhaustive {
            let alg_k = SetAlgebra::small(n, k, SigKind::Ta, config)?;
            let res = crate::decide::brute_force_check(
                &crate::decide::Check::Quasi(&sigma),
                &alg_k,
                config,
            )?;
            small_algebras.push(SmallAlgebraVerdict {
                k,
                method: SmallAlgebraMethod::Exhaustive {
                    assignments: 1u64 << points.expect("checked"),
                },
                holds: res.is_valid(),
            });
        } else {
            // constant-point argument: a constant q has q ∘ f = q, so
            // q in S_f(Y) iff q in Y, refuting S_f(Y) = -Y for every Y
            let alg_k = SetAlgebra::small(n, k, SigKind::Ta, config)?;
            let q = 0usize; // the all-zero constant point
            let fixed = alg_k.unit().point_apply(q, &f) == q;
            let mut rng = SweepRng::new(config.seed, 0x0a4b ^ k as u64);
            let mut clean = true;
            for _ in 0..config.samples {
                let y_bits = rng.bits(alg_k.unit().points());
                let y = alg_k
                    .from_bits(y_bits.and(alg_k.unit().membership()))
                    .expect("masked");
                let sfy = alg_k.apply_subst(&y, &f)?;
                if sfy == alg_k.complement(&y) {
                    clean = false;
                    break;
                }
            }
            small_algebras.push(SmallAlgebraVerdict {
                k,
                method: SmallAlgebraMethod::ConstantPoint {
                    point: q,
                    samples: config.samples,
                },
                holds: fixed && clean,
            });
        }
    }

    Ok(NonVarietyCertificate {
        n,
        variant,
        unit,
        f,
        x_points,
        sf_equals_complement,
        small_algebras,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> Config {
        Config::default()
    }

    fn a22(kind: SigKind) -> FiniteAlgebra {
        let alg = SetAlgebra::small(2, 2, kind, &cfg()).unwrap();
        FiniteAlgebra::from_set_algebra(&alg, &cfg()).unwrap()
    }

    #[test]
    fn from_set_algebra_validates() {
        for kind in [SigKind::Ta, SigKind::Sa, SigKind::Sad] {
            let a = a22(kind);
            assert_eq!(a.atom_count(), 4);
            let report = a.validate();
            assert!(report.clean(), "{:?}: {:?}", kind, report.violations);
        }
        let a33 = SetAlgebra::small(3, 3, SigKind::Sa, &cfg()).unwrap();
        let a = FiniteAlgebra::from_set_algebra(&a33, &cfg()).unwrap();
        assert_eq!(a.atom_count(), 27);
        assert!(a.validate().clean());
    }

    #[test]
    fn from_free_validates_and_matches_counts() {
        let h = FreeAlgebraHandle::build(&Signature::ta(2).unwrap(), 1, &cfg()).unwrap();
        let a = FiniteAlgebra::from_free(&h).unwrap();
        assert_eq!(a.atom_count(), 4);
        assert!(a.validate().clean());

        let h = FreeAlgebraHandle::build(&Signature::sa(2).unwrap(), 1, &cfg()).unwrap();
        let a = FiniteAlgebra::from_free(&h).unwrap();
        assert_eq!(a.atom_count(), 16);
        assert!(a.validate().clean());
    }

    #[test]
    fn ultrafilter_rep_examples() {
        // A = Fr_1 TA_2, F at the atom x0 & s01 x0 (both alphabet bits on)
        let h = FreeAlgebraHandle::build(&Signature::ta(2).unwrap(), 1, &cfg()).unwrap();
        let a = FiniteAlgebra::from_free(&h).unwrap();
        let f = Ultrafilter { atom: 0b11 };
        let rep = ultrafilter_rep(&a, &f, &cfg()).unwrap();
        // h(x0): x0 contains atoms with the identity bit set; its image
        // is all of S_2
        let x0 = {
            // element of the free algebra: rows where the (Id,0) bit is 1;
            // the alphabet is sorted with Id before the swap
            let mut b = Bits::zeros(4);
            b.set(0b01, true);
            b.set(0b11, true);
            b
        };
        assert_eq!(rep.map(&x0), rep.target.top());
        assert_eq!(rep.target.unit().size(), 2);

        // two-element algebra: h(1) = everything, h(0) = empty
        let two = {
            let alg = SetAlgebra::small(2, 0, SigKind::Ta, &cfg()).unwrap();
            let _ = alg;
            // build from the one-atom relativization of A_22
            let a = a22(SigKind::Ta);
            relativize_rl(&a, &a.atom(0), &cfg()).unwrap().0
        };
        let rep = ultrafilter_rep(&two, &Ultrafilter { atom: 0 }, &cfg()).unwrap();
        assert_eq!(rep.map(&two.top()), rep.target.top());
        assert!(rep.map(&two.bottom()).is_empty());

        // homomorphism law h(s01 z) = S01 h(z) for all 16 elements
        let a = FiniteAlgebra::from_free(&h).unwrap();
        let rep = ultrafilter_rep(&a, &f, &cfg()).unwrap();
        let swap = Transformation::transposition(2, 0, 1).unwrap();
        for code in 0..16usize {
            let mut z = Bits::zeros(4);
            for k in 0..4 {
                if code >> k & 1 == 1 {
                    z.set(k, true);
                }
            }
            let lhs = rep.map(&a.apply_letter(Letter::Transpose(0, 1), &z));
            let rhs = rep.target.apply_subst(&rep.map(&z), &swap).unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn complete_rep_examples() {
        // A_22 represents itself: cover and injectivity hold
        let a = a22(SigKind::Ta);
        let (rep, report) = complete_rep(&a, &cfg()).unwrap();
        assert!(report.all_good(), "{report:?}");
        assert_eq!(rep.target.unit().size(), 4 * 2); // 4 atoms x |S_2|

        // Fr_1 TA_2 has 4 atoms; V has size 8
        let h = FreeAlgebraHandle::build(&Signature::ta(2).unwrap(), 1, &cfg()).unwrap();
        let a = FiniteAlgebra::from_free(&h).unwrap();
        let (rep, report) = complete_rep(&a, &cfg()).unwrap();
        assert!(report.all_good(), "{report:?}");
        assert_eq!(rep.target.unit().size(), 8);

        // meets are preserved across all 2^16 subsets
        let meets = rep.verify_meets(&a, &cfg()).unwrap();
        assert!(meets.exhaustive);
        assert_eq!(meets.failures, 0);
        assert_eq!(meets.checked, 1 << 16);
        assert!(rep.verify_omission(&a).unwrap());

        // the finite reading of atomicity-equals-completeness: every
        // point's preimage ultrafilter is principal, i.e. each unit point
        // lies in exactly one atom image
        for v in rep.target.unit().membership().iter_ones() {
            let owners = rep.per_atom.iter().filter(|img| img.contains(v)).count();
            assert_eq!(owners, 1);
        }

        // SA signature is rejected
        let sa = a22(SigKind::Sa);
        assert!(matches!(
            complete_rep(&sa, &cfg()),
            Err(RepError::WrongSignature { .. })
        ));
    }

    #[test]
    fn atom_sum_criterion_examples() {
        let a = a22(SigKind::Sa);
        let out = atom_sum_criterion(&a, &a.top(), &cfg()).unwrap();
        assert!(out.holds);
        let (_, report) = out.rep.expect("complete rep at b = 1");
        assert!(report.all_good());

        // b = {(0,0),(0,1)} is not closed under the replacement joins
        let b = Bits::from_indices(4, &[0, 2]);
        let out = atom_sum_criterion(&a, &b, &cfg()).unwrap();
        assert!(!out.holds);
        assert!(out.witness_tau.is_some());
    }

    #[test]
    fn relativize_examples() {
        let a = a22(SigKind::Ta);
        // Rl_1 A = A (atom count preserved, axioms clean)
        let (r, report) = relativize_rl(&a, &a.top(), &cfg()).unwrap();
        assert_eq!(r.atom_count(), 4);
        assert!(report.clean());

        // relativize to the diagonal {(0,0),(1,1)}: 2 atoms, axioms hold
        let b = Bits::from_indices(4, &[0, 3]);
        let (r, report) = relativize_rl(&a, &b, &cfg()).unwrap();
        assert_eq!(r.atom_count(), 2);
        assert!(report.clean());

        // an atom gives the two-element algebra
        let (r, _) = relativize_rl(&a, &a.atom(0), &cfg()).unwrap();
        assert_eq!(r.atom_count(), 1);

        // a non-closed relativizer surfaces axiom violations
        let b = Bits::from_indices(4, &[0, 1]);
        let (_, report) = relativize_rl(&a, &b, &cfg()).unwrap();
        assert!(!report.clean());

        assert!(matches!(
            relativize_rl(&a, &a.bottom(), &cfg()),
            Err(RepError::ZeroRelativizer)
        ));
    }

    #[test]
    fn complex_algebra_examples() {
        // the functional frame of ^2 2 gives back A_22
        let alg = SetAlgebra::small(2, 2, SigKind::Ta, &cfg()).unwrap();
        let frame = Frame::functional(&alg).unwrap();
        let (cm, report) = complex_algebra(&frame).unwrap();
        assert!(report.clean());
        let direct = FiniteAlgebra::from_set_algebra(&alg, &cfg()).unwrap();
        assert_eq!(cm.transpositions, direct.transpositions);

        // empty frame: the one-element algebra
        let empty = Frame {
            dim: 2,
            states: 0,
            relations: BTreeMap::new(),
        };
        let (cm, report) = complex_algebra(&empty).unwrap();
        assert_eq!(cm.atom_count(), 0);
        assert!(report.clean());

        // the regular action frame on S_2 gives the full algebra over S_2
        let desc = AlgebraDesc {
            dim: 2,
            base: 2,
            unit: UnitSpec::Points(alloc::vec![1, 2]),
            kind: SigKind::Ta,
        };
        let s2 = desc.build(&cfg()).unwrap();
        let frame = Frame::functional(&s2).unwrap();
        let (cm, report) = complex_algebra(&frame).unwrap();
        assert!(report.clean());
        let direct = FiniteAlgebra::from_set_algebra(&s2, &cfg()).unwrap();
        assert_eq!(cm.transpositions, direct.transpositions);
    }

    #[test]
    fn diagonal_quotient_examples() {
        let a = a22(SigKind::Sad);
        // F at the atom {(0,1)}: distinct coordinates, the kernel is
        // trivial and the representation respects everything
        let report = diagonal_quotient_rep(&a, &Ultrafilter { atom: 2 }, &cfg()).unwrap();
        assert_eq!(report.classes, alloc::vec![0, 1]);
        assert!(report.well_defined);
        assert!(report.respects_substitutions);
        assert!(report.respects_diagonals);

        // F at the constant point (0,0): the base collapses to one block
        let report = diagonal_quotient_rep(&a, &Ultrafilter { atom: 0 }, &cfg()).unwrap();
        assert_eq!(report.classes, alloc::vec![0, 0]);
        assert_eq!(report.rep.target.unit().points(), 1);
    }

    #[test]
    fn non_variety_certificate_small_dims() {
        for n in [2usize, 3, 4] {
            let cert = non_variety_certificate(n, &cfg()).unwrap();
            assert!(cert.sf_equals_complement, "n={n}");
            assert!(cert.succeeded(), "n={n}");
            assert!(cert.replay(&cfg()).unwrap(), "n={n}");
        }
        // n=2 matches the instance G={(0,1),(1,0)}, X={(1,0)}
        let cert = non_variety_certificate(2, &cfg()).unwrap();
        assert_eq!(cert.variant, NonVarietyVariant::IndicatorEven);
        match &cert.unit.unit {
            UnitSpec::Points(p) => assert_eq!(p.as_slice(), &[1, 2]),
            _ => panic!("expected explicit points"),
        }
        assert_eq!(cert.x_points, alloc::vec![1]);
        // exhaustive at n=2 over A_22's 16 elements
        assert!(cert
            .small_algebras
            .iter()
            .all(|v| v.k > 2 || matches!(v.method, SmallAlgebraMethod::Exhaustive { .. })));
        assert!(matches!(
            non_variety_certificate(1, &cfg()),
            Err(RepError::DimensionTooSmall { .. })
        ));
    }
}
