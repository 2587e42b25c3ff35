//! Finite free algebras on `m` generators and constructive interpolation.
//!
//! Local finiteness is concrete here: the free algebra of dimension `n`
//! on `m` generators is the free Boolean algebra over the alphabet of
//! decorated variables `s_tau x_i` (`tau` in the monoid, `i < m`), because
//! substitutions are Boolean endomorphisms and push onto the alphabet.
//! Elements are canonical Boolean functions; only atom enumeration and
//! statistics materialize anything.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;
use core::fmt;

use crate::config::Config;
use crate::decide::{
    apply_transformation, decide_equation, normalize, Countermodel, DecideError, DecoratedVar,
    NormalForm, ValidityResult,
};
use crate::perm::{decompose, enumerate_monoid, PermError, SigKind, Transformation};
use crate::rng::SweepRng;
use crate::set::SetAlgebra;
use crate::term::{eval_term, Assignment, Equation, Signature, Term};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FreeError {
    AlphabetCap { needed: usize, cap: usize },
    DiagonalsNotSupported,
    NotInMonoid,
    Perm(PermError),
    Decide(DecideError),
}

impl fmt::Display for FreeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FreeError::AlphabetCap { needed, cap } => {
                write!(
                    f,
                    "alphabet of {needed} decorated variables exceeds cap {cap}"
                )
            }
            FreeError::DiagonalsNotSupported => {
                write!(f, "free algebras are built for the TA and SA signatures")
            }
            FreeError::NotInMonoid => write!(f, "transformation not in the signature's monoid"),
            FreeError::Perm(e) => write!(f, "{e}"),
            FreeError::Decide(e) => write!(f, "{e}"),
        }
    }
}

impl From<PermError> for FreeError {
    fn from(e: PermError) -> Self {
        FreeError::Perm(e)
    }
}

impl From<DecideError> for FreeError {
    fn from(e: DecideError) -> Self {
        FreeError::Decide(e)
    }
}

/// Handle to the free algebra of a signature on `m` generators. Elements
/// are [`NormalForm`]s over the alphabet; generator `i` is the decorated
/// variable `(Id, i)`.
#[derive(Clone, Debug)]
pub struct FreeAlgebraHandle {
    sig: Signature,
    gens: usize,
    monoid: Vec<Transformation>,
    alphabet: Vec<DecoratedVar>,
    config: Config,
}

/// Counts reported by [`FreeAlgebraHandle::stats`]. The cardinality is
/// `2^(2^alphabet)`, reported through its double logarithm.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreeStats {
    pub alphabet: usize,
    pub atom_count: u64,
    pub cardinality_log2_log2: usize,
    pub minterms_checked: u64,
    pub minterms_realized: u64,
    pub exhaustive: bool,
}

impl FreeAlgebraHandle {
    /// Builds the handle; the alphabet has `m * n!` (TA) or `m * n^n`
    /// (SA) decorated variables and must fit the configured cap.
    pub fn build(sig: &Signature, gens: usize, config: &Config) -> Result<Self, FreeError> {
        if sig.kind == SigKind::Sad {
            return Err(FreeError::DiagonalsNotSupported);
        }
        let monoid = enumerate_monoid(sig.dim, sig.kind, config)?;
        let needed = gens * monoid.len();
        if needed > config.alphabet_cap {
            return Err(FreeError::AlphabetCap {
                needed,
                cap: config.alphabet_cap,
            });
        }
        let mut alphabet = Vec::with_capacity(needed);
        for var in 0..gens {
            for tau in &monoid {
                alphabet.push(DecoratedVar::Subst {
                    var,
                    tau: tau.clone(),
                });
            }
        }
        alphabet.sort();
        Ok(FreeAlgebraHandle {
            sig: *sig,
            gens,
            monoid,
            alphabet,
            config: config.clone(),
        })
    }

    pub fn signature(&self) -> &Signature {
        &self.sig
    }

    pub fn generator_count(&self) -> usize {
        self.gens
    }

    pub fn alphabet(&self) -> &[DecoratedVar] {
        &self.alphabet
    }

    pub fn monoid(&self) -> &[Transformation] {
        &self.monoid
    }

    pub fn generator(&self, i: usize) -> NormalForm {
        debug_assert!(i < self.gens);
        NormalForm::var(DecoratedVar::Subst {
            var: i,
            tau: Transformation::identity(self.sig.dim),
        })
    }

    pub fn element_of(&self, t: &Term) -> Result<NormalForm, FreeError> {
        Ok(normalize(t, &self.sig, &self.config)?)
    }

    /// The atom with minterm index `row`: the conjunction assigning each
    /// alphabet variable the corresponding bit.
    pub fn atom(&self, row: u64) -> NormalForm {
        let mut nf = NormalForm::constant(true);
        for (k, v) in self.alphabet.iter().enumerate() {
            let lit = NormalForm::var(v.clone());
            let lit = if row >> k & 1 == 1 { lit } else { lit.negate() };
            nf = nf.and(&lit, &self.config).expect("alphabet fits the cap");
        }
        nf
    }

    /// The canonical concrete algebra the alphabet embeds into: the full
    /// algebra over `S_n` (TA) or `^nn` (SA).
    pub fn witness_algebra(&self) -> SetAlgebra {
        let sig = self.sig;
        let desc = match sig.kind {
            SigKind::Ta => {
                let points = self
                    .monoid
                    .iter()
                    .map(|t| crate::decide::transformation_point(sig.dim, t))
                    .collect();
                crate::set::AlgebraDesc {
                    dim: sig.dim,
                    base: sig.dim,
                    unit: crate::set::UnitSpec::Points(points),
                    kind: SigKind::Ta,
                }
            }
            _ => crate::set::AlgebraDesc {
                dim: sig.dim,
                base: sig.dim,
                unit: crate::set::UnitSpec::Square,
                kind: sig.kind,
            },
        };
        desc.build(&self.config).expect("canonical unit is closed")
    }

    /// The canonical assignment realizing minterm `row` at the identity
    /// point: `X_i = {tau : bit(tau, i) = 1}`.
    pub fn canonical_assignment(&self, row: u64, alg: &SetAlgebra) -> Assignment {
        let mut assignment = Assignment::new();
        for i in 0..self.gens {
            let mut points = Vec::new();
            for (k, v) in self.alphabet.iter().enumerate() {
                if let DecoratedVar::Subst { var, tau } = v {
                    if *var == i && row >> k & 1 == 1 {
                        points.push(crate::decide::transformation_point(self.sig.dim, tau));
                    }
                }
            }
            points.sort_unstable();
            assignment.insert(i, alg.from_points(&points).expect("monoid points"));
        }
        assignment
    }

    /// Cardinality and atom count, both confirmed by an explicit minterm
    /// realizability check through term evaluation: exhaustive for
    /// alphabets of at most 6 variables, sampled above.
    pub fn stats(&self) -> Result<FreeStats, FreeError> {
        let k = self.alphabet.len();
        let atom_count = 1u64 << k;
        let alg = self.witness_algebra();
        let id_point = crate::decide::transformation_point(
            self.sig.dim,
            &Transformation::identity(self.sig.dim),
        );

        let rows: Vec<u64> = if k <= 6 {
            (0..atom_count).collect()
        } else {
            let mut rng = SweepRng::new(self.config.seed, 0xf4ee);
            (0..200)
                .map(|_| rng.next_u64() & (atom_count - 1))
                .collect()
        };
        let exhaustive = k <= 6;
        let mut realized = 0;
        for &row in &rows {
            let term = term_of_normal_form(&self.atom(row), &self.sig, &self.config)?;
            let assignment = self.canonical_assignment(row, &alg);
            let value = eval_term(&term, &assignment, &alg).expect("assignment covers generators");
            if value.contains(id_point) {
                realized += 1;
            }
        }
        Ok(FreeStats {
            alphabet: k,
            atom_count,
            cardinality_log2_log2: k,
            minterms_checked: rows.len() as u64,
            minterms_realized: realized,
            exhaustive,
        })
    }

    /// The Boolean endomorphism induced by `t`: relabels `(tau, i)` to
    /// `(t∘tau, i)`; a permutation action when `t` is bijective.
    pub fn subst_action(
        &self,
        element: &NormalForm,
        t: &Transformation,
    ) -> Result<NormalForm, FreeError> {
        if !self.monoid.contains(t) {
            return Err(FreeError::NotInMonoid);
        }
        Ok(apply_transformation(element, t, &self.config)?)
    }
}

/// A DNF-shaped term whose normal form is `nf`, with one disjunct per true
/// row. Decorated variables render through a shortest word for their
/// transformation.
pub fn term_of_normal_form(
    nf: &NormalForm,
    sig: &Signature,
    config: &Config,
) -> Result<Term, FreeError> {
    let nf = nf.canonicalize();
    if let Some(c) = nf.is_constant() {
        return Ok(if c { Term::Top } else { Term::Bottom });
    }
    let mut literal_terms = Vec::with_capacity(nf.vars().len());
    for v in nf.vars() {
        let t = match v {
            DecoratedVar::Subst { var, tau } => {
                let word = decompose(tau, sig.kind, config)?;
                Term::subst_word(&word, Term::Var(*var))
            }
            DecoratedVar::Diag(i, j) => Term::Diag(*i, *j),
        };
        literal_terms.push(t);
    }
    let mut out: Option<Term> = None;
    let rows = 1usize << nf.vars().len();
    for row in 0..rows {
        if !nf.table().get(row) {
            continue;
        }
        let mut conj: Option<Term> = None;
        for (k, lit) in literal_terms.iter().enumerate() {
            let lit = if row >> k & 1 == 1 {
                lit.clone()
            } else {
                Term::not(lit.clone())
            };
            conj = Some(match conj {
                None => lit,
                Some(c) => Term::and(c, lit),
            });
        }
        let disjunct = conj.expect("nonconstant form has variables");
        out = Some(match out {
            None => disjunct,
            Some(o) => Term::or(o, disjunct),
        });
    }
    Ok(out.expect("nonconstant form has a true row"))
}

/// `a <= b` rendered as the equation `a & ~b = 0`.
pub fn leq_equation(a: &Term, b: &Term) -> Equation {
    Equation::new(Term::and(a.clone(), Term::not(b.clone())), Term::Bottom)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InterpolateError {
    /// The premise `a <= c` is not valid; the countermodel is returned.
    PremiseNotValid(Countermodel),
    VarsOutsideVocabulary {
        var: usize,
    },
    Decide(DecideError),
    Free(FreeError),
}

impl fmt::Display for InterpolateError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InterpolateError::PremiseNotValid(_) => {
                write!(f, "the implication a <= c is not valid")
            }
            InterpolateError::VarsOutsideVocabulary { var } => {
                write!(f, "variable x{var} is outside the stated vocabulary")
            }
            InterpolateError::Decide(e) => write!(f, "{e}"),
            InterpolateError::Free(e) => write!(f, "{e}"),
        }
    }
}

impl From<DecideError> for InterpolateError {
    fn from(e: DecideError) -> Self {
        InterpolateError::Decide(e)
    }
}

impl From<FreeError> for InterpolateError {
    fn from(e: FreeError) -> Self {
        InterpolateError::Free(e)
    }
}

/// An interpolant with its two certified bounds.
#[derive(Clone, Debug)]
pub struct InterpolationResult {
    pub interpolant: Term,
    pub lower: ValidityResult,
    pub upper: ValidityResult,
}

/// Computes the uniform interpolant of `a <= c`: existentially eliminates
/// from `normalize(a)` every decorated variable whose base variable is
/// not shared, and certifies both bounds.
pub fn interpolate(
    a: &Term,
    c: &Term,
    sig: &Signature,
    x1: &BTreeSet<usize>,
    x2: &BTreeSet<usize>,
    config: &Config,
) -> Result<InterpolationResult, InterpolateError> {
    for v in a.vars() {
        if !x1.contains(&v) {
            return Err(InterpolateError::VarsOutsideVocabulary { var: v });
        }
    }
    for v in c.vars() {
        if !x2.contains(&v) {
            return Err(InterpolateError::VarsOutsideVocabulary { var: v });
        }
    }
    match decide_equation(&leq_equation(a, c), sig, config)? {
        ValidityResult::Valid { .. } => {}
        ValidityResult::Invalid { countermodel, .. } => {
            return Err(InterpolateError::PremiseNotValid(countermodel))
        }
        ValidityResult::Unknown { .. } => {
            return Err(InterpolateError::Decide(DecideError::VarBudget {
                needed: 0,
                cap: config.decorated_var_cap,
            }))
        }
    }
    let shared: BTreeSet<usize> = x1.intersection(x2).copied().collect();
    let nf_a = normalize(a, sig, config)?;
    let nf_b = nf_a.eliminate(|v| match v.base_var() {
        Some(base) => shared.contains(&base),
        None => true,
    });
    let interpolant = term_of_normal_form(&nf_b, sig, config)?;
    let lower = decide_equation(&leq_equation(a, &interpolant), sig, config)?;
    let upper = decide_equation(&leq_equation(&interpolant, c), sig, config)?;
    Ok(InterpolationResult {
        interpolant,
        lower,
        upper,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::parse_term;

    fn cfg() -> Config {
        Config::default()
    }

    #[test]
    fn alphabet_sizes() {
        let h = FreeAlgebraHandle::build(&Signature::ta(2).unwrap(), 1, &cfg()).unwrap();
        assert_eq!(h.alphabet().len(), 2);
        let h = FreeAlgebraHandle::build(&Signature::sa(2).unwrap(), 1, &cfg()).unwrap();
        assert_eq!(h.alphabet().len(), 4);
        let h = FreeAlgebraHandle::build(&Signature::ta(3).unwrap(), 1, &cfg()).unwrap();
        assert_eq!(h.alphabet().len(), 6);
        // beyond the cap
        assert!(matches!(
            FreeAlgebraHandle::build(&Signature::ta(4).unwrap(), 2, &cfg()),
            Err(FreeError::AlphabetCap { needed: 48, .. })
        ));
        assert!(matches!(
            FreeAlgebraHandle::build(&Signature::sad(2).unwrap(), 1, &cfg()),
            Err(FreeError::DiagonalsNotSupported)
        ));
    }

    #[test]
    fn stats_examples() {
        let h = FreeAlgebraHandle::build(&Signature::ta(2).unwrap(), 1, &cfg()).unwrap();
        let s = h.stats().unwrap();
        assert_eq!((s.cardinality_log2_log2, s.atom_count), (2, 4));
        assert!(s.exhaustive);
        assert_eq!(s.minterms_realized, s.minterms_checked);

        let h = FreeAlgebraHandle::build(&Signature::ta(2).unwrap(), 2, &cfg()).unwrap();
        let s = h.stats().unwrap();
        assert_eq!((s.cardinality_log2_log2, s.atom_count), (4, 16));
        assert_eq!(s.minterms_realized, s.minterms_checked);

        let h = FreeAlgebraHandle::build(&Signature::sa(2).unwrap(), 1, &cfg()).unwrap();
        let s = h.stats().unwrap();
        assert_eq!((s.cardinality_log2_log2, s.atom_count), (4, 16));
        assert_eq!(s.minterms_realized, s.minterms_checked);
    }

    #[test]
    fn subst_action_examples() {
        let h = FreeAlgebraHandle::build(&Signature::ta(2).unwrap(), 1, &cfg()).unwrap();
        let swap = Transformation::transposition(2, 0, 1).unwrap();
        let g = h.generator(0);
        let acted = h.subst_action(&g, &swap).unwrap();
        assert_eq!(
            acted.vars(),
            &[DecoratedVar::Subst {
                var: 0,
                tau: swap.clone()
            }]
        );
        // acting twice is the identity
        assert_eq!(h.subst_action(&acted, &swap).unwrap(), g);
        // acting by a non-member transformation is rejected
        let c0 = Transformation::new(alloc::vec![0, 0]).unwrap();
        assert_eq!(h.subst_action(&g, &c0), Err(FreeError::NotInMonoid));
    }

    #[test]
    fn subst_action_matches_eval_oracle_on_sa2_atoms() {
        let h = FreeAlgebraHandle::build(&Signature::sa(2).unwrap(), 1, &cfg()).unwrap();
        let alg = h.witness_algebra();
        let c0 = Transformation::new(alloc::vec![0, 0]).unwrap();
        let word = decompose(&c0, SigKind::Sa, &cfg()).unwrap();
        for row in 0..16u64 {
            let atom = h.atom(row);
            let image = h.subst_action(&atom, &c0).unwrap();
            // oracle: evaluate the acted term directly
            let atom_term = term_of_normal_form(&atom, h.signature(), &cfg()).unwrap();
            let acted_term = Term::subst_word(&word, atom_term);
            let image_term = term_of_normal_form(&image, h.signature(), &cfg()).unwrap();
            for probe in 0..6u64 {
                let assignment = h.canonical_assignment(probe.wrapping_mul(7) ^ row, &alg);
                let direct = eval_term(&acted_term, &assignment, &alg).unwrap();
                let via_nf = eval_term(&image_term, &assignment, &alg).unwrap();
                assert_eq!(direct, via_nf);
            }
        }
    }

    #[test]
    fn term_of_normal_form_round_trips() {
        let sig = Signature::ta(2).unwrap();
        assert_eq!(
            term_of_normal_form(&NormalForm::constant(true), &sig, &cfg()).unwrap(),
            Term::Top
        );
        // a single decorated variable renders through its word
        let swap = Transformation::transposition(2, 0, 1).unwrap();
        let nf = NormalForm::var(DecoratedVar::Subst { var: 3, tau: swap });
        let t = term_of_normal_form(&nf, &sig, &cfg()).unwrap();
        assert_eq!(normalize(&t, &sig, &cfg()).unwrap(), nf);
        // two-variable xor round-trips with two minterms
        let a = NormalForm::var(DecoratedVar::Subst {
            var: 0,
            tau: Transformation::identity(2),
        });
        let b = NormalForm::var(DecoratedVar::Subst {
            var: 1,
            tau: Transformation::identity(2),
        });
        let xor = a
            .and(&b.negate(), &cfg())
            .unwrap()
            .or(&a.negate().and(&b, &cfg()).unwrap(), &cfg())
            .unwrap();
        let t = term_of_normal_form(&xor, &sig, &cfg()).unwrap();
        assert_eq!(normalize(&t, &sig, &cfg()).unwrap(), xor.canonicalize());
        assert!(matches!(t, Term::Or(..)));
    }

    #[test]
    fn generated_subalgebras_respect_the_free_bound() {
        // any singly generated subalgebra of a finite set algebra is no
        // larger than the free algebra on one generator
        let config = cfg();
        for kind in [SigKind::Ta, SigKind::Sa] {
            let sig = Signature::new(2, kind).unwrap();
            let h = FreeAlgebraHandle::build(&sig, 1, &config).unwrap();
            let bound_log2 = 1u32 << h.alphabet().len(); // |Fr_1| = 2^(2^k)
            let alg = crate::set::SetAlgebra::small(2, 2, kind, &config).unwrap();
            for m in 1..16usize {
                let pts: Vec<usize> = (0..4).filter(|i| m >> i & 1 == 1).collect();
                let gen = alg.from_points(&pts).unwrap();
                let sub = crate::rep::FiniteAlgebra::subalgebra(&alg, &[gen], &config).unwrap();
                assert!(sub.atom_count() as u32 <= bound_log2);
            }
        }
    }

    #[test]
    fn interpolate_examples() {
        let sig = Signature::ta(2).unwrap();
        let a = parse_term("x0 & x1", &sig).unwrap();
        let c = parse_term("x0 | x2", &sig).unwrap();
        let x1: BTreeSet<usize> = [0, 1].into_iter().collect();
        let x2: BTreeSet<usize> = [0, 2].into_iter().collect();
        let r = interpolate(&a, &c, &sig, &x1, &x2, &cfg()).unwrap();
        assert_eq!(r.interpolant, Term::Var(0));
        assert!(r.lower.is_valid() && r.upper.is_valid());

        // self-interpolation
        let a = parse_term("x0", &sig).unwrap();
        let r = interpolate(
            &a,
            &a,
            &sig,
            &[0].into_iter().collect(),
            &[0].into_iter().collect(),
            &cfg(),
        )
        .unwrap();
        assert_eq!(r.interpolant, Term::Var(0));

        // bottom interpolates a contradiction
        let a = parse_term("s[0,1] x0 & ~s[0,1] x0", &sig).unwrap();
        let c = parse_term("x1", &sig).unwrap();
        let r = interpolate(
            &a,
            &c,
            &sig,
            &[0].into_iter().collect(),
            &[1].into_iter().collect(),
            &cfg(),
        )
        .unwrap();
        assert_eq!(r.interpolant, Term::Bottom);

        // invalid premise reports the countermodel
        let a = parse_term("x0", &sig).unwrap();
        let c = parse_term("x1", &sig).unwrap();
        let err = interpolate(
            &a,
            &c,
            &sig,
            &[0].into_iter().collect(),
            &[1].into_iter().collect(),
            &cfg(),
        )
        .unwrap_err();
        assert!(matches!(err, InterpolateError::PremiseNotValid(_)));
    }
}
