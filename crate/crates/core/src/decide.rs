//! Normal forms and decision procedures.
//!
//! Every term of the diagonal-free signatures compiles to a canonical
//! Boolean function over decorated variables `(tau, i)` standing for
//! `s_tau x_i`: substitutions push to the leaves through the endomorphism
//! axioms and the composition law `s_sigma s_tau x = s_{sigma∘tau} x`.
//! Equational validity in the variety reduces to equality of these
//! functions; a differing truth-table row synthesizes a countermodel in
//! the full algebra over `S_n` (TA) or `^nn` (SA) witnessed at the
//! identity point, where the decorated variables are jointly independent.
//!
//! With diagonals there is no matching finite axiomatization, so validity
//! over square set algebras is decided semantically: sweep every kernel
//! partition of the witness point, identify decorated variables that the
//! kernel collapses, fix the diagonal constants, and compare the quotient
//! functions.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::bits::Bits;
use crate::config::Config;
use crate::perm::{SigKind, Transformation};
use crate::rng::SweepRng;
use crate::set::{AlgebraDesc, SetAlgebra, SetError, UnitSpec};
use crate::term::{
    eval_equation, Assignment, Equation, Formula, QuasiEquation, Signature, Term, TermError,
};

/// A decorated variable of a normal form: `s_tau x_i` or a diagonal
/// constant. The order is variable index, then transformation, with
/// diagonals last.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum DecoratedVar {
    Subst { var: usize, tau: Transformation },
    Diag(usize, usize),
}

impl DecoratedVar {
    pub fn base_var(&self) -> Option<usize> {
        match self {
            DecoratedVar::Subst { var, .. } => Some(*var),
            DecoratedVar::Diag(..) => None,
        }
    }
}

impl fmt::Display for DecoratedVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DecoratedVar::Subst { var, tau } => write!(f, "p[{tau:?},x{var}]"),
            DecoratedVar::Diag(i, j) => write!(f, "d[{i},{j}]"),
        }
    }
}

/// A canonical Boolean function over decorated variables.
///
/// `table` has `2^vars.len()` rows in binary counting order; bit `k` of a
/// row index is the value of `vars[k]`. Canonical forms have sorted
/// variables each of which influences the function.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalForm {
    vars: Vec<DecoratedVar>,
    table: Bits,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DecideError {
    VarBudget { needed: usize, cap: usize },
    DiagonalTerm,
    WrongSignature { expected: &'static str },
    Term(TermError),
    Algebra(SetError),
}

impl fmt::Display for DecideError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DecideError::VarBudget { needed, cap } => {
                write!(f, "{needed} decorated variables exceed the cap of {cap}")
            }
            DecideError::DiagonalTerm => {
                write!(f, "diagonal terms are decided by the semantic procedure")
            }
            DecideError::WrongSignature { expected } => {
                write!(f, "operation requires the {expected} signature")
            }
            DecideError::Term(e) => write!(f, "{e}"),
            DecideError::Algebra(e) => write!(f, "{e}"),
        }
    }
}

impl From<TermError> for DecideError {
    fn from(e: TermError) -> Self {
        DecideError::Term(e)
    }
}

impl From<SetError> for DecideError {
    fn from(e: SetError) -> Self {
        DecideError::Algebra(e)
    }
}

enum VarTarget {
    Keep(DecoratedVar),
    Const(bool),
}

impl NormalForm {
    pub fn constant(value: bool) -> NormalForm {
        let mut table = Bits::zeros(1);
        table.set(0, value);
        NormalForm {
            vars: Vec::new(),
            table,
        }
    }

    pub fn var(v: DecoratedVar) -> NormalForm {
        let mut table = Bits::zeros(2);
        table.set(1, true);
        NormalForm {
            vars: vec![v],
            table,
        }
    }

    pub fn vars(&self) -> &[DecoratedVar] {
        &self.vars
    }

    pub fn table(&self) -> &Bits {
        &self.table
    }

    pub fn is_constant(&self) -> Option<bool> {
        if self.vars.is_empty() {
            Some(self.table.get(0))
        } else {
            None
        }
    }

    pub fn negate(&self) -> NormalForm {
        NormalForm {
            vars: self.vars.clone(),
            table: self.table.not(),
        }
    }

    /// Reindexes the table onto a superset of the variables.
    pub fn expand_to(&self, vars: &[DecoratedVar]) -> NormalForm {
        if vars == self.vars.as_slice() {
            return self.clone();
        }
        let positions: Vec<usize> = self
            .vars
            .iter()
            .map(|v| vars.iter().position(|u| u == v).expect("superset"))
            .collect();
        let rows = 1usize << vars.len();
        let mut table = Bits::zeros(rows);
        for row in 0..rows {
            let mut old = 0usize;
            for (k, &p) in positions.iter().enumerate() {
                if row >> p & 1 == 1 {
                    old |= 1 << k;
                }
            }
            if self.table.get(old) {
                table.set(row, true);
            }
        }
        NormalForm {
            vars: vars.to_vec(),
            table,
        }
    }

    fn binop(
        &self,
        other: &NormalForm,
        f: impl Fn(&Bits, &Bits) -> Bits,
        config: &Config,
    ) -> Result<NormalForm, DecideError> {
        let mut union: BTreeSet<DecoratedVar> = self.vars.iter().cloned().collect();
        union.extend(other.vars.iter().cloned());
        let union: Vec<DecoratedVar> = union.into_iter().collect();
        if union.len() > config.decorated_var_cap {
            return Err(DecideError::VarBudget {
                needed: union.len(),
                cap: config.decorated_var_cap,
            });
        }
        let a = self.expand_to(&union);
        let b = other.expand_to(&union);
        Ok(NormalForm {
            vars: union,
            table: f(&a.table, &b.table),
        })
    }

    pub fn and(&self, other: &NormalForm, config: &Config) -> Result<NormalForm, DecideError> {
        self.binop(other, |a, b| a.and(b), config)
    }

    pub fn or(&self, other: &NormalForm, config: &Config) -> Result<NormalForm, DecideError> {
        self.binop(other, |a, b| a.or(b), config)
    }

    /// Renames variables (merging collisions) and substitutes constants.
    fn relabel(
        &self,
        map: impl Fn(&DecoratedVar) -> VarTarget,
        config: &Config,
    ) -> Result<NormalForm, DecideError> {
        let targets: Vec<VarTarget> = self.vars.iter().map(&map).collect();
        let mut new_vars: BTreeSet<DecoratedVar> = BTreeSet::new();
        for t in &targets {
            if let VarTarget::Keep(v) = t {
                new_vars.insert(v.clone());
            }
        }
        let new_vars: Vec<DecoratedVar> = new_vars.into_iter().collect();
        if new_vars.len() > config.decorated_var_cap {
            return Err(DecideError::VarBudget {
                needed: new_vars.len(),
                cap: config.decorated_var_cap,
            });
        }
        let rows = 1usize << new_vars.len();
        let mut table = Bits::zeros(rows);
        for row in 0..rows {
            let mut old = 0usize;
            for (k, t) in targets.iter().enumerate() {
                let bit = match t {
                    VarTarget::Const(b) => *b,
                    VarTarget::Keep(v) => {
                        let p = new_vars.iter().position(|u| u == v).expect("inserted");
                        row >> p & 1 == 1
                    }
                };
                if bit {
                    old |= 1 << k;
                }
            }
            if self.table.get(old) {
                table.set(row, true);
            }
        }
        Ok(NormalForm {
            vars: new_vars,
            table,
        })
    }

    /// Whether variable `k` influences the function.
    fn influences(&self, k: usize) -> bool {
        let rows = 1usize << self.vars.len();
        let stride = 1usize << k;
        let mut row = 0;
        while row < rows {
            for r in row..row + stride {
                if self.table.get(r) != self.table.get(r + stride) {
                    return true;
                }
            }
            row += stride << 1;
        }
        false
    }

    fn drop_var(&self, k: usize) -> NormalForm {
        let mut vars = self.vars.clone();
        vars.remove(k);
        let rows = 1usize << vars.len();
        let mut table = Bits::zeros(rows);
        let low = (1usize << k) - 1;
        for row in 0..rows {
            let old = (row & low) | ((row >> k) << (k + 1));
            if self.table.get(old) {
                table.set(row, true);
            }
        }
        NormalForm { vars, table }
    }

    /// Removes variables without influence; the result is canonical for
    /// the Boolean function.
    pub fn canonicalize(&self) -> NormalForm {
        let mut nf = self.clone();
        let mut k = 0;
        while k < nf.vars.len() {
            if nf.influences(k) {
                k += 1;
            } else {
                nf = nf.drop_var(k);
            }
        }
        nf
    }

    /// Existentially eliminates the variables not selected by `keep`
    /// (or of cofactors).
    pub fn eliminate(&self, keep: impl Fn(&DecoratedVar) -> bool) -> NormalForm {
        let mut nf = self.clone();
        let mut k = 0;
        while k < nf.vars.len() {
            if keep(&nf.vars[k]) {
                k += 1;
                continue;
            }
            let rows = 1usize << (nf.vars.len() - 1);
            let mut table = Bits::zeros(rows);
            let low = (1usize << k) - 1;
            for row in 0..rows {
                let r0 = (row & low) | ((row >> k) << (k + 1));
                let r1 = r0 | (1 << k);
                if nf.table.get(r0) || nf.table.get(r1) {
                    table.set(row, true);
                }
            }
            let mut vars = nf.vars.clone();
            vars.remove(k);
            nf = NormalForm { vars, table };
        }
        nf.canonicalize()
    }

    /// Row value under an assignment of the variables.
    pub fn row_of(&self, value: impl Fn(&DecoratedVar) -> bool) -> usize {
        let mut row = 0;
        for (k, v) in self.vars.iter().enumerate() {
            if value(v) {
                row |= 1 << k;
            }
        }
        row
    }
}

/// Compiles a term to its canonical normal form.
pub fn normalize(t: &Term, sig: &Signature, config: &Config) -> Result<NormalForm, DecideError> {
    t.validate(sig)?;
    let nf = normalize_rec(t, sig, config)?;
    Ok(nf.canonicalize())
}

fn normalize_rec(t: &Term, sig: &Signature, config: &Config) -> Result<NormalForm, DecideError> {
    match t {
        Term::Var(i) => Ok(NormalForm::var(DecoratedVar::Subst {
            var: *i,
            tau: Transformation::identity(sig.dim),
        })),
        Term::Top => Ok(NormalForm::constant(true)),
        Term::Bottom => Ok(NormalForm::constant(false)),
        Term::Not(sub) => Ok(normalize_rec(sub, sig, config)?.negate()),
        Term::And(a, b) => {
            normalize_rec(a, sig, config)?.and(&normalize_rec(b, sig, config)?, config)
        }
        Term::Or(a, b) => {
            normalize_rec(a, sig, config)?.or(&normalize_rec(b, sig, config)?, config)
        }
        Term::SubstT(i, j, sub) => {
            let sigma = Transformation::transposition(sig.dim, *i, *j)
                .expect("validated against the signature");
            apply_transformation(&normalize_rec(sub, sig, config)?, &sigma, config)
        }
        Term::SubstR(i, j, sub) => {
            let sigma = Transformation::replacement(sig.dim, *i, *j)
                .expect("validated against the signature");
            apply_transformation(&normalize_rec(sub, sig, config)?, &sigma, config)
        }
        Term::Diag(i, j) => {
            if i == j {
                Ok(NormalForm::constant(true))
            } else {
                Ok(NormalForm::var(DecoratedVar::Diag(*i.min(j), *i.max(j))))
            }
        }
    }
}

/// The action of `s_sigma` on a normal form: decorated variables relabel
/// by `tau -> sigma∘tau`, diagonals by the index action of `sigma`.
pub fn apply_transformation(
    nf: &NormalForm,
    sigma: &Transformation,
    config: &Config,
) -> Result<NormalForm, DecideError> {
    nf.relabel(
        |v| match v {
            DecoratedVar::Subst { var, tau } => VarTarget::Keep(DecoratedVar::Subst {
                var: *var,
                tau: crate::perm::compose(sigma, tau).expect("same dimension"),
            }),
            DecoratedVar::Diag(i, j) => {
                let (gi, gj) = (sigma.apply(*i), sigma.apply(*j));
                if gi == gj {
                    VarTarget::Const(true)
                } else {
                    VarTarget::Keep(DecoratedVar::Diag(gi.min(gj), gi.max(gj)))
                }
            }
        },
        config,
    )
    .map(|nf| nf.canonicalize())
}

/// How a verdict was reached.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    NormalForm,
    Exhaustive,
    Sampled,
    PartitionSweep,
}

impl Method {
    /// Wire name; the partition sweep is a normal-form procedure.
    pub fn wire_name(self) -> &'static str {
        match self {
            Method::NormalForm | Method::PartitionSweep => "normal-form",
            Method::Exhaustive => "exhaustive",
            Method::Sampled => "sampled",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum UnknownReason {
    Budget { needed: usize, cap: usize },
    SampledClean { samples: u64, seed: u64 },
}

/// A replayable countermodel: an algebra, an assignment, and a witness
/// point where the two sides differ (for quasi-equations, where the
/// conclusion differs while all premises hold).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Countermodel {
    pub algebra: AlgebraDesc,
    pub assignment: BTreeMap<usize, Vec<usize>>,
    pub witness: usize,
}

impl Countermodel {
    pub fn build_algebra(&self, config: &Config) -> Result<SetAlgebra, SetError> {
        self.algebra.build(config)
    }

    pub fn build_assignment(&self, alg: &SetAlgebra) -> Result<Assignment, SetError> {
        let mut out = Assignment::new();
        for (v, points) in &self.assignment {
            out.insert(*v, alg.from_points(points)?);
        }
        Ok(out)
    }

    /// Re-evaluates an equation and confirms the two sides differ at the
    /// witness point.
    pub fn replay_equation(&self, eq: &Equation, config: &Config) -> Result<bool, DecideError> {
        let alg = self.build_algebra(config)?;
        let assignment = self.build_assignment(&alg)?;
        let (l, r) = eval_equation(eq, &assignment, &alg)?;
        Ok(l.contains(self.witness) != r.contains(self.witness))
    }

    /// Confirms all premises hold while the conclusion differs at the
    /// witness point.
    pub fn replay_quasi_equation(
        &self,
        qe: &QuasiEquation,
        config: &Config,
    ) -> Result<bool, DecideError> {
        let alg = self.build_algebra(config)?;
        let assignment = self.build_assignment(&alg)?;
        for p in &qe.premises {
            let (l, r) = eval_equation(p, &assignment, &alg)?;
            if l != r {
                return Ok(false);
            }
        }
        let (l, r) = eval_equation(&qe.conclusion, &assignment, &alg)?;
        Ok(l.contains(self.witness) != r.contains(self.witness))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ValidityResult {
    Valid {
        method: Method,
    },
    Invalid {
        method: Method,
        countermodel: Countermodel,
    },
    Unknown {
        reason: UnknownReason,
    },
}

impl ValidityResult {
    pub fn is_valid(&self) -> bool {
        matches!(self, ValidityResult::Valid { .. })
    }

    pub fn is_invalid(&self) -> bool {
        matches!(self, ValidityResult::Invalid { .. })
    }

    pub fn countermodel(&self) -> Option<&Countermodel> {
        match self {
            ValidityResult::Invalid { countermodel, .. } => Some(countermodel),
            _ => None,
        }
    }
}

/// A transformation viewed as a point of `^nn` (digit `i` is `tau(i)`).
pub fn transformation_point(dim: usize, tau: &Transformation) -> usize {
    let mut idx = 0;
    for k in (0..dim).rev() {
        idx = idx * dim + tau.apply(k);
    }
    idx
}

/// The unit carrying the synthesized countermodels: all of `^nn` for SA,
/// its permutations for TA.
fn witness_algebra_desc(sig: &Signature) -> AlgebraDesc {
    match sig.kind {
        SigKind::Ta => {
            let relaxed = Config {
                perm_enum_cap: sig.dim,
                ..Config::default()
            };
            let perms = crate::perm::enumerate_monoid(sig.dim, SigKind::Ta, &relaxed)
                .expect("cap matches dim");
            let mut points: Vec<usize> = perms
                .iter()
                .map(|t| transformation_point(sig.dim, t))
                .collect();
            points.sort_unstable();
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
            kind: sig.kind,
        },
    }
}

/// Builds the countermodel for two differing canonical forms: variables
/// receive the sets dictated by the least differing truth-table row, and
/// the identity sequence witnesses the difference.
fn countermodel_from_row(
    lhs: &NormalForm,
    rhs: &NormalForm,
    all_vars: &BTreeSet<usize>,
    sig: &Signature,
) -> Option<Countermodel> {
    let mut union: BTreeSet<DecoratedVar> = lhs.vars.iter().cloned().collect();
    union.extend(rhs.vars.iter().cloned());
    let union: Vec<DecoratedVar> = union.into_iter().collect();
    let a = lhs.expand_to(&union);
    let b = rhs.expand_to(&union);
    let row = a.table.xor(&b.table).first_one()?;

    // every equation variable gets a binding, including those pruned as
    // non-influential, so the countermodel replays by plain evaluation
    let mut assignment: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for &v in all_vars {
        assignment.insert(v, Vec::new());
    }
    for (k, v) in union.iter().enumerate() {
        if let DecoratedVar::Subst { var, tau } = v {
            assignment.entry(*var).or_default();
            if row >> k & 1 == 1 {
                assignment
                    .get_mut(var)
                    .expect("just inserted")
                    .push(transformation_point(sig.dim, tau));
            }
        }
    }
    for points in assignment.values_mut() {
        points.sort_unstable();
    }
    let witness = transformation_point(sig.dim, &Transformation::identity(sig.dim));
    Some(Countermodel {
        algebra: witness_algebra_desc(sig),
        assignment,
        witness,
    })
}

/// Decides equational validity in the diagonal-free varieties by
/// normal-form comparison.
pub fn decide_equation(
    eq: &Equation,
    sig: &Signature,
    config: &Config,
) -> Result<ValidityResult, DecideError> {
    if sig.kind == SigKind::Sad {
        return Err(DecideError::WrongSignature {
            expected: "TA or SA",
        });
    }
    if eq.has_diagonal() {
        return Err(DecideError::DiagonalTerm);
    }
    eq.validate(sig)?;
    let (lhs, rhs) = match (
        normalize(&eq.lhs, sig, config),
        normalize(&eq.rhs, sig, config),
    ) {
        (Ok(l), Ok(r)) => (l, r),
        (Err(DecideError::VarBudget { needed, cap }), _)
        | (_, Err(DecideError::VarBudget { needed, cap })) => {
            return Ok(ValidityResult::Unknown {
                reason: UnknownReason::Budget { needed, cap },
            })
        }
        (Err(e), _) | (_, Err(e)) => return Err(e),
    };
    if lhs == rhs {
        return Ok(ValidityResult::Valid {
            method: Method::NormalForm,
        });
    }
    let countermodel = countermodel_from_row(&lhs, &rhs, &eq.vars(), sig)
        .expect("unequal canonical forms differ somewhere");
    Ok(ValidityResult::Invalid {
        method: Method::NormalForm,
        countermodel,
    })
}

/// All set partitions of `{0..n-1}` as restricted-growth class vectors.
pub fn partitions(n: usize) -> Vec<Vec<usize>> {
    fn rec(current: &mut Vec<usize>, k: usize, max_used: usize, out: &mut Vec<Vec<usize>>) {
        if k == current.len() {
            out.push(current.clone());
            return;
        }
        for c in 0..=max_used + 1 {
            current[k] = c;
            rec(current, k + 1, max_used.max(c), out);
        }
    }
    let mut out = Vec::new();
    if n == 0 {
        out.push(Vec::new());
        return out;
    }
    let mut current = vec![0usize; n];
    rec(&mut current, 1, 0, &mut out);
    out
}

/// Semantic validity over all square set algebras with diagonals, by the
/// kernel-partition sweep.
pub fn decide_with_diagonals(
    eq: &Equation,
    sig: &Signature,
    config: &Config,
) -> Result<ValidityResult, DecideError> {
    if sig.kind != SigKind::Sad {
        return Err(DecideError::WrongSignature { expected: "SAD" });
    }
    eq.validate(sig)?;
    let (lhs, rhs) = match (
        normalize(&eq.lhs, sig, config),
        normalize(&eq.rhs, sig, config),
    ) {
        (Ok(l), Ok(r)) => (l, r),
        (Err(DecideError::VarBudget { needed, cap }), _)
        | (_, Err(DecideError::VarBudget { needed, cap })) => {
            return Ok(ValidityResult::Unknown {
                reason: UnknownReason::Budget { needed, cap },
            })
        }
        (Err(e), _) | (_, Err(e)) => return Err(e),
    };

    for classes in partitions(sig.dim) {
        let blocks = classes.iter().max().map(|m| m + 1).unwrap_or(0);
        let quotient = |nf: &NormalForm| -> Result<NormalForm, DecideError> {
            nf.relabel(
                |v| match v {
                    DecoratedVar::Subst { var, tau } => {
                        let images: Vec<usize> =
                            (0..sig.dim).map(|k| classes[tau.apply(k)]).collect();
                        VarTarget::Keep(DecoratedVar::Subst {
                            var: *var,
                            tau: Transformation::new(images).expect("classes are below dim"),
                        })
                    }
                    DecoratedVar::Diag(i, j) => VarTarget::Const(classes[*i] == classes[*j]),
                },
                config,
            )
            .map(|nf| nf.canonicalize())
        };
        let ql = quotient(&lhs)?;
        let qr = quotient(&rhs)?;
        if ql == qr {
            continue;
        }
        // synthesize a countermodel over the square with one base element
        // per kernel class
        let mut union: BTreeSet<DecoratedVar> = ql.vars.iter().cloned().collect();
        union.extend(qr.vars.iter().cloned());
        let union: Vec<DecoratedVar> = union.into_iter().collect();
        let a = ql.expand_to(&union);
        let b = qr.expand_to(&union);
        let row = a
            .table
            .xor(&b.table)
            .first_one()
            .expect("unequal canonical forms differ somewhere");
        let encode = |digits: &[usize]| -> usize {
            let mut idx = 0;
            for &d in digits.iter().rev() {
                idx = idx * blocks + d;
            }
            idx
        };
        let mut assignment: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for v in eq.vars() {
            assignment.insert(v, Vec::new());
        }
        for (k, v) in union.iter().enumerate() {
            if let DecoratedVar::Subst { var, tau } = v {
                assignment.entry(*var).or_default();
                if row >> k & 1 == 1 {
                    assignment
                        .get_mut(var)
                        .expect("just inserted")
                        .push(encode(tau.images()));
                }
            }
        }
        for points in assignment.values_mut() {
            points.sort_unstable();
        }
        return Ok(ValidityResult::Invalid {
            method: Method::PartitionSweep,
            countermodel: Countermodel {
                algebra: AlgebraDesc {
                    dim: sig.dim,
                    base: blocks,
                    unit: UnitSpec::Square,
                    kind: SigKind::Sad,
                },
                assignment,
                witness: encode(&classes),
            },
        });
    }
    Ok(ValidityResult::Valid {
        method: Method::PartitionSweep,
    })
}

enum SweepOutcome {
    ExhaustedClean,
    SampledClean,
    Counterexample(Countermodel),
}

/// Sweeps assignments of one algebra, exhaustively when the assignment
/// space fits the budget and by seeded sampling otherwise.
fn sweep_algebra(
    premises: &[Equation],
    conclusion: &Equation,
    alg: &SetAlgebra,
    vars: &[usize],
    config: &Config,
    stream: u64,
) -> Result<SweepOutcome, DecideError> {
    let points = alg.unit().points();
    let member_points: Vec<usize> = alg.unit().membership().iter_ones().collect();
    let cells = member_points.len();
    let total_bits = cells.checked_mul(vars.len());
    let exhaustive = match total_bits {
        Some(b) if b < 63 => (1u64 << b) <= config.assignment_budget,
        _ => false,
    };

    let check = |assignment: &Assignment| -> Result<Option<usize>, DecideError> {
        for p in premises {
            let (l, r) = eval_equation(p, assignment, alg)?;
            if l != r {
                return Ok(None);
            }
        }
        let (l, r) = eval_equation(conclusion, assignment, alg)?;
        Ok(l.bits().xor(r.bits()).first_one())
    };

    let to_cm = |assignment: &Assignment, witness: usize| -> Countermodel {
        let mut points_map = BTreeMap::new();
        for (v, set) in assignment {
            points_map.insert(*v, set.bits().iter_ones().collect());
        }
        Countermodel {
            algebra: alg.describe(),
            assignment: points_map,
            witness,
        }
    };

    if exhaustive {
        let total: u64 = 1u64 << total_bits.expect("checked");
        for code in 0..total {
            let mut assignment = Assignment::new();
            for (vi, v) in vars.iter().enumerate() {
                let mut bits = Bits::zeros(points);
                for (ci, &p) in member_points.iter().enumerate() {
                    if code >> (vi * cells + ci) & 1 == 1 {
                        bits.set(p, true);
                    }
                }
                assignment.insert(*v, alg.from_bits(bits)?);
            }
            if let Some(w) = check(&assignment)? {
                return Ok(SweepOutcome::Counterexample(to_cm(&assignment, w)));
            }
        }
        Ok(SweepOutcome::ExhaustedClean)
    } else {
        let mut rng = SweepRng::new(config.seed, stream);
        for _ in 0..config.samples {
            let mut assignment = Assignment::new();
            for v in vars {
                let mut bits = Bits::zeros(points);
                for &p in &member_points {
                    if rng.next_u64() & 1 == 1 {
                        bits.set(p, true);
                    }
                }
                assignment.insert(*v, alg.from_bits(bits)?);
            }
            if let Some(w) = check(&assignment)? {
                return Ok(SweepOutcome::Counterexample(to_cm(&assignment, w)));
            }
        }
        Ok(SweepOutcome::SampledClean)
    }
}

/// Checks a quasi-equation in every small algebra `A_nk`, `k <= n`.
pub fn decide_quasi_equation(
    qe: &QuasiEquation,
    sig: &Signature,
    config: &Config,
) -> Result<ValidityResult, DecideError> {
    qe.validate(sig)?;
    let vars: Vec<usize> = qe.vars().into_iter().collect();
    let mut all_exhaustive = true;
    for k in 0..=sig.dim {
        let alg = SetAlgebra::small(sig.dim, k, sig.kind, config)?;
        match sweep_algebra(
            &qe.premises,
            &qe.conclusion,
            &alg,
            &vars,
            config,
            0x9e00 + k as u64,
        )? {
            SweepOutcome::Counterexample(cm) => {
                return Ok(ValidityResult::Invalid {
                    method: Method::Exhaustive,
                    countermodel: cm,
                })
            }
            SweepOutcome::ExhaustedClean => {}
            SweepOutcome::SampledClean => all_exhaustive = false,
        }
    }
    if all_exhaustive {
        Ok(ValidityResult::Valid {
            method: Method::Exhaustive,
        })
    } else {
        Ok(ValidityResult::Unknown {
            reason: UnknownReason::SampledClean {
                samples: config.samples,
                seed: config.seed,
            },
        })
    }
}

/// Input selector for the brute-force oracle.
pub enum Check<'a> {
    Equation(&'a Equation),
    Quasi(&'a QuasiEquation),
}

/// Direct evaluation over all (or sampled) assignments of one finite
/// algebra. Independent of the normal-form path.
pub fn brute_force_check(
    input: &Check<'_>,
    alg: &SetAlgebra,
    config: &Config,
) -> Result<ValidityResult, DecideError> {
    let empty: [Equation; 0] = [];
    let (premises, conclusion): (&[Equation], &Equation) = match input {
        Check::Equation(eq) => (&empty, *eq),
        Check::Quasi(qe) => (qe.premises.as_slice(), &qe.conclusion),
    };
    let mut vars: BTreeSet<usize> = conclusion.vars();
    for p in premises {
        vars.extend(p.vars());
    }
    let vars: Vec<usize> = vars.into_iter().collect();
    match sweep_algebra(premises, conclusion, alg, &vars, config, 0xb00f)? {
        SweepOutcome::Counterexample(cm) => Ok(ValidityResult::Invalid {
            method: Method::Exhaustive,
            countermodel: cm,
        }),
        SweepOutcome::ExhaustedClean => Ok(ValidityResult::Valid {
            method: Method::Exhaustive,
        }),
        SweepOutcome::SampledClean => Ok(ValidityResult::Unknown {
            reason: UnknownReason::SampledClean {
                samples: config.samples,
                seed: config.seed,
            },
        }),
    }
}

/// Formula validity: the formula is valid iff its translation equals 1.
pub fn decide_formula(
    f: &Formula,
    sig: &Signature,
    config: &Config,
) -> Result<ValidityResult, DecideError> {
    f.validate(sig)?;
    // formulas are diagonal-free, so the SAD case coincides with SA
    let dsig = if sig.kind == SigKind::Sad {
        Signature {
            dim: sig.dim,
            kind: SigKind::Sa,
        }
    } else {
        *sig
    };
    let eq = formula_as_equation(f);
    decide_equation(&eq, &dsig, config)
}

/// The equation a formula-validity verdict certifies.
pub fn formula_as_equation(f: &Formula) -> Equation {
    Equation::new(crate::term::translate(f), Term::Top)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReplayError(pub String);
