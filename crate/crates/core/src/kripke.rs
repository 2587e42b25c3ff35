//! Finite Kripke models over permutable state sets.
//!
//! Accessibility is never stored: `(s, t)` is `R_l`-related iff
//! `s ∘ l = t`, computed from the unit on demand. Transposition
//! relations are bijective involutions and replacement relations are
//! functions, so box and diamond coincide on closed units.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::config::Config;
use crate::decide::Countermodel;
use crate::perm::Letter;
use crate::set::{DenseSet, SetAlgebra, SetError};
use crate::term::{Formula, TermError};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum KripkeError {
    StateOutsideUnit { state: usize },
    MissingValuation { prop: usize },
    NoCountermodel,
    Malformed(String),
    Algebra(SetError),
    Term(TermError),
}

impl fmt::Display for KripkeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KripkeError::StateOutsideUnit { state } => {
                write!(f, "state {state} is outside the unit")
            }
            KripkeError::MissingValuation { prop } => {
                write!(f, "no valuation for proposition p{prop}")
            }
            KripkeError::NoCountermodel => {
                write!(f, "the verdict carries no countermodel")
            }
            KripkeError::Malformed(msg) => write!(f, "malformed certificate: {msg}"),
            KripkeError::Algebra(e) => write!(f, "{e}"),
            KripkeError::Term(e) => write!(f, "{e}"),
        }
    }
}

impl From<SetError> for KripkeError {
    fn from(e: SetError) -> Self {
        KripkeError::Algebra(e)
    }
}

impl From<TermError> for KripkeError {
    fn from(e: TermError) -> Self {
        KripkeError::Term(e)
    }
}

/// A model: a unit of states plus a valuation of the propositional
/// variables by subsets of the unit.
#[derive(Clone, Debug)]
pub struct KripkeModel {
    alg: SetAlgebra,
    valuation: BTreeMap<usize, DenseSet>,
}

impl KripkeModel {
    pub fn new(
        alg: SetAlgebra,
        valuation: BTreeMap<usize, DenseSet>,
    ) -> Result<KripkeModel, KripkeError> {
        for v in valuation.values() {
            if !v.bits().subset_of(alg.unit().membership()) {
                return Err(KripkeError::Algebra(SetError::ElementOutsideUnit));
            }
        }
        Ok(KripkeModel { alg, valuation })
    }

    pub fn algebra(&self) -> &SetAlgebra {
        &self.alg
    }

    pub fn valuation(&self) -> &BTreeMap<usize, DenseSet> {
        &self.valuation
    }

    pub fn states(&self) -> impl Iterator<Item = usize> + '_ {
        self.alg.unit().membership().iter_ones()
    }

    /// The unique `R_l`-successor of `w`, when it stays in the unit.
    fn successor(&self, w: usize, l: Letter) -> Option<usize> {
        let t = l.transformation(self.alg.dim()).ok()?;
        let q = self.alg.unit().point_apply(w, &t);
        self.alg.unit().contains(q).then_some(q)
    }

    /// Standard inductive satisfaction at a state of the unit.
    pub fn satisfies(&self, w: usize, f: &Formula) -> Result<bool, KripkeError> {
        if !self.alg.unit().contains(w) {
            return Err(KripkeError::StateOutsideUnit { state: w });
        }
        self.sat(w, f)
    }

    fn sat(&self, w: usize, f: &Formula) -> Result<bool, KripkeError> {
        Ok(match f {
            Formula::Prop(i) => self
                .valuation
                .get(i)
                .ok_or(KripkeError::MissingValuation { prop: *i })?
                .contains(w),
            Formula::Top => true,
            Formula::Bottom => false,
            Formula::Not(g) => !self.sat(w, g)?,
            Formula::And(a, b) => self.sat(w, a)? && self.sat(w, b)?,
            Formula::Or(a, b) => self.sat(w, a)? || self.sat(w, b)?,
            Formula::Implies(a, b) => !self.sat(w, a)? || self.sat(w, b)?,
            Formula::Iff(a, b) => self.sat(w, a)? == self.sat(w, b)?,
            Formula::Modal(kind, l, g) => match self.successor(w, *l) {
                Some(t) => self.sat(t, g)?,
                // off-unit successor: the diamond fails, the box holds
                None => matches!(kind, crate::term::ModalKind::Box),
            },
        })
    }

    /// `{w : M, w |= f}` computed pointwise through satisfaction.
    pub fn formula_extension(&self, f: &Formula) -> Result<DenseSet, KripkeError> {
        let mut points = Vec::new();
        for w in self.alg.unit().membership().iter_ones() {
            if self.sat(w, f)? {
                points.push(w);
            }
        }
        Ok(self.alg.from_points(&points)?)
    }
}

/// Rebuilds an algebraic countermodel as a Kripke model falsifying the
/// formula at the witness state, and replays the check.
pub fn countermodel_to_kripke(
    cm: &Countermodel,
    f: &Formula,
    config: &Config,
) -> Result<(KripkeModel, usize), KripkeError> {
    let alg = cm
        .build_algebra(config)
        .map_err(|e| KripkeError::Malformed(alloc::format!("{e}")))?;
    let mut valuation = BTreeMap::new();
    for (v, points) in &cm.assignment {
        valuation.insert(*v, alg.from_points(points)?);
    }
    let model = KripkeModel::new(alg, valuation)?;
    if model.satisfies(cm.witness, f)? {
        return Err(KripkeError::Malformed(String::from(
            "witness satisfies the formula",
        )));
    }
    Ok((model, cm.witness))
}

/// Converts a validity verdict for a formula into a Kripke countermodel;
/// valid verdicts carry none.
pub fn verdict_to_kripke(
    result: &crate::decide::ValidityResult,
    f: &Formula,
    config: &Config,
) -> Result<(KripkeModel, usize), KripkeError> {
    match result.countermodel() {
        Some(cm) => countermodel_to_kripke(cm, f, config),
        None => Err(KripkeError::NoCountermodel),
    }
}
