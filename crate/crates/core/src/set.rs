//! Concrete set algebras over units `V ⊆ ^nU`.
//!
//! Points of `^nU` are encoded as base-`u` integers with digit `i` holding
//! `q(i)` (little-endian, digit 0 least significant). Elements are bitsets
//! over the full point space, constrained to the unit.

use alloc::vec::Vec;
use core::fmt;

use crate::bits::Bits;
use crate::config::Config;
use crate::perm::{SigKind, Transformation};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SetError {
    PointSpaceTooLarge { points: u64, cap: usize },
    DimensionMismatch,
    BaseMismatch,
    NotPermutable,
    NotDipermutable,
    NotASubunit,
    ReplacementInTa,
    ElementOutsideUnit,
    DiagonalsNotInSignature,
    IndexOutOfRange { index: usize, dim: usize },
    BaseExceedsDimension { base: usize, dim: usize },
}

impl fmt::Display for SetError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SetError::PointSpaceTooLarge { points, cap } => {
                write!(f, "unit would have {points} points, cap is {cap}")
            }
            SetError::DimensionMismatch => write!(f, "dimension mismatch"),
            SetError::BaseMismatch => write!(f, "base mismatch"),
            SetError::NotPermutable => write!(f, "unit is not permutable"),
            SetError::NotDipermutable => write!(f, "unit is not dipermutable"),
            SetError::NotASubunit => write!(f, "not a subset of the source unit"),
            SetError::ReplacementInTa => {
                write!(f, "replacement substitution applied in the TA signature")
            }
            SetError::ElementOutsideUnit => write!(f, "element has points outside the unit"),
            SetError::DiagonalsNotInSignature => {
                write!(f, "diagonal elements require the SAD signature")
            }
            SetError::IndexOutOfRange { index, dim } => {
                write!(f, "index {index} out of range for dimension {dim}")
            }
            SetError::BaseExceedsDimension { base, dim } => {
                write!(f, "small algebra requires k <= n, got k={base}, n={dim}")
            }
        }
    }
}

/// A unit `V ⊆ ^nU` with its closure classification.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Unit {
    dim: usize,
    base: usize,
    membership: Bits,
    square: bool,
    permutable: bool,
    dipermutable: bool,
}

fn point_count(dim: usize, base: usize, cap: usize) -> Result<usize, SetError> {
    let mut p: u64 = 1;
    for _ in 0..dim {
        p = p.saturating_mul(base as u64);
        if p > cap as u64 {
            return Err(SetError::PointSpaceTooLarge { points: p, cap });
        }
    }
    Ok(p as usize)
}

fn encode_point(base: usize, digits: &[usize]) -> usize {
    let mut idx = 0;
    for &d in digits.iter().rev() {
        debug_assert!(d < base);
        idx = idx * base + d;
    }
    idx
}

fn decode_point(dim: usize, base: usize, mut idx: usize) -> Vec<usize> {
    let mut digits = Vec::with_capacity(dim);
    for _ in 0..dim {
        digits.push(idx % base);
        idx /= base;
    }
    digits
}

fn compose_point(dim: usize, base: usize, q: usize, t: &Transformation) -> usize {
    let d = decode_point(dim, base, q);
    let composed: Vec<usize> = (0..dim).map(|i| d[t.apply(i)]).collect();
    encode_point(base, &composed)
}

impl Unit {
    /// Classifies a membership bitset over the points of `^n base`.
    pub fn classify(
        dim: usize,
        base: usize,
        membership: Bits,
        config: &Config,
    ) -> Result<Unit, SetError> {
        let points = point_count(dim, base, config.point_cap)?;
        assert_eq!(
            membership.len(),
            points,
            "membership width must be base^dim"
        );
        let mut u = Unit {
            dim,
            base,
            membership,
            square: false,
            permutable: false,
            dipermutable: false,
        };
        u.square = u.membership.count_ones() == points;
        u.permutable = u.closed_under(false);
        u.dipermutable = u.permutable && u.closed_under(true);
        Ok(u)
    }

    /// The full unit `^n base`.
    pub fn full(dim: usize, base: usize, config: &Config) -> Result<Unit, SetError> {
        let points = point_count(dim, base, config.point_cap)?;
        Unit::classify(dim, base, Bits::ones(points), config)
    }

    fn closed_under(&self, replacements: bool) -> bool {
        for q in self.membership.iter_ones() {
            for i in 0..self.dim {
                for j in 0..self.dim {
                    if i == j || (!replacements && j < i) {
                        continue;
                    }
                    let t = if replacements {
                        Transformation::replacement(self.dim, i, j)
                    } else {
                        Transformation::transposition(self.dim, i, j)
                    }
                    .expect("indices in range");
                    if !self.membership.get(self.point_apply(q, &t)) {
                        return false;
                    }
                }
            }
        }
        true
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn base(&self) -> usize {
        self.base
    }

    pub fn points(&self) -> usize {
        self.membership.len()
    }

    pub fn membership(&self) -> &Bits {
        &self.membership
    }

    pub fn is_square(&self) -> bool {
        self.square
    }

    pub fn is_permutable(&self) -> bool {
        self.permutable
    }

    pub fn is_dipermutable(&self) -> bool {
        self.dipermutable
    }

    pub fn size(&self) -> usize {
        self.membership.count_ones()
    }

    pub fn encode(&self, digits: &[usize]) -> usize {
        debug_assert_eq!(digits.len(), self.dim);
        encode_point(self.base, digits)
    }

    pub fn decode(&self, idx: usize) -> Vec<usize> {
        decode_point(self.dim, self.base, idx)
    }

    /// Index of `q ∘ t` for the point with index `q`.
    pub fn point_apply(&self, q: usize, t: &Transformation) -> usize {
        debug_assert_eq!(t.dim(), self.dim);
        compose_point(self.dim, self.base, q, t)
    }

    pub fn contains(&self, q: usize) -> bool {
        self.membership.get(q)
    }
}

/// Smallest permutable superset of the given membership set.
pub fn permutable_closure(
    dim: usize,
    base: usize,
    membership: Bits,
    config: &Config,
) -> Result<Unit, SetError> {
    let points = point_count(dim, base, config.point_cap)?;
    assert_eq!(membership.len(), points);
    let _ = points;
    let mut m = membership;
    loop {
        let mut grew = false;
        for q in m.clone().iter_ones() {
            for i in 0..dim {
                for j in i + 1..dim {
                    let t = Transformation::transposition(dim, i, j).expect("in range");
                    let p = compose_point(dim, base, q, &t);
                    if !m.get(p) {
                        m.set(p, true);
                        grew = true;
                    }
                }
            }
        }
        if !grew {
            break;
        }
    }
    Unit::classify(dim, base, m, config)
}

/// An element of a set algebra: a bitset over the unit's point space,
/// contained in the unit.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DenseSet {
    bits: Bits,
}

impl DenseSet {
    pub fn bits(&self) -> &Bits {
        &self.bits
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_zero()
    }

    pub fn contains(&self, q: usize) -> bool {
        self.bits.get(q)
    }

    pub fn count(&self) -> usize {
        self.bits.count_ones()
    }
}

impl fmt::Debug for DenseSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DenseSet{:?}", self.bits)
    }
}

/// A concrete algebra of sets over a unit, in one of the three signatures.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SetAlgebra {
    unit: Unit,
    kind: SigKind,
}

impl SetAlgebra {
    pub fn new(unit: Unit, kind: SigKind) -> Result<SetAlgebra, SetError> {
        match kind {
            SigKind::Ta => {
                if !unit.permutable {
                    return Err(SetError::NotPermutable);
                }
            }
            SigKind::Sa | SigKind::Sad => {
                if !unit.dipermutable {
                    return Err(SetError::NotDipermutable);
                }
            }
        }
        Ok(SetAlgebra { unit, kind })
    }

    /// The full algebra over `^n k`.
    pub fn small(dim: usize, k: usize, kind: SigKind, config: &Config) -> Result<Self, SetError> {
        if k > dim {
            return Err(SetError::BaseExceedsDimension { base: k, dim });
        }
        SetAlgebra::new(Unit::full(dim, k, config)?, kind)
    }

    pub fn unit(&self) -> &Unit {
        &self.unit
    }

    pub fn kind(&self) -> SigKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.unit.dim
    }

    pub fn top(&self) -> DenseSet {
        DenseSet {
            bits: self.unit.membership.clone(),
        }
    }

    pub fn bottom(&self) -> DenseSet {
        DenseSet {
            bits: Bits::zeros(self.unit.points()),
        }
    }

    pub fn from_bits(&self, bits: Bits) -> Result<DenseSet, SetError> {
        if !bits.subset_of(&self.unit.membership) {
            return Err(SetError::ElementOutsideUnit);
        }
        Ok(DenseSet { bits })
    }

    pub fn from_points(&self, points: &[usize]) -> Result<DenseSet, SetError> {
        self.from_bits(Bits::from_indices(self.unit.points(), points))
    }

    pub fn singleton(&self, q: usize) -> Result<DenseSet, SetError> {
        self.from_points(&[q])
    }

    pub fn meet(&self, x: &DenseSet, y: &DenseSet) -> DenseSet {
        DenseSet {
            bits: x.bits.and(&y.bits),
        }
    }

    pub fn join(&self, x: &DenseSet, y: &DenseSet) -> DenseSet {
        DenseSet {
            bits: x.bits.or(&y.bits),
        }
    }

    /// Complement relative to the unit.
    pub fn complement(&self, x: &DenseSet) -> DenseSet {
        DenseSet {
            bits: self.unit.membership.diff(&x.bits),
        }
    }

    pub fn le(&self, x: &DenseSet, y: &DenseSet) -> bool {
        x.bits.subset_of(&y.bits)
    }

    /// `S_t(x) = {q in the unit : q ∘ t ∈ x}`.
    pub fn apply_subst(&self, x: &DenseSet, t: &Transformation) -> Result<DenseSet, SetError> {
        if t.dim() != self.unit.dim {
            return Err(SetError::DimensionMismatch);
        }
        if self.kind == SigKind::Ta && !t.is_permutation() {
            return Err(SetError::ReplacementInTa);
        }
        let mut bits = Bits::zeros(self.unit.points());
        for q in self.unit.membership.iter_ones() {
            if x.bits.get(self.unit.point_apply(q, t)) {
                bits.set(q, true);
            }
        }
        Ok(DenseSet { bits })
    }

    /// `d_ij = {q in the unit : q(i) = q(j)}`.
    pub fn diagonal(&self, i: usize, j: usize) -> Result<DenseSet, SetError> {
        if self.kind != SigKind::Sad {
            return Err(SetError::DiagonalsNotInSignature);
        }
        let dim = self.unit.dim;
        for &k in [i, j].iter() {
            if k >= dim {
                return Err(SetError::IndexOutOfRange { index: k, dim });
            }
        }
        let mut bits = Bits::zeros(self.unit.points());
        for q in self.unit.membership.iter_ones() {
            let d = self.unit.decode(q);
            if d[i] == d[j] {
                bits.set(q, true);
            }
        }
        Ok(DenseSet { bits })
    }
}

/// Portable description of a set algebra, as embedded in certificates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraDesc {
    pub dim: usize,
    pub base: usize,
    pub unit: UnitSpec,
    pub kind: SigKind,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum UnitSpec {
    Square,
    Points(Vec<usize>),
}

impl AlgebraDesc {
    pub fn build(&self, config: &Config) -> Result<SetAlgebra, SetError> {
        let unit = match &self.unit {
            UnitSpec::Square => Unit::full(self.dim, self.base, config)?,
            UnitSpec::Points(points) => {
                let count = point_count(self.dim, self.base, config.point_cap)?;
                Unit::classify(
                    self.dim,
                    self.base,
                    Bits::from_indices(count, points),
                    config,
                )?
            }
        };
        SetAlgebra::new(unit, self.kind)
    }
}

impl SetAlgebra {
    pub fn describe(&self) -> AlgebraDesc {
        let unit = if self.unit.is_square() {
            UnitSpec::Square
        } else {
            UnitSpec::Points(self.unit.membership.iter_ones().collect())
        };
        AlgebraDesc {
            dim: self.unit.dim,
            base: self.unit.base,
            unit,
            kind: self.kind,
        }
    }
}

/// Relativization by a closed subunit: `h(x) = x ∩ G`, a homomorphism onto
/// the algebra over `G`.
pub fn relativize_hom(
    x: &DenseSet,
    source: &SetAlgebra,
    target: &SetAlgebra,
) -> Result<DenseSet, SetError> {
    if source.unit.dim != target.unit.dim {
        return Err(SetError::DimensionMismatch);
    }
    if source.unit.base != target.unit.base {
        return Err(SetError::BaseMismatch);
    }
    if !target.unit.membership.subset_of(&source.unit.membership) {
        return Err(SetError::NotASubunit);
    }
    // target closure for its signature is enforced by SetAlgebra::new
    Ok(DenseSet {
        bits: x.bits.and(&target.unit.membership),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> Config {
        Config::default()
    }

    fn full22(kind: SigKind) -> SetAlgebra {
        SetAlgebra::small(2, 2, kind, &cfg()).unwrap()
    }

    // point indices in ^2 2: (0,0)=0, (1,0)=1, (0,1)=2, (1,1)=3

    #[test]
    fn classify_examples() {
        let u = Unit::full(2, 2, &cfg()).unwrap();
        assert!(u.is_square() && u.is_permutable() && u.is_dipermutable());

        let single = Unit::classify(2, 2, Bits::from_indices(4, &[2]), &cfg()).unwrap();
        assert!(!single.is_permutable());

        // G = {(0,1),(1,0)} is permutable but not dipermutable:
        // (0,1)∘[0/1] = (1,1) is missing
        let g = Unit::classify(2, 2, Bits::from_indices(4, &[1, 2]), &cfg()).unwrap();
        assert!(g.is_permutable() && !g.is_dipermutable() && !g.is_square());
    }

    #[test]
    fn closure_examples() {
        let c = permutable_closure(2, 2, Bits::from_indices(4, &[2]), &cfg()).unwrap();
        assert_eq!(c.membership(), &Bits::from_indices(4, &[1, 2]));
        let full = permutable_closure(2, 2, Bits::ones(4), &cfg()).unwrap();
        assert!(full.is_square());
        let empty = permutable_closure(2, 2, Bits::zeros(4), &cfg()).unwrap();
        assert_eq!(empty.size(), 0);
    }

    #[test]
    fn apply_subst_examples() {
        let a = full22(SigKind::Ta);
        let t01 = Transformation::transposition(2, 0, 1).unwrap();
        let x = a.from_points(&[2]).unwrap(); // {(0,1)}
        let sx = a.apply_subst(&x, &t01).unwrap();
        assert_eq!(sx, a.from_points(&[1]).unwrap()); // {(1,0)}
        assert!(a.apply_subst(&a.bottom(), &t01).unwrap().is_empty());

        // on G = {(0,1),(1,0)}: S_f(X) = -X for X = {(1,0)}
        let g_unit = Unit::classify(2, 2, Bits::from_indices(4, &[1, 2]), &cfg()).unwrap();
        let g = SetAlgebra::new(g_unit, SigKind::Ta).unwrap();
        let x = g.from_points(&[1]).unwrap();
        let sx = g.apply_subst(&x, &t01).unwrap();
        assert_eq!(sx, g.complement(&x));
        assert_eq!(sx, g.from_points(&[2]).unwrap());

        // replacements are rejected under TA
        let r = Transformation::replacement(2, 0, 1).unwrap();
        assert_eq!(a.apply_subst(&x, &r), Err(SetError::ReplacementInTa));
        let sa = full22(SigKind::Sa);
        assert!(sa.apply_subst(&x, &r).is_ok());
    }

    #[test]
    fn diagonal_examples() {
        let a = full22(SigKind::Sad);
        assert_eq!(a.diagonal(0, 0).unwrap(), a.top());
        let d01 = a.diagonal(0, 1).unwrap();
        assert_eq!(d01, a.from_points(&[0, 3]).unwrap());
        assert_eq!(d01, a.diagonal(1, 0).unwrap());
        assert!(a.diagonal(0, 2).is_err());
        assert!(full22(SigKind::Ta).diagonal(0, 1).is_err());
    }

    #[test]
    fn relativize_examples() {
        let a = full22(SigKind::Ta);
        let g_unit = Unit::classify(2, 2, Bits::from_indices(4, &[0, 3]), &cfg()).unwrap();
        let g = SetAlgebra::new(g_unit, SigKind::Ta).unwrap();
        assert_eq!(relativize_hom(&a.top(), &a, &g).unwrap(), g.top());
        let x = a.from_points(&[2, 0]).unwrap();
        assert_eq!(
            relativize_hom(&x, &a, &g).unwrap(),
            g.from_points(&[0]).unwrap()
        );
    }

    #[test]
    fn relativize_is_homomorphism_exhaustive() {
        let a = full22(SigKind::Ta);
        let g_unit = Unit::classify(2, 2, Bits::from_indices(4, &[0, 3]), &cfg()).unwrap();
        let g = SetAlgebra::new(g_unit, SigKind::Ta).unwrap();
        let t01 = Transformation::transposition(2, 0, 1).unwrap();
        for m in 0..16usize {
            let x = a
                .from_bits(Bits::from_indices(
                    4,
                    &(0..4).filter(|&i| m >> i & 1 == 1).collect::<Vec<_>>(),
                ))
                .unwrap();
            let lhs = relativize_hom(&a.apply_subst(&x, &t01).unwrap(), &a, &g).unwrap();
            let rhs = g
                .apply_subst(&relativize_hom(&x, &a, &g).unwrap(), &t01)
                .unwrap();
            assert_eq!(lhs, rhs);
            // Boolean operations as well
            let lhs = relativize_hom(&a.complement(&x), &a, &g).unwrap();
            let rhs = g.complement(&relativize_hom(&x, &a, &g).unwrap());
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn small_algebra_examples() {
        // the empty base gives the empty unit, hence the one-element algebra
        let a20 = SetAlgebra::small(2, 0, SigKind::Ta, &cfg()).unwrap();
        assert_eq!(a20.unit().points(), 0);
        assert_eq!(a20.unit().size(), 0);
        assert_eq!(a20.top(), a20.bottom());
        let a22 = SetAlgebra::small(2, 2, SigKind::Ta, &cfg()).unwrap();
        assert_eq!(a22.unit().size(), 4);
        let a33 = SetAlgebra::small(3, 3, SigKind::Ta, &cfg()).unwrap();
        assert_eq!(a33.unit().size(), 27);
        assert!(SetAlgebra::small(2, 3, SigKind::Ta, &cfg()).is_err());
    }

    #[test]
    fn substitution_laws_exhaustive_on_a22() {
        let a = full22(SigKind::Sa);
        let t01 = Transformation::transposition(2, 0, 1).unwrap();
        let r01 = Transformation::replacement(2, 0, 1).unwrap();
        let all: Vec<DenseSet> = (0..16usize)
            .map(|m| {
                a.from_bits(Bits::from_indices(
                    4,
                    &(0..4).filter(|&i| m >> i & 1 == 1).collect::<Vec<_>>(),
                ))
                .unwrap()
            })
            .collect();
        for x in &all {
            // involution
            let s = a.apply_subst(x, &t01).unwrap();
            assert_eq!(a.apply_subst(&s, &t01).unwrap(), *x);
            // Boolean endomorphism
            for t in [&t01, &r01] {
                assert_eq!(
                    a.apply_subst(&a.complement(x), t).unwrap(),
                    a.complement(&a.apply_subst(x, t).unwrap())
                );
                for y in all.iter().take(6) {
                    assert_eq!(
                        a.apply_subst(&a.meet(x, y), t).unwrap(),
                        a.meet(&a.apply_subst(x, t).unwrap(), &a.apply_subst(y, t).unwrap())
                    );
                }
            }
            // functor law: S_tau(S_sigma x) = S_{sigma∘tau}... checked both ways
            for s1 in [&t01, &r01] {
                for s2 in [&t01, &r01] {
                    let lhs = a.apply_subst(&a.apply_subst(x, s1).unwrap(), s2).unwrap();
                    let composed = crate::perm::compose(s2, s1).unwrap();
                    let rhs = a.apply_subst(x, &composed).unwrap();
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn empty_unit_collapses() {
        let a = SetAlgebra::small(2, 0, SigKind::Sad, &cfg()).unwrap();
        assert_eq!(a.top(), a.bottom());
        let t01 = Transformation::transposition(2, 0, 1).unwrap();
        assert_eq!(a.apply_subst(&a.top(), &t01).unwrap(), a.bottom());
        assert_eq!(a.diagonal(0, 1).unwrap(), a.bottom());
    }
}
