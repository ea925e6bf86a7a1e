//! Variable-basis vectors and their composition laws.
//!
//! A [`VBVector`] carries both a basis (the set of species that exist) and
//! coordinates on that basis (their abundances). A label inside the basis
//! with coordinate `0.0` is a present species with zero abundance; a label
//! outside the basis is an absent species. No operation here conflates the
//! two.
//!
//! Two internal laws are provided:
//!
//! * [`VBVector::union_add`] sums over the united basis. Its neutral element
//!   is the empty-basis vector [`VBVector::zero_empty`].
//! * [`VBVector::inter_add`] sums over the common basis. Its neutral element
//!   is the all-zero vector on the full universe, [`Universe::zero_full`].
//!
//! The external law is [`VBVector::scale`]. Result bases depend only on
//! operand bases, never on coordinate values.

use std::collections::btree_map;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

/// Default absolute tolerance used when comparing coordinates.
pub const DEFAULT_COORD_TOL: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AlgebraError {
    #[error("label {0} is not part of the universe")]
    UnknownLabel(Label),
    #[error("label {0} is declared both as known and as reserved")]
    OverlappingPartition(Label),
    #[error("label {0} is declared twice")]
    DuplicateLabel(Label),
}

/// Species identifier, an element of the universe index set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Label(pub u32);

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl From<u32> for Label {
    fn from(id: u32) -> Self {
        Label(id)
    }
}

/// A finite set of labels, iterated in ascending id order.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BasisSet(BTreeSet<Label>);

impl BasisSet {
    pub fn empty() -> Self {
        BasisSet(BTreeSet::new())
    }

    pub fn from_ids<I: IntoIterator<Item = u32>>(ids: I) -> Self {
        ids.into_iter().map(Label).collect()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, label: Label) -> bool {
        self.0.contains(&label)
    }

    pub fn insert(&mut self, label: Label) -> bool {
        self.0.insert(label)
    }

    pub fn iter(&self) -> impl Iterator<Item = Label> + '_ {
        self.0.iter().copied()
    }

    pub fn union(&self, other: &BasisSet) -> BasisSet {
        BasisSet(self.0.union(&other.0).copied().collect())
    }

    pub fn intersection(&self, other: &BasisSet) -> BasisSet {
        BasisSet(self.0.intersection(&other.0).copied().collect())
    }

    pub fn difference(&self, other: &BasisSet) -> BasisSet {
        BasisSet(self.0.difference(&other.0).copied().collect())
    }

    pub fn is_subset(&self, other: &BasisSet) -> bool {
        self.0.is_subset(&other.0)
    }

    /// `self ⊊ other`.
    pub fn is_strict_subset(&self, other: &BasisSet) -> bool {
        self.0.len() < other.0.len() && self.0.is_subset(&other.0)
    }

    pub fn is_disjoint(&self, other: &BasisSet) -> bool {
        self.0.is_disjoint(&other.0)
    }

    /// Semicolon-joined ascending ids, the form used in event logs.
    pub fn joined(&self) -> String {
        self.0
            .iter()
            .map(|l| l.0.to_string())
            .collect::<Vec<_>>()
            .join(";")
    }
}

impl FromIterator<Label> for BasisSet {
    fn from_iter<T: IntoIterator<Item = Label>>(iter: T) -> Self {
        BasisSet(iter.into_iter().collect())
    }
}

impl fmt::Display for BasisSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{l}")?;
        }
        write!(f, "}}")
    }
}

/// The finite universe of labels, partitioned into catalogued species and a
/// reserve for species that are not yet known.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Universe {
    known: Vec<Label>,
    unknown_reserve: Vec<Label>,
    all: BasisSet,
}

impl Universe {
    pub fn new(known: Vec<Label>, unknown_reserve: Vec<Label>) -> Result<Self, AlgebraError> {
        let mut all = BasisSet::empty();
        for &l in &known {
            if !all.insert(l) {
                return Err(AlgebraError::DuplicateLabel(l));
            }
        }
        for &l in &unknown_reserve {
            if known.contains(&l) {
                return Err(AlgebraError::OverlappingPartition(l));
            }
            if !all.insert(l) {
                return Err(AlgebraError::DuplicateLabel(l));
            }
        }
        Ok(Universe {
            known,
            unknown_reserve,
            all,
        })
    }

    /// Universe `{1, ..., n}` with no reserve.
    pub fn range(n: u32) -> Self {
        Universe::new((1..=n).map(Label).collect(), Vec::new()).expect("distinct labels")
    }

    /// Catalogued labels, in declaration order.
    pub fn known(&self) -> &[Label] {
        &self.known
    }

    pub fn unknown_reserve(&self) -> &[Label] {
        &self.unknown_reserve
    }

    /// The maximal basis.
    pub fn full_basis(&self) -> &BasisSet {
        &self.all
    }

    pub fn len(&self) -> usize {
        self.all.len()
    }

    pub fn is_empty(&self) -> bool {
        self.all.is_empty()
    }

    pub fn contains(&self, label: Label) -> bool {
        self.all.contains(label)
    }

    pub fn check_basis(&self, basis: &BasisSet) -> Result<(), AlgebraError> {
        match basis.iter().find(|l| !self.contains(*l)) {
            Some(l) => Err(AlgebraError::UnknownLabel(l)),
            None => Ok(()),
        }
    }

    pub fn check(&self, x: &VBVector) -> Result<(), AlgebraError> {
        match x.labels().find(|l| !self.contains(*l)) {
            Some(l) => Err(AlgebraError::UnknownLabel(l)),
            None => Ok(()),
        }
    }

    /// Neutral element of `+_∩`: every universe label present at `0.0`.
    pub fn zero_full(&self) -> VBVector {
        VBVector::constant_on(&self.all, 0.0)
    }

    pub fn unit_on(&self, basis: &BasisSet) -> Result<VBVector, AlgebraError> {
        self.check_basis(basis)?;
        Ok(VBVector::constant_on(basis, 1.0))
    }

    pub fn union_add(&self, x: &VBVector, y: &VBVector) -> Result<VBVector, AlgebraError> {
        self.check(x)?;
        self.check(y)?;
        Ok(x.union_add(y))
    }

    pub fn inter_add(&self, x: &VBVector, y: &VBVector) -> Result<VBVector, AlgebraError> {
        self.check(x)?;
        self.check(y)?;
        Ok(x.inter_add(y))
    }
}

/// An element of the variable-basis space: a basis-stamped sparse vector.
///
/// The key set of the coordinate map *is* the basis.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct VBVector {
    coords: BTreeMap<Label, f64>,
}

impl VBVector {
    /// The null-dimension zero vector, neutral for `+_∪`.
    pub fn zero_empty() -> Self {
        VBVector::default()
    }

    pub fn from_pairs<I, L>(pairs: I) -> Self
    where
        I: IntoIterator<Item = (L, f64)>,
        L: Into<Label>,
    {
        VBVector {
            coords: pairs.into_iter().map(|(l, v)| (l.into(), v)).collect(),
        }
    }

    /// Builds a vector on `labels` (ascending order) from a dense slice.
    pub fn from_dense(labels: &[Label], values: &[f64]) -> Self {
        debug_assert_eq!(labels.len(), values.len());
        VBVector {
            coords: labels.iter().copied().zip(values.iter().copied()).collect(),
        }
    }

    pub fn constant_on(basis: &BasisSet, value: f64) -> Self {
        VBVector {
            coords: basis.iter().map(|l| (l, value)).collect(),
        }
    }

    pub fn basis(&self) -> BasisSet {
        self.coords.keys().copied().collect()
    }

    pub fn labels(&self) -> impl Iterator<Item = Label> + '_ {
        self.coords.keys().copied()
    }

    pub fn iter(&self) -> btree_map::Iter<'_, Label, f64> {
        self.coords.iter()
    }

    pub fn values(&self) -> Vec<f64> {
        self.coords.values().copied().collect()
    }

    pub fn get(&self, label: Label) -> Option<f64> {
        self.coords.get(&label).copied()
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    /// True for the empty-basis vector only; `{1: 0.0}` is not empty.
    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn has_basis(&self, basis: &BasisSet) -> bool {
        self.coords.len() == basis.len() && basis.iter().all(|l| self.coords.contains_key(&l))
    }

    /// Sum over the united basis; a coordinate missing from one operand
    /// counts as zero.
    pub fn union_add(&self, other: &VBVector) -> VBVector {
        let mut coords = self.coords.clone();
        for (&l, &v) in &other.coords {
            coords.entry(l).and_modify(|c| *c += v).or_insert(v);
        }
        VBVector { coords }
    }

    /// Sum over the common basis; labels outside the intersection are dropped.
    pub fn inter_add(&self, other: &VBVector) -> VBVector {
        let coords = self
            .coords
            .iter()
            .filter_map(|(l, v)| other.coords.get(l).map(|w| (*l, v + w)))
            .collect();
        VBVector { coords }
    }

    /// External law. `scale(0, x)` keeps the basis of `x`.
    pub fn scale(&self, a: f64) -> VBVector {
        VBVector {
            coords: self.coords.iter().map(|(l, v)| (*l, a * v)).collect(),
        }
    }

    /// Restriction to `self.basis() ∩ target`.
    pub fn project(&self, target: &BasisSet) -> VBVector {
        VBVector {
            coords: self
                .coords
                .iter()
                .filter(|(l, _)| target.contains(**l))
                .map(|(l, v)| (*l, *v))
                .collect(),
        }
    }

    /// All-ones vector on this vector's basis.
    pub fn unit_from(&self) -> VBVector {
        VBVector {
            coords: self.coords.keys().map(|l| (*l, 1.0)).collect(),
        }
    }

    /// Same basis and every coordinate within `tol`.
    pub fn approx_eq(&self, other: &VBVector, tol: f64) -> bool {
        self.coords.len() == other.coords.len()
            && self
                .coords
                .iter()
                .zip(other.coords.iter())
                .all(|((la, va), (lb, vb))| la == lb && (va - vb).abs() <= tol)
    }

    pub fn is_finite(&self) -> bool {
        self.coords.values().all(|v| v.is_finite())
    }
}

impl fmt::Display for VBVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (l, v)) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{l}:{v}")?;
        }
        write!(f, "}}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn v(pairs: &[(u32, f64)]) -> VBVector {
        VBVector::from_pairs(pairs.iter().copied())
    }

    #[test]
    fn union_add_examples() {
        let x = v(&[(1, 0.7), (2, 0.3)]);
        let y = v(&[(2, 0.1), (3, 0.5)]);
        assert!(x
            .union_add(&y)
            .approx_eq(&v(&[(1, 0.7), (2, 0.4), (3, 0.5)]), 1e-15));
        assert_eq!(x.union_add(&VBVector::zero_empty()), x);

        let cancelled = v(&[(1, 0.5)]).union_add(&v(&[(1, -0.5)]));
        assert_eq!(cancelled, v(&[(1, 0.0)]));
        assert_ne!(cancelled, VBVector::zero_empty());
    }

    #[test]
    fn inter_add_examples() {
        let x = v(&[(1, 0.7), (2, 0.3), (4, 1.2)]);
        let y = v(&[(1, 0.1), (4, 0.0)]);
        assert!(x.inter_add(&y).approx_eq(&v(&[(1, 0.8), (4, 1.2)]), 1e-15));

        let u = Universe::range(5);
        let full = v(&[(1, 0.1), (2, -3.0), (3, 0.0), (4, 7.5), (5, 2.0)]);
        assert_eq!(full.inter_add(&u.zero_full()), full);

        assert_eq!(
            v(&[(1, 0.5)]).inter_add(&v(&[(2, 0.5)])),
            VBVector::zero_empty()
        );
    }

    #[test]
    fn scale_examples() {
        assert_eq!(
            v(&[(1, 0.7), (4, 1.2)]).scale(2.0),
            v(&[(1, 1.4), (4, 2.4)])
        );
        let x = v(&[(3, -0.25), (8, 9.0)]);
        assert_eq!(x.scale(1.0), x);
        assert_eq!(v(&[(1, 0.7)]).scale(0.0), v(&[(1, 0.0)]));
    }

    #[test]
    fn project_examples() {
        let x = v(&[(1, 0.7), (2, 0.3)]);
        assert_eq!(x.project(&BasisSet::from_ids([2, 3])), v(&[(2, 0.3)]));
        assert_eq!(x.project(&x.basis()), x);
        assert_eq!(x.project(&BasisSet::empty()), VBVector::zero_empty());
    }

    #[test]
    fn unit_constructions() {
        assert_eq!(
            v(&[(1, 0.7), (4, 1.2)]).unit_from(),
            v(&[(1, 1.0), (4, 1.0)])
        );
        assert_eq!(VBVector::zero_empty().unit_from(), VBVector::zero_empty());
        assert_eq!(v(&[(9, 0.0)]).unit_from(), v(&[(9, 1.0)]));

        let u = Universe::range(11);
        assert_eq!(
            u.unit_on(&BasisSet::from_ids([1, 4])).unwrap(),
            v(&[(1, 1.0), (4, 1.0)])
        );
        assert_eq!(
            u.unit_on(&BasisSet::empty()).unwrap(),
            VBVector::zero_empty()
        );
        let ones = u.unit_on(u.full_basis()).unwrap();
        assert_eq!(ones.dim(), 11);
        assert!(ones.iter().all(|(_, c)| *c == 1.0));
        assert_eq!(
            u.unit_on(&BasisSet::from_ids([12])),
            Err(AlgebraError::UnknownLabel(Label(12)))
        );
    }

    #[test]
    fn neutral_elements() {
        assert!(VBVector::zero_empty().basis().is_empty());
        let u = Universe::range(11);
        let z = u.zero_full();
        assert_eq!(z.dim(), 11);
        assert!(z.iter().all(|(_, c)| *c == 0.0));
        assert_eq!(VBVector::zero_empty().union_add(&z), z);
    }

    #[test]
    fn checked_laws_reject_foreign_labels() {
        let u = Universe::range(3);
        let x = v(&[(1, 1.0)]);
        let y = v(&[(4, 1.0)]);
        assert_eq!(
            u.union_add(&x, &y),
            Err(AlgebraError::UnknownLabel(Label(4)))
        );
        assert_eq!(
            u.inter_add(&y, &x),
            Err(AlgebraError::UnknownLabel(Label(4)))
        );
        assert!(u.union_add(&x, &x).is_ok());
    }

    #[test]
    fn universe_partition_is_checked() {
        let err = Universe::new(vec![Label(1), Label(2)], vec![Label(2)]).unwrap_err();
        assert_eq!(err, AlgebraError::OverlappingPartition(Label(2)));
        let u = Universe::new(vec![Label(1), Label(2)], vec![Label(7), Label(8)]).unwrap();
        assert_eq!(u.full_basis(), &BasisSet::from_ids([1, 2, 7, 8]));
        assert_eq!(u.zero_full().dim(), 4);
    }

    #[test]
    fn zero_coordinate_is_not_absence() {
        assert_ne!(v(&[(1, 0.0)]), VBVector::zero_empty());
        assert!(!v(&[(1, 0.0)]).is_empty());
        assert!(!v(&[(1, 0.0)]).approx_eq(&VBVector::zero_empty(), 1.0));
    }

    fn arb_vector() -> impl Strategy<Value = VBVector> {
        proptest::collection::btree_map(1u32..=8, -10.0f64..10.0, 0..=8)
            .prop_map(|m| VBVector::from_pairs(m))
    }

    fn arb_basis() -> impl Strategy<Value = BasisSet> {
        proptest::collection::btree_set(1u32..=8, 0..=8).prop_map(BasisSet::from_ids)
    }

    proptest! {
        #[test]
        fn laws_commute(x in arb_vector(), y in arb_vector()) {
            prop_assert_eq!(x.union_add(&y), y.union_add(&x));
            prop_assert_eq!(x.inter_add(&y), y.inter_add(&x));
        }

        #[test]
        fn laws_associate(x in arb_vector(), y in arb_vector(), z in arb_vector()) {
            let l = x.union_add(&y).union_add(&z);
            let r = x.union_add(&y.union_add(&z));
            prop_assert!(l.approx_eq(&r, DEFAULT_COORD_TOL));
            let l = x.inter_add(&y).inter_add(&z);
            let r = x.inter_add(&y.inter_add(&z));
            prop_assert!(l.approx_eq(&r, DEFAULT_COORD_TOL));
        }

        #[test]
        fn result_basis_ignores_values(x in arb_vector(), y in arb_vector(), a in -3.0f64..3.0) {
            let (bx, by) = (x.basis(), y.basis());
            prop_assert_eq!(x.union_add(&y).basis(), bx.union(&by));
            prop_assert_eq!(x.inter_add(&y).basis(), bx.intersection(&by));
            prop_assert_eq!(x.scale(a).basis(), bx.clone());
            prop_assert_eq!(x.unit_from().basis(), bx);
        }

        #[test]
        fn inter_add_neutral_on_sub_basis(x in arb_vector()) {
            let u = Universe::range(8);
            prop_assert_eq!(x.inter_add(&u.zero_full()), x);
        }

        #[test]
        fn projection_is_idempotent(x in arb_vector(), b in arb_basis()) {
            let once = x.project(&b);
            prop_assert_eq!(once.project(&b), once.clone());
            prop_assert!(once.basis().is_subset(&b));
        }
    }
}
