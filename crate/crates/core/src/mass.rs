//! Mass functions (basic belief assignments) and their credibility and
//! plausibility functionals.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::frame::{Frame, SubsetMask};

/// Allowed deviation of the total mass from 1 at construction.
pub const SUM_TOLERANCE: f64 = 1e-9;

/// A sparse mass function on one frame.
///
/// Focal elements are kept sorted by mask value and every stored mass is
/// strictly positive. A normalized mass function never stores the empty
/// set; an unnormalized one (the transient output of the conjunctive rule)
/// may.
#[derive(Debug, Clone, PartialEq)]
pub struct MassFunction {
    frame: Frame,
    focal: Vec<(SubsetMask, f64)>,
    normalized: bool,
}

impl MassFunction {
    /// Builds a normalized mass function.
    ///
    /// Duplicate subsets are merged by summation and zero masses dropped.
    /// When the total is within [`SUM_TOLERANCE`] of 1 the masses are
    /// rescaled by it to absorb rounding noise.
    pub fn new<I>(frame: &Frame, assignments: I) -> Result<Self>
    where
        I: IntoIterator<Item = (SubsetMask, f64)>,
    {
        Self::build(frame, assignments, true)
    }

    /// Like [`MassFunction::new`] but accepts mass on the empty set.
    pub fn new_unnormalized<I>(frame: &Frame, assignments: I) -> Result<Self>
    where
        I: IntoIterator<Item = (SubsetMask, f64)>,
    {
        Self::build(frame, assignments, false)
    }

    fn build<I>(frame: &Frame, assignments: I, normalized: bool) -> Result<Self>
    where
        I: IntoIterator<Item = (SubsetMask, f64)>,
    {
        let mut acc = BTreeMap::new();
        for (mask, mass) in assignments {
            if !(0.0..=1.0).contains(&mass) {
                return Err(Error::MassOutOfRange(mass));
            }
            if !frame.contains_mask(mask) {
                return Err(Error::InvalidSubset(mask.bits()));
            }
            if mass == 0.0 {
                continue;
            }
            if normalized && mask.is_empty() {
                return Err(Error::EmptySetMass);
            }
            *acc.entry(mask).or_insert(0.0) += mass;
        }
        let total: f64 = acc.values().sum();
        if (total - 1.0).abs() > SUM_TOLERANCE {
            return Err(Error::SumNotOne(total));
        }
        let focal = acc.into_iter().map(|(k, v)| (k, v / total)).collect();
        Ok(Self::from_sorted(frame.clone(), focal))
    }

    /// Assembles a mass function from already-validated, mask-sorted
    /// entries. Zero entries are dropped.
    pub(crate) fn from_sorted(frame: Frame, mut focal: Vec<(SubsetMask, f64)>) -> Self {
        focal.retain(|&(_, m)| m > 0.0);
        debug_assert!(focal.windows(2).all(|w| w[0].0 < w[1].0));
        let normalized = focal.first().is_none_or(|(k, _)| !k.is_empty());
        MassFunction {
            frame,
            focal,
            normalized,
        }
    }

    /// The categorical mass function `m(X) = 1`.
    ///
    /// `X` may be the whole frame, which gives the vacuous mass function.
    pub fn categorical(frame: &Frame, subset: SubsetMask) -> Result<Self> {
        if subset.is_empty() {
            return Err(Error::EmptySubset);
        }
        if !frame.contains_mask(subset) {
            return Err(Error::InvalidSubset(subset.bits()));
        }
        Ok(Self::from_sorted(frame.clone(), alloc::vec![(subset, 1.0)]))
    }

    /// Total ignorance, `m(Θ) = 1`.
    pub fn vacuous(frame: &Frame) -> Self {
        Self::from_sorted(frame.clone(), alloc::vec![(frame.full(), 1.0)])
    }

    #[inline]
    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    /// Focal elements with their masses, ascending by mask value.
    #[inline]
    pub fn focal_elements(&self) -> &[(SubsetMask, f64)] {
        &self.focal
    }

    /// Whether no mass sits on the empty set.
    #[inline]
    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    /// `m(A)`.
    pub fn mass(&self, subset: SubsetMask) -> f64 {
        self.focal
            .binary_search_by_key(&subset, |&(k, _)| k)
            .map_or(0.0, |i| self.focal[i].1)
    }

    /// Mass on the empty set, i.e. the conflict left by a conjunctive fusion.
    pub fn empty_mass(&self) -> f64 {
        self.mass(SubsetMask::EMPTY)
    }

    pub fn total_mass(&self) -> f64 {
        self.focal.iter().map(|&(_, m)| m).sum()
    }

    /// Credibility: total mass of the non-empty subsets of `a`.
    pub fn bel(&self, a: SubsetMask) -> f64 {
        self.focal
            .iter()
            .filter(|&&(b, _)| !b.is_empty() && b.is_subset_of(a))
            .map(|&(_, m)| m)
            .sum()
    }

    /// Plausibility: total mass of the subsets intersecting `a`.
    pub fn pl(&self, a: SubsetMask) -> f64 {
        self.focal
            .iter()
            .filter(|&&(b, _)| b.intersects(a))
            .map(|&(_, m)| m)
            .sum()
    }

    /// Drops the empty-set mass and rescales the rest to sum to 1.
    ///
    /// Fails with [`Error::TotalConflict`] when the remaining mass is at most
    /// `1e-12`.
    pub fn normalize(&self) -> Result<Self> {
        if self.normalized {
            return Ok(self.clone());
        }
        let rest: f64 = self
            .focal
            .iter()
            .filter(|(k, _)| !k.is_empty())
            .map(|&(_, m)| m)
            .sum();
        if rest <= crate::combination::TOTAL_CONFLICT_THRESHOLD {
            return Err(Error::TotalConflict);
        }
        let focal = self
            .focal
            .iter()
            .filter(|(k, _)| !k.is_empty())
            .map(|&(k, m)| (k, m / rest))
            .collect();
        Ok(Self::from_sorted(self.frame.clone(), focal))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn frame3() -> Frame {
        Frame::new(["θ1", "θ2", "θ3"]).unwrap()
    }

    fn bba1(f: &Frame) -> MassFunction {
        let s = |x| f.parse_subset(x).unwrap();
        MassFunction::new(f, [(s("θ1"), 0.4), (s("θ2|θ3"), 0.2), (s("*"), 0.4)]).unwrap()
    }

    #[test]
    fn three_focal_bba_is_valid() {
        let f = frame3();
        let m = bba1(&f);
        assert_eq!(m.focal_elements().len(), 3);
        assert!(m.is_normalized());
        assert!((m.total_mass() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn construction_errors() {
        let f = frame3();
        let s = |x| f.parse_subset(x).unwrap();
        assert_eq!(
            MassFunction::new(&f, [(s("θ1"), 0.5), (s("θ2"), 0.6)]),
            Err(Error::SumNotOne(1.1))
        );
        assert_eq!(
            MassFunction::new(&f, [(s("θ1"), 1.5)]),
            Err(Error::MassOutOfRange(1.5))
        );
        assert!(matches!(
            MassFunction::new(&f, [(s("θ1"), f64::NAN)]),
            Err(Error::MassOutOfRange(_))
        ));
        assert_eq!(
            MassFunction::new(&f, [(SubsetMask::EMPTY, 0.1), (s("θ1"), 0.9)]),
            Err(Error::EmptySetMass)
        );
        assert_eq!(
            MassFunction::new(&f, [(SubsetMask::from_bits(0b1000), 1.0)]),
            Err(Error::InvalidSubset(0b1000))
        );
        let open = MassFunction::new_unnormalized(&f, [(SubsetMask::EMPTY, 0.1), (s("θ1"), 0.9)])
            .unwrap();
        assert!(!open.is_normalized());
        assert_eq!(open.empty_mass(), 0.1);
    }

    #[test]
    fn duplicates_merge_and_zeros_drop() {
        let f = frame3();
        let s = |x| f.parse_subset(x).unwrap();
        let m = MassFunction::new(
            &f,
            [(s("θ1"), 0.25), (s("θ2"), 0.0), (s("θ1"), 0.25), (s("*"), 0.5)],
        )
        .unwrap();
        assert_eq!(m.focal_elements(), &[(s("θ1"), 0.5), (s("*"), 0.5)]);
    }

    #[test]
    fn near_one_sum_is_rescaled() {
        let f = frame3();
        let s = |x| f.parse_subset(x).unwrap();
        let m = MassFunction::new(&f, [(s("θ1"), 0.5 + 4e-10), (s("*"), 0.5)]).unwrap();
        assert!((m.total_mass() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn categorical_and_vacuous() {
        let f = frame3();
        let x = f.parse_subset("θ1|θ2").unwrap();
        let c = MassFunction::categorical(&f, x).unwrap();
        assert_eq!(c.focal_elements(), &[(x, 1.0)]);
        let t1 = f.singleton("θ1").unwrap();
        assert_eq!(MassFunction::categorical(&f, t1).unwrap().mass(t1), 1.0);
        assert_eq!(
            MassFunction::categorical(&f, SubsetMask::EMPTY),
            Err(Error::EmptySubset)
        );
        assert_eq!(MassFunction::categorical(&f, f.full()).unwrap(), MassFunction::vacuous(&f));

        let v = MassFunction::vacuous(&f);
        assert_eq!(v.focal_elements(), &[(f.full(), 1.0)]);
        for bits in 1..0b111 {
            assert_eq!(v.bel(SubsetMask::from_bits(bits)), 0.0);
        }
        for bits in 1..=0b111 {
            assert_eq!(v.pl(SubsetMask::from_bits(bits)), 1.0);
        }
    }

    #[test]
    fn bel_pl_on_three_focal_bba() {
        let f = frame3();
        let m = bba1(&f);
        let s = |x| f.parse_subset(x).unwrap();
        assert!((m.bel(s("θ2|θ3")) - 0.2).abs() < 1e-15);
        assert!((m.bel(f.full()) - 1.0).abs() < 1e-15);
        assert_eq!(m.bel(s("θ2")), 0.0);
        assert!((m.pl(s("θ2")) - 0.6).abs() < 1e-15);
        assert!((m.pl(s("θ1")) - 0.8).abs() < 1e-15);
        assert!((m.pl(f.full()) - 1.0).abs() < 1e-15);
        assert_eq!(m.bel(SubsetMask::EMPTY), 0.0);
        assert_eq!(m.pl(SubsetMask::EMPTY), 0.0);
    }

    #[test]
    fn normalize_drops_conflict() {
        let f = frame3();
        let s = |x| f.parse_subset(x).unwrap();
        let open =
            MassFunction::new_unnormalized(&f, [(SubsetMask::EMPTY, 0.5), (s("θ1"), 0.25), (s("θ2"), 0.25)])
                .unwrap();
        let n = open.normalize().unwrap();
        assert_eq!(n.focal_elements(), &[(s("θ1"), 0.5), (s("θ2"), 0.5)]);
        let dead = MassFunction::new_unnormalized(&f, [(SubsetMask::EMPTY, 1.0)]).unwrap();
        assert_eq!(dead.normalize(), Err(Error::TotalConflict));
    }
}
