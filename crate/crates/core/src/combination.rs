//! Combination of mass functions from distinct sources.
//!
//! All rules accumulate over pairs of focal elements keyed by the
//! intersection or union mask, so cost is `O(F1 * F2)` in the focal counts
//! regardless of frame size.

use alloc::collections::BTreeMap;
use core::fmt;
use core::str::FromStr;

use crate::error::{Error, Result};
use crate::frame::SubsetMask;
use crate::mass::MassFunction;

/// Dempster normalization is refused when `1 - K` is at most this.
pub const TOTAL_CONFLICT_THRESHOLD: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum CombinationRule {
    /// Unnormalized conjunctive rule; conflict stays on the empty set.
    Conjunctive,
    /// Conjunctive rule renormalized by `1 - K`.
    #[default]
    Dempster,
    Disjunctive,
}

impl CombinationRule {
    pub const ALL: [CombinationRule; 3] = [
        CombinationRule::Conjunctive,
        CombinationRule::Dempster,
        CombinationRule::Disjunctive,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CombinationRule::Conjunctive => "conjunctive",
            CombinationRule::Dempster => "dempster",
            CombinationRule::Disjunctive => "disjunctive",
        }
    }
}

impl fmt::Display for CombinationRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CombinationRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        CombinationRule::ALL
            .into_iter()
            .find(|r| r.name().eq_ignore_ascii_case(s))
            .ok_or(Error::InvalidParameter("unknown combination rule"))
    }
}

fn check_frames(m1: &MassFunction, m2: &MassFunction) -> Result<()> {
    if m1.frame() == m2.frame() {
        Ok(())
    } else {
        Err(Error::FrameMismatch)
    }
}

fn pairwise(
    m1: &MassFunction,
    m2: &MassFunction,
    op: impl Fn(SubsetMask, SubsetMask) -> SubsetMask,
) -> Result<MassFunction> {
    check_frames(m1, m2)?;
    let mut acc: BTreeMap<SubsetMask, f64> = BTreeMap::new();
    for &(b, mb) in m1.focal_elements() {
        for &(c, mc) in m2.focal_elements() {
            *acc.entry(op(b, c)).or_insert(0.0) += mb * mc;
        }
    }
    Ok(MassFunction::from_sorted(
        m1.frame().clone(),
        acc.into_iter().collect(),
    ))
}

/// `m(A) = Σ_{B∩C=A} m1(B)·m2(C)`. Conflict is kept as mass on `∅`.
pub fn conjunctive(m1: &MassFunction, m2: &MassFunction) -> Result<MassFunction> {
    pairwise(m1, m2, SubsetMask::intersection)
}

/// Dempster's rule: the conjunctive result with `∅` removed and the rest
/// divided by `1 - K`.
pub fn dempster(m1: &MassFunction, m2: &MassFunction) -> Result<MassFunction> {
    conjunctive(m1, m2)?.normalize()
}

/// `m(A) = Σ_{B∪C=A} m1(B)·m2(C)`.
pub fn disjunctive(m1: &MassFunction, m2: &MassFunction) -> Result<MassFunction> {
    pairwise(m1, m2, SubsetMask::union)
}

/// The conflict `K = Σ_{B∩C=∅} m1(B)·m2(C)`.
pub fn conflict(m1: &MassFunction, m2: &MassFunction) -> Result<f64> {
    check_frames(m1, m2)?;
    let mut k = 0.0;
    for &(b, mb) in m1.focal_elements() {
        for &(c, mc) in m2.focal_elements() {
            if !b.intersects(c) {
                k += mb * mc;
            }
        }
    }
    Ok(k)
}

/// Combines any number of mass functions with one rule.
///
/// Dempster folds with the conjunctive rule and normalizes once at the end,
/// which equals repeated pairwise application. The other rules are left
/// folds.
pub fn combine_all(rule: CombinationRule, masses: &[MassFunction]) -> Result<MassFunction> {
    let (first, rest) = masses.split_first().ok_or(Error::EmptyInput)?;
    let step = match rule {
        CombinationRule::Conjunctive | CombinationRule::Dempster => conjunctive,
        CombinationRule::Disjunctive => disjunctive,
    };
    let folded = rest
        .iter()
        .try_fold(first.clone(), |acc, m| step(&acc, m))?;
    match rule {
        CombinationRule::Dempster => folded.normalize(),
        _ => Ok(folded),
    }
}

/// Combines two mass functions with `rule`.
pub fn combine(rule: CombinationRule, m1: &MassFunction, m2: &MassFunction) -> Result<MassFunction> {
    match rule {
        CombinationRule::Conjunctive => conjunctive(m1, m2),
        CombinationRule::Dempster => dempster(m1, m2),
        CombinationRule::Disjunctive => disjunctive(m1, m2),
    }
}
