//! Decision making on a (fused) mass function.
//!
//! Singleton rules pick the best hypothesis by credibility, plausibility or
//! pignistic probability. Two rules decide on composite hypotheses: the
//! Appriou rule, which weights plausibility by a cardinality penalty, and
//! the minimum-distance rule, which picks the candidate subset `X` whose
//! categorical mass function is nearest to `m` in Jousselme distance.
//!
//! Candidates are the non-empty subsets whose cardinality lies in
//! `[min_cardinality, max_cardinality]`; the whole frame is added only on
//! request. Every outcome carries the full score table and a tie flag.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::error::{Error, Result};
use crate::frame::{Frame, SubsetMask};
use crate::mass::MassFunction;

/// Upper bound on the number of candidates a decision will enumerate.
pub const MAX_CANDIDATES: u128 = 1 << 22;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecisionConfig {
    /// Smallest candidate cardinality (default 1).
    pub min_cardinality: usize,
    /// Largest candidate cardinality (default 2). Clamped to the frame size.
    pub max_cardinality: usize,
    /// Also evaluate the whole frame when it is not already a candidate.
    pub include_full_frame: bool,
    /// Scores within this distance of the best one count as ties.
    pub tie_tolerance: f64,
}

impl Default for DecisionConfig {
    fn default() -> Self {
        DecisionConfig {
            min_cardinality: 1,
            max_cardinality: 2,
            include_full_frame: false,
            tie_tolerance: 1e-9,
        }
    }
}

impl DecisionConfig {
    pub fn with_max_cardinality(max_cardinality: usize) -> Self {
        DecisionConfig {
            max_cardinality,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.min_cardinality == 0 {
            return Err(Error::InvalidParameter("min_cardinality must be at least 1"));
        }
        if self.max_cardinality < self.min_cardinality {
            return Err(Error::InvalidParameter(
                "max_cardinality must not be below min_cardinality",
            ));
        }
        if !(self.tie_tolerance >= 0.0 && self.tie_tolerance.is_finite()) {
            return Err(Error::InvalidParameter("tie_tolerance must be finite and >= 0"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DecisionRule {
    MinDistance,
    MaxBel,
    MaxPl,
    MaxBetP,
    Appriou,
}

impl DecisionRule {
    pub const ALL: [DecisionRule; 5] = [
        DecisionRule::MinDistance,
        DecisionRule::MaxBetP,
        DecisionRule::MaxBel,
        DecisionRule::MaxPl,
        DecisionRule::Appriou,
    ];

    pub fn name(self) -> &'static str {
        match self {
            DecisionRule::MinDistance => "mindist",
            DecisionRule::MaxBel => "bel",
            DecisionRule::MaxPl => "pl",
            DecisionRule::MaxBetP => "betp",
            DecisionRule::Appriou => "appriou",
        }
    }
}

impl fmt::Display for DecisionRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for DecisionRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        DecisionRule::ALL
            .into_iter()
            .find(|r| r.name().eq_ignore_ascii_case(s))
            .ok_or(Error::InvalidParameter("unknown decision rule"))
    }
}

/// Result of a decision: the chosen subset and the score of every candidate.
#[derive(Debug, Clone, PartialEq)]
pub struct DecisionOutcome {
    pub chosen: SubsetMask,
    /// Candidates in evaluation order with their score (a distance for
    /// [`DecisionRule::MinDistance`], a value to maximize otherwise).
    pub scores: Vec<(SubsetMask, f64)>,
    pub rule: DecisionRule,
    /// Another candidate scored within the tie tolerance of `chosen`.
    pub tie: bool,
}

impl DecisionOutcome {
    pub fn rule_name(&self) -> &'static str {
        self.rule.name()
    }

    pub fn score_of(&self, subset: SubsetMask) -> Option<f64> {
        self.scores
            .iter()
            .find(|&&(k, _)| k == subset)
            .map(|&(_, v)| v)
    }

    /// Score of the chosen candidate.
    pub fn chosen_score(&self) -> f64 {
        self.score_of(self.chosen).unwrap_or(f64::NAN)
    }
}

/// Parameters of the Appriou rule `argmax m_d(X)·pl(X)` with
/// `m_d(X) = K_d·λ_X / |X|^r`.
///
/// `K_d` is not a parameter: it normalizes `m_d` over the evaluated
/// candidates, which leaves the argmax unchanged.
#[derive(Debug, Clone, PartialEq)]
pub struct AppriouParams {
    r: f64,
    weights: BTreeMap<SubsetMask, f64>,
}

impl AppriouParams {
    /// `r = 0` puts no penalty on cardinality, `r = 1` favours singletons.
    pub fn new(r: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&r) {
            return Err(Error::InvalidParameter("r must lie in [0, 1]"));
        }
        Ok(AppriouParams {
            r,
            weights: BTreeMap::new(),
        })
    }

    /// Sets `λ_X`; unset subsets weigh 1.
    pub fn with_weight(mut self, subset: SubsetMask, lambda: f64) -> Result<Self> {
        if !(lambda >= 0.0 && lambda.is_finite()) {
            return Err(Error::InvalidParameter("lambda must be finite and >= 0"));
        }
        self.weights.insert(subset, lambda);
        Ok(self)
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn weight(&self, subset: SubsetMask) -> f64 {
        self.weights.get(&subset).copied().unwrap_or(1.0)
    }
}

fn binomial(n: u32, k: u32) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * u128::from(n - i) / u128::from(i + 1))
}

fn effective_bounds(n: usize, config: &DecisionConfig) -> (usize, usize) {
    (config.min_cardinality.max(1), config.max_cardinality.min(n))
}

/// Number of subsets [`candidates`] yields for a frame of size `n`.
pub fn candidate_count(n: usize, config: &DecisionConfig) -> u128 {
    let (lo, hi) = effective_bounds(n, config);
    let mut count: u128 = (lo..=hi).map(|k| binomial(n as u32, k as u32)).sum();
    if config.include_full_frame && hi < n {
        count += 1;
    }
    count
}

/// Candidate subsets for a decision, ascending by cardinality then mask.
///
/// The whole frame comes last when `include_full_frame` is set and it is
/// not already in range. Enumeration is lazy; check [`candidate_count`]
/// before collecting on large frames.
pub fn candidates(frame: &Frame, config: &DecisionConfig) -> Candidates {
    let n = frame.len();
    let (lo, hi) = effective_bounds(n, config);
    Candidates {
        n,
        card: lo,
        max_card: hi,
        next: if lo <= hi { Some(first_with_card(lo)) } else { None },
        full_pending: config.include_full_frame && hi < n,
    }
}

fn first_with_card(k: usize) -> u128 {
    (1u128 << k) - 1
}

/// Iterator returned by [`candidates`].
#[derive(Debug, Clone)]
pub struct Candidates {
    n: usize,
    card: usize,
    max_card: usize,
    next: Option<u128>,
    full_pending: bool,
}

impl Iterator for Candidates {
    type Item = SubsetMask;

    fn next(&mut self) -> Option<SubsetMask> {
        if let Some(current) = self.next {
            // Gosper's hack: next larger integer with the same popcount.
            let low = current & current.wrapping_neg();
            let ripple = current + low;
            let successor = (((ripple ^ current) >> 2) / low) | ripple;
            self.next = if successor >> self.n == 0 {
                Some(successor)
            } else if self.card < self.max_card {
                self.card += 1;
                Some(first_with_card(self.card))
            } else {
                None
            };
            return Some(SubsetMask::from_bits(current as u64));
        }
        if self.full_pending {
            self.full_pending = false;
            return Some(SubsetMask::full(self.n));
        }
        None
    }
}

fn collect_candidates(frame: &Frame, config: &DecisionConfig) -> Result<Vec<SubsetMask>> {
    config.validate()?;
    let count = candidate_count(frame.len(), config);
    if count == 0 {
        return Err(Error::EmptyCandidateSet);
    }
    if count > MAX_CANDIDATES {
        return Err(Error::TooManyCandidates(count));
    }
    Ok(candidates(frame, config).collect())
}

/// Picks the best entry of `scores`. Entries within `tol` of the optimum
/// are tied; `prefer` returns true when its first argument should win a
/// tie against the second.
fn select(
    scores: &[(SubsetMask, f64)],
    minimize: bool,
    tol: f64,
    prefer: impl Fn(SubsetMask, SubsetMask) -> bool,
) -> (SubsetMask, bool) {
    let best = scores
        .iter()
        .map(|&(_, v)| v)
        .fold(if minimize { f64::INFINITY } else { f64::NEG_INFINITY }, |a, v| {
            if minimize {
                a.min(v)
            } else {
                a.max(v)
            }
        });
    let mut tied = scores.iter().filter(|&&(_, v)| (v - best).abs() <= tol);
    let first = tied.next().expect("non-empty score table").0;
    let mut chosen = first;
    let mut tie = false;
    for &(k, _) in tied {
        tie = true;
        if prefer(k, chosen) {
            chosen = k;
        }
    }
    (chosen, tie)
}

fn smaller_first(a: SubsetMask, b: SubsetMask) -> bool {
    (a.len(), a) < (b.len(), b)
}

/// Pignistic probability of the singleton `x`:
/// `Σ_{A∋x} m(A) / (|A|·(1 − m(∅)))`.
pub fn betp(m: &MassFunction, x: SubsetMask) -> Result<f64> {
    if !x.is_singleton() {
        return Err(Error::NotSingleton);
    }
    let open = 1.0 - m.empty_mass();
    if open <= crate::combination::TOTAL_CONFLICT_THRESHOLD {
        return Err(Error::TotalConflict);
    }
    let share: f64 = m
        .focal_elements()
        .iter()
        .filter(|&&(a, _)| a.intersects(x))
        .map(|&(a, v)| v / a.len() as f64)
        .sum();
    Ok(share / open)
}

fn decide_singletons(
    m: &MassFunction,
    rule: DecisionRule,
    score: impl Fn(SubsetMask) -> Result<f64>,
) -> Result<DecisionOutcome> {
    let scores = (0..m.frame().len())
        .map(SubsetMask::singleton)
        .map(|x| Ok((x, score(x)?)))
        .collect::<Result<Vec<_>>>()?;
    let tol = DecisionConfig::default().tie_tolerance;
    let (chosen, tie) = select(&scores, false, tol, |a, b| a < b);
    Ok(DecisionOutcome {
        chosen,
        scores,
        rule,
        tie,
    })
}

/// Most credible singleton.
pub fn decide_max_bel(m: &MassFunction) -> Result<DecisionOutcome> {
    decide_singletons(m, DecisionRule::MaxBel, |x| Ok(m.bel(x)))
}

/// Most plausible singleton.
pub fn decide_max_pl(m: &MassFunction) -> Result<DecisionOutcome> {
    decide_singletons(m, DecisionRule::MaxPl, |x| Ok(m.pl(x)))
}

/// Singleton with the highest pignistic probability.
pub fn decide_max_betp(m: &MassFunction) -> Result<DecisionOutcome> {
    decide_singletons(m, DecisionRule::MaxBetP, |x| betp(m, x))
}

/// Appriou's rule over the configured candidates.
///
/// Ties go to the larger subset (the less committed decision), then to the
/// lower mask.
pub fn appriou_decide(
    m: &MassFunction,
    params: &AppriouParams,
    config: &DecisionConfig,
) -> Result<DecisionOutcome> {
    let cands = collect_candidates(m.frame(), config)?;
    let weighted: Vec<f64> = cands
        .iter()
        .map(|&x| params.weight(x) / libm::pow(x.len() as f64, params.r))
        .collect();
    let total: f64 = weighted.iter().sum();
    if total <= 0.0 {
        return Err(Error::InvalidParameter("candidate weights sum to zero"));
    }
    let k_d = 1.0 / total;
    let scores: Vec<(SubsetMask, f64)> = cands
        .iter()
        .zip(&weighted)
        .map(|(&x, &w)| (x, k_d * w * m.pl(x)))
        .collect();
    let (chosen, tie) = select(&scores, false, config.tie_tolerance, |a, b| {
        (a.len(), core::cmp::Reverse(a)) > (b.len(), core::cmp::Reverse(b))
    });
    Ok(DecisionOutcome {
        chosen,
        scores,
        rule: DecisionRule::Appriou,
        tie,
    })
}

/// Jaccard similarity of two subsets; `1` when both are empty.
#[inline]
pub fn jaccard(a: SubsetMask, b: SubsetMask) -> f64 {
    let union = a.union(b);
    if union.is_empty() {
        1.0
    } else {
        a.intersection(b).len() as f64 / union.len() as f64
    }
}

/// Jousselme distance `sqrt(½ (m1 − m2)ᵀ D (m1 − m2))` with `D` the
/// Jaccard matrix.
///
/// Only the union of the two focal sets is visited; the difference vector
/// is zero everywhere else.
pub fn jousselme_distance(m1: &MassFunction, m2: &MassFunction) -> Result<f64> {
    if m1.frame() != m2.frame() {
        return Err(Error::FrameMismatch);
    }
    let diff = difference(m1.focal_elements(), m2.focal_elements());
    let mut quad = 0.0;
    for (i, &(a, da)) in diff.iter().enumerate() {
        quad += da * da;
        for &(b, db) in &diff[i + 1..] {
            quad += 2.0 * da * db * jaccard(a, b);
        }
    }
    Ok(libm::sqrt((0.5 * quad).max(0.0)))
}

/// Sparse `m1 − m2` over the union of two mask-sorted focal lists.
fn difference(f1: &[(SubsetMask, f64)], f2: &[(SubsetMask, f64)]) -> Vec<(SubsetMask, f64)> {
    let mut out = Vec::with_capacity(f1.len() + f2.len());
    let (mut i, mut j) = (0, 0);
    while i < f1.len() || j < f2.len() {
        match (f1.get(i), f2.get(j)) {
            (Some(&(a, va)), Some(&(b, vb))) if a == b => {
                out.push((a, va - vb));
                i += 1;
                j += 1;
            }
            (Some(&(a, va)), Some(&(b, _))) if a < b => {
                out.push((a, va));
                i += 1;
            }
            (Some(&(a, va)), None) => {
                out.push((a, va));
                i += 1;
            }
            (_, Some(&(b, vb))) => {
                out.push((b, -vb));
                j += 1;
            }
            (None, None) => unreachable!(),
        }
    }
    out
}

/// Distances from one mass function to many categorical ones.
///
/// Expands `d(m, m_X)² = ½ (mᵀDm − 2 Σ_A m(A)·D(A, X) + 1)` so the quadratic
/// term of `m` is computed once.
#[derive(Debug, Clone)]
pub struct CategoricalDistances<'a> {
    m: &'a MassFunction,
    self_term: f64,
}

impl<'a> CategoricalDistances<'a> {
    pub fn new(m: &'a MassFunction) -> Self {
        let focal = m.focal_elements();
        let mut self_term = 0.0;
        for (i, &(a, va)) in focal.iter().enumerate() {
            self_term += va * va;
            for &(b, vb) in &focal[i + 1..] {
                self_term += 2.0 * va * vb * jaccard(a, b);
            }
        }
        CategoricalDistances { m, self_term }
    }

    /// `d(m, m_X)`.
    pub fn to(&self, x: SubsetMask) -> f64 {
        let cross: f64 = self
            .m
            .focal_elements()
            .iter()
            .map(|&(a, v)| v * jaccard(a, x))
            .sum();
        libm::sqrt((0.5 * (self.self_term - 2.0 * cross + 1.0)).max(0.0))
    }
}

/// The minimum-distance rule: `argmin_X d(m, m_X)` over the candidates.
///
/// Ties go to the smaller subset, then to the lower mask.
pub fn decide_min_distance(m: &MassFunction, config: &DecisionConfig) -> Result<DecisionOutcome> {
    let cands = collect_candidates(m.frame(), config)?;
    let distances = CategoricalDistances::new(m);
    let scores: Vec<(SubsetMask, f64)> = cands.iter().map(|&x| (x, distances.to(x))).collect();
    let (chosen, tie) = select(&scores, true, config.tie_tolerance, smaller_first);
    Ok(DecisionOutcome {
        chosen,
        scores,
        rule: DecisionRule::MinDistance,
        tie,
    })
}

/// Dispatches on `rule`. `params` is only used by [`DecisionRule::Appriou`]
/// and `config` only by the composite rules.
pub fn decide(
    m: &MassFunction,
    rule: DecisionRule,
    config: &DecisionConfig,
    params: &AppriouParams,
) -> Result<DecisionOutcome> {
    match rule {
        DecisionRule::MinDistance => decide_min_distance(m, config),
        DecisionRule::MaxBel => decide_max_bel(m),
        DecisionRule::MaxPl => decide_max_pl(m),
        DecisionRule::MaxBetP => decide_max_betp(m),
        DecisionRule::Appriou => appriou_decide(m, params, config),
    }
}
