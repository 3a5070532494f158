//! Name-based matchers. Every matcher maps a pair of labels to a score in
//! `[0, 1]`, comparing Unicode scalar values case-sensitively.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MatcherKind {
    Levenshtein,
    Jaro,
    Hamming,
}

impl MatcherKind {
    pub const ALL: [MatcherKind; 3] = [MatcherKind::Levenshtein, MatcherKind::Jaro, MatcherKind::Hamming];

    pub fn name(self) -> &'static str {
        match self {
            MatcherKind::Levenshtein => "levenshtein",
            MatcherKind::Jaro => "jaro",
            MatcherKind::Hamming => "hamming",
        }
    }

    pub fn score(self, a: &str, b: &str) -> SimilarityScore {
        score(self, a, b)
    }
}

impl fmt::Display for MatcherKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MatcherKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        MatcherKind::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s))
            .ok_or(Error::InvalidParameter("unknown matcher"))
    }
}

/// A similarity in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Default)]
pub struct SimilarityScore(f64);

impl SimilarityScore {
    pub const ZERO: SimilarityScore = SimilarityScore(0.0);
    pub const ONE: SimilarityScore = SimilarityScore(1.0);

    pub fn new(value: f64) -> Result<Self> {
        if (0.0..=1.0).contains(&value) {
            Ok(SimilarityScore(value))
        } else {
            Err(Error::ScoreOutOfRange(value))
        }
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }
}

pub fn score(kind: MatcherKind, a: &str, b: &str) -> SimilarityScore {
    match kind {
        MatcherKind::Levenshtein => levenshtein_sim(a, b),
        MatcherKind::Jaro => jaro_sim(a, b),
        MatcherKind::Hamming => hamming_sim(a, b),
    }
}

/// Unit-cost edit distance (insert, delete, substitute).
pub fn levenshtein_distance(a: &str, b: &str) -> usize {
    let b: Vec<char> = b.chars().collect();
    let mut prev: Vec<usize> = (0..=b.len()).collect();
    let mut cur = vec![0; b.len() + 1];
    for (i, ca) in a.chars().enumerate() {
        cur[0] = i + 1;
        for (j, &cb) in b.iter().enumerate() {
            let substitute = prev[j] + usize::from(ca != cb);
            cur[j + 1] = substitute.min(prev[j + 1] + 1).min(cur[j] + 1);
        }
        core::mem::swap(&mut prev, &mut cur);
    }
    prev[b.len()]
}

/// `1 − lev(a, b) / max(|a|, |b|)`, and 1 for two empty strings.
pub fn levenshtein_sim(a: &str, b: &str) -> SimilarityScore {
    let longest = a.chars().count().max(b.chars().count());
    if longest == 0 {
        return SimilarityScore::ONE;
    }
    SimilarityScore(1.0 - levenshtein_distance(a, b) as f64 / longest as f64)
}

/// Standard Jaro similarity: match window `⌊max/2⌋ − 1`, half-counted
/// transpositions.
pub fn jaro_sim(a: &str, b: &str) -> SimilarityScore {
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    match (a.is_empty(), b.is_empty()) {
        (true, true) => return SimilarityScore::ONE,
        (true, false) | (false, true) => return SimilarityScore::ZERO,
        _ => {}
    }
    let window = (a.len().max(b.len()) / 2).saturating_sub(1);
    let mut b_matched = vec![false; b.len()];
    let mut a_matches = Vec::new();
    for (i, &ca) in a.iter().enumerate() {
        let lo = i.saturating_sub(window);
        let hi = (i + window + 1).min(b.len());
        if lo >= hi {
            continue;
        }
        if let Some(j) = (lo..hi).find(|&j| !b_matched[j] && b[j] == ca) {
            b_matched[j] = true;
            a_matches.push(ca);
        }
    }
    let m = a_matches.len();
    if m == 0 {
        return SimilarityScore::ZERO;
    }
    let b_matches = b.iter().zip(&b_matched).filter(|(_, &hit)| hit).map(|(&c, _)| c);
    let out_of_order = a_matches.iter().zip(b_matches).filter(|(x, y)| **x != *y).count();
    let m = m as f64;
    let t = out_of_order as f64 / 2.0;
    SimilarityScore((m / a.len() as f64 + m / b.len() as f64 + (m - t) / m) / 3.0)
}

/// Hamming similarity extended to unequal lengths: equal characters at
/// equal positions over the shorter string, divided by the longer length.
pub fn hamming_sim(a: &str, b: &str) -> SimilarityScore {
    let longest = a.chars().count().max(b.chars().count());
    if longest == 0 {
        return SimilarityScore::ONE;
    }
    let same = a.chars().zip(b.chars()).filter(|(x, y)| x == y).count();
    SimilarityScore(same as f64 / longest as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conference_labels() {
        assert_eq!(levenshtein_distance("ConferenceMember", "Conference_fees"), 5);
        assert_eq!(levenshtein_sim("ConferenceMember", "Conference_fees").value(), 0.6875);
        assert_eq!(hamming_sim("ConferenceMember", "Conference").value(), 0.625);
        assert_eq!(jaro_sim("ConferenceMember", "Conference").value(), 0.875);
    }

    #[test]
    fn identity_and_empty() {
        for kind in MatcherKind::ALL {
            assert_eq!(kind.score("x", "x"), SimilarityScore::ONE);
            assert_eq!(kind.score("", ""), SimilarityScore::ONE);
            assert_eq!(kind.score("abc", ""), SimilarityScore::ZERO);
        }
        assert_eq!(score(MatcherKind::Levenshtein, "a", "a").value(), 1.0);
    }

    #[test]
    fn no_common_characters() {
        assert_eq!(jaro_sim("abc", "xyz").value(), 0.0);
        assert_eq!(score(MatcherKind::Jaro, "abc", "xyz").value(), 0.0);
        assert_eq!(hamming_sim("ab", "ba").value(), 0.0);
    }

    #[test]
    fn jaro_textbook_values() {
        // m = 6, t = 1
        assert!((jaro_sim("MARTHA", "MARHTA").value() - 0.944_444_444_444_444_4).abs() < 1e-12);
        // m = 4, t = 0
        assert!((jaro_sim("DIXON", "DICKSONX").value() - 0.766_666_666_666_666_7).abs() < 1e-12);
    }

    #[test]
    fn counts_scalar_values_not_bytes() {
        assert_eq!(levenshtein_sim("θ1", "θ2").value(), 0.5);
        assert_eq!(hamming_sim("éa", "éb").value(), 0.5);
    }

    #[test]
    fn case_sensitive() {
        assert!(levenshtein_sim("conference", "Conference").value() < 1.0);
    }

    #[test]
    fn matcher_names_parse() {
        for kind in MatcherKind::ALL {
            assert_eq!(kind.name().parse::<MatcherKind>().unwrap(), kind);
        }
        assert!("bogus".parse::<MatcherKind>().is_err());
    }

    #[test]
    fn score_range() {
        assert!(SimilarityScore::new(1.2).is_err());
        assert!(SimilarityScore::new(-0.1).is_err());
        assert_eq!(SimilarityScore::new(0.5).unwrap().value(), 0.5);
    }
}
