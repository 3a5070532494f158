//! Belief-function evidence fusion with a distance-based decision rule,
//! applied to name-based entity matching.
//!
//! The crate is `no_std` and only needs `alloc`. It covers:
//!
//! - [`frame`]: frames of discernment and bitmask-encoded subsets,
//! - [`mass`]: mass functions with credibility and plausibility,
//! - [`combination`]: conjunctive, Dempster and disjunctive rules,
//! - [`decision`]: pignistic, max-bel/pl, Appriou and the argmin Jousselme
//!   distance rule over cardinality-bounded composite hypotheses,
//! - [`similarity`]: Levenshtein, Jaro and Hamming name matchers,
//! - [`pipeline`]: the end-to-end matching process producing an alignment.
//!
//! ```
//! use evalign_core::{combination, decision::{self, DecisionConfig}, Frame, MassFunction};
//!
//! let frame = Frame::new(["t1", "t2", "t3"]).unwrap();
//! let s = |x: &str| frame.parse_subset(x).unwrap();
//! let m1 = MassFunction::new(&frame, [(s("t1"), 0.4), (s("t2|t3"), 0.2), (s("*"), 0.4)]).unwrap();
//! let m2 = MassFunction::new(&frame, [(s("t2"), 0.2), (s("*"), 0.8)]).unwrap();
//! let fused = combination::dempster(&m1, &m2).unwrap();
//! let outcome = decision::decide_min_distance(&fused, &DecisionConfig::default()).unwrap();
//! assert_eq!(frame.render(outcome.chosen), "t1|t2");
//! ```

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod combination;
pub mod decision;
mod error;
pub mod frame;
pub mod mass;
pub mod pipeline;
pub mod similarity;

pub use combination::CombinationRule;
pub use error::{Error, Result};
pub use frame::{Frame, SubsetMask, MAX_FRAME_SIZE};
pub use mass::{MassFunction, SUM_TOLERANCE};
