//! Frames of discernment and subsets of them.
//!
//! A [`Frame`] fixes the order of its hypotheses; hypothesis `i` occupies
//! bit `i` of a [`SubsetMask`]. Subset algebra is then plain bitwise
//! arithmetic and cardinality is a popcount.
//!
//! Subsets render as frame labels joined by `|` (`t1|t3`), with `{}` for the
//! empty set. When parsing, `*` is accepted as a shorthand for the whole frame.

use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{BitAnd, BitOr};

use crate::error::{Error, Result};

/// Largest supported frame: one bit per hypothesis in a `u64`.
pub const MAX_FRAME_SIZE: usize = 64;

/// Token for the whole frame in subset strings.
pub const FULL_FRAME_TOKEN: &str = "*";
/// Token for the empty set in subset strings.
pub const EMPTY_SET_TOKEN: &str = "{}";

/// An element of the power set of a frame, as a bitmask.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct SubsetMask(u64);

impl SubsetMask {
    pub const EMPTY: SubsetMask = SubsetMask(0);

    #[inline]
    pub const fn from_bits(bits: u64) -> Self {
        SubsetMask(bits)
    }

    #[inline]
    pub const fn bits(self) -> u64 {
        self.0
    }

    /// The subset holding only hypothesis `index`.
    ///
    /// Panics if `index >= 64`.
    #[inline]
    pub const fn singleton(index: usize) -> Self {
        assert!(index < MAX_FRAME_SIZE);
        SubsetMask(1 << index)
    }

    /// All `n` hypotheses of a frame of size `n`.
    #[inline]
    pub const fn full(n: usize) -> Self {
        if n >= MAX_FRAME_SIZE {
            SubsetMask(u64::MAX)
        } else {
            SubsetMask((1 << n) - 1)
        }
    }

    #[inline]
    pub const fn is_empty(self) -> bool {
        self.0 == 0
    }

    /// Cardinality.
    #[inline]
    pub const fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    #[inline]
    pub const fn is_singleton(self) -> bool {
        self.0.is_power_of_two()
    }

    #[inline]
    pub const fn intersection(self, other: SubsetMask) -> SubsetMask {
        SubsetMask(self.0 & other.0)
    }

    #[inline]
    pub const fn union(self, other: SubsetMask) -> SubsetMask {
        SubsetMask(self.0 | other.0)
    }

    #[inline]
    pub const fn intersects(self, other: SubsetMask) -> bool {
        self.0 & other.0 != 0
    }

    #[inline]
    pub const fn is_subset_of(self, other: SubsetMask) -> bool {
        self.0 & !other.0 == 0
    }

    #[inline]
    pub const fn contains(self, index: usize) -> bool {
        index < MAX_FRAME_SIZE && self.0 & (1 << index) != 0
    }

    /// Complement relative to a frame of size `n`.
    #[inline]
    pub const fn complement(self, n: usize) -> SubsetMask {
        SubsetMask(!self.0 & SubsetMask::full(n).0)
    }

    /// Indices of the hypotheses in the subset, ascending.
    pub fn indices(self) -> impl Iterator<Item = usize> {
        let mut rest = self.0;
        core::iter::from_fn(move || {
            if rest == 0 {
                return None;
            }
            let i = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            Some(i)
        })
    }
}

impl BitAnd for SubsetMask {
    type Output = SubsetMask;

    fn bitand(self, rhs: SubsetMask) -> SubsetMask {
        self.intersection(rhs)
    }
}

impl BitOr for SubsetMask {
    type Output = SubsetMask;

    fn bitor(self, rhs: SubsetMask) -> SubsetMask {
        self.union(rhs)
    }
}

impl fmt::Debug for SubsetMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SubsetMask({:#b})", self.0)
    }
}

/// An ordered, finite set of mutually exclusive hypothesis labels.
///
/// Cloning is cheap; clones share the label storage.
#[derive(Clone)]
pub struct Frame {
    labels: Arc<[String]>,
}

impl Frame {
    pub fn new<I>(labels: I) -> Result<Self>
    where
        I: IntoIterator,
        I::Item: Into<String>,
    {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.is_empty() {
            return Err(Error::EmptyFrame);
        }
        if labels.len() > MAX_FRAME_SIZE {
            return Err(Error::FrameTooLarge(labels.len()));
        }
        for (i, label) in labels.iter().enumerate() {
            if label.is_empty() {
                return Err(Error::EmptyLabel);
            }
            if label == FULL_FRAME_TOKEN || label == EMPTY_SET_TOKEN || label.contains('|') {
                return Err(Error::ReservedLabel(label.clone()));
            }
            if labels[..i].contains(label) {
                return Err(Error::DuplicateLabel(label.clone()));
            }
        }
        Ok(Frame {
            labels: labels.into(),
        })
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    /// Always false; frames hold at least one hypothesis.
    #[inline]
    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, index: usize) -> Option<&str> {
        self.labels.get(index).map(String::as_str)
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// The mask of the whole frame.
    #[inline]
    pub fn full(&self) -> SubsetMask {
        SubsetMask::full(self.len())
    }

    /// Whether `mask` only uses bits of this frame.
    #[inline]
    pub fn contains_mask(&self, mask: SubsetMask) -> bool {
        mask.is_subset_of(self.full())
    }

    pub fn singleton(&self, label: &str) -> Result<SubsetMask> {
        self.index_of(label)
            .map(SubsetMask::singleton)
            .ok_or_else(|| Error::UnknownLabel(label.into()))
    }

    pub fn subset<'a, I>(&self, labels: I) -> Result<SubsetMask>
    where
        I: IntoIterator<Item = &'a str>,
    {
        labels
            .into_iter()
            .try_fold(SubsetMask::EMPTY, |acc, l| Ok(acc | self.singleton(l)?))
    }

    /// Parses `a|b`, `{}` (empty set) or `*` (whole frame).
    pub fn parse_subset(&self, text: &str) -> Result<SubsetMask> {
        let text = text.trim();
        match text {
            EMPTY_SET_TOKEN => Ok(SubsetMask::EMPTY),
            FULL_FRAME_TOKEN => Ok(self.full()),
            _ => self.subset(text.split('|').map(str::trim)),
        }
    }

    /// Labels of the hypotheses in `mask`, in frame order.
    pub fn labels_of(&self, mask: SubsetMask) -> Vec<&str> {
        mask.indices()
            .filter_map(|i| self.label(i))
            .collect()
    }

    /// Canonical text form: labels joined by `|`, `{}` for the empty set.
    pub fn render(&self, mask: SubsetMask) -> String {
        if mask.is_empty() {
            return EMPTY_SET_TOKEN.into();
        }
        self.labels_of(mask).join("|")
    }

    /// Like [`Frame::render`] but writes the whole frame as `*`.
    pub fn render_compact(&self, mask: SubsetMask) -> String {
        if mask == self.full() {
            FULL_FRAME_TOKEN.into()
        } else {
            self.render(mask)
        }
    }
}

impl PartialEq for Frame {
    fn eq(&self, other: &Frame) -> bool {
        Arc::ptr_eq(&self.labels, &other.labels) || self.labels == other.labels
    }
}

impl Eq for Frame {}

impl fmt::Debug for Frame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("Frame").field(&self.labels).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::format;
    use alloc::vec;

    #[test]
    fn construction_keeps_order() {
        let f = Frame::new(["θ1", "θ2", "θ3"]).unwrap();
        assert_eq!(f.len(), 3);
        assert_eq!(f.labels(), &["θ1", "θ2", "θ3"]);
        assert_eq!(f.singleton("θ3").unwrap(), SubsetMask::from_bits(0b100));
    }

    #[test]
    fn construction_errors() {
        assert_eq!(Frame::new(Vec::<String>::new()), Err(Error::EmptyFrame));
        assert_eq!(
            Frame::new(["a", "a"]),
            Err(Error::DuplicateLabel("a".into()))
        );
        assert_eq!(Frame::new(["a", ""]), Err(Error::EmptyLabel));
        assert!(matches!(Frame::new(["a|b"]), Err(Error::ReservedLabel(_))));
        assert!(matches!(Frame::new(["*"]), Err(Error::ReservedLabel(_))));

        let many: Vec<String> = (0..65).map(|i| format!("e{i}")).collect();
        assert_eq!(Frame::new(many), Err(Error::FrameTooLarge(65)));
        let max: Vec<String> = (0..64).map(|i| format!("e{i}")).collect();
        let f = Frame::new(max).unwrap();
        assert_eq!(f.full().bits(), u64::MAX);
    }

    #[test]
    fn subset_text_round_trip() {
        let f = Frame::new(["θ1", "θ2", "θ3"]).unwrap();
        let m = f.parse_subset("θ1|θ3").unwrap();
        assert_eq!(m.bits(), 0b101);
        assert_eq!(f.render(m), "θ1|θ3");
        assert_eq!(f.render(SubsetMask::EMPTY), "{}");
        assert_eq!(f.parse_subset("{}").unwrap(), SubsetMask::EMPTY);
        assert_eq!(f.parse_subset("*").unwrap(), f.full());
        assert_eq!(f.render_compact(f.full()), "*");
        assert_eq!(f.render(f.full()), "θ1|θ2|θ3");
        assert_eq!(
            f.parse_subset("θ1|θ9"),
            Err(Error::UnknownLabel("θ9".into()))
        );
    }

    #[test]
    fn mask_algebra() {
        let a = SubsetMask::from_bits(0b0110);
        let b = SubsetMask::from_bits(0b0011);
        assert_eq!((a & b).bits(), 0b0010);
        assert_eq!((a | b).bits(), 0b0111);
        assert_eq!(a.len(), 2);
        assert!(SubsetMask::from_bits(0b10).is_subset_of(a));
        assert_eq!(a.complement(4).bits(), 0b1001);
        assert_eq!(a.indices().collect::<Vec<_>>(), vec![1, 2]);
        assert!(SubsetMask::singleton(63).is_singleton());
        assert!(!SubsetMask::EMPTY.is_singleton());
    }
}
