//! Frames of discernment and the subset algebra over their power set.
//!
//! A [`Frame`] fixes an ordering of its elements; element `i` is bit `i` of a
//! [`Subset`] mask. All set operations are plain bitwise operations, so the
//! Boolean-lattice laws hold exactly.

use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported frame cardinality.
pub const MAX_FRAME_SIZE: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<String>", into = "Vec<String>")]
pub struct Frame {
    labels: Vec<String>,
}

impl Frame {
    /// Input order defines bit positions.
    pub fn new<I, S>(labels: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.is_empty() {
            return Err(Error::EmptyFrame);
        }
        if labels.len() > MAX_FRAME_SIZE {
            return Err(Error::FrameTooLarge(labels.len()));
        }
        let mut seen = HashSet::with_capacity(labels.len());
        for label in &labels {
            if label.is_empty() {
                return Err(Error::EmptyLabel);
            }
            if !seen.insert(label.as_str()) {
                return Err(Error::DuplicateLabel(label.clone()));
            }
        }
        Ok(Frame { labels })
    }

    /// Convenience for the common case of building a shared frame.
    pub fn shared<I, S>(labels: I) -> Result<Arc<Self>>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Self::new(labels).map(Arc::new)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
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

    /// Number of subsets, `2^N`.
    pub fn power_set_size(&self) -> usize {
        1usize << self.len()
    }

    pub fn empty(&self) -> Subset {
        Subset::EMPTY
    }

    pub fn full(&self) -> Subset {
        Subset((1u32 << self.len()) - 1)
    }

    pub fn singleton(&self, index: usize) -> Result<Subset> {
        if index >= self.len() {
            return Err(Error::ElementOutOfRange {
                index,
                size: self.len(),
            });
        }
        Ok(Subset(1 << index))
    }

    pub fn singletons(&self) -> impl Iterator<Item = Subset> + '_ {
        (0..self.len()).map(|i| Subset(1 << i))
    }

    pub fn complement(&self, subset: Subset) -> Subset {
        Subset(!subset.0 & self.full().0)
    }

    pub fn contains(&self, subset: Subset) -> bool {
        subset.0 <= self.full().0
    }

    pub fn check(&self, subset: Subset) -> Result<Subset> {
        if self.contains(subset) {
            Ok(subset)
        } else {
            Err(Error::SubsetOutOfFrame {
                bits: subset.0,
                size: self.len(),
            })
        }
    }

    /// Every subset of the frame, `∅` first and `Θ` last.
    pub fn subsets(&self) -> impl Iterator<Item = Subset> {
        (0..=self.full().0).map(Subset)
    }

    /// Every subset except `∅`.
    pub fn nonempty_subsets(&self) -> impl Iterator<Item = Subset> {
        (1..=self.full().0).map(Subset)
    }

    pub fn subset_from_labels<I, S>(&self, labels: I) -> Result<Subset>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        labels.into_iter().try_fold(Subset::EMPTY, |acc, label| {
            let label = label.as_ref();
            self.index_of(label)
                .map(|i| acc.union(Subset(1 << i)))
                .ok_or_else(|| Error::UnknownLabel(label.to_string()))
        })
    }

    /// Labels of the subset's members in frame order.
    pub fn subset_labels(&self, subset: Subset) -> Vec<String> {
        subset.elements().filter_map(|i| self.label(i)).map(str::to_string).collect()
    }

    /// Human-readable name, e.g. `∅`, `A`, `A∪B`.
    pub fn subset_name(&self, subset: Subset) -> String {
        if subset.is_empty() {
            return "∅".to_string();
        }
        self.subset_labels(subset).join("∪")
    }
}

impl TryFrom<Vec<String>> for Frame {
    type Error = Error;

    fn try_from(labels: Vec<String>) -> Result<Self> {
        Frame::new(labels)
    }
}

impl From<Frame> for Vec<String> {
    fn from(frame: Frame) -> Self {
        frame.labels
    }
}

/// A subset of a frame as a bitmask; bit `i` set means element `i` belongs to it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
pub struct Subset(u32);

impl Subset {
    pub const EMPTY: Subset = Subset(0);

    pub const fn from_bits(bits: u32) -> Self {
        Subset(bits)
    }

    pub const fn bits(self) -> u32 {
        self.0
    }

    pub const fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub const fn intersect(self, other: Subset) -> Subset {
        Subset(self.0 & other.0)
    }

    pub const fn union(self, other: Subset) -> Subset {
        Subset(self.0 | other.0)
    }

    pub const fn is_subset_of(self, other: Subset) -> bool {
        self.0 & !other.0 == 0
    }

    pub const fn intersects(self, other: Subset) -> bool {
        self.0 & other.0 != 0
    }

    pub const fn cardinality(self) -> u32 {
        self.0.count_ones()
    }

    pub const fn is_singleton(self) -> bool {
        self.0.count_ones() == 1
    }

    pub const fn contains_element(self, index: usize) -> bool {
        index < 32 && self.0 & (1 << index) != 0
    }

    /// Indices of member elements in increasing order.
    pub fn elements(self) -> impl Iterator<Item = usize> {
        (0..32).filter(move |i| self.0 & (1 << i) != 0)
    }
}

impl fmt::Display for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (n, i) in self.elements().enumerate() {
            if n > 0 {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, "}}")
    }
}
