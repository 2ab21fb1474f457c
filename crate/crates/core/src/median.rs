//! Multisets that answer median queries under insertion and removal.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interval_tree::IntervalTree;

/// A multiset of distances supporting the updates the windowed statistics need.
pub trait MedianCounter {
    fn insert(&mut self, x: f64) -> Result<()>;
    fn remove(&mut self, x: f64) -> Result<()>;
    fn median(&self) -> Result<f64>;
    fn len(&self) -> usize;
    fn clear(&mut self);

    fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Where medians come from: exact order statistics, or the approximate
/// interval-tree descent at the given depth (values must lie in `[0, 1]`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MedianSource {
    Exact,
    Tree { depth: u32 },
}

impl MedianCounter for IntervalTree {
    fn insert(&mut self, x: f64) -> Result<()> {
        IntervalTree::insert(self, x)
    }

    fn remove(&mut self, x: f64) -> Result<()> {
        IntervalTree::remove(self, x)
    }

    fn median(&self) -> Result<f64> {
        self.approximate_median()
    }

    fn len(&self) -> usize {
        self.total()
    }

    fn clear(&mut self) {
        IntervalTree::clear(self)
    }
}

/// Exact multiset kept as a sorted vector. Updates cost a memmove, which is
/// fine for the window sizes used as a reference path.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SortedMultiset {
    items: Vec<f64>,
}

impl SortedMultiset {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.items
    }

    fn position(&self, x: f64) -> usize {
        self.items.partition_point(|v| v.total_cmp(&x).is_lt())
    }
}

impl MedianCounter for SortedMultiset {
    fn insert(&mut self, x: f64) -> Result<()> {
        let at = self.position(x);
        self.items.insert(at, x);
        Ok(())
    }

    fn remove(&mut self, x: f64) -> Result<()> {
        let at = self.position(x);
        match self.items.get(at) {
            Some(v) if v.total_cmp(&x).is_eq() => {
                self.items.remove(at);
                Ok(())
            }
            _ => Err(Error::Underflow(x)),
        }
    }

    fn median(&self) -> Result<f64> {
        median_of_sorted(&self.items).ok_or(Error::EmptyMultiset)
    }

    fn len(&self) -> usize {
        self.items.len()
    }

    fn clear(&mut self) {
        self.items.clear()
    }
}

/// Median of an ascending slice; even lengths average the two middle values.
pub fn median_of_sorted(sorted: &[f64]) -> Option<f64> {
    let n = sorted.len();
    match n {
        0 => None,
        _ if n % 2 == 1 => Some(sorted[n / 2]),
        _ => Some((sorted[n / 2 - 1] + sorted[n / 2]) / 2.0),
    }
}

/// Median by sorting a copy.
pub fn median_by_sort(values: &[f64]) -> Option<f64> {
    let mut v = values.to_vec();
    v.sort_unstable_by(f64::total_cmp);
    median_of_sorted(&v)
}
