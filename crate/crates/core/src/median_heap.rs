//! Exact running median from a max-heap of the lower half and a min-heap of
//! the upper half. Add-only.

use std::cmp::{Ordering, Reverse};
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

/// `f64` ordered by `total_cmp`, so it can live in a `BinaryHeap`.
#[derive(Clone, Copy, Debug)]
struct Total(f64);

impl PartialEq for Total {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Total {}

impl PartialOrd for Total {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Total {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0)
    }
}

/// Invariants: `max(lower) <= min(upper)` and `lower.len()` is either
/// `upper.len()` or `upper.len() + 1`.
#[derive(Clone, Debug, Default)]
pub struct MedianHeapPair {
    lower: BinaryHeap<Total>,
    upper: BinaryHeap<Reverse<Total>>,
}

impl MedianHeapPair {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_capacity(n: usize) -> Self {
        Self {
            lower: BinaryHeap::with_capacity(n / 2 + 1),
            upper: BinaryHeap::with_capacity(n / 2 + 1),
        }
    }

    pub fn len(&self) -> usize {
        self.lower.len() + self.upper.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lower.is_empty()
    }

    pub fn clear(&mut self) {
        self.lower.clear();
        self.upper.clear();
    }

    pub fn add(&mut self, x: f64) {
        match self.lower.peek() {
            Some(top) if x > top.0 => self.upper.push(Reverse(Total(x))),
            _ => self.lower.push(Total(x)),
        }
        if self.lower.len() > self.upper.len() + 1 {
            let moved = self.lower.pop().expect("lower is non-empty");
            self.upper.push(Reverse(moved));
        } else if self.upper.len() > self.lower.len() {
            let Reverse(moved) = self.upper.pop().expect("upper is non-empty");
            self.lower.push(moved);
        }
    }

    /// Middle element for odd sizes, mean of the two middle elements for
    /// even sizes.
    pub fn median(&self) -> Result<f64> {
        let lo = self.lower.peek().ok_or(Error::EmptyHeap)?.0;
        if self.lower.len() > self.upper.len() {
            Ok(lo)
        } else {
            let Reverse(hi) = self.upper.peek().expect("balanced halves");
            Ok((lo + hi.0) / 2.0)
        }
    }

    /// Checks the ordering, balance and heap-shape invariants.
    pub fn audit(&self) -> bool {
        let lower = self.lower.as_slice();
        let upper = self.upper.as_slice();
        let heap_ok = |n: usize, dominates: &dyn Fn(usize, usize) -> bool| {
            (1..n).all(|i| dominates((i - 1) / 2, i))
        };
        let lower_ok = heap_ok(lower.len(), &|p, c| lower[p] >= lower[c]);
        let upper_ok = heap_ok(upper.len(), &|p, c| upper[p].0 <= upper[c].0);
        let split_ok = match (self.lower.peek(), self.upper.peek()) {
            (Some(lo), Some(Reverse(hi))) => lo <= hi,
            _ => true,
        };
        let balance_ok =
            self.lower.len() == self.upper.len() || self.lower.len() == self.upper.len() + 1;
        lower_ok && upper_ok && split_ok && balance_ok
    }
}
