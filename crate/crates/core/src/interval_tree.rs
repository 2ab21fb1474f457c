//! Counting binary tree over `[0, 1]` with `2^D` equal-width leaves.
//!
//! Leaf `i` (1-based) covers `[(i-1)/2^D, i/2^D)`; the last leaf is closed
//! at 1. Each node stores how many inserted values fall in its interval, so
//! inserts and removals touch `D + 1` counters and an approximate median is
//! found by a single root-to-leaf descent.
//!
//! Descent for the `K = ⌈total/2⌉`-th value: at each internal node compare
//! the left child's count `a` with `K`.
//!
//! * `a > K`: go left.
//! * `a == K` and the right child is non-empty: the `K`-th and `(K+1)`-th
//!   values straddle the split; return `(a·x + b·y)/(a + b)` where `b` is the
//!   right child's count and `x`, `y` are the children's midpoints.
//! * `a == K` and the right child is empty: go left (the weighted average
//!   would collapse to the left midpoint; descending refines it).
//! * `a < K`: subtract `a` from `K` and go right.
//!
//! Reaching a leaf returns its midpoint.

use crate::error::{Error, Result};

/// How an approximate-median query terminated.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum MedianQuery {
    /// Descent reached a leaf; the `K`-th smallest value lies in `[lo, hi]`.
    Leaf { value: f64, lo: f64, hi: f64 },
    /// The weighted children-midpoint rule fired at an internal node.
    Split { value: f64 },
}

impl MedianQuery {
    pub fn value(self) -> f64 {
        match self {
            Self::Leaf { value, .. } | Self::Split { value } => value,
        }
    }
}

#[derive(Clone, Debug)]
pub struct IntervalTree {
    depth: u32,
    /// Node 1 is the root; node `i` has children `2i` and `2i + 1`; leaves
    /// occupy `[2^D, 2^(D+1))`. Slot 0 is unused.
    counts: Vec<u32>,
}

impl IntervalTree {
    pub fn new(depth: u32) -> Result<Self> {
        if depth == 0 || depth > crate::config::MAX_TREE_DEPTH {
            return Err(Error::InvalidConfig(format!(
                "tree depth must be in [1, {}], got {depth}",
                crate::config::MAX_TREE_DEPTH
            )));
        }
        Ok(Self {
            depth,
            counts: vec![0; 1 << (depth + 1)],
        })
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn leaves(&self) -> usize {
        1 << self.depth
    }

    pub fn total(&self) -> usize {
        self.counts[1] as usize
    }

    /// Count of 1-based leaf `i`.
    pub fn leaf_count(&self, i: usize) -> u32 {
        self.counts[self.leaves() + i - 1]
    }

    /// Count stored at flat node index `node` (root = 1).
    pub fn node_count(&self, node: usize) -> u32 {
        self.counts[node]
    }

    fn leaf_node(&self, x: f64) -> Result<usize> {
        if !(0.0..=1.0).contains(&x) {
            return Err(Error::OutOfRange(x));
        }
        let leaves = self.leaves();
        let i = ((x * leaves as f64) as usize).min(leaves - 1);
        Ok(leaves + i)
    }

    pub fn insert(&mut self, x: f64) -> Result<()> {
        let mut node = self.leaf_node(x)?;
        while node > 0 {
            self.counts[node] += 1;
            node >>= 1;
        }
        Ok(())
    }

    pub fn remove(&mut self, x: f64) -> Result<()> {
        let mut node = self.leaf_node(x)?;
        if self.counts[node] == 0 {
            return Err(Error::Underflow(x));
        }
        while node > 0 {
            self.counts[node] -= 1;
            node >>= 1;
        }
        Ok(())
    }

    pub fn clear(&mut self) {
        self.counts.fill(0);
    }

    pub fn approximate_median(&self) -> Result<f64> {
        self.median_query().map(MedianQuery::value)
    }

    pub fn median_query(&self) -> Result<MedianQuery> {
        let total = self.counts[1];
        if total == 0 {
            return Err(Error::EmptyTree);
        }
        let mut k = total.div_ceil(2);
        let mut node = 1usize;
        let mut level = 0u32;
        let leaves = self.leaves();
        while node < leaves {
            let left = 2 * node;
            let a = self.counts[left];
            let b = self.counts[left + 1];
            if a == k && b > 0 {
                let x = self.midpoint(left, level + 1);
                let y = self.midpoint(left + 1, level + 1);
                let (a, b) = (a as f64, b as f64);
                return Ok(MedianQuery::Split {
                    value: (a * x + b * y) / (a + b),
                });
            }
            if a >= k {
                node = left;
            } else {
                k -= a;
                node = left + 1;
            }
            level += 1;
        }
        let (lo, hi) = self.bounds(node, level);
        Ok(MedianQuery::Leaf {
            value: 0.5 * (lo + hi),
            lo,
            hi,
        })
    }

    fn bounds(&self, node: usize, level: u32) -> (f64, f64) {
        let width = 1.0 / (1u64 << level) as f64;
        let offset = node - (1usize << level);
        (offset as f64 * width, (offset + 1) as f64 * width)
    }

    fn midpoint(&self, node: usize, level: u32) -> f64 {
        let (lo, hi) = self.bounds(node, level);
        0.5 * (lo + hi)
    }

    /// True when every internal count equals the sum of its children.
    pub fn is_consistent(&self) -> bool {
        (1..self.leaves()).all(|i| self.counts[i] == self.counts[2 * i] + self.counts[2 * i + 1])
    }
}
