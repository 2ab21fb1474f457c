//! Median-based robust divergence.
//!
//! `Ẽ = 2·m_XY − m_XX − m_YY`, where each `m` is the median of a multiset of
//! `|·|^α` distances. The exact form uses every pair. The windowed form,
//! which the EDM detector maintains incrementally, uses
//!
//! * within a segment: all pairs among its first δ points, plus every
//!   consecutive pair along the rest of the segment;
//! * between segments: δ × δ pairs, the right segment's first δ points
//!   against either the left segment's first δ (head) or last δ (tail).

use crate::config::{check_alpha, BetweenSelection};
use crate::distance::{pow_distance, size_factor};
use crate::error::{Error, Result};
use crate::interval_tree::IntervalTree;
use crate::median::{median_by_sort, MedianSource};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RobustDivergenceSpec {
    pub alpha: f64,
    pub delta: usize,
    pub between_selection: BetweenSelection,
}

impl RobustDivergenceSpec {
    pub fn new(alpha: f64, delta: usize, between_selection: BetweenSelection) -> Result<Self> {
        let spec = Self {
            alpha,
            delta,
            between_selection,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        check_alpha(self.alpha)?;
        if self.delta < 2 {
            return Err(Error::InvalidConfig(format!(
                "delta must be at least 2, got {}",
                self.delta
            )));
        }
        Ok(())
    }
}

/// The three distance multisets the windowed statistic takes medians of.
#[derive(Clone, Debug, PartialEq)]
pub struct DistanceWindows {
    pub within_a: Vec<f64>,
    pub within_b: Vec<f64>,
    pub between: Vec<f64>,
}

impl DistanceWindows {
    pub fn build(a: &[f64], b: &[f64], spec: &RobustDivergenceSpec) -> Result<Self> {
        spec.validate()?;
        let delta = spec.delta;
        for seg in [a, b] {
            if seg.len() < delta {
                return Err(Error::SegmentTooShort {
                    len: seg.len(),
                    delta,
                });
            }
        }
        let alpha = spec.alpha;
        let left_window = match spec.between_selection {
            BetweenSelection::Head => &a[..delta],
            BetweenSelection::Tail => &a[a.len() - delta..],
        };
        let between = left_window
            .iter()
            .flat_map(|&x| b[..delta].iter().map(move |&y| pow_distance(x, y, alpha)))
            .collect();
        Ok(Self {
            within_a: within_window(a, delta, alpha),
            within_b: within_window(b, delta, alpha),
            between,
        })
    }
}

/// Leading δ(δ−1)/2 pairs plus the consecutive pairs beyond them.
pub(crate) fn within_window(seg: &[f64], delta: usize, alpha: f64) -> Vec<f64> {
    let lead = delta.min(seg.len());
    let mut out = Vec::with_capacity(lead * lead.saturating_sub(1) / 2 + seg.len());
    for i in 0..lead {
        for j in i + 1..lead {
            out.push(pow_distance(seg[i], seg[j], alpha));
        }
    }
    for k in lead.max(1)..seg.len() {
        out.push(pow_distance(seg[k - 1], seg[k], alpha));
    }
    out
}

#[inline]
pub(crate) fn combine(between: f64, within_a: f64, within_b: f64) -> f64 {
    2.0 * between - within_a - within_b
}

/// Ẽ over all pairwise distances, with exact medians.
pub fn e_tilde_exact(x: &[f64], y: &[f64], alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    for s in [x, y] {
        if s.len() < 2 {
            return Err(Error::SampleTooSmall { len: s.len() });
        }
    }
    let all_pairs = |s: &[f64]| -> Vec<f64> {
        let mut out = Vec::with_capacity(s.len() * (s.len() - 1) / 2);
        for i in 0..s.len() {
            for j in i + 1..s.len() {
                out.push(pow_distance(s[i], s[j], alpha));
            }
        }
        out
    };
    let between: Vec<f64> = x
        .iter()
        .flat_map(|&a| y.iter().map(move |&b| pow_distance(a, b, alpha)))
        .collect();
    let med = |v: &[f64]| median_by_sort(v).expect("non-empty distance set");
    Ok(combine(
        med(&between),
        med(&all_pairs(x)),
        med(&all_pairs(y)),
    ))
}

/// Windowed Ẽ for segments `a` (left) and `b` (right).
pub fn e_tilde_windowed(
    a: &[f64],
    b: &[f64],
    spec: &RobustDivergenceSpec,
    source: MedianSource,
) -> Result<f64> {
    let w = DistanceWindows::build(a, b, spec)?;
    let med = |v: &[f64]| -> Result<f64> {
        match source {
            MedianSource::Exact => median_by_sort(v).ok_or(Error::EmptyMultiset),
            MedianSource::Tree { depth } => {
                let mut tree = IntervalTree::new(depth)?;
                for &d in v {
                    tree.insert(d)?;
                }
                tree.approximate_median()
            }
        }
    };
    Ok(combine(
        med(&w.between)?,
        med(&w.within_a)?,
        med(&w.within_b)?,
    ))
}

/// `Q̃ = n·m/(n+m) · Ẽ` with `n = |a|`, `m = |b|`.
pub fn q_tilde(
    a: &[f64],
    b: &[f64],
    spec: &RobustDivergenceSpec,
    source: MedianSource,
) -> Result<f64> {
    Ok(size_factor(a.len(), b.len()) * e_tilde_windowed(a, b, spec, source)?)
}
