//! E-Divisive with Exact Medians, the α = 2 special case.
//!
//! With α = 2 the divergence reduces to a location difference, and the
//! robust statistic becomes
//! `Q̃ = τ(κ−τ)/κ · 2·[median(A_τ) − median(B_τ(κ))]²`,
//! which needs only the medians of the observations themselves. Both are
//! kept exactly with [`MedianHeapPair`]s: the left pair grows with `τ`, and
//! the right pair is rebuilt for every `τ` by successive additions as `κ`
//! runs from `τ + δ` to `n`. Work is `O(n² log n)` and extra memory `O(n)`.

use crate::config::DetectionConfig;
use crate::detection::{check_length, degenerate, Best, Detection};
use crate::distance::size_factor;
use crate::error::Result;
use crate::median_heap::MedianHeapPair;
use crate::series::{scale_values, TimeSeries};

/// `2·(a − b)²`.
#[inline]
pub fn median_divergence(median_a: f64, median_b: f64) -> f64 {
    let d = median_a - median_b;
    2.0 * d * d
}

pub fn edmx_detect(series: &TimeSeries, config: &DetectionConfig) -> Result<Detection> {
    detect_values(series.values(), config)
}

/// EDM-X on raw observations. `config.alpha` is ignored (always 2) and
/// `config.delta` acts only as the minimum segment size.
pub fn detect_values(values: &[f64], config: &DetectionConfig) -> Result<Detection> {
    check_length(values.len(), config)?;
    let scaled = scale_values(values);
    if scaled.degenerate {
        return Ok(degenerate(config));
    }
    Ok(sweep(&scaled.values, config.delta))
}

fn sweep(z: &[f64], delta: usize) -> Detection {
    let n = z.len();
    let mut left = MedianHeapPair::with_capacity(n);
    let mut right = MedianHeapPair::with_capacity(n);
    let mut best = Best::new();

    for &x in &z[..delta - 1] {
        left.add(x);
    }
    for tau in delta..=n - delta {
        left.add(z[tau - 1]);
        let med_a = left.median().expect("left segment is non-empty");

        right.clear();
        for &x in &z[tau..tau + delta - 1] {
            right.add(x);
        }
        for kappa in tau + delta..=n {
            right.add(z[kappa - 1]);
            let med_b = right.median().expect("right segment is non-empty");
            let q = size_factor(tau, kappa - tau) * median_divergence(med_a, med_b);
            best.offer(tau, kappa, q);
        }
    }
    best.detection()
}
