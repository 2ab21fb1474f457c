//! Non-robust comparators: single-breakout E-Divisive on the mean-based
//! statistic, and centered rolling smoothers.

use serde::{Deserialize, Serialize};

use crate::config::check_alpha;
use crate::detection::{Best, Detection};
use crate::distance::{row_sum, size_factor, with_kernel, Kernel};
use crate::error::{Error, Result};
use crate::median::median_by_sort;
use crate::series::{scale_values, TimeSeries};

/// Exhaustive argmax of `Q̂` over `δ ≤ τ`, `τ + δ ≤ κ ≤ n`.
pub fn edivisive_detect(series: &TimeSeries, alpha: f64, delta: usize) -> Result<Detection> {
    edivisive_values(series.values(), alpha, delta)
}

/// E-Divisive on raw observations (scaled to the unit interval first, which
/// leaves the argmax unchanged).
///
/// For each `τ` the right segment grows one observation at a time and the
/// three distance sums are updated with one `O(n)` pass per new point, so a
/// full scan costs `O(n³)` kernel evaluations and `O(n)` memory.
pub fn edivisive_values(values: &[f64], alpha: f64, delta: usize) -> Result<Detection> {
    check_alpha(alpha)?;
    if delta < 2 {
        return Err(Error::InvalidConfig(format!(
            "delta must be at least 2, got {delta}"
        )));
    }
    let n = values.len();
    if n < 2 * delta {
        return Err(Error::SeriesTooShort {
            n,
            required: 2 * delta,
        });
    }
    let z = scale_values(values).values;
    Ok(with_kernel!(alpha, |k| scan(k, &z, delta)))
}

fn scan<K: Kernel>(k: K, z: &[f64], delta: usize) -> Detection {
    let n = z.len();
    let mut best = Best::new();
    let mut within_a = 0.0;
    for t in 1..delta - 1 {
        within_a += row_sum(k, z[t], &z[..t]);
    }
    for tau in delta..=n - delta {
        within_a += row_sum(k, z[tau - 1], &z[..tau - 1]);
        let (left, rest) = z.split_at(tau);
        let (mut between, mut within_b) = (0.0, 0.0);
        for (j, &x) in rest.iter().enumerate() {
            between += row_sum(k, x, left);
            within_b += row_sum(k, x, &rest[..j]);
            let m = j + 1;
            if m < delta {
                continue;
            }
            let (nf, mf) = (tau as f64, m as f64);
            let e = 2.0 * between / (nf * mf)
                - within_a / (nf * (nf - 1.0) / 2.0)
                - within_b / (mf * (mf - 1.0) / 2.0);
            best.offer(tau, tau + m, size_factor(tau, m) * e);
        }
    }
    best.detection()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SmootherKind {
    RollingMean,
    RollingMedian,
}

/// Centered rolling smoother; `window` must be odd and at least 3.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SmootherSpec {
    pub kind: SmootherKind,
    pub window: usize,
}

impl SmootherSpec {
    pub fn new(kind: SmootherKind, window: usize) -> Result<Self> {
        if window < 3 || window.is_multiple_of(2) {
            return Err(Error::InvalidWindow(window));
        }
        Ok(Self { kind, window })
    }
}

/// Replaces each observation by the mean or median of its neighborhood.
///
/// Near the ends the neighborhood shrinks symmetrically to what is
/// available, so the first and last points are left as they are and the
/// output keeps the input's length, timestamps and labels.
pub fn smooth(series: &TimeSeries, spec: SmootherSpec) -> Result<TimeSeries> {
    let spec = SmootherSpec::new(spec.kind, spec.window)?;
    let v = series.values();
    let n = v.len();
    if spec.window > n {
        return Err(Error::WindowTooLarge {
            window: spec.window,
            n,
        });
    }
    let half = spec.window / 2;
    let out = (0..n)
        .map(|i| {
            let h = half.min(i).min(n - 1 - i);
            let win = &v[i - h..=i + h];
            match spec.kind {
                SmootherKind::RollingMean => win.iter().sum::<f64>() / win.len() as f64,
                SmootherKind::RollingMedian => median_by_sort(win).expect("window is non-empty"),
            }
        })
        .collect();
    series.map_values(out)
}
