//! Sample energy statistics.
//!
//! `e_hat` is the U-statistic estimator of the energy distance between two
//! samples, `2·mean|x−y|^α − mean_{i<j}|x_i−x_j|^α − mean_{i<j}|y_i−y_j|^α`,
//! and `q_hat` rescales it by `n·m/(n+m)`. Finite-sample values may be
//! negative and are returned unclamped.

use std::cmp::Ordering;

use crate::config::check_alpha;
use crate::distance::{row_sum, size_factor, with_kernel, Kernel, Neumaier};
use crate::error::{Error, Result};

/// Ê together with the sizes it was computed from.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SampleDivergence {
    pub e_hat: f64,
    pub q_hat: f64,
    pub n: usize,
    pub m: usize,
    pub alpha: f64,
}

pub fn divergence(x: &[f64], y: &[f64], alpha: f64) -> Result<SampleDivergence> {
    let e = e_hat(x, y, alpha)?;
    Ok(SampleDivergence {
        e_hat: e,
        q_hat: size_factor(x.len(), y.len()) * e,
        n: x.len(),
        m: y.len(),
        alpha,
    })
}

pub fn e_hat(x: &[f64], y: &[f64], alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    for s in [x, y] {
        if s.len() < 2 {
            return Err(Error::SampleTooSmall { len: s.len() });
        }
    }
    Ok(with_kernel!(alpha, |k| e_hat_with(k, x, y)))
}

pub fn q_hat(x: &[f64], y: &[f64], alpha: f64) -> Result<f64> {
    Ok(size_factor(x.len(), y.len()) * e_hat(x, y, alpha)?)
}

fn e_hat_with<K: Kernel>(k: K, x: &[f64], y: &[f64]) -> f64 {
    let (n, m) = (x.len() as f64, y.len() as f64);
    // Iterate the between sum in a canonical orientation so that swapping
    // the arguments reproduces the same floating-point result.
    let between = if canonical_order(x, y) == Ordering::Greater {
        between_sum(k, y, x)
    } else {
        between_sum(k, x, y)
    };
    let within_x = within_sum(k, x) / (n * (n - 1.0) / 2.0);
    let within_y = within_sum(k, y) / (m * (m - 1.0) / 2.0);
    2.0 * between / (n * m) - (within_x + within_y)
}

fn canonical_order(x: &[f64], y: &[f64]) -> Ordering {
    x.len().cmp(&y.len()).then_with(|| {
        x.iter()
            .zip(y)
            .map(|(a, b)| a.total_cmp(b))
            .find(|o| o.is_ne())
            .unwrap_or(Ordering::Equal)
    })
}

fn between_sum<K: Kernel>(k: K, rows: &[f64], cols: &[f64]) -> f64 {
    let mut acc = Neumaier::default();
    for &a in rows {
        acc.add(row_sum(k, a, cols));
    }
    acc.total()
}

pub(crate) fn within_sum<K: Kernel>(k: K, xs: &[f64]) -> f64 {
    let mut acc = Neumaier::default();
    for (i, &a) in xs.iter().enumerate() {
        acc.add(row_sum(k, a, &xs[i + 1..]));
    }
    acc.total()
}
