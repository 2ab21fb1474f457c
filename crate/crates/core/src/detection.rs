use serde::{Deserialize, Serialize};

use crate::baseline;
use crate::config::{DetectionConfig, Method};
use crate::edm;
use crate::edmx;
use crate::error::{Error, Result};
use crate::median::MedianSource;

/// Argmax of a detector's statistic over the feasible `(τ, κ)` grid.
///
/// `tau` is the size of the left segment `Z_1..Z_τ` (so the breakout is
/// reported at the last pre-change observation) and `kappa` is the last
/// index of the right segment `Z_{τ+1}..Z_κ`. Both are 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Detection {
    pub tau: usize,
    pub kappa: usize,
    pub statistic: f64,
}

/// Running maximum with ties going to the smallest `τ`, then smallest `κ`.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Best {
    tau: usize,
    kappa: usize,
    q: f64,
}

impl Best {
    pub(crate) fn new() -> Self {
        Self {
            tau: usize::MAX,
            kappa: usize::MAX,
            q: f64::NEG_INFINITY,
        }
    }

    #[inline]
    pub(crate) fn offer(&mut self, tau: usize, kappa: usize, q: f64) {
        if q > self.q || (q == self.q && (tau, kappa) < (self.tau, self.kappa)) {
            *self = Self { tau, kappa, q };
        }
    }

    pub(crate) fn detection(&self) -> Detection {
        Detection {
            tau: self.tau,
            kappa: self.kappa,
            statistic: self.q,
        }
    }
}

/// Checks `n ≥ 2δ` and the configuration.
pub(crate) fn check_length(n: usize, config: &DetectionConfig) -> Result<()> {
    config.validate()?;
    let required = 2 * config.delta;
    if n < required {
        return Err(Error::SeriesTooShort { n, required });
    }
    Ok(())
}

/// Result reported for a constant series: the first feasible cell, statistic 0.
pub(crate) fn degenerate(config: &DetectionConfig) -> Detection {
    Detection {
        tau: config.delta,
        kappa: 2 * config.delta,
        statistic: 0.0,
    }
}

/// Runs `method` on raw observations.
pub fn detect_values(
    method: Method,
    values: &[f64],
    config: &DetectionConfig,
) -> Result<Detection> {
    match method {
        Method::Edm => edm::detect_values(
            values,
            config,
            MedianSource::Tree {
                depth: config.tree_depth,
            },
        ),
        Method::Edmx => edmx::detect_values(values, config),
        Method::Edivisive => baseline::edivisive_values(values, config.alpha, config.delta),
    }
}
