//! Permutation significance test around any of the detectors.
//!
//! The detector runs once on the series and once on each of `R` random
//! rearrangements of its values. The approximate p-value is the share of
//! permuted statistics at least as large as the observed one,
//! `#{r : q^(r) ≥ q} / (R + 1)`, taken literally: with no exceedances it is 0.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::config::{DetectionConfig, Method};
use crate::detection::{check_length, detect_values, Detection};
use crate::error::{Error, Result};
use crate::par::{map_indexed, Execution};
use crate::series::{scale_values, TimeSeries};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PermutationResult {
    pub q_observed: f64,
    pub q_permuted: Vec<f64>,
    pub p_value: f64,
    pub permutations: usize,
    pub seed: u64,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct TestOptions {
    pub execution: Execution,
    /// Stop once enough exceedances have been seen that the result can no
    /// longer be significant. Only allowed for the E-Divisive baseline; the
    /// replicas then run sequentially and `permutations` reports how many
    /// were performed.
    pub early_stop: bool,
}

/// `count / (permutations + 1)`.
pub fn p_value_from(count: usize, permutations: usize) -> f64 {
    count as f64 / (permutations as f64 + 1.0)
}

/// The `r`-th shuffled copy of `values`. Each replica has its own ChaCha
/// stream, so replicas can be produced in any order.
pub fn permuted(values: &[f64], seed: u64, replica: usize) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(replica as u64);
    let mut out = values.to_vec();
    out.shuffle(&mut rng);
    out
}

pub fn permutation_test(
    series: &TimeSeries,
    method: Method,
    config: &DetectionConfig,
) -> Result<PermutationResult> {
    permutation_test_with(series, method, config, TestOptions::default())
}

pub fn permutation_test_with(
    series: &TimeSeries,
    method: Method,
    config: &DetectionConfig,
    options: TestOptions,
) -> Result<PermutationResult> {
    run(series.values(), method, config, options).map(|(_, result)| result)
}

fn run(
    values: &[f64],
    method: Method,
    config: &DetectionConfig,
    options: TestOptions,
) -> Result<(Detection, PermutationResult)> {
    check_length(values.len(), config)?;
    if options.early_stop && method != Method::Edivisive {
        return Err(Error::InvalidConfig(
            "early stopping is only available for the edivisive baseline".into(),
        ));
    }
    let observed = detect_values(method, values, config)?;
    let q = observed.statistic;
    let seed = config.rng_seed;
    let replica = |r: usize| -> Result<f64> {
        Ok(detect_values(method, &permuted(values, seed, r), config)?.statistic)
    };

    let q_permuted: Vec<f64> = if scale_values(values).degenerate {
        // Every rearrangement of a constant series is the same series.
        vec![observed.statistic; config.permutations]
    } else if options.early_stop {
        let stop_at = (config.significance_level * (config.permutations as f64 + 1.0)).ceil();
        let mut out = Vec::with_capacity(config.permutations);
        let mut count = 0usize;
        for r in 0..config.permutations {
            let qr = replica(r)?;
            out.push(qr);
            count += usize::from(qr >= q);
            if count as f64 >= stop_at {
                break;
            }
        }
        out
    } else {
        map_indexed(config.permutations, options.execution, replica)
            .into_iter()
            .collect::<Result<_>>()?
    };

    let count = q_permuted.iter().filter(|&&qr| qr >= q).count();
    let result = PermutationResult {
        q_observed: q,
        p_value: p_value_from(count, q_permuted.len()),
        permutations: q_permuted.len(),
        q_permuted,
        seed,
    };
    Ok((observed, result))
}

/// Detection plus significance verdict, the unit every front end reports.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BreakoutReport {
    pub method: Method,
    /// Last index of the pre-change segment, 1-based. Absent for a constant
    /// series, which has no breakout to locate.
    pub tau_hat: Option<usize>,
    pub kappa_hat: Option<usize>,
    pub statistic: f64,
    pub p_value: f64,
    pub significant: bool,
    pub significance_level: f64,
    pub permutations: usize,
    pub seed: u64,
}

impl BreakoutReport {
    /// The breakout estimate if the test rejected, otherwise `None`.
    pub fn detected(&self) -> Option<usize> {
        self.tau_hat.filter(|_| self.significant)
    }
}

/// Detects the most likely breakout and tests it.
pub fn analyze(
    series: &TimeSeries,
    method: Method,
    config: &DetectionConfig,
) -> Result<BreakoutReport> {
    analyze_with(series, method, config, TestOptions::default())
}

pub fn analyze_with(
    series: &TimeSeries,
    method: Method,
    config: &DetectionConfig,
    options: TestOptions,
) -> Result<BreakoutReport> {
    let values = series.values();
    let (detection, test) = run(values, method, config, options)?;
    let located = !scale_values(values).degenerate;
    Ok(BreakoutReport {
        method,
        tau_hat: located.then_some(detection.tau),
        kappa_hat: located.then_some(detection.kappa),
        statistic: detection.statistic,
        p_value: test.p_value,
        significant: test.p_value < config.significance_level,
        significance_level: config.significance_level,
        permutations: test.permutations,
        seed: test.seed,
    })
}
