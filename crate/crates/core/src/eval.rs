//! Scoring detections against labeled truth, and a seeded generator of
//! piecewise-constant series with injected anomalies.

use std::fs;
use std::path::{Path, PathBuf};

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::{read_csv_file, validate_series, write_csv, TimeSeries};

pub const DEFAULT_MATCH_WINDOW: usize = 10;

/// Time to detect: observations between a true breakout and its estimate,
/// in either direction. `None` when there is no estimate.
pub fn ttd(true_breakout: usize, estimate: Option<usize>) -> Option<usize> {
    estimate.map(|e| e.abs_diff(true_breakout))
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct EvalOutcome {
    /// TTD of the earliest truth to its nearest detection.
    pub ttd: Option<usize>,
    pub tp: usize,
    pub fp: usize,
    #[serde(rename = "fn")]
    pub fn_: usize,
    pub precision: f64,
    pub recall: f64,
    pub f_measure: f64,
}

impl EvalOutcome {
    /// Metrics from raw counts. A ratio with a zero denominator is 0.
    pub fn from_counts(tp: usize, fp: usize, fn_: usize) -> Self {
        let ratio = |a: usize, b: usize| {
            if a + b > 0 {
                a as f64 / (a + b) as f64
            } else {
                0.0
            }
        };
        let precision = ratio(tp, fp);
        let recall = ratio(tp, fn_);
        Self {
            ttd: None,
            tp,
            fp,
            fn_,
            precision,
            recall,
            f_measure: f_measure(precision, recall),
        }
    }

    /// Pools counts over several series. The pooled outcome carries no TTD.
    pub fn pooled<'a>(outcomes: impl IntoIterator<Item = &'a EvalOutcome>) -> Self {
        let (tp, fp, fn_) = outcomes
            .into_iter()
            .fold((0, 0, 0), |(a, b, c), o| (a + o.tp, b + o.fp, c + o.fn_));
        Self::from_counts(tp, fp, fn_)
    }
}

/// `2PR / (P + R)`, or 0 when both are 0.
pub fn f_measure(precision: f64, recall: f64) -> f64 {
    if precision + recall > 0.0 {
        2.0 * precision * recall / (precision + recall)
    } else {
        0.0
    }
}

/// Matches detections to truths, nearest pairs first, each side used at most
/// once and only within `window` observations. Unmatched detections are false
/// positives and unmatched truths are misses. Callers pass significant
/// detections only.
pub fn score(detections: &[usize], truths: &[usize], window: usize) -> EvalOutcome {
    let mut pairs: Vec<(usize, usize, usize)> = Vec::new();
    for (ti, &t) in truths.iter().enumerate() {
        for (di, &d) in detections.iter().enumerate() {
            let gap = d.abs_diff(t);
            if gap <= window {
                pairs.push((gap, ti, di));
            }
        }
    }
    // Ties broken by position values, not input order, so that shuffling
    // the detections cannot change the result.
    pairs.sort_unstable_by_key(|&(gap, ti, di)| (gap, truths[ti], detections[di], ti, di));
    let mut truth_used = vec![false; truths.len()];
    let mut det_used = vec![false; detections.len()];
    let mut tp = 0;
    for (_, ti, di) in pairs {
        if !truth_used[ti] && !det_used[di] {
            truth_used[ti] = true;
            det_used[di] = true;
            tp += 1;
        }
    }
    let mut out = EvalOutcome::from_counts(tp, detections.len() - tp, truths.len() - tp);
    out.ttd = truths
        .iter()
        .min()
        .and_then(|&t| detections.iter().map(|&d| d.abs_diff(t)).min());
    out
}

/// Recipe for a synthetic piecewise-constant series.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SynthSpec {
    pub segment_lengths: Vec<usize>,
    pub segment_means: Vec<f64>,
    pub noise_sd: f64,
    pub anomaly_count: usize,
    /// In multiples of the largest jump between consecutive segment means
    /// (or of 1 when there is a single level).
    pub anomaly_magnitude: f64,
    pub seed: u64,
}

impl SynthSpec {
    pub fn len(&self) -> usize {
        self.segment_lengths.iter().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidSpec(m));
        if self.segment_lengths.is_empty() {
            return bad("at least one segment is required".into());
        }
        if self.segment_lengths.len() != self.segment_means.len() {
            return bad(format!(
                "{} segment lengths but {} means",
                self.segment_lengths.len(),
                self.segment_means.len()
            ));
        }
        if self.segment_lengths.contains(&0) {
            return bad("segment lengths must be positive".into());
        }
        if self.segment_means.iter().any(|m| !m.is_finite()) {
            return bad("segment means must be finite".into());
        }
        if !(self.noise_sd.is_finite() && self.noise_sd >= 0.0) {
            return bad(format!(
                "noise sd must be finite and non-negative, got {}",
                self.noise_sd
            ));
        }
        if !self.anomaly_magnitude.is_finite() {
            return bad("anomaly magnitude must be finite".into());
        }
        if self.anomaly_count >= self.len() {
            return bad(format!(
                "{} anomalies do not fit in a series of length {}",
                self.anomaly_count,
                self.len()
            ));
        }
        Ok(())
    }

    /// Largest absolute jump between consecutive means, or 1 for one level.
    pub fn shift_unit(&self) -> f64 {
        let max = self
            .segment_means
            .windows(2)
            .map(|w| (w[1] - w[0]).abs())
            .fold(0.0, f64::max);
        if max > 0.0 {
            max
        } else {
            1.0
        }
    }
}

/// Builds the series described by `spec`, with true breakouts at the last
/// index of every segment but the final one and anomaly positions labeled.
pub fn synthesize(spec: &SynthSpec) -> Result<TimeSeries> {
    spec.validate()?;
    let n = spec.len();
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let noise = Normal::new(0.0, spec.noise_sd).map_err(|e| Error::InvalidSpec(e.to_string()))?;

    let mut means = Vec::with_capacity(n);
    let mut breakouts = Vec::new();
    for (&len, &mean) in spec.segment_lengths.iter().zip(&spec.segment_means) {
        means.extend(std::iter::repeat_n(mean, len));
        breakouts.push(means.len());
    }
    breakouts.pop();

    let mut values: Vec<f64> = means.iter().map(|&m| m + noise.sample(&mut rng)).collect();
    let mut anomalies = index::sample(&mut rng, n, spec.anomaly_count).into_vec();
    anomalies.sort_unstable();
    let offset = spec.anomaly_magnitude * spec.shift_unit();
    for &i in &anomalies {
        let sign = if rng.random_bool(0.5) { 1.0 } else { -1.0 };
        values[i] = means[i] + sign * offset;
    }

    validate_series(values)?
        .with_true_breakouts(breakouts)?
        .with_anomaly_labels(anomalies.into_iter().map(|i| i + 1).collect())
}

/// Sidecar contents stored next to each series CSV.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Labels {
    pub true_breakouts: Vec<usize>,
    pub anomaly_labels: Vec<usize>,
}

/// Writes `<dir>/<name>.csv` and its `<dir>/<name>.json` labels.
pub fn write_labeled(dir: &Path, name: &str, series: &TimeSeries) -> Result<(PathBuf, PathBuf)> {
    fs::create_dir_all(dir)?;
    let csv_path = dir.join(format!("{name}.csv"));
    let json_path = dir.join(format!("{name}.json"));
    write_csv(series, fs::File::create(&csv_path)?)?;
    let labels = Labels {
        true_breakouts: series.true_breakouts().to_vec(),
        anomaly_labels: series.anomaly_labels().to_vec(),
    };
    let mut json = serde_json::to_string_pretty(&labels).map_err(std::io::Error::from)?;
    json.push('\n');
    fs::write(&json_path, json)?;
    Ok((csv_path, json_path))
}

/// Reads a series CSV together with its sidecar labels.
pub fn read_labeled(csv_path: &Path) -> Result<TimeSeries> {
    let json_path = csv_path.with_extension("json");
    let malformed = |message: String| Error::MalformedLabels {
        file: json_path.display().to_string(),
        message,
    };
    let text = fs::read_to_string(&json_path).map_err(|e| malformed(e.to_string()))?;
    let labels: Labels = serde_json::from_str(&text).map_err(|e| malformed(e.to_string()))?;
    read_csv_file(csv_path)?
        .with_true_breakouts(labels.true_breakouts)
        .and_then(|s| s.with_anomaly_labels(labels.anomaly_labels))
        .map_err(|e| malformed(e.to_string()))
}

/// All labeled series in `dir`, ordered by file name.
pub fn read_dataset(dir: &Path) -> Result<Vec<(String, TimeSeries)>> {
    let mut paths: Vec<PathBuf> = fs::read_dir(dir)?
        .map(|entry| entry.map(|e| e.path()))
        .collect::<std::io::Result<_>>()?;
    paths.retain(|p| p.extension().is_some_and(|e| e == "csv"));
    paths.sort();
    if paths.is_empty() {
        return Err(Error::MalformedLabels {
            file: dir.display().to_string(),
            message: "directory contains no labeled series".into(),
        });
    }
    paths
        .iter()
        .map(|p| {
            let name = p
                .file_stem()
                .unwrap_or_default()
                .to_string_lossy()
                .into_owned();
            Ok((name, read_labeled(p)?))
        })
        .collect()
}
