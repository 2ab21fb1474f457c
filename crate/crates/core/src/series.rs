//! Validated time series, the unit-interval scaling used by every detector,
//! and CSV ingestion.

use std::io::Read;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Ordered, finite observations `Z_1..Z_n` with optional timestamps and labels.
///
/// Label sets hold 1-based indices. Timestamps are carried for output only;
/// detectors treat the observations as equally spaced.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TimeSeries {
    values: Vec<f64>,
    timestamps: Option<Vec<i64>>,
    true_breakouts: Vec<usize>,
    anomaly_labels: Vec<usize>,
}

impl TimeSeries {
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    /// Always false for a validated series; present for API symmetry.
    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn timestamps(&self) -> Option<&[i64]> {
        self.timestamps.as_deref()
    }

    pub fn true_breakouts(&self) -> &[usize] {
        &self.true_breakouts
    }

    pub fn anomaly_labels(&self) -> &[usize] {
        &self.anomaly_labels
    }

    pub fn with_timestamps(mut self, timestamps: Vec<i64>) -> Result<Self> {
        if timestamps.len() != self.values.len() {
            return Err(Error::TimestampLengthMismatch {
                timestamps: timestamps.len(),
                values: self.values.len(),
            });
        }
        if let Some(i) = timestamps.windows(2).position(|w| w[1] <= w[0]) {
            return Err(Error::TimestampsNotIncreasing { index: i + 2 });
        }
        self.timestamps = Some(timestamps);
        Ok(self)
    }

    pub fn with_true_breakouts(mut self, indices: Vec<usize>) -> Result<Self> {
        self.true_breakouts = self.checked_labels(indices)?;
        Ok(self)
    }

    pub fn with_anomaly_labels(mut self, indices: Vec<usize>) -> Result<Self> {
        self.anomaly_labels = self.checked_labels(indices)?;
        Ok(self)
    }

    /// Replace the observations while keeping timestamps and labels.
    pub fn map_values(&self, values: Vec<f64>) -> Result<Self> {
        let mut mapped = validate_series(values)?;
        if mapped.len() != self.len() {
            return Err(Error::InvalidConfig(format!(
                "mapped series has length {} instead of {}",
                mapped.len(),
                self.len()
            )));
        }
        mapped.timestamps = self.timestamps.clone();
        mapped.true_breakouts = self.true_breakouts.clone();
        mapped.anomaly_labels = self.anomaly_labels.clone();
        Ok(mapped)
    }

    fn checked_labels(&self, mut indices: Vec<usize>) -> Result<Vec<usize>> {
        let n = self.values.len();
        if let Some(&bad) = indices.iter().find(|&&i| i == 0 || i > n) {
            return Err(Error::LabelOutOfRange { index: bad, n });
        }
        indices.sort_unstable();
        indices.dedup();
        Ok(indices)
    }
}

/// Checks that `raw` is non-empty and finite.
pub fn validate_series(raw: Vec<f64>) -> Result<TimeSeries> {
    if raw.is_empty() {
        return Err(Error::EmptySeries);
    }
    if let Some(i) = raw.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFiniteValue { index: i + 1 });
    }
    Ok(TimeSeries {
        values: raw,
        timestamps: None,
        true_breakouts: Vec::new(),
        anomaly_labels: Vec::new(),
    })
}

/// Observations mapped onto `[0, 1]` by `f(x) = (x - min) / (max - min)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ScaledSeries {
    pub values: Vec<f64>,
    pub scale_min: f64,
    pub scale_max: f64,
    /// Set when every observation is equal; all values are then 0.5.
    pub degenerate: bool,
}

impl ScaledSeries {
    /// Maps a unit-interval value back onto the original scale.
    pub fn invert(&self, x: f64) -> f64 {
        x * (self.scale_max - self.scale_min) + self.scale_min
    }
}

pub fn scale_to_unit(series: &TimeSeries) -> ScaledSeries {
    scale_values(series.values())
}

/// Unit scaling for a raw slice. Assumes finite, non-empty input.
pub(crate) fn scale_values(values: &[f64]) -> ScaledSeries {
    let (lo, hi) = values
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
            (lo.min(v), hi.max(v))
        });
    if hi == lo {
        return ScaledSeries {
            values: vec![0.5; values.len()],
            scale_min: lo,
            scale_max: hi,
            degenerate: true,
        };
    }
    let range = hi - lo;
    let values = values
        .iter()
        .map(|&v| ((v - lo) / range).clamp(0.0, 1.0))
        .collect();
    ScaledSeries {
        values,
        scale_min: lo,
        scale_max: hi,
        degenerate: false,
    }
}

/// Reads one value per row, an optional header, and an optional second
/// column of integer timestamps. Row numbers in errors are 1-based lines.
pub fn read_csv<R: Read>(reader: R) -> Result<TimeSeries> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(reader);

    let mut values = Vec::new();
    let mut timestamps: Vec<i64> = Vec::new();
    let mut with_timestamps: Option<bool> = None;

    for (i, record) in rdr.records().enumerate() {
        let row = i + 1;
        let record = record.map_err(|e| Error::Parse {
            row,
            message: e.to_string(),
        })?;
        let Some(first) = record.get(0).filter(|f| !f.is_empty()) else {
            return Err(Error::Parse {
                row,
                message: "missing value".into(),
            });
        };
        let value = match first.parse::<f64>() {
            Ok(v) => v,
            Err(_) if row == 1 => continue,
            Err(e) => {
                return Err(Error::Parse {
                    row,
                    message: format!("{first:?}: {e}"),
                })
            }
        };
        if !value.is_finite() {
            return Err(Error::Parse {
                row,
                message: format!("non-finite value {first:?}"),
            });
        }
        let ts = record.get(1).filter(|f| !f.is_empty());
        match (with_timestamps, ts) {
            (None, _) => with_timestamps = Some(ts.is_some()),
            (Some(expected), ts) if expected != ts.is_some() => {
                return Err(Error::Parse {
                    row,
                    message: "inconsistent timestamp column".into(),
                })
            }
            _ => {}
        }
        if let Some(ts) = ts {
            let t = ts.parse::<i64>().map_err(|e| Error::Parse {
                row,
                message: format!("timestamp {ts:?}: {e}"),
            })?;
            timestamps.push(t);
        }
        values.push(value);
    }

    let series = validate_series(values)?;
    if with_timestamps == Some(true) {
        series.with_timestamps(timestamps)
    } else {
        Ok(series)
    }
}

pub fn read_csv_file(path: impl AsRef<Path>) -> Result<TimeSeries> {
    let file = std::fs::File::open(path)?;
    read_csv(std::io::BufReader::new(file))
}

/// Writes a single `value` column (plus `timestamp` when present).
pub fn write_csv<W: std::io::Write>(series: &TimeSeries, writer: W) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(writer);
    let to_io = |e: csv::Error| Error::Io(e.into());
    match series.timestamps() {
        Some(ts) => {
            wtr.write_record(["value", "timestamp"]).map_err(to_io)?;
            for (v, t) in series.values().iter().zip(ts) {
                wtr.write_record([v.to_string(), t.to_string()])
                    .map_err(to_io)?;
            }
        }
        None => {
            wtr.write_record(["value"]).map_err(to_io)?;
            for v in series.values() {
                wtr.write_record([v.to_string()]).map_err(to_io)?;
            }
        }
    }
    wtr.flush()?;
    Ok(())
}
