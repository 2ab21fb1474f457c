//! Robust breakout detection for univariate time series.
//!
//! A breakout is a lasting shift in level between two steady states. The
//! detectors here split a series in two and maximize a scaled divergence
//! between the halves:
//!
//! * [`edm`] uses medians of windowed pairwise distances kept in counting
//!   trees, so isolated anomalies barely move the statistic;
//! * [`edmx`] is the exact-median variant for `α = 2`, using heap pairs;
//! * [`baseline`] is the classic mean-based E-Divisive scan, kept as the
//!   non-robust comparator.
//!
//! [`sigtest`] wraps any of them in a permutation test, and [`eval`] scores
//! detections and generates labeled synthetic data.
//!
//! ```
//! use breakwatch::{analyze, validate_series, DetectionConfig, Method};
//!
//! let values: Vec<f64> = (0..60)
//!     .map(|i| (i % 7) as f64 * 0.1 + if i < 30 { 0.0 } else { 5.0 })
//!     .collect();
//! let series = validate_series(values).unwrap();
//! let config = DetectionConfig::default().with_delta(5).with_permutations(49);
//! let report = analyze(&series, Method::Edmx, &config).unwrap();
//! assert_eq!(report.tau_hat, Some(30));
//! assert!(report.significant);
//! ```

pub mod baseline;
pub mod config;
pub mod detection;
pub mod distance;
pub mod edm;
pub mod edmx;
pub mod energy;
pub mod error;
pub mod eval;
pub mod interval_tree;
pub mod median;
pub mod median_heap;
pub mod par;
pub mod robust;
pub mod series;
pub mod sigtest;

pub use baseline::{edivisive_detect, smooth, SmootherKind, SmootherSpec};
pub use config::{BetweenSelection, DetectionConfig, Method};
pub use detection::{detect_values, Detection};
pub use edm::edm_detect;
pub use edmx::edmx_detect;
pub use error::{Error, Result};
pub use interval_tree::IntervalTree;
pub use median::MedianSource;
pub use median_heap::MedianHeapPair;
pub use par::Execution;
pub use series::{
    read_csv, read_csv_file, scale_to_unit, validate_series, write_csv, ScaledSeries, TimeSeries,
};
pub use sigtest::{analyze, permutation_test, BreakoutReport, PermutationResult};
