use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which δ observations of the left segment are paired with the head of the
/// right segment when forming between-segment distances.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BetweenSelection {
    /// First δ of the left segment.
    Head,
    /// Last δ of the left segment.
    #[default]
    Tail,
}

impl FromStr for BetweenSelection {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "head" => Ok(Self::Head),
            "tail" => Ok(Self::Tail),
            other => Err(Error::InvalidConfig(format!(
                "unknown between selection {other:?} (expected head or tail)"
            ))),
        }
    }
}

impl fmt::Display for BetweenSelection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Head => "head",
            Self::Tail => "tail",
        })
    }
}

/// Detector choice.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    /// Windowed distance medians maintained in interval trees.
    Edm,
    /// Exact segment medians maintained in heap pairs (α = 2).
    Edmx,
    /// Mean-based energy statistic, exhaustive search.
    Edivisive,
}

impl Method {
    pub const ALL: [Method; 3] = [Method::Edm, Method::Edmx, Method::Edivisive];

    pub fn name(self) -> &'static str {
        match self {
            Self::Edm => "edm",
            Self::Edmx => "edmx",
            Self::Edivisive => "edivisive",
        }
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "edm" => Ok(Self::Edm),
            "edmx" => Ok(Self::Edmx),
            "edivisive" => Ok(Self::Edivisive),
            other => Err(Error::InvalidConfig(format!(
                "unknown method {other:?} (expected edm, edmx or edivisive)"
            ))),
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Parameters shared by every detector and the permutation test.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DetectionConfig {
    /// Distance exponent, in (0, 2].
    pub alpha: f64,
    /// Minimum segment size and distance-window width.
    pub delta: usize,
    /// Interval-tree depth (2^D leaves).
    pub tree_depth: u32,
    pub between_selection: BetweenSelection,
    /// Number of random permutations R.
    pub permutations: usize,
    pub significance_level: f64,
    pub rng_seed: u64,
}

impl Default for DetectionConfig {
    fn default() -> Self {
        Self {
            alpha: 2.0,
            delta: 24,
            tree_depth: 10,
            between_selection: BetweenSelection::Tail,
            permutations: 199,
            significance_level: 0.05,
            rng_seed: 0,
        }
    }
}

/// Deepest tree we allow; at 2^24 leaves the counters already take 128 MiB.
pub const MAX_TREE_DEPTH: u32 = 24;

impl DetectionConfig {
    pub fn validate(&self) -> Result<()> {
        check_alpha(self.alpha)?;
        if self.delta < 2 {
            return Err(Error::InvalidConfig(format!(
                "delta must be at least 2, got {}",
                self.delta
            )));
        }
        if self.tree_depth == 0 || self.tree_depth > MAX_TREE_DEPTH {
            return Err(Error::InvalidConfig(format!(
                "tree depth must be in [1, {MAX_TREE_DEPTH}], got {}",
                self.tree_depth
            )));
        }
        if !(self.significance_level > 0.0 && self.significance_level < 1.0) {
            return Err(Error::InvalidConfig(format!(
                "significance level must be in (0, 1), got {}",
                self.significance_level
            )));
        }
        Ok(())
    }

    pub fn with_delta(mut self, delta: usize) -> Self {
        self.delta = delta;
        self
    }

    pub fn with_permutations(mut self, permutations: usize) -> Self {
        self.permutations = permutations;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.rng_seed = seed;
        self
    }

    pub fn with_between(mut self, between: BetweenSelection) -> Self {
        self.between_selection = between;
        self
    }
}

pub(crate) fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha <= 2.0 {
        Ok(())
    } else {
        Err(Error::InvalidAlpha(alpha))
    }
}
