//! E-Divisive with Medians.
//!
//! Maximizes `Q̃(A_τ, B_τ(κ))` over `δ ≤ τ`, `τ + δ ≤ κ ≤ n`, where
//! `A_τ = Z_1..Z_τ`, `B_τ(κ) = Z_{τ+1}..Z_κ`, and `Q̃` is the windowed
//! robust statistic from [`crate::robust`] evaluated on unit-scaled data.
//!
//! The three distance multisets are held in [`MedianCounter`]s and updated
//! incrementally. For a fixed `τ` only the within-B multiset depends on `κ`,
//! and moving `κ` by one adds or removes a single consecutive distance. The
//! grid is swept boustrophedon style: `κ` runs forward to `n` for one `τ`,
//! back down to `τ + δ` for the next, and so on, so that the within-B state
//! carries over from one row of the grid to the next.

use crate::config::{BetweenSelection, DetectionConfig};
use crate::detection::{check_length, degenerate, Best, Detection};
use crate::distance::{pow_distance, size_factor};
use crate::error::Result;
use crate::interval_tree::IntervalTree;
use crate::median::{MedianCounter, MedianSource, SortedMultiset};
use crate::robust::{combine, RobustDivergenceSpec};
use crate::series::{scale_values, TimeSeries};

/// Incremental sweep state over the `(τ, κ)` grid.
#[derive(Clone, Debug)]
pub struct EdmState<'a, C> {
    z: &'a [f64],
    alpha: f64,
    delta: usize,
    between_selection: BetweenSelection,
    tau: usize,
    kappa: usize,
    within_a: C,
    within_b: C,
    between: C,
    med_a: f64,
    med_between: f64,
    best: Best,
}

impl<'a> EdmState<'a, IntervalTree> {
    /// State backed by interval trees of the given depth. Values must lie in `[0, 1]`.
    pub fn with_trees(z: &'a [f64], spec: &RobustDivergenceSpec, depth: u32) -> Result<Self> {
        Self::new(z, spec, || IntervalTree::new(depth))
    }
}

impl<'a> EdmState<'a, SortedMultiset> {
    /// State backed by exact sorted multisets.
    pub fn exact(z: &'a [f64], spec: &RobustDivergenceSpec) -> Result<Self> {
        Self::new(z, spec, || Ok(SortedMultiset::new()))
    }
}

impl<'a, C: MedianCounter> EdmState<'a, C> {
    /// Builds the windows for `τ = δ`, `κ = 2δ` and evaluates that cell.
    pub fn new(
        z: &'a [f64],
        spec: &RobustDivergenceSpec,
        mut make: impl FnMut() -> Result<C>,
    ) -> Result<Self> {
        spec.validate()?;
        let delta = spec.delta;
        let n = z.len();
        if n < 2 * delta {
            return Err(crate::error::Error::SeriesTooShort {
                n,
                required: 2 * delta,
            });
        }
        let alpha = spec.alpha;
        let mut within_a = make()?;
        let mut within_b = make()?;
        let mut between = make()?;
        for i in 0..delta {
            for j in i + 1..delta {
                within_a.insert(pow_distance(z[i], z[j], alpha))?;
                within_b.insert(pow_distance(z[delta + i], z[delta + j], alpha))?;
            }
        }
        // At τ = δ head and tail select the same left window.
        for i in 0..delta {
            for j in delta..2 * delta {
                between.insert(pow_distance(z[i], z[j], alpha))?;
            }
        }
        let mut state = Self {
            z,
            alpha,
            delta,
            between_selection: spec.between_selection,
            tau: delta,
            kappa: 2 * delta,
            med_a: within_a.median()?,
            med_between: between.median()?,
            within_a,
            within_b,
            between,
            best: Best::new(),
        };
        state.evaluate()?;
        Ok(state)
    }

    pub fn tau(&self) -> usize {
        self.tau
    }

    pub fn kappa(&self) -> usize {
        self.kappa
    }

    pub fn within_a(&self) -> &C {
        &self.within_a
    }

    pub fn within_b(&self) -> &C {
        &self.within_b
    }

    pub fn between(&self) -> &C {
        &self.between
    }

    /// Best cell visited so far.
    pub fn best(&self) -> Detection {
        self.best.detection()
    }

    #[inline]
    fn d(&self, i: usize, j: usize) -> f64 {
        pow_distance(self.z[i], self.z[j], self.alpha)
    }

    #[inline]
    fn evaluate(&mut self) -> Result<()> {
        let med_b = self.within_b.median()?;
        let q = size_factor(self.tau, self.kappa - self.tau)
            * combine(self.med_between, self.med_a, med_b);
        self.best.offer(self.tau, self.kappa, q);
        Ok(())
    }

    /// Appends `Z_{κ+1}` to the right segment without evaluating.
    fn push_kappa(&mut self) -> Result<()> {
        let d = self.d(self.kappa - 1, self.kappa);
        self.within_b.insert(d)?;
        self.kappa += 1;
        Ok(())
    }

    /// Advances `κ` one step at a time up to `to_kappa ≤ n`, evaluating
    /// each cell.
    pub fn forward_update(&mut self, to_kappa: usize) -> Result<()> {
        debug_assert!(to_kappa <= self.z.len());
        while self.kappa < to_kappa {
            self.push_kappa()?;
            self.evaluate()?;
        }
        Ok(())
    }

    /// Retreats `κ` one step at a time down to `to_kappa ≥ τ + δ`,
    /// evaluating each cell.
    pub fn backward_update(&mut self, to_kappa: usize) -> Result<()> {
        debug_assert!(to_kappa >= self.tau + self.delta);
        while self.kappa > to_kappa {
            let d = self.d(self.kappa - 2, self.kappa - 1);
            self.within_b.remove(d)?;
            self.kappa -= 1;
            self.evaluate()?;
        }
        Ok(())
    }

    /// Moves `Z_{τ+1}` from the right segment to the left one and evaluates
    /// the new cell. Requires `κ ≥ τ + 1 + δ`.
    pub fn advance_tau(&mut self) -> Result<()> {
        let (t, delta) = (self.tau, self.delta);
        debug_assert!(self.kappa > t + delta);

        // Left segment gains the consecutive pair (Z_τ, Z_{τ+1}).
        let d = self.d(t - 1, t);
        self.within_a.insert(d)?;

        // Right segment's leading window slides from [t, t+δ) to [t+1, t+δ+1).
        // The pair (t+δ-1, t+δ) was a consecutive pair and stays.
        for j in t + 1..t + delta {
            let d = self.d(t, j);
            self.within_b.remove(d)?;
        }
        for i in t + 1..t + delta - 1 {
            let d = self.d(i, t + delta);
            self.within_b.insert(d)?;
        }

        match self.between_selection {
            BetweenSelection::Tail => {
                // [t-δ, t) x [t, t+δ)  ->  [t-δ+1, t] x [t+1, t+δ]
                for j in t..t + delta {
                    let d = self.d(t - delta, j);
                    self.between.remove(d)?;
                }
                for i in t + 1 - delta..t {
                    let d = self.d(i, t);
                    self.between.remove(d)?;
                }
                for j in t + 1..=t + delta {
                    let d = self.d(t, j);
                    self.between.insert(d)?;
                }
                for i in t + 1 - delta..t {
                    let d = self.d(i, t + delta);
                    self.between.insert(d)?;
                }
            }
            BetweenSelection::Head => {
                for i in 0..delta {
                    let d = self.d(i, t);
                    self.between.remove(d)?;
                    let d = self.d(i, t + delta);
                    self.between.insert(d)?;
                }
            }
        }

        self.tau += 1;
        self.med_a = self.within_a.median()?;
        self.med_between = self.between.median()?;
        self.evaluate()
    }

    /// Visits every remaining cell of the grid.
    pub fn sweep(&mut self) -> Result<Detection> {
        let n = self.z.len();
        let delta = self.delta;
        self.forward_update(n)?;
        let mut backward = true;
        for tau in self.tau + 1..=n - delta {
            if self.kappa < tau + delta {
                self.push_kappa()?;
            }
            self.advance_tau()?;
            if backward {
                self.backward_update(tau + delta)?;
            } else {
                self.forward_update(n)?;
            }
            backward = !backward;
        }
        Ok(self.best())
    }
}

pub fn edm_detect(series: &TimeSeries, config: &DetectionConfig) -> Result<Detection> {
    detect_values(
        series.values(),
        config,
        MedianSource::Tree {
            depth: config.tree_depth,
        },
    )
}

/// EDM on raw observations with an explicit median source.
pub fn detect_values(
    values: &[f64],
    config: &DetectionConfig,
    source: MedianSource,
) -> Result<Detection> {
    check_length(values.len(), config)?;
    let scaled = scale_values(values);
    if scaled.degenerate {
        return Ok(degenerate(config));
    }
    let spec = RobustDivergenceSpec::new(config.alpha, config.delta, config.between_selection)?;
    match source {
        MedianSource::Exact => EdmState::exact(&scaled.values, &spec)?.sweep(),
        MedianSource::Tree { depth } => EdmState::with_trees(&scaled.values, &spec, depth)?.sweep(),
    }
}
