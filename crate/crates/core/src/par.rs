//! Data-parallel execution of independent jobs with a sequential fallback.
//!
//! With the `parallel` feature (on by default) [`Execution::Parallel`] fans
//! jobs out over the rayon pool; without it every request runs sequentially.
//! Results always come back in index order, so aggregation never depends on
//! completion order.

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Execution {
    Sequential,
    Parallel,
}

impl Default for Execution {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Execution::Parallel
        } else {
            Execution::Sequential
        }
    }
}

/// `(0..count).map(f)`, possibly in parallel, collected in index order.
pub fn map_indexed<T, F>(count: usize, execution: Execution, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    match execution {
        #[cfg(feature = "parallel")]
        Execution::Parallel => {
            use rayon::prelude::*;
            (0..count).into_par_iter().map(f).collect()
        }
        _ => (0..count).map(f).collect(),
    }
}

/// Caps the global worker pool. Only the first call has an effect; later
/// calls (or any call once the pool is running) return `false`.
pub fn configure_threads(threads: usize) -> bool {
    #[cfg(feature = "parallel")]
    {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .is_ok()
    }
    #[cfg(not(feature = "parallel"))]
    {
        let _ = threads;
        false
    }
}
