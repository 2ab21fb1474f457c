//! Pairwise distance kernels `|a - b|^α` and the blocked row sums the
//! mean-based statistics are built from.

/// `|a - b|^α`, with the common exponents special-cased.
///
/// Every code path that stores or compares distances goes through this one
/// function so that incremental and from-scratch evaluations agree bitwise.
#[inline]
pub fn pow_distance(a: f64, b: f64, alpha: f64) -> f64 {
    let d = (a - b).abs();
    if alpha == 2.0 {
        d * d
    } else if alpha == 1.0 {
        d
    } else {
        d.powf(alpha)
    }
}

/// `n·m / (n + m)`, the sample-size prefactor of the scaled statistics.
#[inline]
pub fn size_factor(n: usize, m: usize) -> f64 {
    let (n, m) = (n as f64, m as f64);
    n * m / (n + m)
}

pub(crate) trait Kernel: Copy + Send + Sync {
    fn dist(self, a: f64, b: f64) -> f64;
}

#[derive(Clone, Copy)]
pub(crate) struct Squared;

#[derive(Clone, Copy)]
pub(crate) struct Absolute;

#[derive(Clone, Copy)]
pub(crate) struct Power(pub f64);

impl Kernel for Squared {
    #[inline(always)]
    fn dist(self, a: f64, b: f64) -> f64 {
        let d = a - b;
        d * d
    }
}

impl Kernel for Absolute {
    #[inline(always)]
    fn dist(self, a: f64, b: f64) -> f64 {
        (a - b).abs()
    }
}

impl Kernel for Power {
    #[inline(always)]
    fn dist(self, a: f64, b: f64) -> f64 {
        (a - b).abs().powf(self.0)
    }
}

/// Calls `$body` with `$k` bound to the kernel matching `$alpha`.
macro_rules! with_kernel {
    ($alpha:expr, |$k:ident| $body:expr) => {{
        let alpha: f64 = $alpha;
        if alpha == 2.0 {
            let $k = $crate::distance::Squared;
            $body
        } else if alpha == 1.0 {
            let $k = $crate::distance::Absolute;
            $body
        } else {
            let $k = $crate::distance::Power(alpha);
            $body
        }
    }};
}
pub(crate) use with_kernel;

/// `Σ_j k(x, ys[j])` using eight independent accumulators.
#[inline]
pub(crate) fn row_sum<K: Kernel>(k: K, x: f64, ys: &[f64]) -> f64 {
    let mut acc = [0.0f64; 8];
    let chunks = ys.chunks_exact(8);
    let rest = chunks.remainder();
    for c in chunks {
        for lane in 0..8 {
            acc[lane] += k.dist(x, c[lane]);
        }
    }
    let mut s = ((acc[0] + acc[1]) + (acc[2] + acc[3])) + ((acc[4] + acc[5]) + (acc[6] + acc[7]));
    for &y in rest {
        s += k.dist(x, y);
    }
    s
}

/// Compensated (Neumaier) accumulator for combining row sums.
#[derive(Clone, Copy, Debug, Default)]
pub(crate) struct Neumaier {
    sum: f64,
    carry: f64,
}

impl Neumaier {
    #[inline]
    pub(crate) fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub(crate) fn total(self) -> f64 {
        self.sum + self.carry
    }
}
