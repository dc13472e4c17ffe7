//! Laguerre polynomials and the normalized Laguerre functions that appear in
//! Fock-basis Wigner kernels.

use alloc::vec::Vec;
#[allow(unused_imports)] // unused when another crate in the graph links std
use num_traits::Float;

/// Generalized Laguerre polynomial `L_n^(k)(x)` by the three-term recurrence
///
/// `(m+1) L_{m+1} = (2m + k + 1 - x) L_m - (m + k) L_{m-1}`.
pub fn laguerre(n: usize, k: usize, x: f64) -> f64 {
    let k = k as f64;
    let mut prev = 1.0;
    if n == 0 {
        return prev;
    }
    let mut cur = 1.0 + k - x;
    for m in 1..n {
        let m = m as f64;
        let next = ((2.0 * m + k + 1.0 - x) * cur - (m + k) * prev) / (m + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// `ln(n!)` by direct summation. Exact to a few ulps for the orders used here.
pub fn ln_factorial(n: usize) -> f64 {
    (2..=n).map(|m| (m as f64).ln()).sum()
}

/// Normalized Laguerre function
///
/// `l_n^(k)(u) = sqrt(n! / (n+k)!) * u^(k/2) * exp(-u/2) * L_n^(k)(u)`,
///
/// which is bounded by one in magnitude. It is evaluated by its own
/// recurrence so that neither the polynomial nor the Gaussian factor is ever
/// formed separately; this keeps large orders and large `u` free of overflow.
pub fn laguerre_function(n: usize, k: usize, u: f64) -> f64 {
    let mut out = 0.0;
    LaguerreTable::new(n, k).for_each_order(k, u, n, |m, v| {
        if m == n {
            out = v;
        }
    });
    out
}

/// Precomputed recurrence weights for `l_n^(k)` with `n <= n_max`, `k <= k_max`.
#[derive(Debug, Clone)]
pub struct LaguerreTable {
    n_max: usize,
    k_max: usize,
    // Row k holds 1/sqrt((n+1)(n+k+1)) and sqrt(n(n+k)) for n in 0..n_max.
    forward: Vec<Vec<f64>>,
    backward: Vec<Vec<f64>>,
}

impl LaguerreTable {
    pub fn new(n_max: usize, k_max: usize) -> Self {
        let forward = (0..=k_max)
            .map(|k| {
                (0..n_max)
                    .map(|n| 1.0 / (((n + 1) * (n + k + 1)) as f64).sqrt())
                    .collect()
            })
            .collect();
        let backward = (0..=k_max)
            .map(|k| (0..n_max).map(|n| ((n * (n + k)) as f64).sqrt()).collect())
            .collect();
        Self {
            n_max,
            k_max,
            forward,
            backward,
        }
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn k_max(&self) -> usize {
        self.k_max
    }

    /// Calls `visit(n, l_n^(k)(u))` for `n = 0..=n_last`, starting from the
    /// supplied seed `l_0^(k)(u)`.
    #[inline]
    pub fn run(&self, k: usize, u: f64, seed: f64, n_last: usize, mut visit: impl FnMut(usize, f64)) {
        debug_assert!(k <= self.k_max && n_last <= self.n_max);
        let forward = &self.forward[k];
        let backward = &self.backward[k];
        let kf = k as f64;
        let mut prev = 0.0;
        let mut cur = seed;
        visit(0, cur);
        for n in 0..n_last {
            let next = ((2.0 * n as f64 + kf + 1.0 - u) * cur - backward[n] * prev) * forward[n];
            prev = cur;
            cur = next;
            visit(n + 1, cur);
        }
    }

    fn for_each_order(&self, k: usize, u: f64, n_last: usize, visit: impl FnMut(usize, f64)) {
        let seed = match (k, u) {
            (0, _) => (-0.5 * u).exp(),
            (_, u) if u == 0.0 => 0.0,
            _ => (-0.5 * u + 0.5 * k as f64 * u.ln() - 0.5 * ln_factorial(k)).exp(),
        };
        self.run(k, u, seed, n_last, visit);
    }
}
