//! Independent oracles shared by the integration tests. Nothing here calls
//! into the grid or field code paths under test.
#![allow(dead_code)]

use std::f64::consts::PI;

/// Composite Simpson rule on `[a, b]` with `n` (even) panels.
pub fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    assert!(n % 2 == 0);
    let h = (b - a) / n as f64;
    let mut acc = f(a) + f(b);
    for k in 1..n {
        let w = if k % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * f(a + k as f64 * h);
    }
    acc * h / 3.0
}

/// Laguerre polynomial by explicit power series `sum_j (-1)^j C(n, j) x^j / j!`.
pub fn laguerre_series(n: usize, x: f64) -> f64 {
    let mut term = 1.0;
    let mut sum = 1.0;
    for j in 0..n {
        // term_{j+1} = term_j * (-(n - j) x) / ((j + 1)^2)
        term *= -((n - j) as f64) * x / (((j + 1) * (j + 1)) as f64);
        sum += term;
    }
    sum
}

/// `sum_j |term_j|` of the series above, bounding its rounding error.
pub fn laguerre_series_magnitude(n: usize, x: f64) -> f64 {
    let mut term = 1.0f64;
    let mut sum = 1.0;
    for j in 0..n {
        term *= ((n - j) as f64) * x.abs() / (((j + 1) * (j + 1)) as f64);
        sum += term;
    }
    sum
}

/// Radially symmetric Fock Wigner function from the power series.
pub fn fock_radial(n: usize, r: f64) -> f64 {
    let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
    sign / PI * laguerre_series(n, 2.0 * r * r) * (-r * r).exp()
}

/// `2 pi int_0^R r W(r) dr` by Simpson.
pub fn radial_mass(w: impl Fn(f64) -> f64, r_max: f64) -> f64 {
    2.0 * PI * simpson(|r| r * w(r), 0.0, r_max, 20_000)
}

/// Negativity volume of a radially symmetric function by Simpson over `[0, R]`.
pub fn radial_negativity(w: impl Fn(f64) -> f64, r_max: f64) -> f64 {
    2.0 * PI * simpson(|r| r * (-w(r)).max(0.0), 0.0, r_max, 400_000)
}

/// Independent Fock |1> negativity oracle: the region W < 0 is r < 1/sqrt(2).
pub fn fock1_negativity_oracle() -> f64 {
    let edge = 0.5f64.sqrt();
    -2.0 * PI * simpson(|r| r * fock_radial(1, r), 0.0, edge, 2_000)
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

pub fn max_abs(a: &[f64]) -> f64 {
    a.iter().fold(0.0, |m, v| m.max(v.abs()))
}
