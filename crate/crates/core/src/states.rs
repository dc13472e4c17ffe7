//! Wigner functions of the state families: vacuum, coherent, Fock, even
//! Schrödinger cat, Kerr "banana" states and arbitrary Fock superpositions.
//!
//! Convention: the vacuum is `W(x, y) = exp(-x^2 - y^2) / pi`, so each
//! quadrature has variance 1/2 and a coherent state `|alpha>` with real
//! `alpha` is centered at `x = sqrt(2) alpha`.

use alloc::vec::Vec;
use core::f64::consts::{FRAC_1_PI, SQRT_2};

use num_complex::Complex64;
#[allow(unused_imports)] // unused when another crate in the graph links std
use num_traits::Float;

use crate::error::{Error, Result};
use crate::phase_space::{PhaseFunction, PhaseGrid, WignerField};
use crate::special::{laguerre_function, ln_factorial, LaguerreTable};

/// Largest Fock order the Laguerre recurrence is trusted for.
pub const MAX_FOCK_ORDER: usize = 200;
/// Largest coherent amplitude accepted for Fock-expanded states.
pub const MAX_EXPANSION_ALPHA: f64 = 8.0;

const NORM_TOLERANCE: f64 = 1e-9;
// Products c_m c_n below this (relative to the largest) are dropped; the
// Laguerre functions are bounded by one, so they cannot reach double precision.
const NEGLIGIBLE: f64 = 1e-18;

/// Symbolic description of a single-mode pure state.
#[derive(Debug, Clone, PartialEq)]
pub enum StateSpec {
    Vacuum,
    /// Coherent state with real amplitude, displaced along `+x`.
    Coherent { alpha: f64 },
    Fock { n: usize },
    /// Even cat state `|alpha> + |-alpha>`, normalized.
    Cat { alpha: f64 },
    /// Kerr-evolved coherent state `exp(-i gamma n^2) |alpha>`.
    Banana { alpha: f64, gamma: f64 },
    /// `sum_n c_n |n>`; must be normalized.
    FockSuperposition { coefficients: Vec<Complex64> },
}

impl StateSpec {
    /// Banana state parameterized by the nonlinearity measure `R = alpha^2 gamma`.
    pub fn banana_with_nonlinearity(alpha: f64, r_nonlinearity: f64) -> Self {
        StateSpec::Banana {
            alpha,
            gamma: r_nonlinearity / (alpha * alpha),
        }
    }

    /// `R = alpha^2 gamma` for banana states.
    pub fn nonlinearity(&self) -> Option<f64> {
        match *self {
            StateSpec::Banana { alpha, gamma } => Some(alpha * alpha * gamma),
            _ => None,
        }
    }

    /// Short family name, as used on the command line.
    pub fn family(&self) -> &'static str {
        match self {
            StateSpec::Vacuum => "vacuum",
            StateSpec::Coherent { .. } => "coherent",
            StateSpec::Fock { .. } => "fock",
            StateSpec::Cat { .. } => "cat",
            StateSpec::Banana { .. } => "banana",
            StateSpec::FockSuperposition { .. } => "superposition",
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            StateSpec::Vacuum => Ok(()),
            StateSpec::Coherent { alpha } => {
                if *alpha >= 0.0 && alpha.is_finite() {
                    Ok(())
                } else {
                    Err(Error::InvalidState("coherent amplitude must be finite and >= 0"))
                }
            }
            StateSpec::Fock { n } => {
                if *n > MAX_FOCK_ORDER {
                    Err(Error::OrderTooLarge {
                        n: *n,
                        max: MAX_FOCK_ORDER,
                    })
                } else {
                    Ok(())
                }
            }
            StateSpec::Cat { alpha } => {
                if *alpha > 0.0 && alpha.is_finite() {
                    Ok(())
                } else {
                    Err(Error::InvalidState("cat amplitude must be finite and > 0"))
                }
            }
            StateSpec::Banana { alpha, gamma } => {
                if !(*alpha > 0.0) || !alpha.is_finite() {
                    return Err(Error::InvalidState("banana amplitude must be finite and > 0"));
                }
                if !(*gamma >= 0.0) || !gamma.is_finite() {
                    return Err(Error::InvalidState("Kerr factor must be finite and >= 0"));
                }
                if *alpha > MAX_EXPANSION_ALPHA {
                    return Err(Error::TruncationBudget {
                        alpha: *alpha,
                        max: MAX_EXPANSION_ALPHA,
                    });
                }
                Ok(())
            }
            StateSpec::FockSuperposition { coefficients } => {
                if coefficients.is_empty() {
                    return Err(Error::InvalidState("superposition has no coefficients"));
                }
                if coefficients.len() > MAX_FOCK_ORDER + 1 {
                    return Err(Error::OrderTooLarge {
                        n: coefficients.len() - 1,
                        max: MAX_FOCK_ORDER,
                    });
                }
                if coefficients.iter().any(|c| !(c.re.is_finite() && c.im.is_finite())) {
                    return Err(Error::InvalidState("superposition coefficients must be finite"));
                }
                let norm: f64 = coefficients.iter().map(|c| c.norm_sqr()).sum();
                if (norm - 1.0).abs() > NORM_TOLERANCE {
                    return Err(Error::InvalidState("superposition coefficients are not normalized"));
                }
                Ok(())
            }
        }
    }

    /// Radius of the disc holding the bulk of the state; grids add six units
    /// of margin on top of this.
    pub fn support_radius(&self) -> f64 {
        match self {
            StateSpec::Vacuum => 0.0,
            StateSpec::Coherent { alpha } | StateSpec::Cat { alpha } | StateSpec::Banana { alpha, .. } => {
                SQRT_2 * alpha
            }
            StateSpec::Fock { n } => ((2 * n + 1) as f64).sqrt(),
            StateSpec::FockSuperposition { coefficients } => {
                let top = coefficients.iter().rposition(|c| c.norm_sqr() > 1e-20).unwrap_or(0);
                ((2 * top + 1) as f64).sqrt()
            }
        }
    }

    /// Builds a reusable evaluator, precomputing Fock tables where needed.
    pub fn evaluator(&self) -> Result<WignerEvaluator> {
        self.validate()?;
        let kind = match self {
            StateSpec::Vacuum => Kind::Coherent { x0: 0.0 },
            StateSpec::Coherent { alpha } => Kind::Coherent { x0: SQRT_2 * alpha },
            StateSpec::Fock { n } => Kind::Fock {
                n: *n,
                table: LaguerreTable::new(*n, 0),
            },
            StateSpec::Cat { alpha } => Kind::Cat {
                x0: SQRT_2 * alpha,
                k: 2.0 * SQRT_2 * alpha,
                norm: 1.0 / (1.0 + (-2.0 * alpha * alpha).exp()),
            },
            StateSpec::Banana { alpha, gamma } => {
                Kind::Expansion(FockExpansion::new(&kerr_coefficients(*alpha, *gamma)))
            }
            StateSpec::FockSuperposition { coefficients } => Kind::Expansion(FockExpansion::new(coefficients)),
        };
        Ok(WignerEvaluator { kind })
    }
}

/// Fock cutoff used for coherent and banana expansions.
pub fn expansion_cutoff(alpha: f64) -> usize {
    (alpha * alpha + 8.0 * alpha + 12.0).ceil() as usize
}

/// Fock amplitudes of `exp(-i gamma n^2) |alpha>` for `n <= expansion_cutoff(alpha)`.
pub fn kerr_coefficients(alpha: f64, gamma: f64) -> Vec<Complex64> {
    kerr_coefficients_to(alpha, gamma, expansion_cutoff(alpha))
}

/// As [`kerr_coefficients`] with an explicit cutoff.
pub fn kerr_coefficients_to(alpha: f64, gamma: f64, n_max: usize) -> Vec<Complex64> {
    let ln_alpha = alpha.ln();
    (0..=n_max)
        .map(|n| {
            let nf = n as f64;
            let magnitude = if alpha == 0.0 {
                if n == 0 {
                    1.0
                } else {
                    0.0
                }
            } else {
                (-0.5 * alpha * alpha + nf * ln_alpha - 0.5 * ln_factorial(n)).exp()
            };
            // n^2 gamma grows quickly; reduce the phase before taking sin/cos
            let phase = -(gamma * nf * nf) % (2.0 * core::f64::consts::PI);
            Complex64::from_polar(magnitude, phase)
        })
        .collect()
}

/// Evaluable view of a [`StateSpec`].
#[derive(Debug, Clone)]
pub struct WignerEvaluator {
    kind: Kind,
}

#[derive(Debug, Clone)]
enum Kind {
    Coherent { x0: f64 },
    Fock { n: usize, table: LaguerreTable },
    Cat { x0: f64, k: f64, norm: f64 },
    Expansion(FockExpansion),
}

impl WignerEvaluator {
    pub fn eval(&self, x: f64, y: f64) -> f64 {
        match &self.kind {
            Kind::Coherent { x0 } => {
                let dx = x - x0;
                FRAC_1_PI * (-dx * dx - y * y).exp()
            }
            Kind::Fock { n, table } => fock_from_table(*n, table, x, y),
            Kind::Cat { x0, k, norm } => cat_terms(*x0, *k, *norm, x, y),
            Kind::Expansion(e) => e.eval(x, y),
        }
    }

    /// Samples the evaluator on `grid`.
    pub fn field(&self, grid: PhaseGrid) -> Result<WignerField> {
        WignerField::sample(grid, self)
    }
}

impl PhaseFunction for WignerEvaluator {
    #[inline]
    fn wigner(&self, x: f64, y: f64) -> f64 {
        self.eval(x, y)
    }
}

fn fock_from_table(n: usize, table: &LaguerreTable, x: f64, y: f64) -> f64 {
    let u = 2.0 * (x * x + y * y);
    let mut value = 0.0;
    table.run(0, u, (-0.5 * u).exp(), n, |m, l| {
        if m == n {
            value = l;
        }
    });
    let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
    sign * FRAC_1_PI * value
}

#[inline]
fn cat_terms(x0: f64, k: f64, norm: f64, x: f64, y: f64) -> f64 {
    let y2 = y * y;
    let minus = x - x0;
    let plus = x + x0;
    let lobes = 0.5 * FRAC_1_PI * ((-y2 - minus * minus).exp() + (-y2 - plus * plus).exp());
    let fringes = FRAC_1_PI * (-y2 - x * x).exp() * (k * y).cos();
    norm * (lobes + fringes)
}

/// `((-1)^n / pi) L_n(2 r^2) exp(-r^2)` with `r^2 = x^2 + y^2`.
pub fn fock_wigner(n: usize, x: f64, y: f64) -> Result<f64> {
    if n > MAX_FOCK_ORDER {
        return Err(Error::OrderTooLarge {
            n,
            max: MAX_FOCK_ORDER,
        });
    }
    let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
    Ok(sign * FRAC_1_PI * laguerre_function(n, 0, 2.0 * (x * x + y * y)))
}

/// Even cat state: two half-weight coherent lobes at `x = -/+ sqrt(2) alpha`
/// plus the interference term `exp(-x^2 - y^2) cos(2 sqrt(2) alpha y) / pi`,
/// all divided by `1 + exp(-2 alpha^2)`.
pub fn cat_wigner(alpha: f64, x: f64, y: f64) -> Result<f64> {
    if !(alpha > 0.0) || !alpha.is_finite() {
        return Err(Error::InvalidState("cat amplitude must be finite and > 0"));
    }
    let norm = 1.0 / (1.0 + (-2.0 * alpha * alpha).exp());
    Ok(cat_terms(SQRT_2 * alpha, 2.0 * SQRT_2 * alpha, norm, x, y))
}

/// Wigner function of `exp(-i gamma n^2) |alpha>` by direct Fock summation.
/// Builds the expansion on every call; use [`StateSpec::evaluator`] for grids.
pub fn banana_wigner(alpha: f64, gamma: f64, x: f64, y: f64) -> Result<f64> {
    Ok(StateSpec::Banana { alpha, gamma }.evaluator()?.eval(x, y))
}

/// Samples the state's Wigner function on `grid`.
pub fn build_field(state: &StateSpec, grid: PhaseGrid) -> Result<WignerField> {
    state.evaluator()?.field(grid)
}

/// Pure state `sum_n c_n |n>` summed over the cross-Wigner kernels of
/// `|n+k><n|`:
///
/// `W_{n+k,n}(x, y) = ((-1)^n / pi) l_n^(k)(2 r^2) exp(-i k theta)`,
///
/// where `l` is the normalized Laguerre function and `theta` the polar angle.
#[derive(Debug, Clone)]
struct FockExpansion {
    // weights[k][n] = c_{n+k} conj(c_n) (-1)^n, doubled for k > 0
    weights: Vec<Vec<Complex64>>,
    table: LaguerreTable,
}

impl FockExpansion {
    fn new(coefficients: &[Complex64]) -> Self {
        let top = coefficients.len().saturating_sub(1);
        let largest = coefficients.iter().map(|c| c.norm()).fold(0.0, f64::max);
        let floor = NEGLIGIBLE * largest * largest;
        let mut weights: Vec<Vec<Complex64>> = (0..=top)
            .map(|k| {
                let mut row: Vec<Complex64> = (0..=top - k)
                    .map(|n| {
                        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
                        let scale = if k == 0 { sign } else { 2.0 * sign };
                        coefficients[n + k] * coefficients[n].conj() * scale
                    })
                    .collect();
                let keep = row.iter().rposition(|w| w.norm() > floor).map_or(0, |p| p + 1);
                row.truncate(keep);
                row
            })
            .collect();
        while weights.last().is_some_and(|r| r.is_empty()) {
            weights.pop();
        }
        let k_max = weights.len().saturating_sub(1);
        let n_max = weights.iter().map(|r| r.len()).max().unwrap_or(1).saturating_sub(1);
        Self {
            weights,
            table: LaguerreTable::new(n_max, k_max),
        }
    }

    fn eval(&self, x: f64, y: f64) -> f64 {
        let r2 = x * x + y * y;
        let u = 2.0 * r2;
        let root_u = u.sqrt();
        let r = r2.sqrt();
        // exp(-i theta)
        let step = if r > 0.0 {
            Complex64::new(x / r, -y / r)
        } else {
            Complex64::new(1.0, 0.0)
        };
        let mut phase = Complex64::new(1.0, 0.0);
        let mut seed = (-0.5 * u).exp();
        let mut total = 0.0;
        for (k, row) in self.weights.iter().enumerate() {
            if k > 0 {
                seed *= root_u / (k as f64).sqrt();
                phase *= step;
            }
            if row.is_empty() {
                continue;
            }
            let mut acc = Complex64::new(0.0, 0.0);
            self.table.run(k, u, seed, row.len() - 1, |n, l| {
                acc += row[n] * l;
            });
            total += (phase * acc).re;
        }
        FRAC_1_PI * total
    }
}
