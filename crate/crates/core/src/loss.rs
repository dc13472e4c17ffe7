//! Pure-loss channel acting on Wigner functions, and its derivative with
//! respect to the efficiency.
//!
//! The channel with efficiency `eta` maps `W` to
//!
//! `W_eta(x) = int W(x~) exp(-|x - sqrt(eta) x~|^2 / (1 - eta)) dx~ / (pi (1 - eta))`.
//!
//! Substituting `u = sqrt(eta) x~` splits this into an exact rescaling,
//! `W(u / sqrt(eta)) / eta`, followed by a Gaussian blur of per-axis width
//! `sqrt((1 - eta) / 2)`. The rescaling is done on the analytic evaluator, so
//! only the blur is discretized.

use alloc::vec::Vec;

#[allow(unused_imports)] // unused when another crate in the graph links std
use num_traits::Float;

use crate::error::{Error, Result};
use crate::phase_space::{convolve_gaussian, gradient, laplacian, resample_scaled, PhaseFunction, PhaseGrid, WignerField};
use crate::states::StateSpec;

/// Quantum efficiency `0 < eta <= 1`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Efficiency(f64);

impl Efficiency {
    pub const LOSSLESS: Efficiency = Efficiency(1.0);

    pub fn new(eta: f64) -> Result<Self> {
        if eta > 0.0 && eta <= 1.0 {
            Ok(Self(eta))
        } else {
            Err(Error::InvalidEfficiency(eta))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// Per-axis standard deviation of the blur, `sqrt((1 - eta) / 2)`.
    pub fn blur_sigma(self) -> f64 {
        (0.5 * (1.0 - self.0)).sqrt()
    }

    pub fn is_lossless(self) -> bool {
        self.0 == 1.0
    }
}

impl TryFrom<f64> for Efficiency {
    type Error = Error;
    fn try_from(eta: f64) -> Result<Self> {
        Self::new(eta)
    }
}

/// Lossy Wigner function of `state` sampled on `grid`.
pub fn apply_loss(state: &StateSpec, grid: PhaseGrid, eta: Efficiency) -> Result<WignerField> {
    apply_loss_with(&state.evaluator()?, grid, eta)
}

/// [`apply_loss`] for any analytic phase function (e.g. a squeezed state).
pub fn apply_loss_with<F: PhaseFunction + ?Sized>(f: &F, grid: PhaseGrid, eta: Efficiency) -> Result<WignerField> {
    if eta.is_lossless() {
        return WignerField::sample(grid, f);
    }
    let sigma = eta.blur_sigma();
    let half_spacing = 0.5 * grid.hx().max(grid.hy());
    if sigma < half_spacing {
        return Err(Error::BlurUnderResolved { sigma, half_spacing });
    }
    let scaled = resample_scaled(f, grid, eta.value().sqrt())?;
    Ok(convolve_gaussian(&scaled, sigma)?.field)
}

/// Loss applied to an already sampled field. The rescaling step has to
/// interpolate (bilinearly), so this is less accurate than [`apply_loss`]
/// and is kept for composing channels.
pub fn apply_loss_to_field(field: &WignerField, eta: Efficiency) -> Result<WignerField> {
    apply_loss_with(field, *field.grid(), eta)
}

/// `dW/d eta = -(1/eta) [1 + (x d_x + y d_y)/2 + (d_xx + d_yy)/4] W`, with
/// the field taken as the channel output at `eta`.
pub fn decay_rate(field: &WignerField, eta: Efficiency) -> Result<WignerField> {
    let lap = laplacian(field)?;
    let (gx, gy) = gradient(field)?;
    let g = *field.grid();
    let inv_eta = 1.0 / eta.value();
    let mut out = Vec::with_capacity(g.len());
    for j in 0..g.ny() {
        let y = g.y(j);
        for i in 0..g.nx() {
            let x = g.x(i);
            let k = g.index(i, j);
            let w = field.values()[k];
            out.push(-inv_eta * (w + 0.5 * (x * gx[k] + y * gy[k]) + 0.25 * lap.values()[k]));
        }
    }
    WignerField::from_values(g, out)
}

/// `dV_neg/d eta = (1 / (4 eta)) int_{W < 0} laplacian(W)` for the field
/// already at efficiency `eta`.
pub fn negativity_derivative(field: &WignerField, eta: Efficiency) -> Result<f64> {
    let lap = laplacian(field)?;
    let sum: f64 = field
        .values()
        .iter()
        .zip(lap.values())
        .filter(|(w, _)| **w < 0.0)
        .map(|(_, l)| *l)
        .sum();
    Ok(sum * field.grid().cell_area() / (4.0 * eta.value()))
}
