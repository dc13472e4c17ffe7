//! Negativity volume of sampled Wigner functions and its dependence on loss.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::loss::{apply_loss_with, Efficiency};
use crate::optimize::{optimize_squeeze_at_loss, OptimizeConfig};
use crate::phase_space::{GridPolicy, WignerField};
use crate::squeeze::{d_coefficients, grid_for, optimal_squeeze, DCoefficients, SqueezeParams, Squeezed};
use crate::states::StateSpec;

/// Outcome of [`negativity_volume`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NegativityResult {
    /// `-int_{W<0} W`, never negative.
    pub v_neg: f64,
    pub negative_cell_count: usize,
    /// Most negative sample (or the smallest sample when none is negative).
    pub min_value: f64,
}

/// `V_neg = -sum_{W<0} W hx hy`.
pub fn negativity_volume(field: &WignerField) -> NegativityResult {
    let mut region = 0.0;
    let mut folded = 0.0;
    let mut count = 0;
    for &w in field.values() {
        if w < 0.0 {
            region -= w;
            count += 1;
        }
        folded += 0.5 * (w.abs() - w);
    }
    debug_assert!((region - folded).abs() <= 1e-12 * region.max(1.0));
    let area = field.grid().cell_area();
    NegativityResult {
        v_neg: region * area,
        negative_cell_count: count,
        min_value: field.min_value(),
    }
}

/// First-order model `V_neg(eta) ~ V_neg(1) - (1 - eta) V`.
pub fn taylor_estimate(v_neg_at_1: f64, vulnerability: f64, eta: Efficiency) -> f64 {
    v_neg_at_1 - (1.0 - eta.value()) * vulnerability
}

/// How a state is squeezed before it meets the loss.
#[derive(Debug, Clone, PartialEq)]
pub enum SqueezePolicy {
    None,
    /// Closed-form optimum computed once from the lossless state.
    AnalyticOnce,
    /// Numerical optimum at every efficiency.
    PerEtaOptimized(OptimizeConfig),
}

/// One sample of a loss curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvePoint {
    pub eta: f64,
    pub v_neg: f64,
    /// Squeeze applied before the loss (identity for [`SqueezePolicy::None`]).
    pub params: SqueezeParams,
}

/// Squeeze minimizing the small-loss vulnerability of `state`, computed on a
/// lossless grid. Isotropic or positive states get the identity.
pub fn analytic_presqueeze(state: &StateSpec, grid: &GridPolicy) -> Result<SqueezeParams> {
    let field = crate::states::build_field(state, grid_for(grid, state, None, 1.0)?)?;
    presqueeze_from(&d_coefficients(&field)?)
}

/// [`analytic_presqueeze`] for coefficients already measured.
pub fn presqueeze_from(d: &DCoefficients) -> Result<SqueezeParams> {
    match optimal_squeeze(d) {
        Ok(opt) => Ok(opt.params),
        Err(Error::DegenerateFlat(_)) => Ok(SqueezeParams::IDENTITY),
        Err(e) => Err(e),
    }
}

/// `V_neg` of `state` squeezed by `params` and then sent through loss `eta`,
/// on a grid sized for that combination.
pub fn lossy_negativity(state: &StateSpec, params: SqueezeParams, eta: Efficiency, grid: &GridPolicy) -> Result<f64> {
    let eval = state.evaluator()?;
    lossy_negativity_with(&eval, state, params, eta, grid)
}

pub(crate) fn lossy_negativity_with(
    eval: &crate::states::WignerEvaluator,
    state: &StateSpec,
    params: SqueezeParams,
    eta: Efficiency,
    grid: &GridPolicy,
) -> Result<f64> {
    let g = grid_for(grid, state, Some(params), eta.value())?;
    let field = apply_loss_with(&Squeezed::new(eval, params), g, eta)?;
    Ok(negativity_volume(&field).v_neg)
}

/// `V_neg` after loss for each efficiency in `etas` (ascending), under the
/// given squeeze policy.
pub fn negativity_curve(
    state: &StateSpec,
    etas: &[Efficiency],
    policy: &SqueezePolicy,
    grid: &GridPolicy,
) -> Result<Vec<CurvePoint>> {
    if etas.windows(2).any(|w| w[1].value() < w[0].value()) {
        return Err(Error::InvalidConfig("efficiencies must be sorted ascending"));
    }
    let eval = state.evaluator()?;
    let fixed = match policy {
        SqueezePolicy::None => Some(SqueezeParams::IDENTITY),
        SqueezePolicy::AnalyticOnce => Some(analytic_presqueeze(state, grid)?),
        SqueezePolicy::PerEtaOptimized(_) => None,
    };
    etas.iter()
        .map(|&eta| match (fixed, policy) {
            (Some(params), _) => Ok(CurvePoint {
                eta: eta.value(),
                v_neg: lossy_negativity_with(&eval, state, params, eta, grid)?,
                params,
            }),
            (None, SqueezePolicy::PerEtaOptimized(config)) => {
                if eta.value() <= 0.5 {
                    // the output is a positive Husimi-like function whatever the squeeze
                    return Ok(CurvePoint {
                        eta: eta.value(),
                        v_neg: lossy_negativity_with(&eval, state, SqueezeParams::IDENTITY, eta, grid)?,
                        params: SqueezeParams::IDENTITY,
                    });
                }
                let config = OptimizeConfig {
                    grid: *grid,
                    ..config.clone()
                };
                let rec = optimize_squeeze_at_loss(state, eta, &config)?;
                Ok(CurvePoint {
                    eta: eta.value(),
                    v_neg: rec.v_neg,
                    params: rec.params,
                })
            }
            (None, _) => unreachable!("only the optimizing policy has no fixed squeeze"),
        })
        .collect()
}
