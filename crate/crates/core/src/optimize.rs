//! Derivative-free search for the squeeze that keeps the most negativity at a
//! finite loss.
//!
//! The objective `V_neg(loss(squeeze(state)))` integrates over a region whose
//! boundary moves with the parameters, so it is only piecewise smooth at grid
//! resolution. A multi-start Nelder-Mead simplex handles that without
//! gradients. The search runs in the plane `(r cos 2phi, r sin 2phi)`, which
//! removes the orientation ambiguity at `r = 0` and the `pi`-periodicity in
//! `phi`.

use alloc::vec::Vec;
use core::f64::consts::PI;

#[allow(unused_imports)] // unused when another crate in the graph links std
use num_traits::Float;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::loss::Efficiency;
use crate::negativity::{analytic_presqueeze, lossy_negativity_with};
use crate::phase_space::GridPolicy;
use crate::squeeze::SqueezeParams;
use crate::states::StateSpec;

/// Settings for [`optimize_squeeze_at_loss`].
#[derive(Debug, Clone, PartialEq)]
pub struct OptimizeConfig {
    /// Upper bound on the squeeze magnitude.
    pub r_max: f64,
    /// Number of simplex starts; the zero and closed-form seeds always run.
    pub restarts: usize,
    /// Stop once the simplex objective spread falls below this.
    pub tol: f64,
    /// Objective evaluations allowed per start.
    pub max_evals: usize,
    pub seed: u64,
    pub grid: GridPolicy,
}

impl Default for OptimizeConfig {
    fn default() -> Self {
        Self {
            r_max: 2.0,
            restarts: 5,
            tol: 1e-5,
            max_evals: 400,
            seed: 0,
            grid: GridPolicy::default(),
        }
    }
}

impl OptimizeConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.r_max > 0.0) || !self.r_max.is_finite() {
            return Err(Error::InvalidConfig("r_max must be positive"));
        }
        if !(self.tol > 0.0) {
            return Err(Error::InvalidConfig("tol must be positive"));
        }
        if self.restarts == 0 {
            return Err(Error::InvalidConfig("restarts must be at least 1"));
        }
        if self.max_evals < 3 {
            return Err(Error::InvalidConfig("max_evals must allow an initial simplex"));
        }
        Ok(())
    }
}

/// Best squeeze found at one efficiency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimumRecord {
    pub params: SqueezeParams,
    pub v_neg: f64,
    /// Objective evaluations over all starts.
    pub evals: usize,
    /// Whether the start that produced the optimum met `tol` within budget.
    pub converged: bool,
}

/// Result of a bounded Nelder-Mead run (minimization).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimplexOutcome<const N: usize> {
    pub x: [f64; N],
    pub f: f64,
    pub evals: usize,
    pub converged: bool,
}

/// Minimizes `f` from `start` with the standard reflection (1), expansion
/// (2), contraction (1/2) and shrink (1/2) moves. The initial simplex offsets
/// each coordinate by `step`. Stops when the spread of objective values is at
/// most `tol` or after `max_evals` evaluations.
pub fn nelder_mead<const N: usize>(
    mut f: impl FnMut(&[f64; N]) -> Result<f64>,
    start: [f64; N],
    step: f64,
    tol: f64,
    max_evals: usize,
) -> Result<SimplexOutcome<N>> {
    let mut evals = 0;
    let mut eval = |x: &[f64; N], evals: &mut usize| -> Result<f64> {
        *evals += 1;
        f(x)
    };
    let mut simplex: Vec<([f64; N], f64)> = Vec::with_capacity(N + 1);
    let f0 = eval(&start, &mut evals)?;
    simplex.push((start, f0));
    for d in 0..N {
        let mut x = start;
        x[d] += step;
        let fx = eval(&x, &mut evals)?;
        simplex.push((x, fx));
    }

    let mut converged = false;
    loop {
        simplex.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap_or(core::cmp::Ordering::Equal));
        let best = simplex[0].1;
        let worst = simplex[N].1;
        if (worst - best).abs() <= tol {
            converged = true;
            break;
        }
        if evals >= max_evals {
            break;
        }

        let mut centroid = [0.0; N];
        for (x, _) in &simplex[..N] {
            for d in 0..N {
                centroid[d] += x[d] / N as f64;
            }
        }
        let along = |t: f64| -> [f64; N] {
            let mut p = [0.0; N];
            for d in 0..N {
                p[d] = centroid[d] + t * (simplex[N].0[d] - centroid[d]);
            }
            p
        };

        let reflected = along(-1.0);
        let f_r = eval(&reflected, &mut evals)?;
        if f_r < best {
            let expanded = along(-2.0);
            let f_e = eval(&expanded, &mut evals)?;
            simplex[N] = if f_e < f_r { (expanded, f_e) } else { (reflected, f_r) };
            continue;
        }
        if f_r < simplex[N - 1].1 {
            simplex[N] = (reflected, f_r);
            continue;
        }
        let (contracted, f_c) = if f_r < worst {
            let c = along(-0.5);
            let fc = eval(&c, &mut evals)?;
            (c, fc)
        } else {
            let c = along(0.5);
            let fc = eval(&c, &mut evals)?;
            (c, fc)
        };
        if f_c < worst.min(f_r) {
            simplex[N] = (contracted, f_c);
            continue;
        }
        let anchor = simplex[0].0;
        for v in simplex.iter_mut().skip(1) {
            for d in 0..N {
                v.0[d] = anchor[d] + 0.5 * (v.0[d] - anchor[d]);
            }
            v.1 = eval(&v.0, &mut evals)?;
        }
    }
    simplex.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap_or(core::cmp::Ordering::Equal));
    Ok(SimplexOutcome {
        x: simplex[0].0,
        f: simplex[0].1,
        evals,
        converged,
    })
}

fn to_plane(p: SqueezeParams) -> [f64; 2] {
    let (s, c) = (2.0 * p.phi()).sin_cos();
    [p.r() * c, p.r() * s]
}

fn from_plane(u: &[f64; 2], r_max: f64) -> SqueezeParams {
    let r = u[0].hypot(u[1]).min(r_max);
    let phi = if r > 0.0 { 0.5 * u[1].atan2(u[0]) } else { 0.0 };
    SqueezeParams::new(r, phi).unwrap_or(SqueezeParams::IDENTITY)
}

const SIMPLEX_STEP: f64 = 0.25;

/// Squeeze maximizing the negativity left after loss `eta`.
///
/// Starts from no squeeze, from the closed-form small-loss optimum (when the
/// state has one) and from `restarts - 2` random points drawn with
/// `config.seed`. Non-convergence is reported in the record, not as an error.
pub fn optimize_squeeze_at_loss(state: &StateSpec, eta: Efficiency, config: &OptimizeConfig) -> Result<OptimumRecord> {
    config.validate()?;
    if eta.value() <= 0.5 {
        return Err(Error::InvalidConfig("squeeze optimization needs eta > 1/2"));
    }
    let eval = state.evaluator()?;
    let mut seeds = Vec::with_capacity(config.restarts.max(2));
    seeds.push(SqueezeParams::IDENTITY);
    match analytic_presqueeze(state, &config.grid) {
        Ok(p) if !p.is_identity() => {
            seeds.push(SqueezeParams::new(p.r().min(config.r_max), p.phi())?);
        }
        Ok(_) | Err(Error::UnboundedSqueeze { .. }) => {}
        Err(e) => return Err(e),
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    for _ in 0..config.restarts.saturating_sub(2) {
        let r = rng.gen_range(0.0..config.r_max);
        let phi = rng.gen_range(0.0..PI);
        seeds.push(SqueezeParams::new(r, phi)?);
    }

    let mut best: Option<OptimumRecord> = None;
    let mut total = 0;
    for seed in seeds {
        let run = nelder_mead(
            |u: &[f64; 2]| {
                let p = from_plane(u, config.r_max);
                Ok(-lossy_negativity_with(&eval, state, p, eta, &config.grid)?)
            },
            to_plane(seed),
            SIMPLEX_STEP,
            config.tol,
            config.max_evals,
        )?;
        total += run.evals;
        let candidate = OptimumRecord {
            params: from_plane(&run.x, config.r_max),
            v_neg: (-run.f).max(0.0),
            evals: 0,
            converged: run.converged,
        };
        if best.map_or(true, |b| candidate.v_neg > b.v_neg) {
            best = Some(candidate);
        }
    }
    let mut best = best.expect("at least one seed always runs");
    best.evals = total;
    Ok(best)
}

/// Numerical and closed-form optimal squeeze magnitudes for one member of a
/// state family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RCurvePoint {
    /// Family parameter (`alpha`, or `n` for Fock states).
    pub param: f64,
    pub r_numeric: f64,
    pub phi_numeric: f64,
    pub r_analytic: f64,
    pub v_neg: f64,
}

/// Family parameter used on the horizontal axis of family sweeps.
pub fn family_parameter(state: &StateSpec) -> f64 {
    match state {
        StateSpec::Vacuum => 0.0,
        StateSpec::Coherent { alpha } | StateSpec::Cat { alpha } | StateSpec::Banana { alpha, .. } => *alpha,
        StateSpec::Fock { n } => *n as f64,
        StateSpec::FockSuperposition { coefficients } => coefficients.len() as f64 - 1.0,
    }
}

/// [`optimize_squeeze_at_loss`] and the closed-form optimum for every state
/// of a single family.
pub fn optimal_r_curve(states: &[StateSpec], eta: Efficiency, config: &OptimizeConfig) -> Result<Vec<RCurvePoint>> {
    if let Some(first) = states.first() {
        if states.iter().any(|s| s.family() != first.family()) {
            return Err(Error::InvalidConfig("r curves need a single state family"));
        }
    }
    states
        .iter()
        .map(|s| {
            let rec = optimize_squeeze_at_loss(s, eta, config)?;
            let analytic = analytic_presqueeze(s, &config.grid)?;
            Ok(RCurvePoint {
                param: family_parameter(s),
                r_numeric: rec.params.r(),
                phi_numeric: rec.params.phi(),
                r_analytic: analytic.r(),
                v_neg: rec.v_neg,
            })
        })
        .collect()
}
