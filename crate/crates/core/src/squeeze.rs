//! Symplectic squeezing, the curvature coefficients of the negative region and
//! the closed-form squeeze that minimizes the small-loss vulnerability.
//!
//! A squeeze `(r, phi)` acts as `W_sq(x, y) = W(M (x, y))` with
//! `M = U^T S U`, `U` the rotation `[[cos phi, sin phi], [-sin phi, cos phi]]`
//! and `S = diag(e^r, e^-r)`. Since `M` is symmetric with unit determinant,
//! the Laplacian of the squeezed field integrates to `Tr(M^2 L)` over the
//! negative region, `L` being the integrated Hessian of the original field.
//! Expanding `M^2 = cosh(2r) I + sinh(2r) (cos(2 phi) sz + sin(2 phi) sx)`
//! gives the vulnerability
//!
//! `V_sqz = [d0 cosh(2r) + (d3 cos(2 phi) + d1 sin(2 phi)) sinh(2r)] / 4`
//!
//! with a plus sign in front of `d1`; the tests check this against squeezed
//! fields directly.

use core::f64::consts::PI;

#[allow(unused_imports)] // unused when another crate in the graph links std
use num_traits::Float;

use crate::error::{Error, Result};
use crate::phase_space::{hessian, GridPolicy, PhaseFunction, PhaseGrid, WignerField};
use crate::states::StateSpec;

/// Below `DEGENERACY * d0` the anisotropy `sqrt(d1^2 + d3^2)` is treated as zero.
pub const DEGENERACY: f64 = 1e-9;

/// Squeeze magnitude `r >= 0` and orientation `phi` in `[0, pi)`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SqueezeParams {
    r: f64,
    phi: f64,
}

impl SqueezeParams {
    pub const IDENTITY: SqueezeParams = SqueezeParams { r: 0.0, phi: 0.0 };

    /// `phi` is reduced modulo `pi`; `M(r, phi)` has that period.
    pub fn new(r: f64, phi: f64) -> Result<Self> {
        if !(r >= 0.0) || !r.is_finite() {
            return Err(Error::InvalidSqueeze("r must be finite and >= 0"));
        }
        if !phi.is_finite() {
            return Err(Error::InvalidSqueeze("phi must be finite"));
        }
        let mut phi = phi % PI;
        if phi < 0.0 {
            phi += PI;
        }
        if phi >= PI {
            phi = 0.0;
        }
        Ok(Self { r, phi })
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    /// `M(r, phi)` as `[[m00, m01], [m10, m11]]`.
    pub fn matrix(&self) -> [[f64; 2]; 2] {
        let (s, c) = self.phi.sin_cos();
        let (grow, shrink) = (self.r.exp(), (-self.r).exp());
        let off = c * s * (grow - shrink);
        [[c * c * grow + s * s * shrink, off], [off, s * s * grow + c * c * shrink]]
    }

    /// Diagonal of `M^-2`, which sets how far the squeezed support reaches
    /// along each axis.
    pub fn inverse_metric_diag(&self) -> [f64; 2] {
        let (ch, sh) = ((2.0 * self.r).cosh(), (2.0 * self.r).sinh());
        let c2 = (2.0 * self.phi).cos();
        [ch - c2 * sh, ch + c2 * sh]
    }

    pub fn is_identity(&self) -> bool {
        self.r == 0.0
    }
}

/// A phase function viewed through the squeeze map: `W(M (x, y))`.
#[derive(Debug, Clone, Copy)]
pub struct Squeezed<'a, F: ?Sized> {
    inner: &'a F,
    m: [[f64; 2]; 2],
}

impl<'a, F: PhaseFunction + ?Sized> Squeezed<'a, F> {
    pub fn new(inner: &'a F, params: SqueezeParams) -> Self {
        Self {
            inner,
            m: params.matrix(),
        }
    }
}

impl<F: PhaseFunction + ?Sized> PhaseFunction for Squeezed<'_, F> {
    #[inline]
    fn wigner(&self, x: f64, y: f64) -> f64 {
        let m = &self.m;
        self.inner.wigner(m[0][0] * x + m[0][1] * y, m[1][0] * x + m[1][1] * y)
    }
}

/// Grid for `state` after squeezing with `params` and loss `eta`, sized by `policy`.
pub fn grid_for(policy: &GridPolicy, state: &StateSpec, params: Option<SqueezeParams>, eta: f64) -> Result<PhaseGrid> {
    let stretch = params.map_or([1.0, 1.0], |p| p.inverse_metric_diag());
    policy.grid_for(state.support_radius(), stretch, eta)
}

/// Samples the squeezed state `W(M(r, phi) (x, y))` on `grid`. No density
/// factor: `det M = 1`.
pub fn apply_squeeze(state: &StateSpec, params: SqueezeParams, grid: PhaseGrid) -> Result<WignerField> {
    let eval = state.evaluator()?;
    WignerField::sample(grid, &Squeezed::new(&eval, params))
}

/// Pauli components of the Hessian integrated over the negative region.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct DCoefficients {
    pub d0: f64,
    pub d1: f64,
    pub d3: f64,
}

impl DCoefficients {
    pub fn new(d0: f64, d1: f64, d3: f64) -> Self {
        Self { d0, d1, d3 }
    }

    /// `sqrt(d1^2 + d3^2)`.
    pub fn anisotropy(&self) -> f64 {
        self.d1.hypot(self.d3)
    }

    /// `d0 >= sqrt(d1^2 + d3^2)` up to `1e-6 d0^2` slack on the squares.
    pub fn is_psd(&self) -> bool {
        self.d0 >= 0.0 && self.d0 * self.d0 >= self.d1 * self.d1 + self.d3 * self.d3 - 1e-6 * self.d0 * self.d0
    }
}

/// `d0 = int (dxx + dyy) W`, `d3 = int (dxx - dyy) W`, `d1 = 2 int dxy W`,
/// each over the cells where `W < 0`.
pub fn d_coefficients(field: &WignerField) -> Result<DCoefficients> {
    let h = hessian(field)?;
    let (mut xx, mut yy, mut xy) = (0.0, 0.0, 0.0);
    for (k, &w) in field.values().iter().enumerate() {
        if w < 0.0 {
            xx += h.xx[k];
            yy += h.yy[k];
            xy += h.xy[k];
        }
    }
    let area = field.grid().cell_area();
    Ok(DCoefficients {
        d0: (xx + yy) * area,
        d1: 2.0 * xy * area,
        d3: (xx - yy) * area,
    })
}

/// Small-loss vulnerability `dV_neg/d eta` at `eta = 1`, i.e. `d0 / 4`.
pub fn vulnerability(field: &WignerField) -> Result<f64> {
    Ok(d_coefficients(field)?.d0 / 4.0)
}

/// `[d0 cosh(2r) + (d3 cos(2 phi) + d1 sin(2 phi)) sinh(2r)] / 4`.
pub fn squeezed_vulnerability(d: &DCoefficients, params: SqueezeParams) -> f64 {
    let two_r = 2.0 * params.r;
    let (s2, c2) = (2.0 * params.phi).sin_cos();
    0.25 * (d.d0 * two_r.cosh() + (d.d3 * c2 + d.d1 * s2) * two_r.sinh())
}

/// Minimizer of [`squeezed_vulnerability`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimalSqueeze {
    pub params: SqueezeParams,
    /// `d1 = d3 = 0` (to within [`DEGENERACY`]); every orientation is
    /// equivalent and no squeezing helps.
    pub degenerate: bool,
}

/// Closed-form optimum: `e^{4r} = (d0 + D) / (d0 - D)` with
/// `D = sqrt(d1^2 + d3^2)`, and `(cos 2phi, sin 2phi) = -(d3, d1) / D`.
pub fn optimal_squeeze(d: &DCoefficients) -> Result<OptimalSqueeze> {
    if !(d.d0 > 0.0) {
        return Err(Error::DegenerateFlat(d.d0));
    }
    let aniso = d.anisotropy();
    if aniso < DEGENERACY * d.d0 {
        return Ok(OptimalSqueeze {
            params: SqueezeParams::IDENTITY,
            degenerate: true,
        });
    }
    let gap = d.d0 - aniso;
    if gap <= DEGENERACY * d.d0 {
        return Err(Error::UnboundedSqueeze { gap });
    }
    let r = 0.25 * ((d.d0 + aniso) / gap).ln();
    let two_phi = (-d.d1).atan2(-d.d3);
    Ok(OptimalSqueeze {
        params: SqueezeParams::new(r, 0.5 * two_phi)?,
        degenerate: false,
    })
}

/// Vulnerability before and after the optimal squeeze.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VulnerabilityReport {
    pub d: DCoefficients,
    pub v_org: f64,
    pub v_sqz: f64,
    pub params: SqueezeParams,
    pub degenerate: bool,
}

impl VulnerabilityReport {
    pub fn from_coefficients(d: DCoefficients) -> Result<Self> {
        let opt = optimal_squeeze(&d)?;
        let v_org = d.d0 / 4.0;
        let v_sqz = if opt.degenerate {
            v_org
        } else {
            0.25 * (d.d0 * d.d0 - d.d1 * d.d1 - d.d3 * d.d3).max(0.0).sqrt()
        };
        Ok(Self {
            d,
            v_org,
            v_sqz: v_sqz.min(v_org),
            params: opt.params,
            degenerate: opt.degenerate,
        })
    }

    pub fn from_field(field: &WignerField) -> Result<Self> {
        Self::from_coefficients(d_coefficients(field)?)
    }
}
