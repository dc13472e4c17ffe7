//! Uniform sampling of the quadrature plane, quadrature, finite differences
//! and separable Gaussian convolution.
//!
//! Values are stored row-major with `y` as the slow index: the sample at
//! `(x_i, y_j)` lives at `j * nx + i`.

use alloc::vec;
use alloc::vec::Vec;
#[allow(unused_imports)] // unused when another crate in the graph links std
use num_traits::Float;

use crate::error::{Error, Result};

/// Smallest point count accepted per axis.
pub const MIN_POINTS: usize = 16;
/// Smallest point count the second-order stencils work on.
pub const MIN_STENCIL_POINTS: usize = 5;

/// Anything that can be evaluated as a Wigner function at a phase-space point.
pub trait PhaseFunction {
    fn wigner(&self, x: f64, y: f64) -> f64;
}

impl<F: Fn(f64, f64) -> f64> PhaseFunction for F {
    fn wigner(&self, x: f64, y: f64) -> f64 {
        self(x, y)
    }
}

/// Uniform rectangular lattice over `[x_min, x_max] x [y_min, y_max]`,
/// endpoints included.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseGrid {
    x_min: f64,
    x_max: f64,
    y_min: f64,
    y_max: f64,
    nx: usize,
    ny: usize,
}

impl PhaseGrid {
    pub fn new(x_min: f64, x_max: f64, y_min: f64, y_max: f64, nx: usize, ny: usize) -> Result<Self> {
        if nx < MIN_POINTS || ny < MIN_POINTS {
            return Err(Error::InvalidGrid("at least 16 points per axis are required"));
        }
        if !(x_min.is_finite() && x_max.is_finite() && y_min.is_finite() && y_max.is_finite()) {
            return Err(Error::InvalidGrid("bounds must be finite"));
        }
        if x_max <= x_min || y_max <= y_min {
            return Err(Error::InvalidGrid("upper bounds must exceed lower bounds"));
        }
        Ok(Self {
            x_min,
            x_max,
            y_min,
            y_max,
            nx,
            ny,
        })
    }

    /// `[-half, half]^2` with `n` points per axis.
    pub fn square(half: f64, n: usize) -> Result<Self> {
        Self::new(-half, half, -half, half, n, n)
    }

    /// Centered grid with independent half-widths per axis.
    pub fn centered(half_x: f64, half_y: f64, n: usize) -> Result<Self> {
        Self::new(-half_x, half_x, -half_y, half_y, n, n)
    }

    pub fn x_min(&self) -> f64 {
        self.x_min
    }
    pub fn x_max(&self) -> f64 {
        self.x_max
    }
    pub fn y_min(&self) -> f64 {
        self.y_min
    }
    pub fn y_max(&self) -> f64 {
        self.y_max
    }
    pub fn nx(&self) -> usize {
        self.nx
    }
    pub fn ny(&self) -> usize {
        self.ny
    }
    pub fn len(&self) -> usize {
        self.nx * self.ny
    }
    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn hx(&self) -> f64 {
        (self.x_max - self.x_min) / (self.nx - 1) as f64
    }

    pub fn hy(&self) -> f64 {
        (self.y_max - self.y_min) / (self.ny - 1) as f64
    }

    /// Area of one quadrature cell.
    pub fn cell_area(&self) -> f64 {
        self.hx() * self.hy()
    }

    pub fn x(&self, i: usize) -> f64 {
        self.x_min + i as f64 * self.hx()
    }

    pub fn y(&self, j: usize) -> f64 {
        self.y_min + j as f64 * self.hy()
    }

    pub fn xs(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.nx).map(move |i| self.x(i))
    }

    pub fn ys(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.ny).map(move |j| self.y(j))
    }

    /// Index of the node nearest to `(x, y)`, clamped to the grid.
    pub fn nearest(&self, x: f64, y: f64) -> (usize, usize) {
        let fi = ((x - self.x_min) / self.hx()).round();
        let fj = ((y - self.y_min) / self.hy()).round();
        let i = fi.max(0.0).min((self.nx - 1) as f64) as usize;
        let j = fj.max(0.0).min((self.ny - 1) as f64) as usize;
        (i, j)
    }

    #[inline]
    pub fn index(&self, i: usize, j: usize) -> usize {
        j * self.nx + i
    }
}

/// Upper bound on the per-axis refinement [`GridPolicy::grid_for`] applies to
/// resolve the loss blur, as a multiple of [`GridPolicy::n`].
pub const MAX_REFINEMENT: usize = 4;

/// How grids are sized when the caller does not supply one.
///
/// The base support is a disc of radius `extent` (or the state's support
/// radius plus six units when `extent` is `None`); squeezing maps that disc to
/// an ellipse whose bounding box sets the half-widths, and loss shrinks it by
/// `sqrt(eta)` and pads it by six blur widths. An axis whose spacing would
/// exceed one blur width gets more points, up to [`MAX_REFINEMENT`] times `n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridPolicy {
    pub n: usize,
    pub extent: Option<f64>,
}

impl Default for GridPolicy {
    fn default() -> Self {
        Self { n: 512, extent: None }
    }
}

impl GridPolicy {
    pub fn with_n(n: usize) -> Self {
        Self { n, extent: None }
    }

    /// `stretch` holds the diagonal of `M^-2` for the squeeze in effect
    /// (`[1, 1]` without squeezing).
    pub fn grid_for(&self, support_radius: f64, stretch: [f64; 2], eta: f64) -> Result<PhaseGrid> {
        let base = self.extent.unwrap_or(support_radius + 6.0);
        if !(base > 0.0) {
            return Err(Error::InvalidGrid("grid extent must be positive"));
        }
        let sigma = (0.5 * (1.0 - eta).max(0.0)).sqrt();
        let pad = 6.0 * sigma;
        let half_x = eta.sqrt() * base * stretch[0].sqrt() + pad;
        let half_y = eta.sqrt() * base * stretch[1].sqrt() + pad;
        let points = |half: f64| {
            if sigma > 0.0 {
                let needed = (2.0 * half / sigma).ceil() as usize + 1;
                needed.clamp(self.n, MAX_REFINEMENT * self.n)
            } else {
                self.n
            }
        };
        PhaseGrid::new(-half_x, half_x, -half_y, half_y, points(half_x), points(half_y))
    }
}

/// Sampled Wigner function on a [`PhaseGrid`].
#[derive(Debug, Clone, PartialEq)]
pub struct WignerField {
    grid: PhaseGrid,
    values: Vec<f64>,
}

impl WignerField {
    pub fn from_values(grid: PhaseGrid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::InvalidGrid("value count does not match grid size"));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidState("field contains non-finite values"));
        }
        Ok(Self { grid, values })
    }

    pub fn zeros(grid: PhaseGrid) -> Self {
        Self {
            grid,
            values: vec![0.0; grid.len()],
        }
    }

    /// Samples `f` on every node of `grid`.
    pub fn sample<F: PhaseFunction + ?Sized>(grid: PhaseGrid, f: &F) -> Result<Self> {
        let mut values = Vec::with_capacity(grid.len());
        for j in 0..grid.ny() {
            let y = grid.y(j);
            for i in 0..grid.nx() {
                values.push(f.wigner(grid.x(i), y));
            }
        }
        Self::from_values(grid, values)
    }

    pub fn grid(&self) -> &PhaseGrid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.values[self.grid.index(i, j)]
    }

    pub fn row(&self, j: usize) -> &[f64] {
        let nx = self.grid.nx();
        &self.values[j * nx..(j + 1) * nx]
    }

    pub fn min_value(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max_value(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// Pointwise `a * self + b * other` on the same grid.
    pub fn combine(&self, a: f64, other: &WignerField, b: f64) -> Result<WignerField> {
        if self.grid != other.grid {
            return Err(Error::InvalidGrid("fields live on different grids"));
        }
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(u, v)| a * u + b * v)
            .collect();
        WignerField::from_values(self.grid, values)
    }

    /// Bilinear interpolation at an arbitrary point; zero outside the grid.
    ///
    /// Only used where a field (rather than an analytic state) has to be
    /// re-evaluated at transformed coordinates.
    pub fn interpolate(&self, x: f64, y: f64) -> f64 {
        let g = &self.grid;
        let fx = (x - g.x_min) / g.hx();
        let fy = (y - g.y_min) / g.hy();
        if !(fx >= 0.0 && fy >= 0.0 && fx <= (g.nx - 1) as f64 && fy <= (g.ny - 1) as f64) {
            return 0.0;
        }
        let i = (fx.floor() as usize).min(g.nx - 2);
        let j = (fy.floor() as usize).min(g.ny - 2);
        let tx = fx - i as f64;
        let ty = fy - j as f64;
        let v00 = self.at(i, j);
        let v10 = self.at(i + 1, j);
        let v01 = self.at(i, j + 1);
        let v11 = self.at(i + 1, j + 1);
        (1.0 - ty) * ((1.0 - tx) * v00 + tx * v10) + ty * ((1.0 - tx) * v01 + tx * v11)
    }
}

impl PhaseFunction for WignerField {
    fn wigner(&self, x: f64, y: f64) -> f64 {
        self.interpolate(x, y)
    }
}

/// `sum(values) * hx * hy`.
pub fn integrate(field: &WignerField) -> f64 {
    field.values.iter().sum::<f64>() * field.grid.cell_area()
}

fn check_stencil(grid: &PhaseGrid) -> Result<()> {
    if grid.nx < MIN_STENCIL_POINTS || grid.ny < MIN_STENCIL_POINTS {
        return Err(Error::GridTooSmall {
            min: MIN_STENCIL_POINTS,
            nx: grid.nx,
            ny: grid.ny,
        });
    }
    Ok(())
}

// Second derivative of a strided 1-D line. Central in the interior,
// second-order one-sided (2, -5, 4, -1) on the two end points.
fn second_diff_line(src: &[f64], n: usize, stride: usize, offset: usize, inv_h2: f64, dst: &mut [f64]) {
    let at = |k: usize| src[offset + k * stride];
    dst[offset] = (2.0 * at(0) - 5.0 * at(1) + 4.0 * at(2) - at(3)) * inv_h2;
    for k in 1..n - 1 {
        dst[offset + k * stride] = (at(k - 1) - 2.0 * at(k) + at(k + 1)) * inv_h2;
    }
    let l = n - 1;
    dst[offset + l * stride] = (2.0 * at(l) - 5.0 * at(l - 1) + 4.0 * at(l - 2) - at(l - 3)) * inv_h2;
}

fn first_diff_line(src: &[f64], n: usize, stride: usize, offset: usize, inv_2h: f64, dst: &mut [f64]) {
    let at = |k: usize| src[offset + k * stride];
    dst[offset] = (-3.0 * at(0) + 4.0 * at(1) - at(2)) * inv_2h;
    for k in 1..n - 1 {
        dst[offset + k * stride] = (at(k + 1) - at(k - 1)) * inv_2h;
    }
    let l = n - 1;
    dst[offset + l * stride] = (3.0 * at(l) - 4.0 * at(l - 1) + at(l - 2)) * inv_2h;
}

fn d2x(field: &WignerField) -> Vec<f64> {
    let g = field.grid;
    let mut out = vec![0.0; g.len()];
    let inv = 1.0 / (g.hx() * g.hx());
    for j in 0..g.ny {
        second_diff_line(&field.values, g.nx, 1, j * g.nx, inv, &mut out);
    }
    out
}

fn d2y(field: &WignerField) -> Vec<f64> {
    let g = field.grid;
    let mut out = vec![0.0; g.len()];
    let inv = 1.0 / (g.hy() * g.hy());
    for i in 0..g.nx {
        second_diff_line(&field.values, g.ny, g.nx, i, inv, &mut out);
    }
    out
}

fn d1x(values: &[f64], g: &PhaseGrid) -> Vec<f64> {
    let mut out = vec![0.0; g.len()];
    let inv = 0.5 / g.hx();
    for j in 0..g.ny {
        first_diff_line(values, g.nx, 1, j * g.nx, inv, &mut out);
    }
    out
}

fn d1y(values: &[f64], g: &PhaseGrid) -> Vec<f64> {
    let mut out = vec![0.0; g.len()];
    let inv = 0.5 / g.hy();
    for i in 0..g.nx {
        first_diff_line(values, g.ny, g.nx, i, inv, &mut out);
    }
    out
}

/// Second-order finite-difference Laplacian on the same grid.
pub fn laplacian(field: &WignerField) -> Result<WignerField> {
    check_stencil(&field.grid)?;
    let mut xx = d2x(field);
    let yy = d2y(field);
    for (a, b) in xx.iter_mut().zip(&yy) {
        *a += b;
    }
    WignerField::from_values(field.grid, xx)
}

/// First derivatives `(d/dx, d/dy)`, central in the interior.
pub fn gradient(field: &WignerField) -> Result<(Vec<f64>, Vec<f64>)> {
    check_stencil(&field.grid)?;
    Ok((d1x(&field.values, &field.grid), d1y(&field.values, &field.grid)))
}

/// The three independent second derivatives of a field.
#[derive(Debug, Clone)]
pub struct Hessian {
    pub xx: Vec<f64>,
    pub yy: Vec<f64>,
    pub xy: Vec<f64>,
}

/// Hessian by second-order stencils. In the interior the mixed derivative is
/// the four-point cross `(f[i+1,j+1] - f[i+1,j-1] - f[i-1,j+1] + f[i-1,j-1]) / (4 hx hy)`.
pub fn hessian(field: &WignerField) -> Result<Hessian> {
    check_stencil(&field.grid)?;
    let g = field.grid;
    let dx = d1x(&field.values, &g);
    Ok(Hessian {
        xx: d2x(field),
        yy: d2y(field),
        xy: d1y(&dx, &g),
    })
}

/// Output of [`convolve_gaussian`].
#[derive(Debug, Clone, PartialEq)]
pub struct Convolved {
    pub field: WignerField,
    /// Set when the blur was narrower than half a grid step along at least one
    /// axis and that axis was left untouched.
    pub blur_skipped: bool,
}

fn gaussian_taps(sigma: f64, h: f64) -> Vec<f64> {
    let reach = (6.0 * sigma / h).floor() as usize;
    let mut taps: Vec<f64> = (0..=reach)
        .map(|t| {
            let s = t as f64 * h / sigma;
            (-0.5 * s * s).exp()
        })
        .collect();
    let total = taps[0] + 2.0 * taps[1..].iter().sum::<f64>();
    for w in &mut taps {
        *w /= total;
    }
    taps
}

/// Separable convolution with the normalized Gaussian of width `sigma`,
/// truncated at six widths and renormalized, zero-padded at the boundary.
pub fn convolve_gaussian(field: &WignerField, sigma: f64) -> Result<Convolved> {
    if !(sigma >= 0.0) {
        return Err(Error::NegativeSigma(sigma));
    }
    let g = field.grid;
    let half_extent = 0.5 * (g.x_max - g.x_min).min(g.y_max - g.y_min);
    if 6.0 * sigma > half_extent {
        return Err(Error::KernelExceedsGrid {
            reach: 6.0 * sigma,
            half_extent,
        });
    }
    let blur_x = sigma >= 0.5 * g.hx() && sigma > 0.0;
    let blur_y = sigma >= 0.5 * g.hy() && sigma > 0.0;
    let mut values = field.values.clone();
    if blur_x {
        let taps = gaussian_taps(sigma, g.hx());
        let mut row_out = vec![0.0; g.nx];
        for j in 0..g.ny {
            let row = &mut values[j * g.nx..(j + 1) * g.nx];
            convolve_line(row, &taps, &mut row_out);
            row.copy_from_slice(&row_out);
        }
    }
    if blur_y {
        let taps = gaussian_taps(sigma, g.hy());
        let src = values.clone();
        let nx = g.nx;
        for j in 0..g.ny {
            let dst = &mut values[j * nx..(j + 1) * nx];
            let centre = &src[j * nx..(j + 1) * nx];
            for (d, s) in dst.iter_mut().zip(centre) {
                *d = taps[0] * s;
            }
            for (t, &w) in taps.iter().enumerate().skip(1) {
                if j >= t {
                    let below = &src[(j - t) * nx..(j - t + 1) * nx];
                    for (d, s) in dst.iter_mut().zip(below) {
                        *d += w * s;
                    }
                }
                if j + t < g.ny {
                    let above = &src[(j + t) * nx..(j + t + 1) * nx];
                    for (d, s) in dst.iter_mut().zip(above) {
                        *d += w * s;
                    }
                }
            }
        }
    }
    Ok(Convolved {
        field: WignerField { grid: g, values },
        blur_skipped: !(blur_x && blur_y),
    })
}

fn convolve_line(src: &[f64], taps: &[f64], dst: &mut [f64]) {
    let n = src.len();
    for (k, d) in dst.iter_mut().enumerate() {
        let mut acc = taps[0] * src[k];
        for (t, &w) in taps.iter().enumerate().skip(1) {
            let lo = if k >= t { src[k - t] } else { 0.0 };
            let hi = if k + t < n { src[k + t] } else { 0.0 };
            acc += w * (lo + hi);
        }
        *d = acc;
    }
}

/// Samples `W(x / scale, y / scale) / scale^2`, the exact change of
/// variables that shrinks (`scale < 1`) or dilates a state while keeping its
/// normalization.
pub fn resample_scaled<F: PhaseFunction + ?Sized>(f: &F, grid: PhaseGrid, scale: f64) -> Result<WignerField> {
    if !(scale > 0.0) || !scale.is_finite() {
        return Err(Error::InvalidScale(scale));
    }
    let inv = 1.0 / scale;
    let density = inv * inv;
    WignerField::sample(grid, &|x: f64, y: f64| density * f.wigner(x * inv, y * inv))
}
