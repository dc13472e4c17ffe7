//! Phase-space tools for measuring how optical loss erodes the negative part
//! of a Wigner function, and for choosing the squeeze that slows it down.
//!
//! The crate is `no_std` (it needs `alloc`). Everything is a pure function of
//! its inputs: states are described by [`StateSpec`], sampled on a
//! [`PhaseGrid`] into a [`WignerField`], sent through the loss channel with
//! [`apply_loss`], and measured with [`negativity_volume`] and
//! [`d_coefficients`]. [`optimal_squeeze`] gives the closed-form squeeze that
//! minimizes the small-loss vulnerability; [`optimize_squeeze_at_loss`]
//! searches numerically at finite loss.
#![no_std]

extern crate alloc;

pub mod error;
pub mod loss;
pub mod negativity;
pub mod optimize;
pub mod phase_space;
pub mod special;
pub mod squeeze;
pub mod states;

pub use error::{Error, Result};
pub use loss::{apply_loss, apply_loss_to_field, apply_loss_with, decay_rate, negativity_derivative, Efficiency};
pub use negativity::{
    analytic_presqueeze, lossy_negativity, negativity_curve, negativity_volume, presqueeze_from, taylor_estimate,
    CurvePoint, NegativityResult, SqueezePolicy,
};
pub use optimize::{
    family_parameter, nelder_mead, optimal_r_curve, optimize_squeeze_at_loss, OptimizeConfig, OptimumRecord,
    RCurvePoint,
};
pub use phase_space::{
    convolve_gaussian, integrate, laplacian, resample_scaled, GridPolicy, PhaseFunction, PhaseGrid, WignerField,
};
pub use squeeze::{
    apply_squeeze, d_coefficients, grid_for, optimal_squeeze, squeezed_vulnerability, vulnerability, DCoefficients,
    OptimalSqueeze, SqueezeParams, Squeezed, VulnerabilityReport,
};
pub use states::{banana_wigner, build_field, cat_wigner, fock_wigner, StateSpec, WignerEvaluator};

pub use num_complex::Complex64;
