use thiserror::Error;

/// Failures raised by grid construction, state evaluation, the loss channel
/// and the squeeze solver.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(&'static str),
    #[error("grid too small for stencil: need at least {min} points per axis, got {nx}x{ny}")]
    GridTooSmall { min: usize, nx: usize, ny: usize },
    #[error("blur kernel 6*sigma = {reach} exceeds half the grid extent {half_extent}")]
    KernelExceedsGrid { reach: f64, half_extent: f64 },
    #[error("blur sigma {sigma} is below half the grid spacing {half_spacing}; refine the grid")]
    BlurUnderResolved { sigma: f64, half_spacing: f64 },
    #[error("negative blur width {0}")]
    NegativeSigma(f64),
    #[error("scale factor must be positive, got {0}")]
    InvalidScale(f64),
    #[error("quantum efficiency must lie in (0, 1], got {0}")]
    InvalidEfficiency(f64),
    #[error("Fock order {n} exceeds the supported maximum {max}")]
    OrderTooLarge { n: usize, max: usize },
    #[error("amplitude {alpha} exceeds the Fock truncation budget (max {max})")]
    TruncationBudget { alpha: f64, max: f64 },
    #[error("invalid state: {0}")]
    InvalidState(&'static str),
    #[error("squeeze parameters invalid: {0}")]
    InvalidSqueeze(&'static str),
    #[error("d0 = {0} is not positive: no curved negative region to optimize")]
    DegenerateFlat(f64),
    #[error("optimal squeeze diverges: d0 - sqrt(d1^2 + d3^2) = {gap} is not positive")]
    UnboundedSqueeze { gap: f64 },
    #[error("invalid optimizer configuration: {0}")]
    InvalidConfig(&'static str),
}

impl Error {
    /// Stable variant name, used on diagnostic streams.
    pub fn name(&self) -> &'static str {
        match self {
            Error::InvalidGrid(_) => "InvalidGrid",
            Error::GridTooSmall { .. } => "GridTooSmall",
            Error::KernelExceedsGrid { .. } => "KernelExceedsGrid",
            Error::BlurUnderResolved { .. } => "BlurUnderResolved",
            Error::NegativeSigma(_) => "NegativeSigma",
            Error::InvalidScale(_) => "InvalidScale",
            Error::InvalidEfficiency(_) => "InvalidEfficiency",
            Error::OrderTooLarge { .. } => "OrderTooLarge",
            Error::TruncationBudget { .. } => "TruncationBudget",
            Error::InvalidState(_) => "InvalidState",
            Error::InvalidSqueeze(_) => "InvalidSqueeze",
            Error::DegenerateFlat(_) => "DegenerateFlat",
            Error::UnboundedSqueeze { .. } => "UnboundedSqueeze",
            Error::InvalidConfig(_) => "InvalidConfig",
        }
    }

    /// True for errors that come from bad inputs rather than from the numerics.
    pub fn is_usage(&self) -> bool {
        matches!(
            self,
            Error::InvalidGrid(_)
                | Error::InvalidScale(_)
                | Error::InvalidEfficiency(_)
                | Error::OrderTooLarge { .. }
                | Error::TruncationBudget { .. }
                | Error::InvalidState(_)
                | Error::InvalidSqueeze(_)
                | Error::InvalidConfig(_)
                | Error::NegativeSigma(_)
        )
    }
}

pub type Result<T> = core::result::Result<T, Error>;
