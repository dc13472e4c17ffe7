use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use negsqueeze_core::{GridPolicy, OptimizeConfig, StateSpec};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

#[derive(Debug, Parser)]
#[command(name = "negsqueeze", version, about = "Wigner negativity under optical loss, with and without squeezing")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Negativity, vulnerability and the optimal squeeze of one state, as JSON
    Report(ReportArgs),
    /// Loss curves and family sweeps described by a TOML config, as CSV tables
    Sweep(SweepArgs),
    /// Sampled Wigner function after optional squeezing and loss, as a CSV matrix
    FieldDump(FieldDumpArgs),
    /// Numerically optimal squeeze at one efficiency, as JSON
    Optimize(OptimizeArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StateKind {
    Vacuum,
    Coherent,
    Fock,
    Cat,
    Banana,
}

impl StateKind {
    pub fn name(self) -> &'static str {
        match self {
            StateKind::Vacuum => "vacuum",
            StateKind::Coherent => "coherent",
            StateKind::Fock => "fock",
            StateKind::Cat => "cat",
            StateKind::Banana => "banana",
        }
    }
}

/// Squeeze applied before the loss.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Policy {
    #[default]
    None,
    /// Closed-form small-loss optimum of the lossless state
    Analytic,
    /// Numerical optimum at each efficiency
    Numeric,
}

impl Policy {
    pub fn name(self) -> &'static str {
        match self {
            Policy::None => "none",
            Policy::Analytic => "analytic",
            Policy::Numeric => "numeric",
        }
    }
}

/// State selection, shared by the command line and sweep configs.
#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateArgs {
    /// State family
    #[arg(long = "state", value_enum)]
    #[serde(rename = "kind")]
    pub kind: StateKind,
    /// Coherent amplitude (coherent, cat, banana)
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    /// Photon number (fock)
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    /// Banana nonlinearity R = gamma * alpha^2
    #[arg(long = "R")]
    #[serde(default, rename = "R", skip_serializing_if = "Option::is_none")]
    pub nonlinearity: Option<f64>,
    /// Banana Kerr phase gamma, instead of --R
    #[arg(long, conflicts_with = "nonlinearity")]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
}

impl StateArgs {
    pub fn to_spec(&self) -> CliResult<StateSpec> {
        let unused = |what: &str| Err(CliError::usage(format!("{what} does not apply to {} states", self.kind.name())));
        let spec = match self.kind {
            StateKind::Vacuum | StateKind::Coherent | StateKind::Cat | StateKind::Fock
                if self.nonlinearity.is_some() || self.gamma.is_some() =>
            {
                return unused("a Kerr nonlinearity");
            }
            StateKind::Vacuum if self.alpha.is_some() => return unused("alpha"),
            StateKind::Fock if self.alpha.is_some() => return unused("alpha"),
            StateKind::Vacuum | StateKind::Coherent | StateKind::Cat | StateKind::Banana if self.n.is_some() => {
                return unused("n")
            }
            StateKind::Vacuum => StateSpec::Vacuum,
            StateKind::Coherent => StateSpec::Coherent { alpha: self.need_alpha()? },
            StateKind::Cat => StateSpec::Cat { alpha: self.need_alpha()? },
            StateKind::Fock => StateSpec::Fock {
                n: self.n.ok_or_else(|| CliError::usage("fock states need n"))?,
            },
            StateKind::Banana => {
                let alpha = self.need_alpha()?;
                match (self.nonlinearity, self.gamma) {
                    (Some(r), None) => StateSpec::banana_with_nonlinearity(alpha, r),
                    (None, Some(gamma)) => StateSpec::Banana { alpha, gamma },
                    _ => return Err(CliError::usage("banana states need exactly one of R and gamma")),
                }
            }
        };
        spec.validate()?;
        Ok(spec)
    }

    fn need_alpha(&self) -> CliResult<f64> {
        self.alpha
            .ok_or_else(|| CliError::usage(format!("{} states need alpha", self.kind.name())))
    }
}

#[derive(Debug, Clone, Default, Args)]
pub struct GridArgs {
    /// Points per axis (before refinement for the loss blur)
    #[arg(long)]
    pub grid_n: Option<usize>,
    /// Half-width of the unsqueezed support disc; default is the state's support radius + 6
    #[arg(long)]
    pub grid_extent: Option<f64>,
}

impl GridArgs {
    pub fn policy(&self) -> GridPolicy {
        let base = GridPolicy::default();
        GridPolicy {
            n: self.grid_n.unwrap_or(base.n),
            extent: self.grid_extent.or(base.extent),
        }
    }
}

#[derive(Debug, Clone, Default, Args)]
pub struct OptimizerArgs {
    /// Largest squeeze magnitude searched
    #[arg(long)]
    pub r_max: Option<f64>,
    /// Number of simplex starts
    #[arg(long)]
    pub restarts: Option<usize>,
    /// Simplex convergence tolerance on the negativity
    #[arg(long)]
    pub tol: Option<f64>,
    /// Objective evaluations per start
    #[arg(long)]
    pub max_evals: Option<usize>,
    /// Seed for the random starts
    #[arg(long)]
    pub seed: Option<u64>,
}

impl OptimizerArgs {
    /// `base` with every given flag applied.
    pub fn apply(&self, base: OptimizeConfig) -> OptimizeConfig {
        OptimizeConfig {
            r_max: self.r_max.unwrap_or(base.r_max),
            restarts: self.restarts.unwrap_or(base.restarts),
            tol: self.tol.unwrap_or(base.tol),
            max_evals: self.max_evals.unwrap_or(base.max_evals),
            seed: self.seed.unwrap_or(base.seed),
            grid: base.grid,
        }
    }
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    #[command(flatten)]
    pub state: StateArgs,
    #[command(flatten)]
    pub grid: GridArgs,
    /// Also report the negativity left at this efficiency
    #[arg(long)]
    pub eta: Option<f64>,
    /// Squeeze applied before the loss given by --eta
    #[arg(long, value_enum, default_value_t = Policy::None)]
    pub policy: Policy,
    #[command(flatten)]
    pub optimizer: OptimizerArgs,
    /// Write the report here instead of standard output
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Sweep description (TOML)
    #[arg(long)]
    pub config: PathBuf,
    #[command(flatten)]
    pub grid: GridArgs,
    /// Efficiencies for every curve and family, replacing the config's lists
    #[arg(long, value_delimiter = ',')]
    pub eta: Option<Vec<f64>>,
    /// Squeeze policy for every curve and family, replacing the config's
    #[arg(long, value_enum)]
    pub policy: Option<Policy>,
    #[command(flatten)]
    pub optimizer: OptimizerArgs,
    /// Output directory, replacing the config's
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct FieldDumpArgs {
    #[command(flatten)]
    pub state: StateArgs,
    #[command(flatten)]
    pub grid: GridArgs,
    /// Quantum efficiency of the loss
    #[arg(long, default_value_t = 1.0)]
    pub eta: f64,
    /// How to choose the squeeze when --r is not given
    #[arg(long, value_enum, default_value_t = Policy::None)]
    pub policy: Policy,
    /// Explicit squeeze magnitude
    #[arg(long, conflicts_with = "policy")]
    pub r: Option<f64>,
    /// Explicit squeeze angle (radians)
    #[arg(long, requires = "r")]
    pub phi: Option<f64>,
    #[command(flatten)]
    pub optimizer: OptimizerArgs,
    /// Output file; standard output when absent
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct OptimizeArgs {
    #[command(flatten)]
    pub state: StateArgs,
    #[command(flatten)]
    pub grid: GridArgs,
    /// Quantum efficiency, above 1/2
    #[arg(long)]
    pub eta: f64,
    #[command(flatten)]
    pub optimizer: OptimizerArgs,
    /// Write the record here instead of standard output
    #[arg(long)]
    pub out: Option<PathBuf>,
}
