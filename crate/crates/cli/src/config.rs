//! Sweep configuration files.
//!
//! Precedence, highest first: command-line flags, the config file, built-in
//! defaults. The resolved [`SweepPlan`] spells out every value the run uses
//! and is written to the run manifest.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use negsqueeze_core::phase_space::MAX_REFINEMENT;
use negsqueeze_core::{Efficiency, GridPolicy, OptimizeConfig, StateSpec};
use serde::{Deserialize, Serialize};

use crate::args::{GridArgs, OptimizerArgs, Policy, StateArgs, StateKind, SweepArgs};
use crate::error::{CliError, CliResult};

/// Margin added to a state's support radius when no extent is given.
pub const AUTO_EXTENT_MARGIN: f64 = 6.0;

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepFile {
    #[serde(default)]
    pub output: Option<PathBuf>,
    #[serde(default)]
    pub grid: GridSection,
    #[serde(default)]
    pub optimize: OptimizeSection,
    #[serde(default, rename = "curve")]
    pub curves: Vec<CurveSection>,
    #[serde(default, rename = "family")]
    pub families: Vec<FamilySection>,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSection {
    pub n: Option<usize>,
    pub extent: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OptimizeSection {
    pub r_max: Option<f64>,
    pub restarts: Option<usize>,
    pub tol: Option<f64>,
    pub max_evals: Option<usize>,
    pub seed: Option<u64>,
}

/// A list of values, or an inclusive arithmetic range.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum Values {
    List(Vec<f64>),
    Range { start: f64, stop: f64, step: f64 },
}

impl Values {
    pub fn expand(&self) -> CliResult<Vec<f64>> {
        match *self {
            Values::List(ref v) => Ok(v.clone()),
            Values::Range { start, stop, step } => {
                if !(step > 0.0) || !(stop >= start) || !start.is_finite() || !stop.is_finite() {
                    return Err(CliError::usage(format!("bad range {start}..={stop} step {step}")));
                }
                let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
                Ok((0..count).map(|k| round12(start + k as f64 * step)).collect())
            }
        }
    }
}

fn round12(x: f64) -> f64 {
    (x * 1e12).round() / 1e12
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveSection {
    pub name: Option<String>,
    pub state: StateArgs,
    #[serde(default)]
    pub policy: Policy,
    pub eta: Values,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyOutput {
    /// `param,v_neg`, one table per efficiency
    VNeg,
    /// `param,vulnerability`
    Vulnerability,
    /// `param,r_opt,phi_opt` (closed-form small-loss optimum)
    Squeeze,
    /// `param,r_numeric,r_analytic`, one table per efficiency
    RCurve,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilySection {
    pub name: Option<String>,
    pub kind: StateKind,
    pub params: Values,
    #[serde(default, rename = "R")]
    pub nonlinearity: Option<f64>,
    #[serde(default)]
    pub gamma: Option<f64>,
    #[serde(default)]
    pub eta: Option<Values>,
    #[serde(default)]
    pub policy: Policy,
    #[serde(default = "default_outputs")]
    pub outputs: Vec<FamilyOutput>,
}

fn default_outputs() -> Vec<FamilyOutput> {
    vec![FamilyOutput::VNeg]
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridPlan {
    pub n: usize,
    /// `None`: support radius plus [`AUTO_EXTENT_MARGIN`].
    pub extent: Option<f64>,
    pub auto_extent_margin: f64,
    pub max_refinement: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OptimizePlan {
    pub r_max: f64,
    pub restarts: usize,
    pub tol: f64,
    pub max_evals: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurvePlan {
    pub name: String,
    pub file: String,
    pub state: StateArgs,
    pub policy: Policy,
    pub eta: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FamilyPlan {
    pub name: String,
    pub kind: StateKind,
    pub params: Vec<f64>,
    #[serde(rename = "R", skip_serializing_if = "Option::is_none")]
    pub nonlinearity: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
    pub eta: Vec<f64>,
    pub policy: Policy,
    pub outputs: Vec<FamilyOutput>,
}

/// Fully resolved sweep.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepPlan {
    pub output: PathBuf,
    pub grid: GridPlan,
    pub optimize: OptimizePlan,
    pub curves: Vec<CurvePlan>,
    pub families: Vec<FamilyPlan>,
}

impl SweepPlan {
    pub fn grid_policy(&self) -> GridPolicy {
        GridPolicy {
            n: self.grid.n,
            extent: self.grid.extent,
        }
    }

    pub fn optimize_config(&self) -> OptimizeConfig {
        OptimizeConfig {
            r_max: self.optimize.r_max,
            restarts: self.optimize.restarts,
            tol: self.optimize.tol,
            max_evals: self.optimize.max_evals,
            seed: self.optimize.seed,
            grid: self.grid_policy(),
        }
    }
}

pub fn parse_file(path: &Path) -> CliResult<SweepFile> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    toml::from_str(&text).map_err(|e| CliError::Config {
        path: path.to_path_buf(),
        message: e.message().to_string(),
    })
}

pub const DEFAULT_OUTPUT: &str = "out";

/// Resolves `file` against the command-line overrides in `args`.
pub fn resolve(file: SweepFile, args: &SweepArgs) -> CliResult<SweepPlan> {
    let grid = GridArgs {
        grid_n: args.grid.grid_n.or(file.grid.n),
        grid_extent: args.grid.grid_extent.or(file.grid.extent),
    }
    .policy();
    let optimize = OptimizerArgs {
        r_max: args.optimizer.r_max.or(file.optimize.r_max),
        restarts: args.optimizer.restarts.or(file.optimize.restarts),
        tol: args.optimizer.tol.or(file.optimize.tol),
        max_evals: args.optimizer.max_evals.or(file.optimize.max_evals),
        seed: args.optimizer.seed.or(file.optimize.seed),
    }
    .apply(OptimizeConfig {
        grid,
        ..OptimizeConfig::default()
    });
    optimize.validate()?;
    if let Some(extent) = grid.extent {
        if !(extent > 0.0) {
            return Err(CliError::usage("grid extent must be positive"));
        }
    }

    let eta_override = args.eta.clone();
    let mut curves = Vec::new();
    for c in file.curves {
        let spec = c.state.to_spec()?;
        let policy = args.policy.unwrap_or(c.policy);
        let eta = match &eta_override {
            Some(v) => v.clone(),
            None => c.eta.expand()?,
        };
        check_etas(&eta)?;
        let name = c.name.unwrap_or_else(|| format!("{}_{}", state_label(&spec), policy.name()));
        curves.push(CurvePlan {
            file: format!("{name}.csv"),
            name,
            state: c.state,
            policy,
            eta,
        });
    }

    let mut families = Vec::new();
    for f in file.families {
        let params = f.params.expand()?;
        if params.is_empty() {
            return Err(CliError::usage("family parameter list is empty"));
        }
        let eta = match (&eta_override, &f.eta) {
            (Some(v), _) => v.clone(),
            (None, Some(v)) => v.expand()?,
            (None, None) => vec![1.0],
        };
        check_etas(&eta)?;
        let mut outputs = f.outputs.clone();
        outputs.sort();
        outputs.dedup();
        if outputs.contains(&FamilyOutput::RCurve) && eta.iter().any(|&e| e <= 0.5) {
            return Err(CliError::usage("r_curve outputs need every efficiency above 1/2"));
        }
        let plan = FamilyPlan {
            name: String::new(),
            kind: f.kind,
            params,
            nonlinearity: f.nonlinearity,
            gamma: f.gamma,
            eta,
            policy: args.policy.unwrap_or(f.policy),
            outputs,
        };
        for &p in &plan.params {
            family_state(&plan, p)?;
        }
        let name = f.name.unwrap_or_else(|| match plan.nonlinearity {
            Some(r) => format!("{}_R{r}", plan.kind.name()),
            None => plan.kind.name().to_string(),
        });
        families.push(FamilyPlan { name, ..plan });
    }

    if curves.is_empty() && families.is_empty() {
        return Err(CliError::usage("sweep config defines no [[curve]] or [[family]]"));
    }
    let plan = SweepPlan {
        output: args
            .out
            .clone()
            .or(file.output)
            .unwrap_or_else(|| PathBuf::from(DEFAULT_OUTPUT)),
        grid: GridPlan {
            n: grid.n,
            extent: grid.extent,
            auto_extent_margin: AUTO_EXTENT_MARGIN,
            max_refinement: MAX_REFINEMENT,
        },
        optimize: OptimizePlan {
            r_max: optimize.r_max,
            restarts: optimize.restarts,
            tol: optimize.tol,
            max_evals: optimize.max_evals,
            seed: optimize.seed,
        },
        curves,
        families,
    };
    let mut seen = BTreeSet::new();
    for file in output_files(&plan) {
        if !seen.insert(file.clone()) {
            return Err(CliError::usage(format!("two outputs would both be written to {file}")));
        }
    }
    Ok(plan)
}

fn check_etas(etas: &[f64]) -> CliResult<()> {
    if etas.is_empty() {
        return Err(CliError::usage("efficiency list is empty"));
    }
    for &e in etas {
        Efficiency::new(e)?;
    }
    Ok(())
}

/// Member of a family at parameter `p`.
pub fn family_state(family: &FamilyPlan, p: f64) -> CliResult<StateSpec> {
    let n = if family.kind == StateKind::Fock {
        if p < 0.0 || p.fract() != 0.0 {
            return Err(CliError::usage(format!("fock family parameter {p} is not a photon number")));
        }
        Some(p as usize)
    } else {
        None
    };
    let args = StateArgs {
        kind: family.kind,
        alpha: if n.is_none() { Some(p) } else { None },
        n,
        nonlinearity: family.nonlinearity,
        gamma: family.gamma,
    };
    if family.kind == StateKind::Vacuum {
        return Err(CliError::usage("the vacuum has no family parameter"));
    }
    args.to_spec()
}

/// File-name label of a state, e.g. `cat_alpha3.6`.
pub fn state_label(state: &StateSpec) -> String {
    match state {
        StateSpec::Vacuum => "vacuum".into(),
        StateSpec::Coherent { alpha } => format!("coherent_alpha{alpha}"),
        StateSpec::Fock { n } => format!("fock_n{n}"),
        StateSpec::Cat { alpha } => format!("cat_alpha{alpha}"),
        StateSpec::Banana { alpha, .. } => {
            format!("banana_alpha{alpha}_R{}", round12(state.nonlinearity().unwrap_or(0.0)))
        }
        StateSpec::FockSuperposition { .. } => "superposition".into(),
    }
}

pub fn family_v_neg_file(family: &FamilyPlan, eta: f64) -> String {
    format!("{}_v_neg_eta{eta}.csv", family.name)
}

pub fn family_r_curve_file(family: &FamilyPlan, eta: f64) -> String {
    format!("{}_r_curve_eta{eta}.csv", family.name)
}

pub fn family_vulnerability_file(family: &FamilyPlan) -> String {
    format!("{}_vulnerability.csv", family.name)
}

pub fn family_squeeze_file(family: &FamilyPlan) -> String {
    format!("{}_squeeze.csv", family.name)
}

/// Every table file the plan writes, in output order.
pub fn output_files(plan: &SweepPlan) -> Vec<String> {
    let mut files: Vec<String> = plan.curves.iter().map(|c| c.file.clone()).collect();
    for f in &plan.families {
        for out in &f.outputs {
            match out {
                FamilyOutput::VNeg => files.extend(f.eta.iter().map(|&e| family_v_neg_file(f, e))),
                FamilyOutput::Vulnerability => files.push(family_vulnerability_file(f)),
                FamilyOutput::Squeeze => files.push(family_squeeze_file(f)),
                FamilyOutput::RCurve => files.extend(f.eta.iter().map(|&e| family_r_curve_file(f, e))),
            }
        }
    }
    files
}
