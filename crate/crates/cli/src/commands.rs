use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use negsqueeze_core::{
    analytic_presqueeze, apply_loss_with, build_field, d_coefficients, grid_for, lossy_negativity, negativity_curve,
    negativity_volume, optimal_r_curve, optimize_squeeze_at_loss, presqueeze_from, squeezed_vulnerability, DCoefficients, Efficiency,
    GridPolicy, OptimizeConfig, OptimumRecord, PhaseGrid, SqueezeParams, SqueezePolicy, Squeezed, StateSpec,
    VulnerabilityReport,
};
use rayon::prelude::*;
use serde::Serialize;

use crate::args::{FieldDumpArgs, OptimizeArgs, Policy, ReportArgs, StateArgs, SweepArgs};
use crate::config::{self, FamilyOutput, SweepPlan};
use crate::error::{CliError, CliResult};
use crate::table::{matrix_csv, Table};

/// Environment variable holding the worker count for sweeps.
pub const WORKERS_ENV: &str = "NEGSQUEEZE_WORKERS";

pub fn worker_pool() -> CliResult<rayon::ThreadPool> {
    let workers = match std::env::var(WORKERS_ENV) {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => n,
            _ => return Err(CliError::usage(format!("{WORKERS_ENV} must be a positive integer, got {v:?}"))),
        },
        Err(_) => 0,
    };
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| CliError::usage(format!("cannot start worker pool: {e}")))
}

#[derive(Debug, Clone, Serialize)]
pub struct GridInfo {
    pub grid_n: usize,
    pub grid_extent: Option<f64>,
    pub grid_nx: usize,
    pub grid_ny: usize,
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
    pub hx: f64,
    pub hy: f64,
}

impl GridInfo {
    fn new(policy: &GridPolicy, g: &PhaseGrid) -> Self {
        Self {
            grid_n: policy.n,
            grid_extent: policy.extent,
            grid_nx: g.nx(),
            grid_ny: g.ny(),
            x_min: g.x_min(),
            x_max: g.x_max(),
            y_min: g.y_min(),
            y_max: g.y_max(),
            hx: g.hx(),
            hy: g.hy(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct LossyReport {
    pub eta: f64,
    pub policy: Policy,
    pub v_neg_lossy: f64,
    pub r_applied: f64,
    pub phi_applied: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    #[serde(flatten)]
    pub state: StateArgs,
    pub v_neg: f64,
    pub d0: f64,
    pub d1: f64,
    pub d3: f64,
    pub v_org: f64,
    pub v_sqz: f64,
    pub r_opt: f64,
    pub phi_opt: f64,
    pub degenerate: bool,
    #[serde(flatten)]
    pub grid: GridInfo,
    #[serde(flatten)]
    pub lossy: Option<LossyReport>,
}

/// Squeeze chosen by `policy` at efficiency `eta`, with the optimizer record
/// when one ran. `d` is the lossless coefficient set, if already known.
fn policy_squeeze(
    state: &StateSpec,
    policy: Policy,
    eta: Efficiency,
    grid: &GridPolicy,
    optimizer: &OptimizeConfig,
    d: Option<&DCoefficients>,
) -> CliResult<(SqueezeParams, Option<OptimumRecord>)> {
    Ok(match policy {
        Policy::None => (SqueezeParams::IDENTITY, None),
        Policy::Analytic => match d {
            Some(d) => (presqueeze_from(d)?, None),
            None => (analytic_presqueeze(state, grid)?, None),
        },
        Policy::Numeric if eta.value() <= 0.5 => (SqueezeParams::IDENTITY, None),
        Policy::Numeric => {
            let rec = optimize_squeeze_at_loss(state, eta, optimizer)?;
            (rec.params, Some(rec))
        }
    })
}

pub fn report(args: &ReportArgs) -> CliResult<()> {
    let state = args.state.to_spec()?;
    let grid = args.grid.policy();
    let optimizer = args.optimizer.apply(OptimizeConfig {
        grid,
        ..OptimizeConfig::default()
    });
    optimizer.validate()?;
    let g = grid_for(&grid, &state, None, 1.0)?;
    let field = build_field(&state, g)?;
    let v_neg = negativity_volume(&field).v_neg;
    let vr = VulnerabilityReport::from_field(&field)?;
    let lossy = match args.eta {
        None => None,
        Some(e) => {
            let eta = Efficiency::new(e)?;
            let (params, rec) = policy_squeeze(&state, args.policy, eta, &grid, &optimizer, Some(&vr.d))?;
            let v = match rec {
                Some(rec) => rec.v_neg,
                None => lossy_negativity(&state, params, eta, &grid)?,
            };
            Some(LossyReport {
                eta: e,
                policy: args.policy,
                v_neg_lossy: v,
                r_applied: params.r(),
                phi_applied: params.phi(),
            })
        }
    };
    let doc = Report {
        state: args.state.clone(),
        v_neg,
        d0: vr.d.d0,
        d1: vr.d.d1,
        d3: vr.d.d3,
        v_org: vr.v_org,
        v_sqz: vr.v_sqz,
        r_opt: vr.params.r(),
        phi_opt: vr.params.phi(),
        degenerate: vr.degenerate,
        grid: GridInfo::new(&grid, &g),
        lossy,
    };
    emit_json(&doc, args.out.as_deref())
}

#[derive(Debug, Clone, Serialize)]
pub struct OptimizeRecord {
    #[serde(flatten)]
    pub state: StateArgs,
    pub eta: f64,
    pub r: f64,
    pub phi: f64,
    pub v_neg: f64,
    pub v_neg_unsqueezed: f64,
    pub evals: usize,
    pub converged: bool,
    pub r_max: f64,
    pub restarts: usize,
    pub tol: f64,
    pub max_evals: usize,
    pub seed: u64,
    pub grid_n: usize,
    pub grid_extent: Option<f64>,
}

pub fn optimize(args: &OptimizeArgs) -> CliResult<()> {
    let state = args.state.to_spec()?;
    let grid = args.grid.policy();
    let config = args.optimizer.apply(OptimizeConfig {
        grid,
        ..OptimizeConfig::default()
    });
    let eta = Efficiency::new(args.eta)?;
    let rec = optimize_squeeze_at_loss(&state, eta, &config)?;
    let doc = OptimizeRecord {
        state: args.state.clone(),
        eta: args.eta,
        r: rec.params.r(),
        phi: rec.params.phi(),
        v_neg: rec.v_neg,
        v_neg_unsqueezed: lossy_negativity(&state, SqueezeParams::IDENTITY, eta, &grid)?,
        evals: rec.evals,
        converged: rec.converged,
        r_max: config.r_max,
        restarts: config.restarts,
        tol: config.tol,
        max_evals: config.max_evals,
        seed: config.seed,
        grid_n: grid.n,
        grid_extent: grid.extent,
    };
    emit_json(&doc, args.out.as_deref())
}

pub fn field_dump(args: &FieldDumpArgs) -> CliResult<()> {
    let state = args.state.to_spec()?;
    let grid = args.grid.policy();
    let eta = Efficiency::new(args.eta)?;
    let optimizer = args.optimizer.apply(OptimizeConfig {
        grid,
        ..OptimizeConfig::default()
    });
    optimizer.validate()?;
    let params = match args.r {
        Some(r) => SqueezeParams::new(r, args.phi.unwrap_or(0.0))?,
        None => policy_squeeze(&state, args.policy, eta, &grid, &optimizer, None)?.0,
    };
    let g = grid_for(&grid, &state, Some(params), eta.value())?;
    let eval = state.evaluator()?;
    let field = apply_loss_with(&Squeezed::new(&eval, params), g, eta)?;
    let xs: Vec<f64> = g.xs().collect();
    let ys: Vec<f64> = g.ys().collect();
    let text = matrix_csv(&xs, &ys, field.values());
    match &args.out {
        Some(path) => write_all(&[(path.clone(), text)]),
        None => print_stdout(&text),
    }
}

fn emit_json<T: Serialize>(doc: &T, out: Option<&Path>) -> CliResult<()> {
    let mut text = serde_json::to_string_pretty(doc).expect("report types serialize");
    text.push('\n');
    match out {
        Some(path) => write_all(&[(path.to_path_buf(), text)]),
        None => print_stdout(&text),
    }
}

fn print_stdout(text: &str) -> CliResult<()> {
    let mut stdout = std::io::stdout().lock();
    stdout
        .write_all(text.as_bytes())
        .and_then(|_| stdout.flush())
        .map_err(|e| CliError::io("<stdout>", e))
}

/// Writes every file or none: on the first failure, files already written
/// by this call are removed.
pub fn write_all(files: &[(PathBuf, String)]) -> CliResult<()> {
    let mut written: Vec<&Path> = Vec::new();
    for (path, text) in files {
        let result = path
            .parent()
            .filter(|p| !p.as_os_str().is_empty())
            .map_or(Ok(()), fs::create_dir_all)
            .and_then(|_| fs::write(path, text));
        if let Err(e) = result {
            for done in written {
                let _ = fs::remove_file(done);
            }
            let _ = fs::remove_file(path);
            return Err(CliError::io(path, e));
        }
        written.push(path);
    }
    Ok(())
}

#[derive(Debug, Clone, Serialize)]
pub struct Manifest<'a> {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'static str,
    pub config_file: &'a Path,
    pub workers: usize,
    pub workers_env: &'static str,
    pub plan: &'a SweepPlan,
    pub outputs: Vec<String>,
}

pub const MANIFEST_FILE: &str = "manifest.json";

pub fn sweep(args: &SweepArgs) -> CliResult<()> {
    let file = config::parse_file(&args.config)?;
    let plan = config::resolve(file, args)?;
    let pool = worker_pool()?;
    let tables = pool.install(|| run_plan(&plan))?;
    let mut files: Vec<(PathBuf, String)> = tables
        .iter()
        .map(|(name, table)| (plan.output.join(name), table.to_csv()))
        .collect();
    let manifest = Manifest {
        tool: env!("CARGO_PKG_NAME"),
        version: env!("CARGO_PKG_VERSION"),
        command: "sweep",
        config_file: &args.config,
        workers: pool.current_num_threads(),
        workers_env: WORKERS_ENV,
        plan: &plan,
        outputs: tables.iter().map(|(name, _)| name.clone()).collect(),
    };
    let mut text = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
    text.push('\n');
    files.push((plan.output.join(MANIFEST_FILE), text));
    write_all(&files)?;
    for (name, _) in &tables {
        eprintln!("wrote {}", plan.output.join(name).display());
    }
    Ok(())
}

enum Job {
    Curve { curve: usize, eta: usize },
    FamilyVNeg { family: usize, param: usize, eta: usize },
    RCurve { family: usize, param: usize, eta: usize },
}

enum JobResult {
    Value(f64),
    RPoint { r_numeric: f64, r_analytic: f64 },
}

struct Lossless {
    d: DCoefficients,
    params: SqueezeParams,
}

/// Computes every table of `plan` in memory, in [`config::output_files`]
/// order. Runs on the current rayon pool.
pub fn run_plan(plan: &SweepPlan) -> CliResult<Vec<(String, Table)>> {
    let grid = plan.grid_policy();
    let optimizer = plan.optimize_config();

    let curve_states: Vec<StateSpec> = plan.curves.iter().map(|c| c.state.to_spec()).collect::<CliResult<_>>()?;
    let family_states: Vec<Vec<StateSpec>> = plan
        .families
        .iter()
        .map(|f| f.params.iter().map(|&p| config::family_state(f, p)).collect::<CliResult<Vec<_>>>())
        .collect::<CliResult<_>>()?;

    let lossless = |s: &StateSpec| -> CliResult<Lossless> {
        let field = build_field(s, grid_for(&grid, s, None, 1.0)?)?;
        let d = d_coefficients(&field)?;
        Ok(Lossless {
            params: presqueeze_from(&d)?,
            d,
        })
    };
    let curve_pre: Vec<Option<Lossless>> = plan
        .curves
        .par_iter()
        .zip(curve_states.par_iter())
        .map(|(c, s)| match c.policy {
            Policy::Analytic => lossless(s).map(Some),
            _ => Ok(None),
        })
        .collect::<CliResult<_>>()?;
    let family_pre: Vec<Vec<Option<Lossless>>> = plan
        .families
        .iter()
        .zip(&family_states)
        .map(|(f, states)| {
            let needed = f.outputs.contains(&FamilyOutput::Vulnerability)
                || f.outputs.contains(&FamilyOutput::Squeeze)
                || (f.policy == Policy::Analytic && f.outputs.contains(&FamilyOutput::VNeg));
            states
                .par_iter()
                .map(|s| if needed { lossless(s).map(Some) } else { Ok(None) })
                .collect::<CliResult<Vec<_>>>()
        })
        .collect::<CliResult<_>>()?;

    let mut jobs = Vec::new();
    for (ci, c) in plan.curves.iter().enumerate() {
        jobs.extend((0..c.eta.len()).map(|k| Job::Curve { curve: ci, eta: k }));
    }
    for (fi, f) in plan.families.iter().enumerate() {
        for pi in 0..f.params.len() {
            for k in 0..f.eta.len() {
                if f.outputs.contains(&FamilyOutput::VNeg) {
                    jobs.push(Job::FamilyVNeg {
                        family: fi,
                        param: pi,
                        eta: k,
                    });
                }
                if f.outputs.contains(&FamilyOutput::RCurve) {
                    jobs.push(Job::RCurve {
                        family: fi,
                        param: pi,
                        eta: k,
                    });
                }
            }
        }
    }

    let point = |state: &StateSpec, policy: Policy, pre: Option<&Lossless>, e: f64| -> CliResult<f64> {
        let eta = Efficiency::new(e)?;
        Ok(match policy {
            Policy::None => lossy_negativity(state, SqueezeParams::IDENTITY, eta, &grid)?,
            Policy::Analytic => {
                let params = pre.map(|p| p.params).expect("analytic points are prepared");
                lossy_negativity(state, params, eta, &grid)?
            }
            Policy::Numeric => {
                negativity_curve(state, &[eta], &SqueezePolicy::PerEtaOptimized(optimizer.clone()), &grid)?[0].v_neg
            }
        })
    };
    let results: Vec<JobResult> = jobs
        .par_iter()
        .map(|job| -> CliResult<JobResult> {
            match *job {
                Job::Curve { curve, eta } => {
                    let c = &plan.curves[curve];
                    point(&curve_states[curve], c.policy, curve_pre[curve].as_ref(), c.eta[eta]).map(JobResult::Value)
                }
                Job::FamilyVNeg { family, param, eta } => {
                    let f = &plan.families[family];
                    point(
                        &family_states[family][param],
                        f.policy,
                        family_pre[family][param].as_ref(),
                        f.eta[eta],
                    )
                    .map(JobResult::Value)
                }
                Job::RCurve { family, param, eta } => {
                    let f = &plan.families[family];
                    let state = &family_states[family][param];
                    let p = optimal_r_curve(std::slice::from_ref(state), Efficiency::new(f.eta[eta])?, &optimizer)?[0];
                    Ok(JobResult::RPoint {
                        r_numeric: p.r_numeric,
                        r_analytic: p.r_analytic,
                    })
                }
            }
        })
        .collect::<CliResult<_>>()?;

    let mut results = jobs.iter().zip(results);
    let mut curve_tables: Vec<Table> = plan.curves.iter().map(|_| Table::new(&["eta", "v_neg"])).collect();
    let mut v_neg_tables: Vec<Vec<Table>> = plan
        .families
        .iter()
        .map(|f| f.eta.iter().map(|_| Table::new(&["param", "v_neg"])).collect())
        .collect();
    let mut r_tables: Vec<Vec<Table>> = plan
        .families
        .iter()
        .map(|f| f.eta.iter().map(|_| Table::new(&["param", "r_numeric", "r_analytic"])).collect())
        .collect();
    for (job, result) in &mut results {
        match (job, result) {
            (Job::Curve { curve, eta }, JobResult::Value(v)) => {
                curve_tables[*curve].push(vec![plan.curves[*curve].eta[*eta], v])
            }
            (Job::FamilyVNeg { family, param, eta }, JobResult::Value(v)) => {
                v_neg_tables[*family][*eta].push(vec![plan.families[*family].params[*param], v])
            }
            (Job::RCurve { family, param, eta }, JobResult::RPoint { r_numeric, r_analytic }) => {
                r_tables[*family][*eta].push(vec![plan.families[*family].params[*param], r_numeric, r_analytic])
            }
            _ => unreachable!("job and result kinds always match"),
        }
    }

    let mut out = Vec::new();
    for (c, t) in plan.curves.iter().zip(curve_tables) {
        out.push((c.file.clone(), t));
    }
    for (fi, f) in plan.families.iter().enumerate() {
        for o in &f.outputs {
            match o {
                FamilyOutput::VNeg => {
                    for (k, t) in std::mem::take(&mut v_neg_tables[fi]).into_iter().enumerate() {
                        out.push((config::family_v_neg_file(f, f.eta[k]), t));
                    }
                }
                FamilyOutput::Vulnerability => {
                    let mut t = Table::new(&["param", "vulnerability"]);
                    for (p, pre) in f.params.iter().zip(&family_pre[fi]) {
                        let d = &pre.as_ref().expect("prepared").d;
                        t.push(vec![*p, squeezed_vulnerability(d, SqueezeParams::IDENTITY)]);
                    }
                    out.push((config::family_vulnerability_file(f), t));
                }
                FamilyOutput::Squeeze => {
                    let mut t = Table::new(&["param", "r_opt", "phi_opt"]);
                    for (p, pre) in f.params.iter().zip(&family_pre[fi]) {
                        let params = pre.as_ref().expect("prepared").params;
                        t.push(vec![*p, params.r(), params.phi()]);
                    }
                    out.push((config::family_squeeze_file(f), t));
                }
                FamilyOutput::RCurve => {
                    for (k, t) in std::mem::take(&mut r_tables[fi]).into_iter().enumerate() {
                        out.push((config::family_r_curve_file(f, f.eta[k]), t));
                    }
                }
            }
        }
    }
    debug_assert_eq!(
        out.iter().map(|(n, _)| n.clone()).collect::<Vec<_>>(),
        config::output_files(plan)
    );
    Ok(out)
}
