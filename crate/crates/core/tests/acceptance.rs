//! Acceptance criteria. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any fails.

mod common;

use std::f64::consts::{FRAC_1_PI, PI};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use negsqueeze_core::{
    apply_loss, apply_squeeze, build_field, d_coefficients, decay_rate, grid_for, negativity_curve, negativity_volume,
    optimal_squeeze, squeezed_vulnerability, vulnerability, DCoefficients, Efficiency, GridPolicy, OptimizeConfig,
    PhaseGrid, SqueezeParams, SqueezePolicy, StateSpec, WignerField,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict {
        pass,
        detail: detail.into(),
    }
}

fn eta(v: f64) -> Efficiency {
    Efficiency::new(v).unwrap()
}

fn lossless(state: &StateSpec) -> WignerField {
    build_field(state, grid_for(&GridPolicy::default(), state, None, 1.0).unwrap()).unwrap()
}

fn v_neg_at(state: &StateSpec, grid: PhaseGrid, e: f64) -> f64 {
    negativity_volume(&apply_loss(state, grid, eta(e)).unwrap()).v_neg
}

fn fock(n: usize) -> StateSpec {
    StateSpec::Fock { n }
}

fn cat(alpha: f64) -> StateSpec {
    StateSpec::Cat { alpha }
}

fn banana() -> StateSpec {
    StateSpec::banana_with_nonlinearity(5.0, 1.5)
}

fn fock_one_negativity() -> Verdict {
    let oracle = common::fock1_negativity_oracle();
    let closed = 2.0 * (-0.5f64).exp() - 1.0;
    let start = Instant::now();
    let f = build_field(&fock(1), PhaseGrid::square(6.0, 512).unwrap()).unwrap();
    let v = negativity_volume(&f).v_neg;
    let elapsed = start.elapsed();
    let pass = (oracle - closed).abs() < 1e-10 && (v - closed).abs() < 1e-3 && elapsed < Duration::from_secs(5);
    verdict(pass, format!("v_neg={v:.7} target={closed:.7} radial-oracle={oracle:.7} in {elapsed:.2?}"))
}

fn cat_asymptote() -> Verdict {
    let start = Instant::now();
    let v = negativity_volume(&lossless(&cat(4.0))).v_neg;
    let elapsed = start.elapsed();
    let rel = (v - FRAC_1_PI).abs() / FRAC_1_PI;
    verdict(
        rel < 0.02 && elapsed < Duration::from_secs(10),
        format!("v_neg={v:.5} vs 1/pi, rel err {rel:.2e} in {elapsed:.2?}"),
    )
}

fn husimi_positivity() -> Verdict {
    let mut worst_min: f64 = f64::INFINITY;
    let mut worst_v: f64 = 0.0;
    for s in [fock(1), fock(2), fock(3), fock(4), cat(3.6)] {
        let g = grid_for(&GridPolicy::default(), &s, None, 1.0).unwrap();
        worst_min = worst_min.min(apply_loss(&s, g, eta(0.5)).unwrap().min_value());
        for &e in &[0.40, 0.45, 0.50] {
            worst_v = worst_v.max(v_neg_at(&s, g, e));
        }
    }
    verdict(
        worst_min >= -1e-4 && worst_v <= 1e-4,
        format!("min W at eta=0.5: {worst_min:.2e}; max v_neg for eta<=0.5: {worst_v:.2e}"),
    )
}

fn interior_rel_err(a: &WignerField, b: &WignerField) -> f64 {
    let g = a.grid();
    let (hx, hy) = (0.4 * (g.x_max() - g.x_min()), 0.4 * (g.y_max() - g.y_min()));
    let mut diff: f64 = 0.0;
    let mut scale: f64 = 0.0;
    for j in 0..g.ny() {
        for i in 0..g.nx() {
            if g.x(i).abs() <= hx && g.y(j).abs() <= hy {
                diff = diff.max((a.at(i, j) - b.at(i, j)).abs());
                scale = scale.max(b.at(i, j).abs());
            }
        }
    }
    diff / scale
}

fn derivative_consistency() -> Verdict {
    let delta = 1e-3;
    let mut worst_rate: f64 = 0.0;
    for s in [fock(1), fock(2), fock(3), cat(2.0)] {
        let g = grid_for(&GridPolicy::default(), &s, None, 1.0).unwrap();
        for &e in &[0.8, 0.9, 1.0] {
            let (lo, hi) = if e == 1.0 { (e - delta, e) } else { (e - delta, e + delta) };
            let a = apply_loss(&s, g, eta(lo)).unwrap();
            let b = apply_loss(&s, g, eta(hi)).unwrap();
            let fd = b.combine(1.0 / (hi - lo), &a, -1.0 / (hi - lo)).unwrap();
            let rate = decay_rate(&apply_loss(&s, g, eta(e)).unwrap(), eta(e)).unwrap();
            worst_rate = worst_rate.max(interior_rel_err(&rate, &fd));
        }
    }
    let mut worst_v: f64 = 0.0;
    for n in 1..=3 {
        let s = fock(n);
        let g = grid_for(&GridPolicy::default(), &s, None, 1.0).unwrap();
        let slope = (v_neg_at(&s, g, 1.0) - v_neg_at(&s, g, 1.0 - delta)) / delta;
        let v = vulnerability(&build_field(&s, g).unwrap()).unwrap();
        worst_v = worst_v.max((v - slope).abs() / slope.abs());
    }
    verdict(
        worst_rate < 0.01 && worst_v < 0.02,
        format!("decay-rate interior err {worst_rate:.2e} (<1e-2); vulnerability vs slope {worst_v:.2e} (<2e-2)"),
    )
}

fn squeeze_algebra() -> Verdict {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let (mut worst_closed, mut worst_brute): (f64, f64) = (0.0, 0.0);
    for _ in 0..100 {
        let d0 = rng.gen_range(0.1..50.0);
        // 400x400 grid error bound 2 dphi^2 rho^2 / (1 - rho^2) + 2 dr^2 < 1e-4 needs rho < 0.84
        let aniso = d0 * rng.gen_range(0.0..0.8);
        let angle: f64 = rng.gen_range(0.0..2.0 * PI);
        let d = DCoefficients::new(d0, aniso * angle.sin(), aniso * angle.cos());
        let opt = optimal_squeeze(&d).unwrap();
        let at_opt = squeezed_vulnerability(&d, opt.params);
        let closed = 0.25 * (d0 * d0 - d.d1 * d.d1 - d.d3 * d.d3).sqrt();
        worst_closed = worst_closed.max((at_opt - closed).abs() / closed);
        let mut brute = f64::INFINITY;
        for a in 0..400 {
            let r = 3.0 * a as f64 / 399.0;
            for b in 0..400 {
                let phi = PI * b as f64 / 400.0;
                brute = brute.min(squeezed_vulnerability(&d, SqueezeParams::new(r, phi).unwrap()));
            }
        }
        worst_brute = worst_brute.max((at_opt - brute).abs() / brute);
    }
    let elapsed = start.elapsed();
    verdict(
        worst_closed < 1e-9 && worst_brute < 1e-4 && elapsed < Duration::from_secs(30),
        format!("closed-form err {worst_closed:.1e}; brute-force err {worst_brute:.1e} in {elapsed:.2?}"),
    )
}

fn symplectic_invariance() -> Verdict {
    let policy = GridPolicy::with_n(1024);
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut worst: f64 = 0.0;
    for s in [fock(1), fock(2), fock(3), cat(2.0), cat(3.6)] {
        let base = negativity_volume(&build_field(&s, grid_for(&policy, &s, None, 1.0).unwrap()).unwrap()).v_neg;
        for &r in &[0.3, 0.8, 1.2] {
            let p = SqueezeParams::new(r, rng.gen_range(0.0..PI)).unwrap();
            let g = grid_for(&policy, &s, Some(p), 1.0).unwrap();
            let v = negativity_volume(&apply_squeeze(&s, p, g).unwrap()).v_neg;
            worst = worst.max((v - base).abs());
        }
    }
    verdict(worst < 1e-3, format!("max |dV_neg| = {worst:.2e} over 15 squeezes (1024^2 grids)"))
}

fn fock_symmetry() -> Verdict {
    let mut worst: f64 = 0.0;
    let mut vs = Vec::new();
    for n in 1..=6 {
        let d = d_coefficients(&lossless(&fock(n))).unwrap();
        worst = worst.max(d.d1.abs().max(d.d3.abs()) / d.d0);
        vs.push(d.d0 / 4.0);
    }
    let increasing = vs.windows(2).all(|w| w[1] > w[0]);
    let shown: Vec<String> = vs.iter().map(|v| format!("{v:.3}")).collect();
    verdict(
        worst < 1e-3 && increasing,
        format!("max |d1|,|d3| / d0 = {worst:.1e}; V(n) = [{}]", shown.join(", ")),
    )
}

fn at_eta(s: &StateSpec, policy: &SqueezePolicy, e: f64) -> f64 {
    negativity_curve(s, &[eta(e)], policy, &GridPolicy::default()).unwrap()[0].v_neg
}

fn cat_improvement() -> Verdict {
    let s = cat(2.0);
    let none = at_eta(&s, &SqueezePolicy::None, 0.98);
    let analytic = at_eta(&s, &SqueezePolicy::AnalyticOnce, 0.98);
    let numeric = at_eta(&s, &SqueezePolicy::PerEtaOptimized(OptimizeConfig::default()), 0.98);
    verdict(
        analytic > none && numeric >= analytic,
        format!("none={none:.5} analytic={analytic:.5} numeric={numeric:.5}"),
    )
}

fn banana_fragility() -> Verdict {
    let start = Instant::now();
    let s = banana();
    let lossless_v = negativity_volume(&lossless(&s)).v_neg;
    let none = at_eta(&s, &SqueezePolicy::None, 0.995);
    let analytic = at_eta(&s, &SqueezePolicy::AnalyticOnce, 0.995);
    let elapsed = start.elapsed();
    let (fn_, fa) = (none / lossless_v, analytic / lossless_v);
    verdict(
        lossless_v > 0.0 && fn_ < 0.1 && fa < 0.1 && elapsed < Duration::from_secs(120),
        format!(
            "lossless={lossless_v:.4}; retained at eta=0.995: none {:.1}%, analytic {:.1}% (need <10%) in {elapsed:.2?}",
            100.0 * fn_,
            100.0 * fa
        ),
    )
}

fn monotone_curves() -> Verdict {
    let ladder: Vec<Efficiency> = [0.5, 0.6, 0.7, 0.8, 0.9, 0.95, 0.98, 1.0].iter().map(|&v| eta(v)).collect();
    let mut worst_rise: f64 = 0.0;
    for s in [fock(1), fock(2), fock(3), fock(4), cat(2.0), cat(3.6), banana()] {
        let curve = negativity_curve(&s, &ladder, &SqueezePolicy::None, &GridPolicy::default()).unwrap();
        for w in curve.windows(2) {
            worst_rise = worst_rise.max(w[0].v_neg - w[1].v_neg);
        }
    }
    verdict(worst_rise <= 1e-5, format!("largest rise toward lower eta: {worst_rise:.2e} (7 states, 8 points)"))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Verdict); 10] = [
        ("Fock |1> negativity", fock_one_negativity),
        ("cat asymptote", cat_asymptote),
        ("Husimi positivity", husimi_positivity),
        ("derivative consistency", derivative_consistency),
        ("optimal-squeeze algebra", squeeze_algebra),
        ("symplectic invariance", symplectic_invariance),
        ("Fock symmetry", fock_symmetry),
        ("cat improvement", cat_improvement),
        ("banana fragility", banana_fragility),
        ("monotone curves", monotone_curves),
    ];
    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        let v = check();
        if !v.pass {
            failed += 1;
        }
        println!("criterion {:>2} {} {name}: {}", k + 1, if v.pass { "PASS" } else { "FAIL" }, v.detail);
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
