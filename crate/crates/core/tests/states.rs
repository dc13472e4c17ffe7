mod common;

use negsqueeze_core::states::{kerr_coefficients_to, expansion_cutoff, MAX_FOCK_ORDER};
use negsqueeze_core::{
    banana_wigner, build_field, cat_wigner, fock_wigner, integrate, negativity_volume, Complex64, GridPolicy,
    PhaseGrid, StateSpec,
};
use proptest::prelude::*;
use std::f64::consts::{FRAC_1_PI, PI, SQRT_2};

use common::{fock_radial, laguerre_series_magnitude};

#[test]
fn fock_matches_power_series() {
    for n in 0..=20 {
        for &r in &[0.0, 0.3, 0.9, 1.7, 3.2] {
            let a = fock_wigner(n, r * 0.6, r * 0.8).unwrap();
            let b = fock_radial(n, r);
            let oracle_err = 1e-15 * laguerre_series_magnitude(n, 2.0 * r * r) * (-r * r).exp() / PI;
            assert!((a - b).abs() < 1e-13 + oracle_err, "n={n} r={r}: {a} vs {b}");
        }
    }
}

#[test]
fn vacuum_field_peaks_at_origin() {
    let g = PhaseGrid::square(6.0, 257).unwrap();
    let f = build_field(&StateSpec::Vacuum, g).unwrap();
    let (i, j) = g.nearest(0.0, 0.0);
    assert!((f.at(i, j) - FRAC_1_PI).abs() < 1e-12);
    assert_eq!(f.max_value(), f.at(i, j));
}

#[test]
fn fock_field_is_radially_symmetric() {
    let g = PhaseGrid::square(6.0, 201).unwrap();
    let f = build_field(&StateSpec::Fock { n: 3 }, g).unwrap();
    for &(i, j) in &[(10, 50), (77, 140), (100, 3), (150, 199)] {
        assert!((f.at(i, j) - f.at(j, i)).abs() < 1e-12);
    }
}

#[test]
fn cat_normalization() {
    let s = StateSpec::Cat { alpha: 2.0 };
    let g = negsqueeze_core::grid_for(&GridPolicy::default(), &s, None, 1.0).unwrap();
    let f = build_field(&s, g).unwrap();
    assert!((integrate(&f) - 1.0).abs() < 1e-3);
}

#[test]
fn cat_without_interference_carries_reduced_weight() {
    // lobes alone integrate to 1 / (1 + exp(-2 alpha^2))
    let alpha: f64 = 4.0;
    let norm = 1.0 / (1.0 + (-2.0 * alpha * alpha).exp());
    let g = PhaseGrid::square(12.0, 600).unwrap();
    let lobes = negsqueeze_core::WignerField::sample(g, &|x: f64, y: f64| {
        let full = cat_wigner(alpha, x, y).unwrap();
        let fringes = norm * FRAC_1_PI * (-x * x - y * y).exp() * (2.0 * SQRT_2 * alpha * y).cos();
        full - fringes
    })
    .unwrap();
    assert!((integrate(&lobes) - norm).abs() < 1e-3);
}

#[test]
fn cat_field_is_negative() {
    let s = StateSpec::Cat { alpha: 3.6 };
    let g = negsqueeze_core::grid_for(&GridPolicy::default(), &s, None, 1.0).unwrap();
    assert!(negativity_volume(&build_field(&s, g).unwrap()).v_neg > 0.0);
}

#[test]
fn banana_normalization() {
    let s = StateSpec::banana_with_nonlinearity(5.0, 1.5);
    let g = negsqueeze_core::grid_for(&GridPolicy::with_n(384), &s, None, 1.0).unwrap();
    let f = build_field(&s, g).unwrap();
    assert!((integrate(&f) - 1.0).abs() < 1e-3, "{}", integrate(&f));
}

#[test]
fn banana_truncation_has_converged() {
    let (alpha, gamma) = (5.0, 1.5 / 25.0);
    let n_max = expansion_cutoff(alpha);
    let wider = StateSpec::FockSuperposition {
        coefficients: {
            let c = kerr_coefficients_to(alpha, gamma, n_max + 10);
            let norm: f64 = c.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            c.into_iter().map(|z| z / norm).collect()
        },
    }
    .evaluator()
    .unwrap();
    for &(x, y) in &[(0.0, 0.0), (7.0, 0.0), (-3.0, 6.0), (2.0, -6.5), (-7.1, 0.4), (4.0, 4.0)] {
        let base = banana_wigner(alpha, gamma, x, y).unwrap();
        let more = wider.eval(x, y);
        assert!((base - more).abs() < 1e-8, "({x},{y}): {base} vs {more}");
    }
}

#[test]
fn banana_respects_budget() {
    assert!(banana_wigner(8.5, 0.01, 0.0, 0.0).is_err());
    assert!(banana_wigner(8.0, 0.01, 0.0, 0.0).is_ok());
}

#[test]
fn fock_order_limit() {
    assert!(fock_wigner(MAX_FOCK_ORDER, 1.0, 2.0).is_ok());
    assert!(fock_wigner(MAX_FOCK_ORDER + 1, 1.0, 2.0).is_err());
}

fn random_superposition(raw: &[(f64, f64)]) -> Vec<Complex64> {
    let c: Vec<Complex64> = raw.iter().map(|&(a, b)| Complex64::new(a, b)).collect();
    let norm = c.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    c.into_iter().map(|z| z / norm).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn pure_states_obey_the_wigner_bound(
        n in 0usize..40,
        alpha in 0.1f64..6.0,
        r_nl in 0.0f64..3.0,
        x in -10.0f64..10.0,
        y in -10.0f64..10.0,
    ) {
        let bound = 1.0 / PI + 1e-9;
        prop_assert!(fock_wigner(n, x, y).unwrap().abs() <= bound);
        prop_assert!(cat_wigner(alpha, x, y).unwrap().abs() <= bound);
        let banana = StateSpec::banana_with_nonlinearity(alpha, r_nl).evaluator().unwrap();
        prop_assert!(banana.eval(x, y).abs() <= bound);
    }

    #[test]
    fn global_phase_is_invisible(
        raw in proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 2..12),
        theta in 0.0f64..6.3,
        x in -4.0f64..4.0,
        y in -4.0f64..4.0,
    ) {
        prop_assume!(raw.iter().any(|&(a, b)| a.abs() + b.abs() > 0.1));
        let c = random_superposition(&raw);
        let rotated: Vec<Complex64> = c.iter().map(|z| z * Complex64::from_polar(1.0, theta)).collect();
        let a = StateSpec::FockSuperposition { coefficients: c }.evaluator().unwrap().eval(x, y);
        let b = StateSpec::FockSuperposition { coefficients: rotated }.evaluator().unwrap().eval(x, y);
        prop_assert!((a - b).abs() < 1e-13);
    }
}
