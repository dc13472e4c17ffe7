mod common;

use negsqueeze_core::phase_space::{convolve_gaussian, integrate, laplacian, PhaseGrid, WignerField};
use negsqueeze_core::{build_field, resample_scaled, StateSpec};
use proptest::prelude::*;
use std::f64::consts::PI;

use common::{fock_radial, max_abs, radial_mass};

fn gaussian(cx: f64, cy: f64, var: f64) -> impl Fn(f64, f64) -> f64 {
    move |x: f64, y: f64| (-((x - cx).powi(2) + (y - cy).powi(2)) / (2.0 * var)).exp() / (2.0 * PI * var)
}

#[test]
fn fock3_normalization_matches_radial_quadrature() {
    let oracle = radial_mass(|r| fock_radial(3, r), 7.0);
    assert!((oracle - 1.0).abs() < 1e-9, "oracle {oracle}");
    let g = PhaseGrid::square(7.0, 512).unwrap();
    let f = build_field(&StateSpec::Fock { n: 3 }, g).unwrap();
    assert!((integrate(&f) - oracle).abs() < 1e-3);
}

#[test]
fn fock1_resampled_keeps_normalization() {
    let g = PhaseGrid::square(7.0, 512).unwrap();
    let eval = StateSpec::Fock { n: 1 }.evaluator().unwrap();
    let f = resample_scaled(&eval, g, 0.9f64.sqrt()).unwrap();
    // radial oracle of the rescaled function W(r / s) / s^2
    let s = 0.9f64.sqrt();
    let oracle = radial_mass(|r| fock_radial(1, r / s) / (s * s), 7.0);
    assert!((integrate(&f) - oracle).abs() < 1e-3);
    assert!((oracle - 1.0).abs() < 1e-9);
}

#[test]
fn laplacian_error_is_second_order() {
    // W(x, y) = exp(-x^2 - 2 y^2) sin(x + y); Laplacian by hand.
    let w = |x: f64, y: f64| (-x * x - 2.0 * y * y).exp() * (x + y).sin();
    let lap = |x: f64, y: f64| {
        let e = (-x * x - 2.0 * y * y).exp();
        let (s, c) = (x + y).sin_cos();
        let wxx = e * ((4.0 * x * x - 2.0) * s - 4.0 * x * c - s);
        let wyy = e * ((16.0 * y * y - 4.0) * s - 8.0 * y * c - s);
        wxx + wyy
    };
    let interior_error = |n: usize| {
        let g = PhaseGrid::square(5.0, n).unwrap();
        let f = WignerField::sample(g, &w).unwrap();
        let l = laplacian(&f).unwrap();
        let mut worst: f64 = 0.0;
        for j in 1..n - 1 {
            for i in 1..n - 1 {
                worst = worst.max((l.at(i, j) - lap(g.x(i), g.y(j))).abs());
            }
        }
        worst
    };
    let coarse = interior_error(101);
    let fine = interior_error(201);
    assert!(coarse / fine >= 3.5, "ratio {}", coarse / fine);
}

#[test]
fn laplacian_integrates_to_zero_for_decayed_fields() {
    let g = PhaseGrid::square(8.0, 400).unwrap();
    for state in [StateSpec::Fock { n: 2 }, StateSpec::Cat { alpha: 1.5 }] {
        let f = build_field(&state, g).unwrap();
        assert!(max_abs(&[f.at(0, 0), f.at(0, 200), f.at(399, 399)]) < 1e-12);
        let total = integrate(&laplacian(&f).unwrap());
        assert!(total.abs() < 1e-3, "{state:?}: {total}");
    }
}

#[test]
fn convolution_semigroup() {
    let g = PhaseGrid::square(7.0, 401).unwrap();
    let f = build_field(&StateSpec::Fock { n: 2 }, g).unwrap();
    let (s1, s2) = (0.2, 0.35);
    let twice = convolve_gaussian(&convolve_gaussian(&f, s1).unwrap().field, s2).unwrap().field;
    let once = convolve_gaussian(&f, (s1 * s1 + s2 * s2).sqrt()).unwrap().field;
    let worst = common::max_abs_diff(twice.values(), once.values());
    assert!(worst < 1e-4, "{worst}");
}

#[test]
fn blurred_gaussian_matches_variance_addition_everywhere() {
    let g = PhaseGrid::square(6.0, 301).unwrap();
    let f = WignerField::sample(g, &gaussian(0.4, -0.3, 0.5)).unwrap();
    let out = convolve_gaussian(&f, 0.3).unwrap().field;
    let expect = WignerField::sample(g, &gaussian(0.4, -0.3, 0.5 + 0.09)).unwrap();
    assert!(common::max_abs_diff(out.values(), expect.values()) < 1e-6);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn quadrature_is_linear(a in -3.0f64..3.0, b in -3.0f64..3.0, cx in -1.0f64..1.0) {
        let g = PhaseGrid::square(6.0, 64).unwrap();
        let f = WignerField::sample(g, &gaussian(cx, 0.0, 0.5)).unwrap();
        let h = WignerField::sample(g, &|x: f64, y: f64| x * y + 0.1).unwrap();
        let combo = f.combine(a, &h, b).unwrap();
        let lhs = integrate(&combo);
        let rhs = a * integrate(&f) + b * integrate(&h);
        prop_assert!((lhs - rhs).abs() <= 1e-12 * (1.0 + lhs.abs()));
    }

    #[test]
    fn convolution_preserves_mass(sigma in 0.0f64..0.9, cx in -1.0f64..1.0, cy in -1.0f64..1.0) {
        let g = PhaseGrid::square(7.0, 128).unwrap();
        let f = WignerField::sample(g, &gaussian(cx, cy, 0.5)).unwrap();
        let out = convolve_gaussian(&f, sigma).unwrap();
        prop_assert!((integrate(&out.field) - integrate(&f)).abs() < 1e-6);
    }
}
