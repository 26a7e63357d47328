//! Properties of the kernel, its asymptotic forms and the test-function
//! machinery, checked against closed forms or against each other.

use std::f64::consts::PI;

use asymkernel::asymptotics::{
    b_asymp, even_m_reduction, exponential_ratio, log_derivative_q, q_theorem, remainder_r, s_factor,
};
use asymkernel::gtf::{gtf_ratio, AnalyticFunction, Sector};
use asymkernel::heatkernel::{evaluate, heat_kernel, p_auto, KernelParams, QuadratureConfig, Route};
use asymkernel::specfun::{mu_inverse_eps, mu_near_pi, theta_eps, OmegaConfig};
use asymkernel::{Complex64, ScaledValue};
use proptest::prelude::*;

fn real(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// `p(1,1;0,v) = sech^2(pi v / 2) / 16`, as a log so it survives large `v`.
fn ln_p110(v: f64) -> f64 {
    let x = 0.5 * PI * v;
    // ln sech x = -x - ln((1 + e^{-2x}) / 2)
    2.0 * (-x - (0.5 * (1.0 + (-2.0 * x).exp())).ln()) - 16f64.ln()
}

#[test]
fn closed_form_across_routes() {
    let cfg = QuadratureConfig::default();
    for v in [0.0, 0.5, 3.0, 7.5, 9.0, 25.0, 120.0] {
        let p = p_auto(&KernelParams::new(1, 1, 0.0, v).unwrap(), &cfg).unwrap();
        // real-line quadrature is accurate in absolute terms only
        let tol = if v <= 8.0 { 1e-5 } else { 1e-8 };
        assert!((p.ln_abs() - ln_p110(v)).abs() < tol, "v = {v}: {} vs {}", p.ln_abs(), ln_p110(v));
    }
}

#[test]
fn recomposition_is_exact_in_log_space() {
    for (n, m, u, v) in [(1, 1, 1.0, 100.0), (2, 3, 0.5, 300.0), (3, 2, 2.0, 1e4)] {
        let q = q_theorem(n, m, u, v).unwrap();
        let product = ScaledValue::from_real(q.prefactor) * ScaledValue::exp(q.exp_log) * q.bessel_part;
        assert!((q.value.ln_abs() - product.ln_abs()).abs() <= 1e-12 * q.value.ln_abs().abs());
    }
}

#[test]
fn log_derivative_tracks_minus_theta() {
    for v in [100.0, 400.0] {
        let d = log_derivative_q(2, 3, 1.0, v).unwrap();
        let t = theta_eps(1.0, real(v), &OmegaConfig::default()).unwrap();
        assert!((d + t.theta.re).abs() <= 10.0 * (1.0 / v + t.eps.norm()), "v = {v}");
    }
}

#[test]
fn exponential_ratio_stays_in_band() {
    for k in 0..=10 {
        let s = 200.0 + 0.5 * k as f64;
        let r = exponential_ratio(2, 3, 1.0, 200.0, s).unwrap();
        assert!((0.5..=2.0).contains(&r), "s = {s}: {r}");
    }
}

#[test]
fn even_m_reduction_approaches_one() {
    let cfg = QuadratureConfig::default();
    let a = (even_m_reduction(1, 1, 1.0, 50.0, &cfg).unwrap() - 1.0).abs();
    let b = (even_m_reduction(1, 1, 1.0, 200.0, &cfg).unwrap() - 1.0).abs();
    assert!(b < a, "{a} then {b}");
}

#[test]
fn small_u_meets_the_residue_form() {
    let b = b_asymp(2, 1, 100.0).unwrap();
    let dev = |u: f64| (q_theorem(2, 1, u, 100.0).unwrap().value.ratio(&b).re - 1.0).abs();
    let (a, c) = (dev(1e-2), dev(1e-3));
    assert!(c < a && c < 0.05, "{a} then {c}");
}

#[test]
fn heat_kernel_is_the_scaled_reduced_kernel() {
    let cfg = QuadratureConfig::default();
    let (n, m, h) = (2, 1, 3.0);
    let ph = heat_kernel(6.0, 9.0, h, n, m, &cfg).unwrap();
    let p = p_auto(&KernelParams::new(n, m, 2.0, 3.0).unwrap(), &cfg).unwrap();
    assert!((ph.to_f64() * h.powi(3) / p.to_f64() - 1.0).abs() < 1e-12);
}

#[test]
fn s_factor_is_one_at_the_centre_and_remainder_vanishes() {
    assert_eq!(s_factor(4, real(0.0)), real(1.0));
    let eps = Complex64::new(0.07, 0.01);
    assert_eq!(remainder_r(3.0, eps, eps), real(0.0));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn kernel_is_even_and_positive(n in 1u32..3, m in 1u32..4, u in 0.0f64..2.0, v in 0.1f64..6.0) {
        let cfg = QuadratureConfig::default();
        let plus = evaluate(&KernelParams::new(n, m, u, v).unwrap(), Route::Direct, &cfg).unwrap();
        let minus = evaluate(&KernelParams::new(n, m, u, -v).unwrap(), Route::Direct, &cfg).unwrap();
        prop_assert!(plus.to_f64() > 0.0);
        prop_assert!((plus.ratio(&minus).re - 1.0).abs() < 1e-8);
    }

    #[test]
    fn kernel_decreases_in_v(u in 0.0f64..2.0, v in 0.5f64..40.0) {
        let cfg = QuadratureConfig::default();
        let a = p_auto(&KernelParams::new(1, 1, u, v).unwrap(), &cfg).unwrap();
        let b = p_auto(&KernelParams::new(1, 1, u, v + 0.5).unwrap(), &cfg).unwrap();
        prop_assert!(b.ln_abs() < a.ln_abs());
    }

    #[test]
    fn mu_inverse_round_trips(lx in 2.4f64..8.0, arg in -0.3f64..0.3) {
        let x = Complex64::from_polar(10f64.powf(lx), arg);
        let eps = mu_inverse_eps(x, &OmegaConfig::default()).unwrap();
        prop_assert!((mu_near_pi(eps) - x).norm() <= 1e-12 * x.norm());
    }

    #[test]
    fn contour_constant_ignores_scaling(r in 50.0f64..5e3, t in -0.7f64..0.7, k in 0.1f64..10.0) {
        let s = Sector::default();
        let z = Complex64::from_polar(r, t);
        let g = AnalyticFunction::power_log(1.5, 1.0);
        let a = gtf_ratio(&g, z, 0.2 * r, 128, Some(&s)).unwrap();
        let b = gtf_ratio(&g.scaled(real(k)), z, 0.2 * r, 128, Some(&s)).unwrap();
        prop_assert!((a / b - 1.0).abs() < 1e-9);
    }

    #[test]
    fn remainder_is_linear_in_u(u in 0.1f64..5.0, re in 0.01f64..0.3, phi in -3.1f64..3.1) {
        let eps = real(re);
        let xi = eps * Complex64::from_polar(1.0, phi);
        let a = remainder_r(2.0 * u, eps, xi);
        let b = remainder_r(u, eps, xi);
        prop_assert!((a - 2.0 * b).norm() <= 1e-14 * a.norm().max(1e-300));
    }
}
