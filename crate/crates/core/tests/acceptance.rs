//! The twelve acceptance criteria, one PASS/FAIL line each.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::Instant;

use asymkernel::asymptotics::{
    angular_bessel_closed, angular_bessel_integral, ratio_table, remainder_bound_constant, saddle_diagnostics,
    strictly_decreasing,
};
use asymkernel::gtf::{
    derivative_bound_sup, diff_expansion_check, gtf_scan, necessary_check, oscillation_amplitude, AnalyticFunction,
    ExpansionSpec, RadiusRule, ScanGrid, Sector, Verdict,
};
use asymkernel::heatkernel::{
    dv_p, evaluate, integrate_key2, p_bessel_form, p_contour, p_fourier_form, KernelParams, QuadratureConfig, Route,
};
use asymkernel::specfun::{bessel_i_scaled, bessel_j, gamma_fn, mu_inverse_eps, mu_near_pi, theta_eps, OmegaConfig};
use asymkernel::{Complex64, Result, ScaledValue};

/// Whether a criterion held, with the numbers behind the verdict.
struct Outcome {
    pass: bool,
    detail: String,
}

type Criterion = (&'static str, fn() -> Result<Outcome>);

fn outcome(pass: bool, detail: String) -> Result<Outcome> {
    Ok(Outcome { pass, detail })
}

fn rel(a: &ScaledValue, b: &ScaledValue) -> f64 {
    (a.ratio(b) - 1.0).norm()
}

fn real(v: f64) -> Complex64 {
    Complex64::new(v, 0.0)
}

fn representation_equivalence() -> Result<Outcome> {
    let cfg = QuadratureConfig::default();
    let mut worst: f64 = 0.0;
    for n in [1, 2] {
        for u in [0.0, 1.0] {
            for v in [1.0, 3.0, 6.0] {
                let b = p_bessel_form(&KernelParams::new(n, 1, u, v)?, &cfg)?;
                let f = p_fourier_form(n, u, real(v), &cfg)?;
                worst = worst.max(rel(&b, &f));
            }
        }
    }
    outcome(worst <= 1e-8, format!("worst relative gap {worst:.2e} (tol 1e-8)"))
}

/// `(n, m, u, v)` over `{1,2} x {1,2} x {0,1} x {2,5}`.
fn small_grid() -> Vec<(u32, u32, f64, f64)> {
    let mut g = Vec::new();
    for n in [1, 2] {
        for m in [1, 2] {
            for u in [0.0, 1.0] {
                for v in [2.0, 5.0] {
                    g.push((n, m, u, v));
                }
            }
        }
    }
    g
}

fn recurrence_in_m() -> Result<Outcome> {
    let cfg = QuadratureConfig::default();
    let mut worst: f64 = 0.0;
    for (n, m, u, v) in small_grid() {
        let p = KernelParams::new(n, m, u, v)?;
        let dv = dv_p(&p, &cfg)?.to_complex();
        let up = evaluate(&p.with_m(m + 2), Route::Direct, &cfg)?.to_complex();
        worst = worst.max((dv + 2.0 * PI * v * up).norm() / dv.norm());
    }
    outcome(worst <= 1e-4, format!("worst residual {worst:.2e} (tol 1e-4)"))
}

fn h_integral_identity() -> Result<Outcome> {
    let cfg = QuadratureConfig::default();
    let mut worst: f64 = 0.0;
    for (n, m, u, v) in small_grid() {
        let p = KernelParams::new(n, m, u, v)?;
        let direct = evaluate(&p, Route::Direct, &cfg)?;
        worst = worst.max(rel(&integrate_key2(&p, &cfg)?, &direct));
    }
    outcome(worst <= 1e-5, format!("worst relative gap {worst:.2e} (tol 1e-5)"))
}

fn contour_vs_direct() -> Result<Outcome> {
    let cfg = QuadratureConfig::default();
    let mut worst: f64 = 0.0;
    for n in [1, 2] {
        for u in [0.0, 1.0] {
            for v in [4.0, 6.0, 8.0] {
                let direct = evaluate(&KernelParams::new(n, 1, u, v)?, Route::Direct, &cfg)?;
                let contour = p_contour(n, u, real(v), &cfg)?.value;
                worst = worst.max(rel(&contour, &direct));
            }
        }
    }
    outcome(worst <= 1e-5, format!("worst relative gap {worst:.2e} (tol 1e-5)"))
}

fn u_zero_asymptotics() -> Result<Outcome> {
    let cfg = QuadratureConfig::default();
    let mut pass = true;
    let mut parts = Vec::new();
    for (n, m) in [(1, 1), (2, 1), (1, 2), (2, 3)] {
        let rows = ratio_table(n, m, 0.0, &[20.0, 40.0, 80.0], &cfg)?;
        let last = rows[2].abs_dev;
        pass &= strictly_decreasing(&rows) && last <= 0.05;
        parts.push(format!("({n},{m}) {last:.2e}"));
    }
    outcome(pass, format!("decreasing, |p/b-1| at v=80: {} (ceiling 0.05)", parts.join(", ")))
}

fn theorem_ratio() -> Result<Outcome> {
    let cfg = QuadratureConfig::default();
    let mut pass = true;
    let mut parts = Vec::new();
    for (n, m, u) in [(1, 1, 1.0), (2, 1, 0.5), (1, 3, 1.0), (2, 2, 1.0)] {
        let rows = ratio_table(n, m, u, &[50.0, 100.0, 200.0], &cfg)?;
        let last = rows[2].abs_dev;
        // fixed v/u = 100 at v = 100 and v = 200
        let a = ratio_table(n, m, 1.0, &[100.0], &cfg)?[0].abs_dev;
        let b = ratio_table(n, m, 2.0, &[200.0], &cfg)?[0].abs_dev;
        let uniform = a / b <= 3.0 && b / a <= 3.0;
        pass &= strictly_decreasing(&rows) && last <= 0.05 && uniform;
        parts.push(format!("({n},{m},{u}) {last:.4} [{a:.4}/{b:.4}]"));
    }
    outcome(
        pass,
        format!("decreasing, |p/q-1| at v=200 [v/u=100 pair]: {} (ceiling 0.05, factor 3)", parts.join(", ")),
    )
}

fn saddle_identities() -> Result<Outcome> {
    let mut worst = [0.0f64; 4];
    for u in [1.0, 2.0] {
        for v in [1e2, 1e4] {
            let d = saddle_diagnostics(u, v)?;
            let r = [
                d.phi_residual(),
                d.phi_prime_norm / v,
                d.decomposition_residual / d.phi_at_saddle.norm(),
                d.saddle_relation_residual,
            ];
            for (w, x) in worst.iter_mut().zip(r) {
                *w = w.max(x);
            }
        }
    }
    outcome(
        worst.iter().all(|&w| w <= 1e-9),
        format!(
            "phi {:.1e}, phi' {:.1e}, decomposition {:.1e}, relation {:.1e} (tol 1e-9)",
            worst[0], worst[1], worst[2], worst[3]
        ),
    )
}

fn angular_integral() -> Result<Outcome> {
    let mut worst: f64 = 0.0;
    for (n, j) in [(2, 0), (3, 1)] {
        let q = angular_bessel_integral(n, j, 1.0, 0.05)?;
        let c = angular_bessel_closed(n, j, 1.0, 0.05)?;
        worst = worst.max((q - c).abs() / c.abs());
    }
    outcome(worst <= 1e-8, format!("worst relative gap {worst:.2e} (tol 1e-8)"))
}

fn remainder_bound() -> Result<Outcome> {
    let mut pass = true;
    let mut parts = Vec::new();
    for u in [1.0, 4.0] {
        let c: Vec<f64> = [0.1, 0.05, 0.025]
            .iter()
            .map(|&e| remainder_bound_constant(u, real(e), 512).0)
            .collect();
        let (lo, hi) = c.iter().fold((f64::INFINITY, 0.0f64), |(a, b), &x| (a.min(x), b.max(x)));
        pass &= c.iter().all(|x| x.is_finite()) && hi <= 2.0 * lo;
        parts.push(format!("u={u}: {:.4} {:.4} {:.4}", c[0], c[1], c[2]));
    }
    outcome(pass, format!("{} (stable within factor 2)", parts.join("; ")))
}

fn gtf_classification() -> Result<Outcome> {
    let sector = Sector::default();
    let grid = ScanGrid::default();
    let scan = |g: AnalyticFunction, rule: RadiusRule| gtf_scan(&g, &sector, &rule, &grid).map(|r| r.verdict);
    let a = scan(AnalyticFunction::power_log(1.0, 2.0), RadiusRule::HalfSine)?;
    let b = scan(AnalyticFunction::power_exp(0.0, 1.0, 0.5), RadiusRule::Power(0.5))?;
    let c = scan(AnalyticFunction::PlainLog, RadiusRule::HalfSine)?;
    let rho = |r: f64| necessary_check(&AnalyticFunction::PlainLog, real(r));
    let growth = rho(1e6)? / rho(1e2)?;
    outcome(
        a == Verdict::Bounded && b == Verdict::Bounded && c == Verdict::Growing && growth >= 2.9,
        format!("power_log {a:?}, power_exp {b:?}, plain_log {c:?}, rho growth {growth:.4} (>= 2.9)"),
    )
}

fn differentiation_witness() -> Result<Outcome> {
    let spec = ExpansionSpec::exp_inverse(5);
    let mut min_drop = f64::INFINITY;
    for order in 1..=3 {
        let t = diff_expansion_check(&spec, &Sector::default(), &[10.0, 100.0, 1000.0], order)?;
        for w in t.rows.windows(2) {
            min_drop = min_drop
                .min(w[0].remainder / w[1].remainder)
                .min(w[0].derivative_remainder / w[1].derivative_remainder);
        }
    }
    let f = AnalyticFunction::LogPlusSin;
    let amplitude = oscillation_amplitude(&f, 1e2, 1e6, 64)?;
    let bound = derivative_bound_sup(&f, &AnalyticFunction::PlainLog, 1e2, 1e6, 64)?;
    outcome(
        min_drop >= 10.0 && amplitude >= 0.9 && bound <= 2.0,
        format!("smallest drop per decade {min_drop:.3} (>= 10), amplitude {amplitude:.4} (>= 0.9), |f'||z|/|log z| {bound:.4} (<= 2)"),
    )
}

fn special_functions() -> Result<Outcome> {
    let mut closed: f64 = 0.0;
    for x in [0.1, 1.0, 5.0, 20.0] {
        let s = (2.0 / (PI * x)).sqrt();
        let i = bessel_i_scaled(0.5, real(x))?.to_f64() * x.exp();
        for (got, want) in [(bessel_j(-0.5, x)?, s * x.cos()), (bessel_j(0.5, x)?, s * x.sin()), (i, s * x.sinh())] {
            closed = closed.max((got - want).abs() / want.abs());
        }
    }

    let omega = OmegaConfig::default();
    let mut roundtrip: f64 = 0.0;
    for x in [real(1e3), real(1e4), real(1e6), Complex64::from_polar(5e3, 0.2)] {
        let eps = mu_inverse_eps(x, &omega)?;
        roundtrip = roundtrip.max((mu_near_pi(eps) - x).norm() / x.norm());
    }

    let mut small_ok = true;
    for nu in [1.5, 2.0, 3.0] {
        for z in [1e-3, 1e-4] {
            let lead = bessel_i_scaled(nu - 1.0, real(z))?.to_f64() * z.exp() * gamma_fn(nu)? * (z / 2.0).powf(1.0 - nu);
            small_ok &= (lead - 1.0).abs() <= 10.0 * z;
        }
    }
    let mut large_ok = true;
    for nu in [0.0, 1.0] {
        for z in [1e2, 1e4] {
            let lead = bessel_i_scaled(nu, real(z))?.to_f64() * (2.0 * PI * z).sqrt();
            large_ok &= (lead - 1.0).abs() <= 1.0 / z;
        }
    }

    let dev = [1e2, 1e3, 1e4]
        .iter()
        .map(|&v| theta_eps(1.0, real(v), &omega).map(|t| (t.d_squared.re / (4.0 * PI * v) - 1.0).abs()))
        .collect::<Result<Vec<_>>>()?;
    let d2_ok = dev[0] > dev[1] && dev[1] > dev[2] && dev[2] <= 0.02;

    outcome(
        closed <= 1e-10 && roundtrip <= 1e-12 && small_ok && large_ok && d2_ok,
        format!(
            "closed forms {closed:.1e} (1e-10), mu roundtrip {roundtrip:.1e} (1e-12), small-z limit {small_ok}, large-z limit {large_ok}, d^2/(4 pi v) - 1 = {:.1e} {:.1e} {:.1e}",
            dev[0], dev[1], dev[2]
        ),
    )
}

fn main() -> ExitCode {
    let criteria: [Criterion; 12] = [
        ("representation equivalence", representation_equivalence),
        ("recurrence in m", recurrence_in_m),
        ("h-integral identity", h_integral_identity),
        ("contour vs direct", contour_vs_direct),
        ("u = 0 asymptotics", u_zero_asymptotics),
        ("u > 0 asymptotics", theorem_ratio),
        ("saddle identities", saddle_identities),
        ("angular Bessel integral", angular_integral),
        ("remainder bound", remainder_bound),
        ("gtf classification", gtf_classification),
        ("differentiation witness", differentiation_witness),
        ("special functions", special_functions),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let (pass, detail) = match run() {
            Ok(o) => (o.pass, o.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        if !pass {
            failed += 1;
        }
        println!(
            "criterion {:>2} {} {name}: {detail} [{:.1}s]",
            i + 1,
            if pass { "PASS" } else { "FAIL" },
            start.elapsed().as_secs_f64()
        );
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
