use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::approx::{approximation, q_theorem};
use crate::heatkernel::{p_auto, p_contour, KernelParams, QuadratureConfig, DIRECT_V_MAX};
use crate::quadrature::{adaptive_panels_rel, PanelRule};
use crate::{Complex64, Error, Result, ScaledValue};

/// One row of a ratio table: the kernel `p`, its approximation `q`, and
/// `ratio = p/q`, `abs_dev = |ratio - 1|`.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct RatioRow {
    pub v: f64,
    pub p: ScaledValue,
    pub q: ScaledValue,
    pub p_log: f64,
    pub q_log: f64,
    pub ratio: f64,
    pub abs_dev: f64,
}

fn ratio_row(n: u32, m: u32, u: f64, v: f64, cfg: &QuadratureConfig) -> Result<RatioRow> {
    let q = approximation(n, m, u, v)?.value;
    let (p, ratio, abs_dev) = if u == 0.0 && m == 1 {
        // the residue route returns p / b - 1 directly, free of cancellation
        let eval = p_contour(n, 0.0, Complex64::new(v, 0.0), cfg)?;
        let delta = eval
            .relative_correction
            .expect("the residue route reports its relative correction");
        (eval.value, 1.0 + delta.to_f64(), delta.abs().to_f64())
    } else {
        let p = p_auto(&KernelParams::new(n, m, u, v)?, cfg)?;
        let ratio = p.ratio(&q).re;
        (p, ratio, (ratio - 1.0).abs())
    };
    Ok(RatioRow {
        v,
        p,
        q,
        p_log: p.ln_abs(),
        q_log: q.ln_abs(),
        ratio,
        abs_dev,
    })
}

/// `p / q` along `v_grid`, with `q` from [`q_theorem`] (`u > 0`) or
/// [`super::b_asymp`] (`u = 0`). The grid must be strictly ascending and lie
/// beyond the direct-quadrature range. Rows are computed in parallel.
pub fn ratio_table(n: u32, m: u32, u: f64, v_grid: &[f64], cfg: &QuadratureConfig) -> Result<Vec<RatioRow>> {
    KernelParams::new(n, m, u, 0.0)?;
    if v_grid.is_empty() {
        return Err(Error::Domain("v grid is empty".into()));
    }
    if v_grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::Domain("v grid must be strictly ascending".into()));
    }
    if !(v_grid[0] > DIRECT_V_MAX) || !v_grid[v_grid.len() - 1].is_finite() {
        return Err(Error::Domain(format!("v grid must lie in ({DIRECT_V_MAX}, inf)")));
    }
    v_grid.par_iter().map(|&v| ratio_row(n, m, u, v, cfg)).collect()
}

/// Whether `abs_dev` strictly decreases down the table.
pub fn strictly_decreasing(rows: &[RatioRow]) -> bool {
    rows.windows(2).all(|w| w[1].abs_dev < w[0].abs_dev)
}

/// `d/dv ln q(n,m;u,v)` by central differences with step `1e-4 v`,
/// Richardson-checked against the doubled step.
pub fn log_derivative_q(n: u32, m: u32, u: f64, v: f64) -> Result<f64> {
    let h = 1e-4 * v;
    let lq = |x: f64| -> Result<f64> { Ok(q_theorem(n, m, u, x)?.value.ln_abs()) };
    let d_h = (lq(v + h)? - lq(v - h)?) / (2.0 * h);
    let d_2h = (lq(v + 2.0 * h)? - lq(v - 2.0 * h)?) / (4.0 * h);
    if (d_h - d_2h).abs() / 3.0 > 1e-6 * d_h.abs() {
        return Err(Error::ToleranceNotMet(format!(
            "log-derivative of q not resolved at v = {v}"
        )));
    }
    Ok(d_h)
}

/// `q(n,m;u,s) / q(n,m;u,v) * e^{pi (s - v)}`.
pub fn exponential_ratio(n: u32, m: u32, u: f64, v: f64, s: f64) -> Result<f64> {
    let a = q_theorem(n, m, u, s)?.value;
    let b = q_theorem(n, m, u, v)?.value;
    Ok(a.ratio(&b).re * (PI * (s - v)).exp())
}

/// `2 ∫_v^∞ h (h^2 - v^2)^{-1/2} q(n,m;u,h) dh / (sqrt(2v) q(n,m;u,v))` for
/// odd `m`; tends to 1 as `v` grows.
pub fn even_m_reduction(n: u32, m: u32, u: f64, v: f64, cfg: &QuadratureConfig) -> Result<f64> {
    if m.is_multiple_of(2) {
        return Err(Error::Domain(format!("even-m reduction starts from odd m, got {m}")));
    }
    let reference = q_theorem(n, m, u, v)?.value;
    let f = |w: f64| -> Complex64 {
        let h = v * w.cosh();
        match q_theorem(n, m, u, h) {
            Ok(q) => Complex64::new(2.0 * h * q.value.ratio(&reference).re, 0.0),
            Err(_) => Complex64::new(f64::NAN, 0.0),
        }
    };
    // e^{-pi (h - v)} decay: breakpoints every e-fold up to the margin
    let steps = cfg.truncation_margin.ceil() as usize;
    let breaks: Vec<f64> = (0..=steps)
        .map(|k| (1.0 + k as f64 / (PI * v)).acosh())
        .collect();
    let r = adaptive_panels_rel(&f, &breaks, 0.0, cfg.rel_tol, cfg.max_panels, PanelRule::Nested10)?;
    if !r.value.re.is_finite() {
        return Err(Error::NoConvergence(format!("reduction integrand failed at v = {v}")));
    }
    Ok(r.value.re / (2.0 * v).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_validation() {
        let cfg = QuadratureConfig::default();
        assert!(matches!(ratio_table(1, 1, 0.0, &[40.0, 20.0], &cfg), Err(Error::Domain(_))));
        assert!(matches!(ratio_table(1, 1, 0.0, &[5.0, 20.0], &cfg), Err(Error::Domain(_))));
        assert!(matches!(ratio_table(1, 1, 0.0, &[], &cfg), Err(Error::Domain(_))));
    }

    #[test]
    fn u_zero_m_one_keeps_tiny_deviation() {
        let rows = ratio_table(1, 1, 0.0, &[20.0, 40.0], &QuadratureConfig::default()).unwrap();
        // p(1,1;0,v) = sech^2(pi v/2)/16, so p/b - 1 = -x(2+x)/(1+x)^2, x = e^{-pi v}
        for r in &rows {
            let x = (-PI * r.v).exp();
            let exact = x * (2.0 + x) / (1.0 + x).powi(2);
            assert!((r.abs_dev / exact - 1.0).abs() < 1e-8);
        }
        assert!(strictly_decreasing(&rows));
    }
}
