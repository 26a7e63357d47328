use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::direct::log_cn;
use super::params::{KernelParams, QuadratureConfig, CONTOUR_V_MIN};
use crate::quadrature::{adaptive_panels, periodic_mean, periodic_mean_converged, PanelRule};
use crate::specfun::{ln_factorial, theta_eps_unchecked};
use crate::{Error, Result, ScaledValue};

/// Largest circle radius `|eps|` accepted around `i pi`.
pub const MAX_RADIUS: f64 = 1.2;

const MAX_CIRCLE_NODES: usize = 1 << 16;
const TAYLOR_NODES: usize = 64;

/// The pieces of a shifted-contour evaluation of `p(n,1;u,v)`. All terms
/// include the normalization `c_n`.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct ContourEvaluation {
    pub value: ScaledValue,
    /// Line integral above the pole(s); `None` when skipped as negligible.
    pub line_term: Option<ScaledValue>,
    /// A-priori bound on the modulus of the line integral.
    pub line_bound: ScaledValue,
    /// Circle integral around `i pi` (`u > 0`) or `2 pi i` times the residues
    /// (`u = 0`).
    pub circle_term: ScaledValue,
    /// For `u = 0`: `p / b - 1` where `b` is the leading residue term.
    pub relative_correction: Option<ScaledValue>,
    pub radius: f64,
    pub circle_nodes: usize,
}

/// Line integral `∫ F(x + i a) dx` of `F(s) = (s/sinh s)^n e^{ivs - (u/4) s coth s}`
/// at height `a = (k + 1/2) pi`, returned as (normalized integral, `∫|.|`,
/// `ln` of the extracted factor `e^{-va}`).
fn line_integral(
    n: u32,
    u: f64,
    v: Complex64,
    a: f64,
    cfg: &QuadratureConfig,
    want_value: bool,
) -> Result<(Option<Complex64>, f64, Complex64)> {
    let sigma = a.sin().round();
    let rot = Complex64::new(0.0, -sigma);
    let iv = Complex64::i() * v;
    let g = |x: f64| {
        let s = Complex64::new(x, a);
        let base = s * rot / x.cosh();
        base.powi(n as i32) * (iv * x - 0.25 * u * s * x.tanh()).exp()
    };
    let log_env = |x: f64| {
        let s = Complex64::new(x, a);
        n as f64 * (s.norm() / x.cosh()).ln() - 0.25 * u * x * x.tanh() - v.im * x
    };
    let peak = log_env(0.0);
    let reach = |dir: f64| {
        let mut x = 0.0;
        while log_env(dir * x) > peak - cfg.truncation_margin {
            x += 0.25;
        }
        x
    };
    let (left, right) = (reach(-1.0), reach(1.0));
    let coarse: Vec<f64> = {
        let count = ((left + right).ceil() as usize).max(8);
        (0..=count).map(|k| -left + (left + right) * k as f64 / count as f64).collect()
    };
    let abs_g = |x: f64| Complex64::new(g(x).norm(), 0.0);
    let mass = adaptive_panels(&abs_g, &coarse, 1e-6, cfg.max_panels, PanelRule::Bisect20)?.value.re;
    let factor = -v * a;
    if !want_value {
        return Ok((None, mass, factor));
    }
    let width = if v.re.abs() > 0.0 { (4.0 * PI / v.re.abs()).min(1.0) } else { 1.0 };
    let count = ((left + right) / width).ceil().max(8.0) as usize;
    let breaks: Vec<f64> = (0..=count)
        .map(|k| -left + (left + right) * k as f64 / count as f64)
        .collect();
    let r = adaptive_panels(&g, &breaks, cfg.rel_tol * mass, cfg.max_panels, PanelRule::Bisect20)?;
    Ok((Some(r.value), mass, factor))
}

fn strip_imaginary(v: Complex64, z: ScaledValue) -> ScaledValue {
    if v.im == 0.0 {
        z.re()
    } else {
        z
    }
}

/// Line term (possibly skipped) and its bound, both times `c_n`.
fn line_term(
    n: u32,
    u: f64,
    v: Complex64,
    a: f64,
    reference: &ScaledValue,
    cfg: &QuadratureConfig,
) -> Result<(Option<ScaledValue>, ScaledValue)> {
    let (_, mass, factor) = line_integral(n, u, v, a, cfg, false)?;
    let bound = ScaledValue::from_parts(mass, log_cn(n) + factor.re);
    let negligible = bound.ln_abs() < reference.ln_abs() + (1e-3 * cfg.rel_tol).ln();
    if cfg.skip_negligible_line && negligible {
        return Ok((None, bound));
    }
    let (value, _, factor) = line_integral(n, u, v, a, cfg, true)?;
    let value = value.expect("requested");
    Ok((Some(ScaledValue::exp(factor) * value * ScaledValue::from_parts(1.0, log_cn(n))), bound))
}

/// Shifted-contour evaluation of `p(n,1;u,v)` for `Re v >= 4`.
///
/// For `u > 0` the contour is the line `Im s = 3pi/2` plus the circle of
/// radius `|eps|` about `i pi`, where `eps = pi - theta` is the saddle
/// offset; the common factor of the circle integrand is carried in the
/// log-scale. For `u = 0` the poles at `i pi` and `2 pi i` are taken by
/// residues and the line moves to `Im s = 5pi/2`.
pub fn p_contour(n: u32, u: f64, v: Complex64, cfg: &QuadratureConfig) -> Result<ContourEvaluation> {
    cfg.validate()?;
    KernelParams::complex(n, 1, u, v)?;
    if v.re < CONTOUR_V_MIN {
        return Err(Error::Precondition(format!(
            "contour route needs Re v >= {CONTOUR_V_MIN}, got {}",
            v.re
        )));
    }
    if u == 0.0 {
        residue_route(n, v, cfg)
    } else {
        circle_route(n, u, v, cfg)
    }
}

fn circle_route(n: u32, u: f64, v: Complex64, cfg: &QuadratureConfig) -> Result<ContourEvaluation> {
    let te = theta_eps_unchecked(u, v)?;
    let eps = te.eps;
    let radius = eps.norm();
    if radius >= MAX_RADIUS {
        return Err(Error::Precondition(format!(
            "saddle offset |eps| = {radius:.3} too large for the contour route (v/u too small)"
        )));
    }
    let exponent = |xi: Complex64| -v * (PI - xi) + 0.25 * u * (PI - xi) / xi.tan();
    let level = (0..cfg.circle_nodes)
        .map(|k| {
            let phi = -PI + 2.0 * PI * k as f64 / cfg.circle_nodes as f64;
            exponent(eps * Complex64::from_polar(1.0, phi)).re
        })
        .fold(f64::NEG_INFINITY, f64::max);
    let g = |phi: f64| {
        let xi = eps * Complex64::from_polar(1.0, phi);
        ((PI - xi) / xi.sin()).powi(n as i32) * xi * (exponent(xi) - level).exp()
    };
    let (mean, nodes) = periodic_mean_converged(&g, cfg.circle_nodes, cfg.rel_tol, MAX_CIRCLE_NODES)?;
    let circle = strip_imaginary(
        v,
        ScaledValue::new(mean * (2.0 * PI), level + log_cn(n)),
    );
    let (line, line_bound) = line_term(n, u, v, 1.5 * PI, &circle, cfg)?;
    let value = match line {
        Some(l) => strip_imaginary(v, circle + l),
        None => circle,
    };
    Ok(ContourEvaluation {
        value,
        line_term: line,
        line_bound,
        circle_term: circle,
        relative_correction: None,
        radius,
        circle_nodes: nodes,
    })
}

/// Taylor coefficients `0..count` of `H_k(w) = (-1)^{kn} (k pi i + w)^n (w / sinh w)^n`.
fn residue_taylor(n: u32, k: u32, count: usize) -> Vec<Complex64> {
    let sign = if (k * n).is_multiple_of(2) { 1.0 } else { -1.0 };
    let centre = Complex64::new(0.0, k as f64 * PI);
    (0..count)
        .map(|j| {
            let f = |phi: f64| {
                let w = Complex64::from_polar(1.0, phi);
                let h = (centre + w).powi(n as i32) * (w / w.sinh()).powi(n as i32) * sign;
                h * Complex64::from_polar(1.0, -(j as f64) * phi)
            };
            periodic_mean(&f, TAYLOR_NODES)
        })
        .collect()
}

/// `sum_j H_{k,j} (iv)^{n-1-j} / (n-1-j)!` divided by its `j = 0` term.
fn residue_polynomial(n: u32, coeffs: &[Complex64], v: Complex64) -> (ScaledValue, Complex64) {
    let iv = Complex64::i() * v;
    let top = (n - 1) as i32;
    let lead = ScaledValue::from_complex(coeffs[0])
        * ScaledValue::exp(iv.ln() * top as f64 - ln_factorial(n - 1));
    let mut rest = Complex64::new(0.0, 0.0);
    for (j, c) in coeffs.iter().enumerate().skip(1) {
        // ratio of the j-th term to the leading one
        let j = j as i32;
        let log_ratio = -iv.ln() * j as f64 + ln_factorial(n - 1) - ln_factorial((top - j) as u32);
        rest += c / coeffs[0] * log_ratio.exp();
    }
    (lead, rest)
}

fn residue_route(n: u32, v: Complex64, cfg: &QuadratureConfig) -> Result<ContourEvaluation> {
    let two_pi_i = Complex64::new(0.0, 2.0 * PI);
    let (lead1, rest1) = residue_polynomial(n, &residue_taylor(n, 1, n as usize), v);
    let (lead2, rest2) = residue_polynomial(n, &residue_taylor(n, 2, n as usize), v);
    let scale = ScaledValue::from_parts(1.0, log_cn(n)) * two_pi_i;
    let leading = scale * lead1 * ScaledValue::exp(-PI * v);
    let second = scale * lead2 * ScaledValue::exp(-2.0 * PI * v) * (Complex64::new(1.0, 0.0) + rest2);
    let circle = leading * (Complex64::new(1.0, 0.0) + rest1) + second;
    let mut correction = ScaledValue::from_complex(rest1) + second / leading;
    // the line term must be resolved against the correction, not just the total
    let reference = if correction.is_zero() || correction.ln_abs() > 0.0 {
        leading
    } else {
        leading * correction
    };
    let (line, line_bound) = line_term(n, 0.0, v, 2.5 * PI, &reference, cfg)?;
    if let Some(l) = line {
        correction = correction + l / leading;
    }
    let correction = strip_imaginary(v, correction);
    let leading = strip_imaginary(v, leading);
    Ok(ContourEvaluation {
        value: leading + leading * correction,
        line_term: line,
        line_bound,
        circle_term: strip_imaginary(v, circle),
        relative_correction: Some(correction),
        radius: 0.0,
        circle_nodes: TAYLOR_NODES,
    })
}
