use std::f64::consts::PI;

use num_complex::Complex64;

use super::params::{KernelParams, QuadratureConfig, DIRECT_V_MAX};
use crate::quadrature::{adaptive_panels, PanelRule};
use crate::specfun::bessel_j_normalized;
use crate::{Error, Result, ScaledValue};

/// `s / sinh s` for real `s`.
pub(crate) fn s_over_sinh(s: f64) -> f64 {
    if s.abs() < 1e-5 {
        1.0 - s * s / 6.0
    } else {
        s / s.sinh()
    }
}

/// `s coth s` for real `s`.
pub(crate) fn s_coth(s: f64) -> f64 {
    if s.abs() < 1e-5 {
        1.0 + s * s / 3.0
    } else {
        s / s.tanh()
    }
}

/// `ln` of the non-oscillating part of the Bessel-form integrand.
fn log_envelope(n: u32, m: u32, u: f64, s: f64) -> f64 {
    (m as f64 - 1.0) * s.ln() + n as f64 * s_over_sinh(s).ln() - 0.25 * u * s_coth(s)
}

/// Upper cut-off `S_max`: the envelope has dropped `margin` e-folds below
/// its maximum.
pub(crate) fn truncation_point(n: u32, m: u32, u: f64, margin: f64) -> f64 {
    let mut peak = f64::NEG_INFINITY;
    let mut s = 0.05;
    loop {
        let l = log_envelope(n, m, u, s);
        peak = peak.max(l);
        if s > 1.0 && l < peak - margin {
            return s;
        }
        s += 0.25;
    }
}

fn panel_breaks(upper: f64, v: f64) -> Vec<f64> {
    let width = if v.abs() > 0.0 { (2.0 * PI / v.abs()).min(1.0) } else { 1.0 };
    let count = (upper / width).ceil().max(4.0) as usize;
    (0..=count).map(|k| upper * k as f64 / count as f64).collect()
}

/// `ln (2 / (4 pi)^{n + m/2})`.
fn log_bessel_prefactor(n: u32, m: u32) -> f64 {
    2f64.ln() - (n as f64 + 0.5 * m as f64) * (4.0 * PI).ln()
}

/// `ln c_n` with `c_n = 1 / ((4 pi)^{n + 1/2} sqrt(pi))`.
pub(crate) fn log_cn(n: u32) -> f64 {
    -(n as f64 + 0.5) * (4.0 * PI).ln() - 0.5 * PI.ln()
}

/// The half-line Bessel-function representation of `p(n,m;u,v)` for real
/// `v`, with no restriction on `v`. Accuracy is absolute: past `v ~ 8` the
/// result is dominated by roundoff of an `O(1)` oscillatory integral.
pub fn p_bessel_form(params: &KernelParams, cfg: &QuadratureConfig) -> Result<ScaledValue> {
    params.validate()?;
    if params.v.im != 0.0 {
        return Err(Error::Precondition("the Bessel form needs real v".into()));
    }
    let KernelParams { n, m, u, .. } = *params;
    let v = params.v.re.abs();
    let nu = 0.5 * (m as f64 - 2.0);
    let upper = truncation_point(n, m, u, cfg.truncation_margin);
    // `bessel_j_normalized` returns (x/2)^{-nu} J_nu(x)
    let f = |s: f64| {
        let j = bessel_j_normalized(nu, s * v).unwrap_or(f64::NAN);
        let env = s.powi(m as i32 - 1) * s_over_sinh(s).powi(n as i32) * (-0.25 * u * s_coth(s)).exp();
        Complex64::new(env * j, 0.0)
    };
    let r = adaptive_panels(&f, &panel_breaks(upper, v), cfg.abs_tol(), cfg.max_panels, PanelRule::Bisect20)?;
    if !r.value.re.is_finite() {
        return Err(Error::NoConvergence("Bessel-form integrand produced a non-finite value".into()));
    }
    Ok(ScaledValue::from_parts(r.value.re, log_bessel_prefactor(n, m)))
}

/// The full-line Fourier representation of `p(n,1;u,v)`; accepts complex
/// `v` in the analyticity strip.
pub fn p_fourier_form(n: u32, u: f64, v: Complex64, cfg: &QuadratureConfig) -> Result<ScaledValue> {
    KernelParams::complex(n, 1, u, v)?;
    let upper = truncation_point(n, 1, u, cfg.truncation_margin) * n as f64 / (n as f64 - v.im.abs());
    let iv = Complex64::i() * v;
    let f = |s: f64| {
        let env = s_over_sinh(s).powi(n as i32);
        (iv * s - 0.25 * u * s_coth(s)).exp() * env
    };
    let half = panel_breaks(upper, v.re);
    let mut breaks: Vec<f64> = half.iter().rev().map(|x| -x).collect();
    breaks.extend_from_slice(&half[1..]);
    let r = adaptive_panels(&f, &breaks, cfg.abs_tol(), cfg.max_panels, PanelRule::Bisect20)?;
    if !r.value.re.is_finite() {
        return Err(Error::NoConvergence("Fourier-form integrand produced a non-finite value".into()));
    }
    let value = if v.im == 0.0 {
        Complex64::new(r.value.re, 0.0)
    } else {
        r.value
    };
    Ok(ScaledValue::new(value, log_cn(n)))
}

/// Direct quadrature of `p(n,m;u,v)` for `|v| <= 8`: the Fourier form when
/// `m = 1`, the Bessel form otherwise.
pub fn p_direct(params: &KernelParams, cfg: &QuadratureConfig) -> Result<ScaledValue> {
    params.validate()?;
    cfg.validate()?;
    if params.v.norm() > DIRECT_V_MAX {
        return Err(Error::Precondition(format!(
            "direct route needs |v| <= {DIRECT_V_MAX}, got {}; use the contour or recurrence route",
            params.v
        )));
    }
    p_direct_unchecked(params, cfg)
}

/// [`p_direct`] without the `|v| <= 8` guard (absolute accuracy only).
pub(crate) fn p_direct_unchecked(params: &KernelParams, cfg: &QuadratureConfig) -> Result<ScaledValue> {
    if params.m == 1 {
        p_fourier_form(params.n, params.u, params.v, cfg)
    } else {
        p_bessel_form(params, cfg)
    }
}
