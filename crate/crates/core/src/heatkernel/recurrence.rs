use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::contour::p_contour;
use super::direct::{p_direct, p_direct_unchecked};
use super::params::{KernelParams, QuadratureConfig, DIRECT_V_MAX};
use crate::quadrature::{adaptive_panels_rel, PanelRule};
use crate::{Error, Result, ScaledValue};

/// Evaluation route requested by a caller.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Route {
    Direct,
    Contour,
    Auto,
}

/// Which family of evaluators serves a whole computation. Finite-difference
/// stencils and `h`-integrals keep the family chosen at their base point.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Family {
    /// Real-line quadrature, absolute accuracy.
    Small,
    /// Shifted contour for `m = 1`, recurrences above.
    Large,
}

fn family_for(v: f64) -> Family {
    if v.abs() <= DIRECT_V_MAX {
        Family::Small
    } else {
        Family::Large
    }
}

fn eval_family(params: &KernelParams, family: Family, cfg: &QuadratureConfig) -> Result<ScaledValue> {
    match family {
        Family::Small => p_direct_unchecked(params, cfg),
        Family::Large => {
            // p is even in v
            let v = if params.v.re < 0.0 { -params.v } else { params.v };
            let params = KernelParams { v, ..*params };
            match params.m {
                1 => Ok(p_contour(params.n, params.u, v, cfg)?.value),
                m if m % 2 == 1 => derive_in_family(&params.with_m(m - 2), None, family, cfg),
                _ => key2_in_family(&params, family, cfg),
            }
        }
    }
}

/// `p(n,m;u,v)` by the best available route: direct quadrature for
/// `|v| <= 8`; beyond, the contour route for `m = 1`, differentiation in `v`
/// for odd `m` and the `h`-integral for even `m`.
pub fn p_auto(params: &KernelParams, cfg: &QuadratureConfig) -> Result<ScaledValue> {
    params.validate()?;
    cfg.validate()?;
    eval_family(params, family_for(params.v.re), cfg)
}

/// Dispatches on an explicit [`Route`].
pub fn evaluate(params: &KernelParams, route: Route, cfg: &QuadratureConfig) -> Result<ScaledValue> {
    match route {
        Route::Direct => p_direct(params, cfg),
        Route::Contour => {
            if params.m != 1 {
                return Err(Error::Precondition("the contour route is only available for m = 1".into()));
            }
            params.validate()?;
            let v = if params.v.re < 0.0 { -params.v } else { params.v };
            Ok(p_contour(params.n, params.u, v, cfg)?.value)
        }
        Route::Auto => p_auto(params, cfg),
    }
}

fn default_step(v: f64) -> f64 {
    (1e-2 / v).max(1e-3)
}

fn derive_in_family(
    params: &KernelParams,
    step: Option<f64>,
    family: Family,
    cfg: &QuadratureConfig,
) -> Result<ScaledValue> {
    let v = params.v.re;
    if params.v.im != 0.0 || !(v > 0.0) {
        return Err(Error::Domain(format!("differentiation needs real v > 0, got {}", params.v)));
    }
    let h = step.unwrap_or_else(|| default_step(v));
    if !(h > 0.0) || h * 4.0 >= v {
        return Err(Error::Domain(format!("step {h} invalid at v = {v}")));
    }
    let centre = eval_family(params, family, cfg)?;
    // differences of ln(p(x)/p(v)) remove the exponential trend
    let log_ratio = |x: f64| -> Result<f64> {
        let r = eval_family(&params.with_v(x), family, cfg)?.ratio(&centre);
        if !(r.re > 0.0) {
            return Err(Error::NoConvergence(format!(
                "non-positive kernel ratio {r} at v = {x} in the difference stencil"
            )));
        }
        Ok(r.re.ln())
    };
    let l: Vec<f64> = [-4.0, -2.0, -1.0, 1.0, 2.0, 4.0]
        .iter()
        .map(|k| log_ratio(v + k * h))
        .collect::<Result<_>>()?;
    let d_h = (l[1] - 8.0 * l[2] + 8.0 * l[3] - l[4]) / (12.0 * h);
    let d_2h = (l[0] - 8.0 * l[1] + 8.0 * l[4] - l[5]) / (24.0 * h);
    let truncation = (d_h - d_2h).abs() / 15.0;
    if truncation > cfg.derivative_tol * d_h.abs() {
        return Err(Error::ToleranceNotMet(format!(
            "step too large: Richardson estimate {truncation:.3e} exceeds {:.1e} relative at v = {v}, h = {h}",
            cfg.derivative_tol
        )));
    }
    let factor = -d_h / (2.0 * PI * v);
    if !(factor > 0.0) {
        return Err(Error::NoConvergence(format!(
            "derivative has the wrong sign at v = {v} (d log p / dv = {d_h})"
        )));
    }
    Ok(centre * factor)
}

/// `p(n,m+2;u,v) = -(1/(2 pi v)) d/dv p(n,m;u,v)` by fourth-order central
/// differences of `ln p`, checked against the doubled step. `step` defaults
/// to `max(1e-3, 1e-2/v)`.
pub fn derive_m_plus_2(params: &KernelParams, step: Option<f64>, cfg: &QuadratureConfig) -> Result<ScaledValue> {
    params.validate()?;
    cfg.validate()?;
    derive_in_family(params, step, family_for(params.v.re), cfg)
}

/// `d/dv p(n,m;u,v)` by the same stencil as [`derive_m_plus_2`].
pub fn dv_p(params: &KernelParams, cfg: &QuadratureConfig) -> Result<ScaledValue> {
    let v = params.v.re;
    Ok(derive_m_plus_2(params, None, cfg)? * (-2.0 * PI * v))
}

/// Integrand of the `h`-integral after `h = v cosh w`:
/// `2 v cosh w p(n,m+1;u,v cosh w)`.
pub fn key2_integrand(params: &KernelParams, w: f64, cfg: &QuadratureConfig) -> Result<ScaledValue> {
    let v = params.v.re;
    let family = family_for(v);
    let inner = params.with_m(params.m + 1).with_v(v * w.cosh());
    Ok(eval_family(&inner, family, cfg)? * (2.0 * v * w.cosh()))
}

fn key2_in_family(params: &KernelParams, family: Family, cfg: &QuadratureConfig) -> Result<ScaledValue> {
    let v = params.v.re;
    if params.v.im != 0.0 || !(v > 0.0) {
        return Err(Error::Domain(format!("h-integral needs real v > 0, got {}", params.v)));
    }
    let upper = params.with_m(params.m + 1);
    let reference = eval_family(&upper, family, cfg)?;
    let f = |w: f64| -> Complex64 {
        match eval_family(&upper.with_v(v * w.cosh()), family, cfg) {
            Ok(p) => Complex64::new(p.ratio(&reference).re * 2.0 * v * w.cosh(), 0.0),
            Err(_) => Complex64::new(f64::NAN, 0.0),
        }
    };
    // breakpoints every 4 e-folds of the leading e^{-pi h} decay, extended
    // while the integrand is still above the truncation level (or, for the
    // absolute-accuracy family, above its noise floor)
    let at = |k: f64| (1.0 + 4.0 * k / (PI * v)).acosh();
    let mut breaks: Vec<f64> = (0..=4).map(|k| at(k as f64 * 0.25)).collect();
    let planned = (cfg.truncation_margin / 4.0).ceil();
    let mut floor = f(0.0).re.abs() * (-cfg.truncation_margin).exp();
    if family == Family::Small {
        floor = floor.max(1e-14 * f(0.0).re.abs());
    }
    let mut k = 1.0;
    loop {
        k += 1.0;
        let w = at(k);
        breaks.push(w);
        if k >= planned && (f(w).re.abs() < floor || k >= 3.0 * planned) {
            break;
        }
    }
    breaks.dedup();
    // a differentiated integrand is only good to a small multiple of its stencil noise
    let rel_tol = if family == Family::Large && upper.m > 1 {
        cfg.rel_tol.max(1e-3 * cfg.derivative_tol)
    } else {
        cfg.rel_tol
    };
    let r = adaptive_panels_rel(&f, &breaks, 0.0, rel_tol, cfg.max_panels, PanelRule::Nested10)?;
    if !r.value.re.is_finite() {
        return Err(Error::NoConvergence(format!(
            "h-integral integrand failed to evaluate at v = {v}"
        )));
    }
    Ok(reference * r.value.re)
}

/// `p(n,m;u,v) = 2 ∫_v^∞ h (h^2 - v^2)^{-1/2} p(n,m+1;u,h) dh`, computed
/// with `h = v cosh w` and truncated once the integrand has decayed
/// `truncation_margin` e-folds.
pub fn integrate_key2(params: &KernelParams, cfg: &QuadratureConfig) -> Result<ScaledValue> {
    params.validate()?;
    cfg.validate()?;
    key2_in_family(params, family_for(params.v.re), cfg)
}

/// The physical kernel `p_h(z,t) = h^{-(n+m)} p(n,m;|z|^2/h,|t|/h)`.
pub fn heat_kernel(z_sq: f64, t_abs: f64, h: f64, n: u32, m: u32, cfg: &QuadratureConfig) -> Result<ScaledValue> {
    if !(h > 0.0) || !h.is_finite() {
        return Err(Error::Domain(format!("h must be > 0, got {h}")));
    }
    if !(z_sq >= 0.0) || !(t_abs >= 0.0) {
        return Err(Error::Domain(format!(
            "need |z|^2 >= 0 and |t| >= 0, got ({z_sq}, {t_abs})"
        )));
    }
    let params = KernelParams::new(n, m, z_sq / h, t_abs / h)?;
    Ok(p_auto(&params, cfg)? * ScaledValue::from_parts(1.0, -((n + m) as f64) * h.ln()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derivative_of_closed_form() {
        // p(1,3;0,v) = sech^2(x) tanh(x) / (32 v), x = pi v / 2
        let cfg = QuadratureConfig::default();
        let v = 3.0;
        let got = derive_m_plus_2(&KernelParams::new(1, 1, 0.0, v).unwrap(), None, &cfg)
            .unwrap()
            .to_f64();
        let x = 0.5 * PI * v;
        let exact = x.tanh() / (32.0 * v * x.cosh().powi(2));
        assert!((got / exact - 1.0).abs() < 1e-7, "{got} vs {exact}");
    }

    #[test]
    fn contour_route_rejects_m_above_one() {
        let p = KernelParams::new(1, 2, 1.0, 10.0).unwrap();
        assert!(matches!(
            evaluate(&p, Route::Contour, &QuadratureConfig::default()),
            Err(Error::Precondition(_))
        ));
    }
}
