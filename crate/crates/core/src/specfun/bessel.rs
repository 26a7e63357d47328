use std::f64::consts::PI;

use num_complex::Complex64;

use super::gamma::{gamma_fn, ln_gamma};
use crate::quadrature::{adaptive_panels, periodic_mean, tanh_sinh, PanelRule};
use crate::{Error, Result, ScaledValue};

const SERIES_LIMIT: f64 = 2.0;
const HANKEL_LIMIT: f64 = 25.0;
/// Switch from the finite integral to the large-argument form of `I_nu`.
pub const I_SWITCH: f64 = 30.0;

fn is_integer(x: f64) -> bool {
    x == x.round()
}

fn is_half_integer(x: f64) -> bool {
    is_integer(x - 0.5)
}

/// Bessel function of the first kind `J_nu(x)` for real order `nu >= -1/2`.
pub fn bessel_j(nu: f64, x: f64) -> Result<f64> {
    if !(nu >= -0.5) || !nu.is_finite() {
        return Err(Error::Domain(format!("bessel_j: order {nu} must be >= -1/2")));
    }
    if !(x >= 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!("bessel_j: argument {x} must be finite and >= 0")));
    }
    if x == 0.0 {
        return Ok(if nu == 0.0 {
            1.0
        } else if nu > 0.0 {
            0.0
        } else {
            f64::INFINITY
        });
    }
    if x <= SERIES_LIMIT || x < nu {
        return Ok(normalized_series(nu, x) * (0.5 * x).powf(nu));
    }
    if x >= HANKEL_LIMIT + nu * nu {
        return Ok(hankel_j(nu, x));
    }
    if is_half_integer(nu) {
        return Ok(half_integer_j(nu, x));
    }
    if is_integer(nu) {
        return Ok(integer_j(nu as i32, x));
    }
    schlafli_j(nu, x)
}

/// `(x/2)^{-nu} J_nu(x)`, analytic through `x = 0` where it equals
/// `1/Gamma(nu+1)`.
pub fn bessel_j_normalized(nu: f64, x: f64) -> Result<f64> {
    if !(nu >= -0.5) {
        return Err(Error::Domain(format!("bessel_j_normalized: order {nu} must be >= -1/2")));
    }
    let x = x.abs();
    if x <= SERIES_LIMIT || x < nu {
        return Ok(normalized_series(nu, x));
    }
    Ok(bessel_j(nu, x)? * (0.5 * x).powf(-nu))
}

/// `sum_k (-x^2/4)^k / (k! Gamma(nu+k+1))`.
fn normalized_series(nu: f64, x: f64) -> f64 {
    let q = -0.25 * x * x;
    let mut term = 1.0 / gamma_fn(nu + 1.0).unwrap_or(f64::INFINITY);
    if !term.is_finite() {
        // nu + 1 never reaches a pole for nu >= -1/2
        term = (-ln_gamma(nu + 1.0)).exp();
    }
    let mut sum = term;
    for k in 1..200 {
        term *= q / (k as f64 * (nu + k as f64));
        sum += term;
        if term.abs() <= 1e-17 * sum.abs() {
            break;
        }
    }
    sum
}

fn half_integer_j(nu: f64, x: f64) -> f64 {
    let pref = (2.0 / (PI * x)).sqrt();
    let mut j_prev = pref * x.cos();
    if nu == -0.5 {
        return j_prev;
    }
    let mut j = pref * x.sin();
    let mut order = 0.5;
    while order < nu {
        let next = 2.0 * order / x * j - j_prev;
        j_prev = j;
        j = next;
        order += 1.0;
    }
    j
}

fn integer_j(n: i32, x: f64) -> f64 {
    // J_n(x) = (1/2pi) ∫ e^{i(x sin t - n t)} dt, spectrally accurate
    let nodes = (2.0 * (x + n.abs() as f64 + 40.0)).ceil() as usize;
    let f = |t: f64| Complex64::from_polar(1.0, x * t.sin() - n as f64 * t);
    periodic_mean(&f, nodes).re
}

fn hankel_j(nu: f64, x: f64) -> f64 {
    let mu4 = 4.0 * nu * nu;
    let z8 = 8.0 * x;
    let mut p = 1.0;
    let mut q = 0.0;
    let mut term = 1.0;
    let mut prev_abs = f64::INFINITY;
    for k in 1..60 {
        let odd = (2 * k - 1) as f64;
        term *= (mu4 - odd * odd) / (k as f64 * z8);
        if term.abs() > prev_abs {
            break;
        }
        prev_abs = term.abs();
        match k % 4 {
            1 => q += term,
            2 => p -= term,
            3 => q -= term,
            _ => p += term,
        }
        if term.abs() < 1e-17 {
            break;
        }
    }
    // chi = x - (nu/2 + 1/4) pi, expanded to keep full precision in x
    let c = (0.5 * nu + 0.25) * PI;
    let (sx, cx) = x.sin_cos();
    let (sc, cc) = c.sin_cos();
    let cos_chi = cx * cc + sx * sc;
    let sin_chi = sx * cc - cx * sc;
    (2.0 / (PI * x)).sqrt() * (p * cos_chi - q * sin_chi)
}

fn schlafli_j(nu: f64, x: f64) -> Result<f64> {
    let first = |t: f64| Complex64::new((nu * t - x * t.sin()).cos(), 0.0);
    let a = adaptive_panels(&first, &[0.0, PI], 1e-15, 4096, PanelRule::Bisect20)?.value.re / PI;
    let tail = |t: f64| Complex64::new((-x * t.sinh() - nu * t).exp(), 0.0);
    let upper = (40.0 / x).asinh() + 1.0;
    let b = adaptive_panels(&tail, &[0.0, upper], 1e-16, 4096, PanelRule::Bisect20)?.value.re;
    Ok(a - (nu * PI).sin() / PI * b)
}

/// `e^{-z} I_nu(z)` for `nu > -1/2` and `Re z >= 0`.
///
/// Small `|z|` uses the finite integral
/// `(z/2)^nu / (sqrt(pi) Gamma(nu+1/2)) ∫_0^pi sin^{2nu} t e^{-z(1-cos t)} dt`;
/// large `|z|` uses the Hankel expansion of `sqrt(2 pi z) e^{-z} I_nu(z)`.
pub fn bessel_i_scaled(nu: f64, z: Complex64) -> Result<ScaledValue> {
    if !(nu > -0.5) || !nu.is_finite() {
        return Err(Error::Domain(format!("bessel_i_scaled: order {nu} must be > -1/2")));
    }
    if z.re < 0.0 || !z.re.is_finite() || !z.im.is_finite() {
        return Err(Error::Domain(format!("bessel_i_scaled: need Re z >= 0, got {z}")));
    }
    if z.norm() >= I_SWITCH && z.arg().abs() <= PI / 4.0 {
        return Ok(bessel_i_scaled_large(nu, z));
    }
    bessel_i_scaled_integral(nu, z)
}

/// The finite-integral evaluation, valid for every `z`; exposed for the
/// switchover cross-check.
pub fn bessel_i_scaled_integral(nu: f64, z: Complex64) -> Result<ScaledValue> {
    if z.norm() == 0.0 {
        return Ok(if nu == 0.0 { ScaledValue::ONE } else { ScaledValue::ZERO });
    }
    // fold [pi/2, pi] onto [0, pi/2] so the only endpoint singularity
    // (negative nu) sits at t = 0, where tanh-sinh resolves it
    let f = |t: f64| {
        let s = t.sin();
        let w = if nu == 0.0 { 1.0 } else { s.powf(2.0 * nu) };
        // 1 - cos t = 2 sin^2(t/2) avoids cancellation near t = 0
        let h = 2.0 * (0.5 * t).sin().powi(2);
        ((-z * h).exp() + (-z * (2.0 - h)).exp()) * w
    };
    let integral = if nu >= 0.0 && is_integer(2.0 * nu) {
        adaptive_panels(&f, &[0.0, 0.25 * PI, 0.5 * PI], 1e-15, 4096, PanelRule::Bisect20)?.value
    } else {
        tanh_sinh(&f, 0.0, 0.5 * PI, 1e-14)?
    };
    let log_pref = (0.5 * z).ln() * nu - 0.5 * PI.ln() - ln_gamma(nu + 0.5);
    Ok(ScaledValue::exp(log_pref) * integral)
}

/// The Hankel-series evaluation for large `|z|`.
pub fn bessel_i_scaled_large(nu: f64, z: Complex64) -> ScaledValue {
    let mu4 = 4.0 * nu * nu;
    let mut sum = Complex64::new(1.0, 0.0);
    let mut term = Complex64::new(1.0, 0.0);
    let mut prev_abs = f64::INFINITY;
    for k in 1..80 {
        let odd = (2 * k - 1) as f64;
        term *= -(mu4 - odd * odd) / (k as f64 * 8.0 * z);
        let a = term.norm();
        if a > prev_abs {
            break;
        }
        prev_abs = a;
        sum += term;
        if a < 1e-17 * sum.norm() {
            break;
        }
    }
    ScaledValue::from_complex(sum / (2.0 * PI * z).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn series_and_trapezoid_agree_on_j0() {
        // J_0(2.5) = -0.04838377646819...
        let v = bessel_j(0.0, 2.5).unwrap();
        assert!((v + 0.048_383_776_468_198).abs() < 1e-15);
        assert!((normalized_series(0.0, 2.5) - v).abs() < 1e-14);
    }

    #[test]
    fn hankel_matches_trapezoid_at_switch() {
        for &x in &[26.0, 30.0, 40.0] {
            for n in 0..3 {
                let a = integer_j(n, x);
                let b = hankel_j(n as f64, x);
                assert!((a - b).abs() < 1e-14, "n={n} x={x}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn schlafli_matches_series() {
        let a = schlafli_j(0.3, 2.0).unwrap();
        let b = normalized_series(0.3, 2.0) * 1f64.powf(0.3);
        assert!((a - b).abs() < 1e-13);
    }

    #[test]
    fn integral_and_hankel_i_agree_on_overlap() {
        for &x in &[20.0, 30.0, 40.0] {
            for &nu in &[0.0, 1.0, 2.5] {
                let z = Complex64::new(x, 0.0);
                let a = bessel_i_scaled_integral(nu, z).unwrap().to_f64();
                let b = bessel_i_scaled_large(nu, z).to_f64();
                assert!(((a - b) / b).abs() < 1e-12, "nu={nu} x={x}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn negative_order_integral() {
        // I_{-1/4}: compare the integral with the Hankel form at large z
        let z = Complex64::new(45.0, 0.0);
        let a = bessel_i_scaled_integral(-0.25, z).unwrap().to_f64();
        let b = bessel_i_scaled_large(-0.25, z).to_f64();
        assert!(((a - b) / b).abs() < 1e-11);
    }
}
