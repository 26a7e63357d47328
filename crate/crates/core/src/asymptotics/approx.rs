use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::specfun::{bessel_i_scaled, ln_factorial, theta_eps, OmegaConfig, ThetaEps};
use crate::{Complex64, Error, Result, ScaledValue};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AsymptoticRegime {
    UZero,
    UPositive,
}

/// A leading-order approximation stored as three factors:
/// `value = prefactor * e^{exp_log} * bessel_part`.
///
/// For `u > 0`, `prefactor = 2^{-2n-(m-1)/2} v^{-(m-1)/2}`, `exp_log = -d^2/4`
/// and `bessel_part = eps^{1-n} e^{-z} I_{n-1}(z)` with `z = pi u / (2 eps)`.
/// For `u = 0` the prefactor holds the constant and power of `v`,
/// `exp_log = -pi v` and `bessel_part = 1`.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct AsymptoticApprox {
    pub value: ScaledValue,
    pub prefactor: f64,
    pub exp_log: Complex64,
    pub bessel_part: ScaledValue,
    pub regime_tag: AsymptoticRegime,
}

impl AsymptoticApprox {
    fn compose(prefactor: f64, exp_log: Complex64, bessel_part: ScaledValue, regime_tag: AsymptoticRegime) -> Self {
        let value = ScaledValue::from_real(prefactor) * ScaledValue::exp(exp_log) * bessel_part;
        AsymptoticApprox {
            value,
            prefactor,
            exp_log,
            bessel_part,
            regime_tag,
        }
    }
}

fn check_indices(n: u32, m: u32, v: f64) -> Result<()> {
    if n < 1 || m < 1 {
        return Err(Error::Domain(format!("n and m must be >= 1, got n = {n}, m = {m}")));
    }
    if !(v > 0.0) || !v.is_finite() {
        return Err(Error::Domain(format!("v must be finite and > 0, got {v}")));
    }
    Ok(())
}

/// `ln` of the `u = 0` constant and the power of `v`.
fn u_zero_law(n: u32, m: u32) -> (f64, f64) {
    let k = (m / 2) as f64;
    let base = -k * 2f64.ln() - n as f64 * 4f64.ln() - ln_factorial(n - 1);
    if m % 2 == 1 {
        (base, n as f64 - k - 1.0)
    } else {
        (base + 0.5 * 2f64.ln(), n as f64 - k - 0.5)
    }
}

/// Leading large-`v` behaviour of `b(n,m;v) = p(n,m;0,v)`:
/// `v^{n-k-1} e^{-pi v} / (2^k 4^n (n-1)!)` for `m = 2k+1` and
/// `sqrt 2 v^{n-k-1/2} e^{-pi v} / (2^k 4^n (n-1)!)` for `m = 2k`.
pub fn b_asymp(n: u32, m: u32, v: f64) -> Result<ScaledValue> {
    Ok(u_zero_approx(n, m, v)?.value)
}

fn u_zero_approx(n: u32, m: u32, v: f64) -> Result<AsymptoticApprox> {
    check_indices(n, m, v)?;
    let (log_c, power) = u_zero_law(n, m);
    // the prefactor stays representable for any v a double can hold
    let prefactor = (log_c + power * v.ln()).exp();
    Ok(AsymptoticApprox::compose(
        prefactor,
        Complex64::new(-PI * v, 0.0),
        ScaledValue::from_real(1.0),
        AsymptoticRegime::UZero,
    ))
}

/// The right-hand side `q(n,m;u,v)` of the large-`v` law for `u > 0`,
/// requiring `4v/u` in `Omega_1`.
pub fn q_theorem(n: u32, m: u32, u: f64, v: f64) -> Result<AsymptoticApprox> {
    q_theorem_with(n, m, u, v, &OmegaConfig::default())
}

pub fn q_theorem_with(n: u32, m: u32, u: f64, v: f64, omega: &OmegaConfig) -> Result<AsymptoticApprox> {
    check_indices(n, m, v)?;
    if !(u > 0.0) || !u.is_finite() {
        return Err(Error::Domain(format!("q_theorem needs u > 0, got {u}; use b_asymp for u = 0")));
    }
    let te = theta_eps(u, Complex64::new(v, 0.0), omega)?;
    Ok(compose_q(n, m, &te))
}

fn compose_q(n: u32, m: u32, te: &ThetaEps) -> AsymptoticApprox {
    let v = te.v.re;
    let half = 0.5 * (m as f64 - 1.0);
    let prefactor = (-(2.0 * n as f64 + half) * 2f64.ln() - half * v.ln()).exp();
    let z = PI * te.u / (2.0 * te.eps);
    let bessel = bessel_i_scaled(n as f64 - 1.0, z).expect("order n - 1 >= 0 and Re z > 0 in Omega_1");
    let bessel_part = ScaledValue::exp((1.0 - n as f64) * te.eps.ln()) * bessel;
    AsymptoticApprox::compose(prefactor, -0.25 * te.d_squared, bessel_part, AsymptoticRegime::UPositive)
}

/// `q_theorem` for `u > 0`, `b_asymp` (as an [`AsymptoticApprox`]) for `u = 0`.
pub fn approximation(n: u32, m: u32, u: f64, v: f64) -> Result<AsymptoticApprox> {
    if u == 0.0 {
        u_zero_approx(n, m, v)
    } else {
        q_theorem(n, m, u, v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn b_asymp_coefficients() {
        let b = b_asymp(1, 1, 10.0).unwrap();
        assert!((b.ln_abs() - (-10.0 * PI + 0.25f64.ln())).abs() < 1e-12);
        let v = 7.0;
        let b = b_asymp(3, 3, v).unwrap();
        let exact = (1.0 / (2.0 * 64.0 * 2.0) * v).ln() - PI * v;
        assert!((b.ln_abs() - exact).abs() < 1e-12);
        let b = b_asymp(2, 2, v).unwrap();
        let exact = (2f64.sqrt() / (2.0 * 16.0) * v.sqrt()).ln() - PI * v;
        assert!((b.ln_abs() - exact).abs() < 1e-12);
    }

    #[test]
    fn m_one_prefactor() {
        for n in 1..4 {
            let q = q_theorem(n, 1, 1.0, 100.0).unwrap();
            assert!((q.prefactor - 4f64.powi(-(n as i32))).abs() < 1e-16);
        }
    }

    #[test]
    fn recomposition() {
        let q = q_theorem(2, 3, 1.0, 200.0).unwrap();
        let parts = q.prefactor.ln() + q.exp_log.re + q.bessel_part.ln_abs();
        assert!((q.value.ln_abs() - parts).abs() <= 1e-13 * parts.abs());
    }

    #[test]
    fn rejects_u_zero_and_small_x() {
        assert!(matches!(q_theorem(1, 1, 0.0, 50.0), Err(Error::Domain(_))));
        assert!(matches!(q_theorem(1, 1, 1.0, 10.0), Err(Error::Domain(_))));
    }
}
