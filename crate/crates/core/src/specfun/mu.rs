use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{COT_COEFFS, SERIES_RADIUS};
use crate::{Error, Result};

const NEWTON_TOL: f64 = 1e-13;
const NEWTON_MAX: usize = 60;
const NEAR_PI: f64 = 0.5;

/// Shape of the domain `Omega_1 = {|x| > r0, |arg x| < eta0}` of the inverse
/// branch and of its image `Omega_2 = {|pi - w| < r0_prime, |arg(pi - w)| < eta0_prime}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OmegaConfig {
    pub r0: f64,
    pub eta0: f64,
    pub r0_prime: f64,
    pub eta0_prime: f64,
}

impl Default for OmegaConfig {
    fn default() -> Self {
        OmegaConfig {
            r0: 100.0,
            eta0: PI / 8.0,
            r0_prime: 0.5,
            eta0_prime: PI / 16.0,
        }
    }
}

impl OmegaConfig {
    pub fn in_omega1(&self, x: Complex64) -> bool {
        x.norm() > self.r0 && x.arg().abs() < self.eta0
    }

    pub fn eps_in_omega2(&self, eps: Complex64) -> bool {
        eps.norm() < self.r0_prime && eps.arg().abs() < self.eta0_prime
    }
}

fn mu_series(w: Complex64) -> Complex64 {
    let w2 = w * w;
    let mut acc = Complex64::new(0.0, 0.0);
    for (k, c) in COT_COEFFS.iter().enumerate().rev() {
        let k = (k + 1) as f64;
        acc = acc * w2 - 2.0 * k * c;
    }
    acc * w
}

fn mu_prime_series(w: Complex64) -> Complex64 {
    let w2 = w * w;
    let mut acc = Complex64::new(0.0, 0.0);
    for (k, c) in COT_COEFFS.iter().enumerate().rev() {
        let k = (k + 1) as f64;
        acc = acc * w2 - 2.0 * k * (2.0 * k - 1.0) * c;
    }
    acc
}

/// `mu(pi - eps)`, evaluated from `eps` without forming `pi - eps`.
pub fn mu_near_pi(eps: Complex64) -> Complex64 {
    let s = eps.sin();
    (2.0 * PI - 2.0 * eps + (2.0 * eps).sin()) / (2.0 * s * s)
}

/// `mu'(pi - eps)`.
pub fn mu_prime_near_pi(eps: Complex64) -> Complex64 {
    let (s, c) = (eps.sin(), eps.cos());
    2.0 * (s + (PI - eps) * c) / (s * s * s)
}

fn pole_check(w: Complex64) -> Result<()> {
    let k = (w.re / PI).round();
    if k != 0.0 && (w - k * PI).norm() < 1e-14 * PI.max(w.norm()) {
        return Err(Error::Pole(format!("mu: sin w vanishes at w = {w}")));
    }
    Ok(())
}

/// `mu(w) = (2w - sin 2w) / (2 sin^2 w)`.
pub fn mu(w: Complex64) -> Result<Complex64> {
    pole_check(w)?;
    if w.norm() < SERIES_RADIUS {
        return Ok(mu_series(w));
    }
    if (PI - w).norm() < NEAR_PI {
        return Ok(mu_near_pi(PI - w));
    }
    if (PI + w).norm() < NEAR_PI {
        return Ok(-mu_near_pi(PI + w));
    }
    let s = w.sin();
    Ok((2.0 * w - (2.0 * w).sin()) / (2.0 * s * s))
}

/// `mu'(w) = 2 (sin w - w cos w) / sin^3 w`.
pub fn mu_prime(w: Complex64) -> Result<Complex64> {
    pole_check(w)?;
    if w.norm() < SERIES_RADIUS {
        return Ok(mu_prime_series(w));
    }
    if (PI - w).norm() < NEAR_PI {
        return Ok(mu_prime_near_pi(PI - w));
    }
    if (PI + w).norm() < NEAR_PI {
        return Ok(mu_prime_near_pi(PI + w));
    }
    let (s, c) = (w.sin(), w.cos());
    Ok(2.0 * (s - w * c) / (s * s * s))
}

/// Solves `mu(pi - eps) = x` for small `eps` by Newton on
/// `1/mu(pi - eps) - 1/x`, seeded at `sqrt(pi/x)`. No domain check on `x`.
pub fn solve_eps(x: Complex64) -> Result<Complex64> {
    if x.norm() == 0.0 || !x.re.is_finite() || !x.im.is_finite() {
        return Err(Error::Domain(format!("mu inverse: invalid target {x}")));
    }
    let target = 1.0 / x;
    let mut eps = (PI / x).sqrt();
    for _ in 0..NEWTON_MAX {
        let m = mu_near_pi(eps);
        let g = 1.0 / m - target;
        let dg = mu_prime_near_pi(eps) / (m * m);
        let mut step = g / dg;
        // damp steps that would leave the right half plane near the pole at 0
        let mut next = eps - step;
        let mut damp = 0;
        while (next.re <= 0.0 || next.norm() >= PI) && damp < 50 {
            step *= 0.5;
            next = eps - step;
            damp += 1;
        }
        eps = next;
        if step.norm() <= NEWTON_TOL * eps.norm() {
            // one more step is cheap and lands on the fixed point
            let m = mu_near_pi(eps);
            let g = 1.0 / m - target;
            let dg = mu_prime_near_pi(eps) / (m * m);
            return Ok(eps - g / dg);
        }
    }
    Err(Error::NoConvergence(format!(
        "mu inverse: Newton did not converge for x = {x}"
    )))
}

/// `eps = pi - mu^{-1}(x)` on the branch near `pi`, for `x` in `Omega_1`.
pub fn mu_inverse_eps(x: Complex64, omega: &OmegaConfig) -> Result<Complex64> {
    if !omega.in_omega1(x) {
        return Err(Error::Domain(format!(
            "mu inverse: x = {x} outside Omega_1 (|x| > {}, |arg x| < {})",
            omega.r0, omega.eta0
        )));
    }
    let eps = solve_eps(x)?;
    if !omega.eps_in_omega2(eps) {
        return Err(Error::NoConvergence(format!(
            "mu inverse: solution eps = {eps} outside Omega_2"
        )));
    }
    Ok(eps)
}

/// `theta = mu^{-1}(x)` near `pi`, for `x` in `Omega_1`.
///
/// Rounding `theta` to a double loses the low bits of `pi - theta`; callers
/// needing `mu(theta)` to full relative precision should keep `eps` (see
/// [`mu_inverse_eps`], [`theta_eps`]).
pub fn mu_inverse(x: Complex64, omega: &OmegaConfig) -> Result<Complex64> {
    Ok(PI - mu_inverse_eps(x, omega)?)
}

/// `eps` in `(0, pi)` with `mu(pi - eps) = x` for real `x > 0`.
fn solve_eps_real(x: f64) -> Result<f64> {
    let f = |e: f64| 1.0 / mu_near_pi(Complex64::new(e, 0.0)).re - 1.0 / x;
    let df = |e: f64| {
        let z = Complex64::new(e, 0.0);
        let m = mu_near_pi(z).re;
        mu_prime_near_pi(z).re / (m * m)
    };
    // f increases in eps: from -1/x at 0 to +inf at pi
    let (mut lo, mut hi) = (0.0f64, PI);
    let mut e = (PI / x).sqrt().min(0.5 * PI);
    for _ in 0..200 {
        let fe = f(e);
        if fe == 0.0 {
            return Ok(e);
        }
        if fe > 0.0 {
            hi = e;
        } else {
            lo = e;
        }
        let d = df(e);
        let mut next = e - fe / d;
        if !(next > lo && next < hi) || !next.is_finite() {
            next = 0.5 * (lo + hi);
        }
        if (next - e).abs() <= 1e-15 * e {
            return Ok(next);
        }
        e = next;
    }
    Err(Error::NoConvergence(format!("real mu inverse did not converge for x = {x}")))
}

/// Real branch of `mu^{-1}` on `[0, pi)`, returned as `theta`.
fn mu_inverse_real(x: f64) -> Result<f64> {
    if x == 0.0 {
        return Ok(0.0);
    }
    if x > 10.0 {
        return Ok(PI - solve_eps_real(x)?);
    }
    let (mut lo, mut hi) = (0.0f64, PI - 0.4);
    let mut th = 1.5 * x.min(1.0);
    for _ in 0..200 {
        let w = Complex64::new(th, 0.0);
        let fe = mu(w)?.re - x;
        if fe > 0.0 {
            hi = th;
        } else {
            lo = th;
        }
        let mut next = th - fe / mu_prime(w)?.re;
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        if (next - th).abs() <= 1e-15 * th {
            return Ok(next);
        }
        th = next;
    }
    Err(Error::NoConvergence(format!("real mu inverse did not converge for x = {x}")))
}

/// Squared Carnot-Caratheodory distance `d^2(z, t)` from `|z|^2` and `|t|`.
pub fn cc_distance_squared(z_sq: f64, t_abs: f64) -> Result<f64> {
    if !(z_sq >= 0.0) || !(t_abs >= 0.0) || !z_sq.is_finite() || !t_abs.is_finite() {
        return Err(Error::Domain(format!(
            "cc distance: need z_sq >= 0 and t >= 0, got ({z_sq}, {t_abs})"
        )));
    }
    if z_sq == 0.0 {
        return Ok(4.0 * PI * t_abs);
    }
    if t_abs == 0.0 {
        return Ok(z_sq);
    }
    let x = 4.0 * t_abs / z_sq;
    if x > 10.0 {
        let e = solve_eps_real(x)?;
        let r = (PI - e) / e.sin();
        return Ok(r * r * z_sq);
    }
    let th = mu_inverse_real(x)?;
    let r = if th < 1e-8 { 1.0 } else { th / th.sin() };
    Ok(r * r * z_sq)
}

/// The saddle data `theta = mu^{-1}(4v/u)`, `eps = pi - theta`,
/// `d^2 = (theta / sin theta)^2 u`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThetaEps {
    pub theta: Complex64,
    pub eps: Complex64,
    pub d_squared: Complex64,
    pub u: f64,
    pub v: Complex64,
}

impl ThetaEps {
    /// `d/dv d^2(u, v) = 4 theta`.
    pub fn dd2_dv(&self) -> Complex64 {
        4.0 * self.theta
    }

    /// `mu(theta)`, evaluated through `eps`.
    pub fn mu_theta(&self) -> Complex64 {
        mu_near_pi(self.eps)
    }
}

fn compose_theta_eps(u: f64, v: Complex64, eps: Complex64) -> ThetaEps {
    let theta = PI - eps;
    // sin theta = sin eps
    let r = theta / eps.sin();
    ThetaEps {
        theta,
        eps,
        d_squared: r * r * u,
        u,
        v,
    }
}

/// Saddle data for `u > 0` with `4v/u` in `Omega_1`.
pub fn theta_eps(u: f64, v: Complex64, omega: &OmegaConfig) -> Result<ThetaEps> {
    if !(u > 0.0) || !u.is_finite() {
        return Err(Error::Domain(format!("theta_eps: u = {u} must be > 0")));
    }
    let eps = mu_inverse_eps(4.0 * v / u, omega)?;
    Ok(compose_theta_eps(u, v, eps))
}

/// Saddle data without the `Omega_1` restriction; `4v/u` only needs to lie
/// in the right half plane. Used where the circle radius `|eps|` is wanted
/// for moderate `v / u`.
pub fn theta_eps_unchecked(u: f64, v: Complex64) -> Result<ThetaEps> {
    if !(u > 0.0) || !u.is_finite() {
        return Err(Error::Domain(format!("theta_eps: u = {u} must be > 0")));
    }
    let x = 4.0 * v / u;
    if !(x.re > 0.0) {
        return Err(Error::Domain(format!("theta_eps: 4v/u = {x} must have Re > 0")));
    }
    let eps = if x.im == 0.0 {
        Complex64::new(solve_eps_real(x.re)?, 0.0)
    } else {
        solve_eps(x)?
    };
    Ok(compose_theta_eps(u, v, eps))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn series_and_closed_form_agree() {
        for &r in &[0.3, 0.49, 0.51, 1.0] {
            let w = c(r);
            let s = w.sin();
            let closed = (2.0 * w - (2.0 * w).sin()) / (2.0 * s * s);
            assert!((mu(w).unwrap() - closed).norm() < 1e-14 * closed.norm());
        }
    }

    #[test]
    fn derivative_matches_difference() {
        for &w in &[0.2, 1.0, 2.0, 2.9] {
            let h = 1e-5;
            let fd = (mu(c(w + h)).unwrap() - mu(c(w - h)).unwrap()) / (2.0 * h);
            let d = mu_prime(c(w)).unwrap();
            assert!((fd - d).norm() < 1e-7 * d.norm(), "w={w}");
        }
    }

    #[test]
    fn poles_are_reported() {
        assert!(matches!(mu(c(PI)), Err(Error::Pole(_))));
        assert!(matches!(mu(c(-2.0 * PI)), Err(Error::Pole(_))));
    }

    #[test]
    fn omega_violations_are_domain_errors() {
        let o = OmegaConfig::default();
        assert!(matches!(mu_inverse(c(50.0), &o), Err(Error::Domain(_))));
        assert!(matches!(
            mu_inverse(Complex64::from_polar(1e4, 0.5), &o),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn unchecked_matches_checked_in_omega1() {
        let a = theta_eps_unchecked(1.0, c(500.0)).unwrap();
        let b = theta_eps(1.0, c(500.0), &OmegaConfig::default()).unwrap();
        assert!((a.eps - b.eps).norm() < 1e-15);
        let small = theta_eps_unchecked(1.0, c(4.0)).unwrap();
        assert!((small.mu_theta().re - 16.0).abs() < 1e-12);
    }

    proptest! {
        #[test]
        fn real_inverse_roundtrip(x in 1e-3f64..1e7) {
            let th = mu_inverse_real(x).unwrap();
            let back = if x > 10.0 { mu_near_pi(c(solve_eps_real(x).unwrap())).re } else { mu(c(th)).unwrap().re };
            prop_assert!((back - x).abs() <= 1e-12 * x);
        }
    }
}
