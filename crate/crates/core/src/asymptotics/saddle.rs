use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::quadrature::periodic_mean_converged;
use crate::specfun::{
    bessel_i_scaled, cot_minus_inv, s_coth_s, s_coth_s_prime, theta_eps, x_cot_x, OmegaConfig,
    COT_COEFFS, SERIES_RADIUS,
};
use crate::{Complex64, Error, Result};

fn check_pole(s: Complex64) -> Result<()> {
    // poles of coth at s = i k pi, k != 0
    let k = (s.im / PI).round();
    if k != 0.0 && (s - Complex64::new(0.0, k * PI)).norm() < 1e-300_f64.max(1e-15 * s.norm()) {
        return Err(Error::Pole(format!("phi has a pole at s = {s}")));
    }
    Ok(())
}

/// `phi(u,v;s) = i v s - (u/4) s coth s`.
pub fn saddle_phi(u: f64, v: Complex64, s: Complex64) -> Result<Complex64> {
    check_pole(s)?;
    Ok(Complex64::i() * v * s - 0.25 * u * s_coth_s(s))
}

/// `phi'(u,v;s) = i v - (u/4)(coth s - s / sinh^2 s)`.
pub fn saddle_phi_prime(u: f64, v: Complex64, s: Complex64) -> Result<Complex64> {
    check_pole(s)?;
    Ok(Complex64::i() * v - 0.25 * u * s_coth_s_prime(s))
}

/// `G(u;xi) = (u/4)(pi (cot xi - 1/xi) - xi cot xi)`, with `G(u;0) = -u/4`.
pub fn g_function(u: f64, xi: Complex64) -> Complex64 {
    0.25 * u * (PI * cot_minus_inv(xi) - x_cot_x(xi))
}

/// `d/dxi G(u;xi)`.
pub fn g_prime(u: f64, xi: Complex64) -> Complex64 {
    if xi.norm() < SERIES_RADIUS {
        // cot x - 1/x = sum c_k x^{2k-1}, x cot x = 1 + sum c_k x^{2k}
        let x2 = xi * xi;
        let mut odd = Complex64::new(0.0, 0.0);
        let mut even = Complex64::new(0.0, 0.0);
        for (k, c) in COT_COEFFS.iter().enumerate().rev() {
            let k = (k + 1) as f64;
            odd = odd * x2 + (2.0 * k - 1.0) * c;
            even = even * x2 + 2.0 * k * c;
        }
        0.25 * u * (PI * odd - even * xi)
    } else {
        let sn = xi.sin();
        let s2 = sn * sn;
        let cot = xi.cos() / sn;
        0.25 * u * (PI * (1.0 / (xi * xi) - 1.0 / s2) - (cot - xi / s2))
    }
}

/// `sum_{j=0}^{p-2} (j+1) a^j b^{p-2-j}`, so that
/// `b^p - a^p - p a^{p-1}(b - a) = (b - a)^2 * taylor_kernel(p, a, b)`.
fn taylor_kernel(p: usize, a: Complex64, b: Complex64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    let mut apow = Complex64::new(1.0, 0.0);
    for j in 0..p.saturating_sub(1) {
        acc += (j + 1) as f64 * apow * b.powu((p - 2 - j) as u32);
        apow *= a;
    }
    acc
}

/// Taylor remainder `R(u,eps;xi) = G(xi) - G(eps) - G'(eps)(xi - eps)`.
/// Near the origin the quadratic factor `(xi - eps)^2` is taken out of the
/// series so the cancellation never happens.
pub fn remainder_r(u: f64, eps: Complex64, xi: Complex64) -> Complex64 {
    if eps.norm().max(xi.norm()) < SERIES_RADIUS {
        let mut acc = Complex64::new(0.0, 0.0);
        for (k, c) in COT_COEFFS.iter().enumerate() {
            let k = k + 1;
            acc += c * (PI * taylor_kernel(2 * k - 1, eps, xi) - taylor_kernel(2 * k, eps, xi));
        }
        let d = xi - eps;
        0.25 * u * d * d * acc
    } else {
        g_function(u, xi) - g_function(u, eps) - g_prime(u, eps) * (xi - eps)
    }
}

/// `S(n;xi) = [xi / sin xi (1 - xi/pi)]^n`, with `S(n;0) = 1`.
pub fn s_factor(n: u32, xi: Complex64) -> Complex64 {
    let ratio = if xi.norm() < 1e-4 {
        1.0 + xi * xi / 6.0
    } else {
        xi / xi.sin()
    };
    (ratio * (1.0 - xi / PI)).powu(n)
}

/// `(1/2pi) ∫ e^{i(1+j-n) phi} e^{-z (1 - cos phi)} dphi` with
/// `z = pi u / (2 eps)`, by the periodic trapezoid rule. Equals
/// `e^{-z} I_{n-j-1}(z)`.
pub fn angular_bessel_integral(n: u32, j: u32, u: f64, eps: f64) -> Result<f64> {
    if !(u > 0.0) || !(eps > 0.0) {
        return Err(Error::Domain(format!("need u > 0 and eps > 0, got u = {u}, eps = {eps}")));
    }
    let z = PI * u / (2.0 * eps);
    let order = 1.0 + j as f64 - n as f64;
    let f = |phi: f64| Complex64::new((order * phi).cos() * (-z * (1.0 - phi.cos())).exp(), 0.0);
    let (mean, _) = periodic_mean_converged(&f, 64, 1e-14, 1 << 20)?;
    Ok(mean.re)
}

/// `e^{-z} I_{n-j-1}(z)` at `z = pi u / (2 eps)`, the closed form of
/// [`angular_bessel_integral`].
pub fn angular_bessel_closed(n: u32, j: u32, u: f64, eps: f64) -> Result<f64> {
    let order = (n as f64 - j as f64 - 1.0).abs();
    Ok(bessel_i_scaled(order, Complex64::new(PI * u / (2.0 * eps), 0.0))?.to_f64())
}

/// `sup_phi |R(u,eps;eps e^{i phi})| / (u |eps|^2 (1 - cos phi))` over
/// `nodes` midpoints in `(-pi, pi)`, together with `sup |R|`.
pub fn remainder_bound_constant(u: f64, eps: Complex64, nodes: usize) -> (f64, f64) {
    let mut ratio: f64 = 0.0;
    let mut sup: f64 = 0.0;
    for k in 0..nodes {
        let phi = -PI + 2.0 * PI * (k as f64 + 0.5) / nodes as f64;
        let r = remainder_r(u, eps, eps * Complex64::from_polar(1.0, phi)).norm();
        sup = sup.max(r);
        ratio = ratio.max(r / (u * eps.norm_sqr() * (1.0 - phi.cos())));
    }
    (ratio, sup)
}

/// The saddle-point identities at `s = i theta`.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct SaddleDiagnostics {
    pub u: f64,
    pub v: f64,
    pub theta: f64,
    pub eps: f64,
    pub phi_at_saddle: Complex64,
    pub phi_prime_norm: f64,
    pub d_sq_over_4: f64,
    /// `G(u;eps)`.
    pub g_value: Complex64,
    /// `|phi(i(pi - eps)) - (-(pi - eps) v + pi u/(4 eps) + G(u;eps))|`.
    pub decomposition_residual: f64,
    /// `|v - (pi u/(4 eps^2) - G'(u;eps))| / v`.
    pub saddle_relation_residual: f64,
    pub remainder_sup: f64,
    pub bound_constant: f64,
}

impl SaddleDiagnostics {
    /// `|phi(i theta) + d^2/4| / (d^2/4)`.
    pub fn phi_residual(&self) -> f64 {
        (self.phi_at_saddle + self.d_sq_over_4).norm() / self.d_sq_over_4
    }
}

pub fn saddle_diagnostics(u: f64, v: f64) -> Result<SaddleDiagnostics> {
    saddle_diagnostics_with(u, v, &OmegaConfig::default(), 256)
}

pub fn saddle_diagnostics_with(u: f64, v: f64, omega: &OmegaConfig, nodes: usize) -> Result<SaddleDiagnostics> {
    let vc = Complex64::new(v, 0.0);
    let te = theta_eps(u, vc, omega)?;
    let eps = te.eps;
    let s = Complex64::i() * te.theta;
    let phi = saddle_phi(u, vc, s)?;
    let phi_prime_norm = saddle_phi_prime(u, vc, s)?.norm();
    let g_value = g_function(u, eps);
    let decomposition = -(PI - eps) * v + PI * u / (4.0 * eps) + g_value;
    let relation = PI * u / (4.0 * eps * eps) - g_prime(u, eps);
    let (bound_constant, remainder_sup) = remainder_bound_constant(u, eps, nodes);
    Ok(SaddleDiagnostics {
        u,
        v,
        theta: te.theta.re,
        eps: eps.re,
        phi_at_saddle: phi,
        phi_prime_norm,
        d_sq_over_4: 0.25 * te.d_squared.re,
        g_value,
        decomposition_residual: (phi - decomposition).norm(),
        saddle_relation_residual: (relation - v).norm() / v,
        remainder_sup,
        bound_constant,
    })
}
