//! Special functions and the geometric primitives of the kernel: Bessel
//! `J` and `I`, `Gamma`, the function `mu` with its inverse branch near
//! `pi`, and the Carnot-Caratheodory distance.

mod bessel;
mod gamma;
mod mu;

pub use bessel::{
    bessel_i_scaled, bessel_i_scaled_integral, bessel_i_scaled_large, bessel_j,
    bessel_j_normalized, I_SWITCH,
};
pub use gamma::{gamma_fn, ln_factorial, ln_gamma};
pub use mu::{
    cc_distance_squared, mu, mu_inverse, mu_inverse_eps, mu_near_pi, mu_prime, mu_prime_near_pi,
    solve_eps, theta_eps, theta_eps_unchecked, OmegaConfig, ThetaEps,
};

use num_complex::Complex64;

/// `c_k = (-1)^k 2^{2k} B_{2k} / (2k)!`, so that `x cot x = 1 + sum c_k x^{2k}`.
pub(crate) const COT_COEFFS: [f64; 12] = [
    -1.0 / 3.0,
    -1.0 / 45.0,
    -2.0 / 945.0,
    -1.0 / 4725.0,
    -2.0 / 93555.0,
    -1382.0 / 638512875.0,
    -4.0 / 18243225.0,
    -3617.0 / 162820783125.0,
    -87734.0 / 38979295480125.0,
    -349222.0 / 1531329465290625.0,
    -310732.0 / 13447856940643125.0,
    -472728182.0 / 201919571963756521875.0,
];

/// Below this modulus the removable singularities are evaluated by series.
pub(crate) const SERIES_RADIUS: f64 = 0.5;

/// `x cot x`, with the series near the origin.
pub(crate) fn x_cot_x(x: Complex64) -> Complex64 {
    if x.norm() < SERIES_RADIUS {
        let x2 = x * x;
        let mut acc = Complex64::new(0.0, 0.0);
        for c in COT_COEFFS.iter().rev() {
            acc = (acc + c) * x2;
        }
        acc + 1.0
    } else {
        x / x.tan()
    }
}

/// `cot x - 1/x`, with the series near the origin.
pub(crate) fn cot_minus_inv(x: Complex64) -> Complex64 {
    if x.norm() < SERIES_RADIUS {
        let x2 = x * x;
        let mut acc = Complex64::new(0.0, 0.0);
        for c in COT_COEFFS.iter().skip(1).rev() {
            acc = (acc + c) * x2;
        }
        (acc + COT_COEFFS[0]) * x
    } else {
        1.0 / x.tan() - 1.0 / x
    }
}

/// `s coth s`, analytic through `s = 0`.
pub(crate) fn s_coth_s(s: Complex64) -> Complex64 {
    // s coth s = (i s) cot(i s)
    x_cot_x(Complex64::i() * s)
}

/// `d/ds (s coth s) = coth s - s / sinh^2 s`.
pub(crate) fn s_coth_s_prime(s: Complex64) -> Complex64 {
    if s.norm() < SERIES_RADIUS {
        // d/ds sum c_k (i s)^{2k} = sum 2k c_k (-1)^k s^{2k-1}
        let s2 = s * s;
        let mut acc = Complex64::new(0.0, 0.0);
        for (k, c) in COT_COEFFS.iter().enumerate().rev() {
            let k = (k + 1) as f64;
            let sign = if (k as i32) % 2 == 0 { 1.0 } else { -1.0 };
            acc = acc * s2 + 2.0 * k * c * sign;
        }
        acc * s
    } else {
        let sh = s.sinh();
        s.cosh() / sh - s / (sh * sh)
    }
}
