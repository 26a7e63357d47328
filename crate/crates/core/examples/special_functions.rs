//! Bessel functions, the function `mu` near `pi` and the sub-Riemannian
//! distance.

use std::f64::consts::PI;

use asymkernel::specfun::{bessel_i_scaled, bessel_j, cc_distance_squared, mu_inverse_eps, mu_near_pi, OmegaConfig};
use asymkernel::Complex64;

fn main() -> asymkernel::Result<()> {
    println!("{:>6} {:>22} {:>22}", "x", "J_1/2(x)", "sqrt(2/(pi x)) sin x");
    for x in [0.5, 2.0, 10.0] {
        let exact = (2.0 / (PI * x)).sqrt() * x.sin();
        println!("{x:>6} {:>22.15e} {exact:>22.15e}", bessel_j(0.5, x)?);
    }

    // I_nu is returned scaled, so large arguments do not overflow
    let i = bessel_i_scaled(0.5, Complex64::new(800.0, 0.0))?;
    println!("\nI_1/2(800) = {i}  (ln = {:.6})", i.ln_abs());

    println!("\n{:>10} {:>22} {:>14}", "x", "eps = pi - theta", "mu(theta)/x - 1");
    let omega = OmegaConfig::default();
    for x in [1e3, 1e4, 1e6] {
        let eps = mu_inverse_eps(Complex64::new(x, 0.0), &omega)?;
        let back = mu_near_pi(eps).re;
        println!("{x:>10.0e} {:>22.15e} {:>14.2e}", eps.re, back / x - 1.0);
    }

    println!("\n{:>8} {:>14} {:>10}", "t", "d^2(0, t)", "4 pi t");
    for t in [1.0, 10.0] {
        println!("{t:>8} {:>14.6} {:>10.6}", cc_distance_squared(0.0, t)?, 4.0 * PI * t);
    }
    let d2 = cc_distance_squared(1.0, 1e4)?;
    println!("d^2(|z|^2 = 1, t = 1e4) / (4 pi t) = {:.6}", d2 / (4.0 * PI * 1e4));
    Ok(())
}
