//! The saddle of `phi(s) = i v s - (u/4) s coth s` and the identities
//! around it.

use asymkernel::asymptotics::{
    angular_bessel_closed, angular_bessel_integral, remainder_bound_constant, saddle_diagnostics,
};
use asymkernel::Complex64;

fn main() -> asymkernel::Result<()> {
    for (u, v) in [(1.0, 1e2), (2.0, 1e4)] {
        let d = saddle_diagnostics(u, v)?;
        println!("u = {u}, v = {v}: theta = {:.12}, eps = {:.6e}", d.theta, d.eps);
        println!("  |phi(i theta) + d^2/4| / (d^2/4) = {:.1e}", d.phi_residual());
        println!("  |phi'(i theta)| / v              = {:.1e}", d.phi_prime_norm / v);
        println!("  decomposition residual           = {:.1e}", d.decomposition_residual);
        println!("  saddle relation residual         = {:.1e}", d.saddle_relation_residual);
    }

    println!("\nangular integral against e^-z I_(n-j-1)(z), u = 1, eps = 0.05");
    for (n, j) in [(2, 0), (3, 1)] {
        let q = angular_bessel_integral(n, j, 1.0, 0.05)?;
        let c = angular_bessel_closed(n, j, 1.0, 0.05)?;
        println!("  (n, j) = ({n}, {j}): {q:.15e} vs {c:.15e}");
    }

    println!("\nsup |R| / (u |eps|^2 (1 - cos phi))");
    for u in [1.0, 4.0] {
        let row: Vec<String> = [0.1, 0.05, 0.025]
            .iter()
            .map(|&e| format!("{:.4}", remainder_bound_constant(u, Complex64::new(e, 0.0), 512).0))
            .collect();
        println!("  u = {u}: {}", row.join("  "));
    }
    Ok(())
}
