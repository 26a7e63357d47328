//! The physical heat kernel `p_h(z, t)` at large time, where the reduced
//! kernel is sampled at small `(u, v)`, and off the centre, where `v` grows.

use std::f64::consts::PI;

use asymkernel::heatkernel::{heat_kernel, QuadratureConfig};
use asymkernel::specfun::cc_distance_squared;

fn main() -> asymkernel::Result<()> {
    let cfg = QuadratureConfig::default();
    let (n, m) = (1, 1);
    println!("h^(n+m) p_h(0, 0) settles as h grows");
    for h in [1.0, 10.0, 100.0] {
        let p = heat_kernel(0.0, 0.0, h, n, m, &cfg)?;
        println!("  h = {h:>5}: {:.12}", p.to_f64() * h.powi((n + m) as i32));
    }

    println!("\n-h ln p_h(0, t) against d^2(0, t) / 4 at h = 1");
    for t in [10.0, 40.0, 80.0] {
        let p = heat_kernel(0.0, t, 1.0, n, m, &cfg)?;
        let d2 = cc_distance_squared(0.0, t)?;
        println!("  t = {t:>4}: {:>10.4} vs {:>10.4} (pi t = {:.4})", -p.ln_abs(), d2 / 4.0, PI * t);
    }
    Ok(())
}
