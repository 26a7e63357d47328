//! `p(n,m;u,v)` for `u > 0` against the Bessel-type asymptotic form.

use asymkernel::asymptotics::{q_theorem, ratio_table, strictly_decreasing};
use asymkernel::heatkernel::QuadratureConfig;

fn main() -> asymkernel::Result<()> {
    let cfg = QuadratureConfig::default();
    let q = q_theorem(1, 1, 1.0, 100.0)?;
    println!(
        "q(1,1;1,100) = {} * e^({:.6}) * {} = {}\n",
        q.prefactor, q.exp_log.re, q.bessel_part, q.value
    );
    for (n, m, u) in [(1, 1, 1.0), (2, 1, 0.5), (1, 3, 1.0), (2, 2, 1.0)] {
        let rows = ratio_table(n, m, u, &[50.0, 100.0, 200.0], &cfg)?;
        println!("(n, m, u) = ({n}, {m}, {u})");
        for r in &rows {
            println!("  v = {:>5}  p/q = {:.6}  |p/q - 1| = {:.4}", r.v, r.ratio, r.abs_dev);
        }
        println!("  decreasing: {}", strictly_decreasing(&rows));
    }
    Ok(())
}
