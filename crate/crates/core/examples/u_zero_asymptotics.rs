//! `p(n,m;0,v)` against its leading residue term.

use asymkernel::asymptotics::{b_asymp, ratio_table, strictly_decreasing};
use asymkernel::heatkernel::QuadratureConfig;

fn main() -> asymkernel::Result<()> {
    let cfg = QuadratureConfig::default();
    let grid = [20.0, 40.0, 80.0];
    for (n, m) in [(1, 1), (2, 1), (1, 2), (2, 3)] {
        println!("(n, m) = ({n}, {m}), b = {}", b_asymp(n, m, grid[0])?);
        println!("{:>6} {:>14} {:>14} {:>12}", "v", "ln p", "ln b", "|p/b - 1|");
        let rows = ratio_table(n, m, 0.0, &grid, &cfg)?;
        for r in &rows {
            println!("{:>6} {:>14.6} {:>14.6} {:>12.3e}", r.v, r.p_log, r.q_log, r.abs_dev);
        }
        println!("decreasing: {}\n", strictly_decreasing(&rows));
    }
    Ok(())
}
