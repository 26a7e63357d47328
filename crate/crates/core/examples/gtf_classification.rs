//! Which catalog functions satisfy the contour-integral criterion.

use asymkernel::gtf::{gtf_scan, necessary_check, AnalyticFunction, RadiusRule, ScanGrid, Sector};
use asymkernel::Complex64;

fn main() -> asymkernel::Result<()> {
    let sector = Sector::default();
    let grid = ScanGrid::default();
    let cases = [
        (AnalyticFunction::power_log(1.0, 2.0), RadiusRule::HalfSine),
        (AnalyticFunction::power_exp(0.0, 1.0, 0.5), RadiusRule::Power(0.5)),
        (AnalyticFunction::PlainLog, RadiusRule::HalfSine),
    ];
    println!("{:<28} {:<10} {:>10} {:>8}  verdict", "function", "rule", "sup c", "slope");
    for (g, rule) in &cases {
        let r = gtf_scan(g, &sector, rule, &grid)?;
        println!(
            "{:<28} {:<10} {:>10.3} {:>8.4}  {:?}",
            r.function, r.radius_rule_tag, r.sup_c_hat, r.slope, r.verdict
        );
    }

    // |g / (z g')| = log|z| for g = log z
    let rho = |r: f64| necessary_check(&AnalyticFunction::PlainLog, Complex64::new(r, 0.0));
    println!("\nplain_log: rho(1e6) / rho(1e2) = {:.4}", rho(1e6)? / rho(1e2)?);
    Ok(())
}
