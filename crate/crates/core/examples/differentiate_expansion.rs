//! Term-by-term differentiation of `e^{1/z} ~ sum z^{-n}/n!`, and a function
//! whose derivative escapes the asymptotics of the function.

use asymkernel::gtf::{derivative_bound_sup, diff_expansion_check, oscillation_amplitude, AnalyticFunction, ExpansionSpec, Sector};

fn main() -> asymkernel::Result<()> {
    let spec = ExpansionSpec::exp_inverse(5);
    for order in 1..=3 {
        let t = diff_expansion_check(&spec, &Sector::default(), &[10.0, 100.0, 1000.0], order)?;
        println!("N = {order}");
        for r in &t.rows {
            println!("  |z| = {:>6}  remainder {:.3e}  derivative remainder {:.3e}", r.r, r.remainder, r.derivative_remainder);
        }
    }

    // f = log z + sin(log z) ~ log z, yet z f'(z) = 1 + cos(log z) keeps oscillating
    let f = AnalyticFunction::LogPlusSin;
    println!("\namplitude of z f'(z) on [1e2, 1e6]: {:.4}", oscillation_amplitude(&f, 1e2, 1e6, 64)?);
    println!(
        "sup |f'| |z| / |log z| on [1e2, 1e6]: {:.4}",
        derivative_bound_sup(&f, &AnalyticFunction::PlainLog, 1e2, 1e6, 64)?
    );
    Ok(())
}
