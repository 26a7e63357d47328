//! One kernel value by every route that can reach it.

use asymkernel::heatkernel::{
    derive_m_plus_2, evaluate, integrate_key2, p_bessel_form, p_contour, p_fourier_form, KernelParams, QuadratureConfig,
    Route,
};
use asymkernel::Complex64;

fn main() -> asymkernel::Result<()> {
    let cfg = QuadratureConfig::default();
    let (n, u, v) = (2, 1.0, 6.0);
    let p = KernelParams::new(n, 1, u, v)?;

    let bessel = p_bessel_form(&p, &cfg)?;
    let fourier = p_fourier_form(n, u, Complex64::new(v, 0.0), &cfg)?;
    let contour = p_contour(n, u, Complex64::new(v, 0.0), &cfg)?;
    println!("p({n},1;{u},{v})");
    println!("  bessel form  {bessel}");
    println!("  fourier form {fourier}  (rel diff {:.1e})", (fourier.ratio(&bessel) - 1.0).norm());
    println!("  contour      {}  (rel diff {:.1e})", contour.value, (contour.value.ratio(&bessel) - 1.0).norm());

    // m > 1 through the recurrences, checked against direct quadrature
    let direct3 = evaluate(&p.with_m(3), Route::Direct, &cfg)?;
    let derived3 = derive_m_plus_2(&p, None, &cfg)?;
    println!("\np({n},3;{u},{v})");
    println!("  direct          {direct3}");
    println!("  d/dv of m = 1   {derived3}  (rel diff {:.1e})", (derived3.ratio(&direct3) - 1.0).norm());

    let direct2 = evaluate(&p.with_m(2), Route::Direct, &cfg)?;
    let key2 = integrate_key2(&p.with_m(2), &cfg)?;
    println!("\np({n},2;{u},{v})");
    println!("  direct          {direct2}");
    println!("  h-integral      {key2}  (rel diff {:.1e})", (key2.ratio(&direct2) - 1.0).norm());

    // beyond |v| = 8 automatic routing switches to the contour and recurrences
    for m in 1..=3 {
        let far = evaluate(&KernelParams::new(n, m, u, 60.0)?, Route::Auto, &cfg)?;
        println!("p({n},{m};{u},60) = {far}  (ln = {:.6})", far.ln_abs());
    }
    Ok(())
}
