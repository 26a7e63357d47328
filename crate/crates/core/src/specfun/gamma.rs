use crate::{Error, Result};

/// `Gamma(x)` for `x > 0`.
pub fn gamma_fn(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!("gamma: argument {x} must be finite and > 0")));
    }
    if x > 60.0 {
        return Ok(statrs::function::gamma::gamma(x));
    }
    // shift into [1, 2) where the Lanczos sum is most accurate; the
    // recurrence product adds at most a few ulp
    let mut y = x;
    let mut scale = 1.0;
    while y >= 2.0 {
        y -= 1.0;
        scale *= y;
    }
    while y < 1.0 {
        scale /= y;
        y += 1.0;
    }
    Ok(statrs::function::gamma::gamma(y) * scale)
}

/// `ln Gamma(x)` for `x > 0`.
pub fn ln_gamma(x: f64) -> f64 {
    statrs::function::gamma::ln_gamma(x)
}

/// `ln k!`.
pub fn ln_factorial(k: u32) -> f64 {
    ln_gamma(k as f64 + 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factorials_to_50() {
        let mut f = 1.0f64;
        for k in 1..50u32 {
            f *= k as f64;
            let g = gamma_fn(k as f64 + 1.0).unwrap();
            assert!(((g - f) / f).abs() < 1e-13, "k={k}");
        }
    }

    #[test]
    fn rejects_nonpositive() {
        assert!(gamma_fn(0.0).is_err());
        assert!(gamma_fn(-1.5).is_err());
    }
}
