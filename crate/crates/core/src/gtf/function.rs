use std::fmt;
use std::sync::Arc;

use crate::{Complex64, Error, Result};

type ComplexFn = Arc<dyn Fn(Complex64) -> Complex64 + Send + Sync>;

/// A caller-supplied analytic function. Both callbacks must be safe to
/// invoke concurrently.
#[derive(Clone)]
pub struct UserFunction {
    pub name: String,
    pub eval: ComplexFn,
    pub derivative: Option<ComplexFn>,
}

/// Analytic functions on a sector, principal branches throughout.
#[derive(Clone)]
pub enum AnalyticFunction {
    /// `z^alpha log^beta z`.
    PowerLog { alpha: Complex64, beta: Complex64 },
    /// `z^alpha e^{beta z^gamma}`.
    PowerExp {
        alpha: Complex64,
        beta: Complex64,
        gamma: Complex64,
    },
    /// `log z`.
    PlainLog,
    /// `log z + sin(log z)`.
    LogPlusSin,
    /// `factor * inner`.
    Scaled {
        factor: Complex64,
        inner: Box<AnalyticFunction>,
    },
    User(UserFunction),
}

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// `p ln z`, taken as zero when `p = 0` so that `z = 0` is allowed.
fn scaled_ln(p: Complex64, z: Complex64) -> Complex64 {
    if p == c(0.0) {
        c(0.0)
    } else {
        p * z.ln()
    }
}

impl AnalyticFunction {
    pub fn power_log(alpha: f64, beta: f64) -> Self {
        AnalyticFunction::PowerLog {
            alpha: c(alpha),
            beta: c(beta),
        }
    }

    pub fn power_exp(alpha: f64, beta: f64, gamma: f64) -> Self {
        AnalyticFunction::PowerExp {
            alpha: c(alpha),
            beta: c(beta),
            gamma: c(gamma),
        }
    }

    pub fn user<F, D>(name: &str, eval: F, derivative: Option<D>) -> Self
    where
        F: Fn(Complex64) -> Complex64 + Send + Sync + 'static,
        D: Fn(Complex64) -> Complex64 + Send + Sync + 'static,
    {
        AnalyticFunction::User(UserFunction {
            name: name.to_string(),
            eval: Arc::new(eval),
            derivative: derivative.map(|d| Arc::new(d) as ComplexFn),
        })
    }

    pub fn scaled(self, factor: Complex64) -> Self {
        AnalyticFunction::Scaled {
            factor,
            inner: Box::new(self),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            AnalyticFunction::PowerLog { alpha, .. } if *alpha == c(0.0) => {
                Err(Error::Domain("power_log needs alpha != 0".into()))
            }
            AnalyticFunction::PowerExp { beta, .. } if *beta == c(0.0) => {
                Err(Error::Domain("power_exp needs beta != 0".into()))
            }
            AnalyticFunction::PowerExp { gamma, .. } if !(gamma.re > 0.0) => {
                Err(Error::Domain(format!("power_exp needs Re gamma > 0, got {gamma}")))
            }
            AnalyticFunction::Scaled { factor, inner } => {
                if *factor == c(0.0) {
                    return Err(Error::Domain("scale factor must be nonzero".into()));
                }
                inner.validate()
            }
            _ => Ok(()),
        }
    }

    pub fn name(&self) -> String {
        match self {
            AnalyticFunction::PowerLog { alpha, beta } => format!("power_log({alpha}, {beta})"),
            AnalyticFunction::PowerExp { alpha, beta, gamma } => {
                format!("power_exp({alpha}, {beta}, {gamma})")
            }
            AnalyticFunction::PlainLog => "plain_log".into(),
            AnalyticFunction::LogPlusSin => "log_plus_sin".into(),
            AnalyticFunction::Scaled { factor, inner } => format!("{factor} * {}", inner.name()),
            AnalyticFunction::User(u) => u.name.clone(),
        }
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        match self {
            AnalyticFunction::PlainLog => z.ln(),
            AnalyticFunction::LogPlusSin => {
                let l = z.ln();
                l + l.sin()
            }
            AnalyticFunction::User(u) => (u.eval)(z),
            _ => self.ln_eval(z).exp(),
        }
    }

    /// A logarithm of `g(z)`; only its real part `ln |g(z)|` is branch-free.
    pub fn ln_eval(&self, z: Complex64) -> Complex64 {
        match self {
            AnalyticFunction::PowerLog { alpha, beta } => {
                let lz = z.ln();
                if *beta == c(0.0) {
                    alpha * lz
                } else {
                    alpha * lz + beta * lz.ln()
                }
            }
            AnalyticFunction::PowerExp { alpha, beta, gamma } => {
                scaled_ln(*alpha, z) + beta * scaled_ln(*gamma, z).exp()
            }
            AnalyticFunction::Scaled { factor, inner } => factor.ln() + inner.ln_eval(z),
            _ => self.eval(z).ln(),
        }
    }

    /// The exact derivative, when one is known.
    pub fn derivative(&self, z: Complex64) -> Option<Complex64> {
        match self {
            AnalyticFunction::PlainLog => Some(1.0 / z),
            AnalyticFunction::LogPlusSin => Some((1.0 + z.ln().cos()) / z),
            AnalyticFunction::User(u) => u.derivative.as_ref().map(|d| d(z)),
            _ => self.ln_derivative(z).map(|l| l.exp()),
        }
    }

    /// A logarithm of `g'(z)`, when the derivative is known.
    pub fn ln_derivative(&self, z: Complex64) -> Option<Complex64> {
        match self {
            AnalyticFunction::PowerLog { alpha, beta } => {
                let lz = z.ln();
                if *beta == c(0.0) {
                    Some(alpha.ln() + (alpha - 1.0) * lz)
                } else {
                    // z^{alpha-1} log^{beta-1} z (alpha log z + beta)
                    Some((alpha - 1.0) * lz + (beta - 1.0) * lz.ln() + (alpha * lz + beta).ln())
                }
            }
            AnalyticFunction::PowerExp { alpha, beta, gamma } => {
                // g' = g (alpha / z + beta gamma z^{gamma - 1})
                let mut factor = beta * gamma * scaled_ln(gamma - 1.0, z).exp();
                if *alpha != c(0.0) {
                    factor += alpha / z;
                }
                Some(self.ln_eval(z) + factor.ln())
            }
            AnalyticFunction::Scaled { factor, inner } => inner.ln_derivative(z).map(|l| factor.ln() + l),
            _ => self.derivative(z).map(|d| d.ln()),
        }
    }
}

impl fmt::Debug for AnalyticFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fd(g: &AnalyticFunction, z: Complex64) -> Complex64 {
        let h = 1e-5 * z.norm();
        (g.eval(z + h) - g.eval(z - h)) / (2.0 * h)
    }

    #[test]
    fn catalog_derivatives_match_differences() {
        let z = Complex64::new(7.0, 3.0);
        let catalog = [
            AnalyticFunction::power_log(1.5, 2.0),
            AnalyticFunction::power_log(-2.0, 0.0),
            AnalyticFunction::power_exp(1.0, -0.5, 0.5),
            AnalyticFunction::PlainLog,
            AnalyticFunction::LogPlusSin,
            AnalyticFunction::power_log(1.0, 1.0).scaled(Complex64::new(0.0, 2.0)),
        ];
        for g in &catalog {
            let exact = g.derivative(z).unwrap();
            assert!((fd(g, z) - exact).norm() < 1e-8 * exact.norm(), "{g:?}");
        }
    }

    #[test]
    fn validation() {
        assert!(AnalyticFunction::power_log(0.0, 1.0).validate().is_err());
        assert!(AnalyticFunction::power_exp(0.0, 0.0, 1.0).validate().is_err());
        assert!(AnalyticFunction::power_exp(0.0, 1.0, -1.0).validate().is_err());
        assert!(AnalyticFunction::power_exp(0.0, 1.0, 0.5).validate().is_ok());
    }
}
