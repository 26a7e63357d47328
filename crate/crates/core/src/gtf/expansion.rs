use serde::{Deserialize, Serialize};

use super::criterion::cauchy_derivative;
use super::function::AnalyticFunction;
use super::geometry::{ContourCircle, Sector};
use crate::{Complex64, Error, Result};

/// `f ~ sum f_n` with respect to the scale `{g_n}`.
#[derive(Clone, Debug)]
pub struct ExpansionSpec {
    pub f: AnalyticFunction,
    pub terms: Vec<AnalyticFunction>,
    pub scales: Vec<AnalyticFunction>,
}

impl ExpansionSpec {
    /// Checks the list lengths and that `|g_{n+1}/g_n|` shrinks along the
    /// positive axis between `r` and `10 r`.
    pub fn validate(&self, r: f64) -> Result<()> {
        if self.terms.is_empty() || self.terms.len() != self.scales.len() {
            return Err(Error::Domain(format!(
                "expansion needs equally many terms and scales (>= 1), got {} and {}",
                self.terms.len(),
                self.scales.len()
            )));
        }
        let ratio = |g: &[AnalyticFunction], x: f64| {
            let z = Complex64::new(x, 0.0);
            (g[1].ln_eval(z).re - g[0].ln_eval(z).re).exp()
        };
        for w in self.scales.windows(2) {
            if !(ratio(w, 10.0 * r) < ratio(w, r)) {
                return Err(Error::Domain(format!(
                    "scale {:?} does not decay against {:?}",
                    w[1], w[0]
                )));
            }
        }
        Ok(())
    }

    /// `e^{1/z} ~ sum z^{-n} / n!` with respect to `{z^{-n}}`, `n < terms`.
    pub fn exp_inverse(terms: usize) -> Self {
        let f = AnalyticFunction::user(
            "exp(1/z)",
            |z: Complex64| (1.0 / z).exp(),
            Some(|z: Complex64| -(1.0 / z).exp() / (z * z)),
        );
        let mut spec = ExpansionSpec {
            f,
            terms: Vec::with_capacity(terms),
            scales: Vec::with_capacity(terms),
        };
        let mut fact = 1.0;
        for n in 0..terms {
            if n > 0 {
                fact *= n as f64;
            }
            let g = if n == 0 {
                AnalyticFunction::user("1", |_| Complex64::new(1.0, 0.0), Some(|_| Complex64::new(0.0, 0.0)))
            } else {
                AnalyticFunction::power_log(-(n as f64), 0.0)
            };
            spec.terms.push(g.clone().scaled(Complex64::new(1.0 / fact, 0.0)));
            spec.scales.push(g);
        }
        spec
    }
}

fn derivative_of(f: &AnalyticFunction, z: Complex64) -> Result<Complex64> {
    match f.derivative(z) {
        Some(d) => Ok(d),
        None => cauchy_derivative(f, &ContourCircle::new(z, 0.25 * z.norm(), 256)?),
    }
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct ExpansionRow {
    pub r: f64,
    /// `|(f - sum_{n<=N} f_n) / g_N|`.
    pub remainder: f64,
    /// `|(f' - sum_{n<=N} f_n') / g_N'|`.
    pub derivative_remainder: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ExpansionTable {
    pub order: usize,
    pub rows: Vec<ExpansionRow>,
    pub value_decreasing: bool,
    pub derivative_decreasing: bool,
}

/// Remainders of the truncated expansion and of its term-by-term
/// derivative, at `z = r` for each `r` on the ray.
pub fn diff_expansion_check(spec: &ExpansionSpec, sector: &Sector, ray: &[f64], order: usize) -> Result<ExpansionTable> {
    if order >= spec.terms.len() {
        return Err(Error::Domain(format!(
            "order {order} needs more than {} terms",
            spec.terms.len()
        )));
    }
    if ray.iter().any(|&r| !(r > sector.r_min)) {
        return Err(Error::Domain(format!("ray points must exceed r_min = {}", sector.r_min)));
    }
    spec.validate(ray[0])?;
    let rows = ray
        .iter()
        .map(|&r| -> Result<ExpansionRow> {
            let z = Complex64::new(r, 0.0);
            let partial: Complex64 = spec.terms[..=order].iter().map(|t| t.eval(z)).sum();
            let partial_d = spec.terms[..=order]
                .iter()
                .map(|t| derivative_of(t, z))
                .sum::<Result<Complex64>>()?;
            let g = spec.scales[order].eval(z);
            let gd = derivative_of(&spec.scales[order], z)?;
            Ok(ExpansionRow {
                r,
                remainder: ((spec.f.eval(z) - partial) / g).norm(),
                derivative_remainder: ((derivative_of(&spec.f, z)? - partial_d) / gd).norm(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let dec = |key: fn(&ExpansionRow) -> f64| rows.windows(2).all(|w| key(&w[1]) < key(&w[0]));
    Ok(ExpansionTable {
        order,
        value_decreasing: dec(|r| r.remainder),
        derivative_decreasing: dec(|r| r.derivative_remainder),
        rows,
    })
}

fn log_ray(lo: f64, hi: f64, per_decade: usize) -> Vec<f64> {
    let count = ((hi / lo).log10() * per_decade as f64).round() as usize;
    (0..=count)
        .map(|k| lo * 10f64.powf(k as f64 / per_decade as f64))
        .collect()
}

/// Half the spread `(max - min)/2` of `Re z f'(z)` over `per_decade`
/// log-spaced samples per decade on `[lo, hi]`.
pub fn oscillation_amplitude(f: &AnalyticFunction, lo: f64, hi: f64, per_decade: usize) -> Result<f64> {
    let values = log_ray(lo, hi, per_decade)
        .into_iter()
        .map(|x| {
            let z = Complex64::new(x, 0.0);
            Ok((z * derivative_of(f, z)?).re)
        })
        .collect::<Result<Vec<f64>>>()?;
    let max = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let min = values.iter().cloned().fold(f64::INFINITY, f64::min);
    Ok(0.5 * (max - min))
}

/// `sup |f'(z)| |z| / |g(z)|` over the same log-spaced samples: an
/// `f' = O(g / z)` witness.
pub fn derivative_bound_sup(
    f: &AnalyticFunction,
    g: &AnalyticFunction,
    lo: f64,
    hi: f64,
    per_decade: usize,
) -> Result<f64> {
    log_ray(lo, hi, per_decade).into_iter().try_fold(0.0f64, |acc, x| {
        let z = Complex64::new(x, 0.0);
        Ok(acc.max(derivative_of(f, z)?.norm() * x / g.eval(z).norm()))
    })
}
