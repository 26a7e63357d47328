use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::function::AnalyticFunction;
use super::geometry::{ContourCircle, RadiusRule, Sector};
use crate::quadrature::periodic_mean;
use crate::{Complex64, Error, Result};

/// Node counts are doubled until successive values agree to this.
pub const NODE_TOL: f64 = 1e-10;
const MAX_NODES: usize = 1 << 16;

/// `g'(center)` by Cauchy's formula `(1/2 pi i) ∮ g(xi) / (xi - center)^2 dxi`,
/// doubling the trapezoid node count until it settles.
pub fn cauchy_derivative(g: &AnalyticFunction, circle: &ContourCircle) -> Result<Complex64> {
    let r = circle.radius;
    let f = |phi: f64| g.eval(circle.point(phi)) * Complex64::from_polar(1.0 / r, -phi);
    let scale = |n: usize| periodic_mean(&|phi: f64| Complex64::new(f(phi).norm(), 0.0), n).re;
    let mut n = circle.nodes;
    let mut prev = periodic_mean(&f, n);
    while n < MAX_NODES {
        n *= 2;
        let next = periodic_mean(&f, n);
        let diff = (next - prev).norm();
        if diff <= NODE_TOL * next.norm() || diff <= 1e-15 * scale(n) {
            return Ok(next);
        }
        prev = next;
    }
    Err(Error::NoConvergence(format!(
        "Cauchy derivative on |xi - {}| = {r} not settled with {MAX_NODES} nodes",
        circle.center
    )))
}

/// Mean and maximum of `|g(xi)| / |g'(z)|` on the circle, from the same
/// converged node set.
#[derive(Clone, Copy, Debug)]
struct CircleStats {
    mean: f64,
    max: f64,
    ln_deriv: f64,
}

fn circle_stats(g: &AnalyticFunction, circle: &ContourCircle, sector: Option<&Sector>) -> Result<CircleStats> {
    if let Some(s) = sector {
        circle.check_inside(s)?;
    }
    let z = circle.center;
    let ln_deriv = match g.ln_derivative(z) {
        Some(l) => l.re,
        None => g.ln_derivative_or_cauchy(circle)?.re,
    };
    if !(ln_deriv > f64::NEG_INFINITY) || ln_deriv.is_nan() {
        return Err(Error::ZeroDerivative(format!("g'({z}) = 0 for {g:?}")));
    }
    let normalized = |phi: f64| (g.ln_eval(circle.point(phi)).re - ln_deriv).exp();
    let sample = |n: usize| -> (f64, f64) {
        let mut mean = 0.0;
        let mut max: f64 = 0.0;
        for k in 0..n {
            let x = normalized(-PI + 2.0 * PI * k as f64 / n as f64);
            mean += x;
            max = max.max(x);
        }
        (mean / n as f64, max)
    };
    let mut n = circle.nodes;
    let mut mean = sample(n).0;
    while n < MAX_NODES {
        n *= 2;
        let (m2, max) = sample(n);
        let settled = (m2 - mean).abs() <= NODE_TOL * m2;
        mean = m2;
        if settled {
            return Ok(CircleStats { mean, max, ln_deriv });
        }
    }
    Err(Error::NoConvergence(format!(
        "circle mean of |g| around {z} not settled with {MAX_NODES} nodes"
    )))
}

impl AnalyticFunction {
    fn ln_derivative_or_cauchy(&self, circle: &ContourCircle) -> Result<Complex64> {
        match self.ln_derivative(circle.center) {
            Some(l) => Ok(l),
            None => Ok(cauchy_derivative(self, circle)?.ln()),
        }
    }
}

/// The best constant at `z` in `∮_{C_z} |g(xi)| / |xi - z|^2 |dxi| <= C |g'(z)|`,
/// i.e. `(2 pi / radius) mean|g| / |g'(z)|`.
pub fn gtf_ratio(
    g: &AnalyticFunction,
    z: Complex64,
    radius: f64,
    nodes: usize,
    sector: Option<&Sector>,
) -> Result<f64> {
    let circle = ContourCircle::new(z, radius, nodes)?;
    let s = circle_stats(g, &circle, sector)?;
    Ok(2.0 * PI * s.mean / radius)
}

/// `max |g(xi)| / radius` against `|g'(z)|`; `2 pi margin` bounds the
/// [`gtf_ratio`] at the same point.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct SufficientCheck {
    pub lhs_sup: f64,
    pub rhs: f64,
    pub margin: f64,
}

pub fn sufficient_check(
    g: &AnalyticFunction,
    z: Complex64,
    radius: f64,
    nodes: usize,
    sector: Option<&Sector>,
) -> Result<SufficientCheck> {
    let circle = ContourCircle::new(z, radius, nodes)?;
    Ok(sufficient_from(&circle_stats(g, &circle, sector)?, radius))
}

fn sufficient_from(s: &CircleStats, radius: f64) -> SufficientCheck {
    let margin = s.max / radius;
    let rhs = s.ln_deriv.exp();
    SufficientCheck {
        lhs_sup: margin * rhs,
        rhs,
        margin,
    }
}

/// `rho(z) = |g(z)| / |z g'(z)|`; bounded along rays for every good test
/// function.
pub fn necessary_check(g: &AnalyticFunction, z: Complex64) -> Result<f64> {
    let ln_d = match g.ln_derivative(z) {
        Some(l) => l.re,
        None => {
            let r = 0.25 * z.norm();
            cauchy_derivative(g, &ContourCircle::new(z, r, 256)?)?.norm().ln()
        }
    };
    if !(ln_d > f64::NEG_INFINITY) || ln_d.is_nan() {
        return Err(Error::ZeroDerivative(format!("g'({z}) = 0 for {g:?}")));
    }
    Ok((g.ln_eval(z).re - ln_d - z.norm().ln()).exp())
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct BandBound {
    pub bound: f64,
    pub actual: f64,
}

/// With `c1 <= |g'/g| <= c2` on a convex set containing `z` and `xi`,
/// `|g(xi)| <= e^{c2 |xi - z|} |g'(z)| / c1`. The band is checked at both
/// endpoints.
pub fn log_band_bound(g: &AnalyticFunction, z: Complex64, xi: Complex64, c1: f64, c2: f64) -> Result<BandBound> {
    if !(c1 > 0.0) || !(c2 >= c1) {
        return Err(Error::Domain(format!("need 0 < c1 <= c2, got c1 = {c1}, c2 = {c2}")));
    }
    let log_ratio = |w: Complex64| -> Result<f64> {
        let d = g.ln_derivative(w).ok_or_else(|| {
            Error::Precondition(format!("{g:?} has no closed-form derivative"))
        })?;
        Ok((d.re - g.ln_eval(w).re).exp())
    };
    let slack = 1e-12;
    for w in [z, xi] {
        let r = log_ratio(w)?;
        if r < c1 * (1.0 - slack) || r > c2 * (1.0 + slack) {
            return Err(Error::BandViolation(format!(
                "|g'/g| = {r} at {w} lies outside [{c1}, {c2}]"
            )));
        }
    }
    let ln_d = g.ln_derivative(z).expect("checked above").re;
    Ok(BandBound {
        bound: (ln_d - c1.ln() + c2 * (xi - z).norm()).exp(),
        actual: g.ln_eval(xi).re.exp(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Bounded,
    Growing,
    Inconclusive,
}

/// Log-spaced rings `r_start * 10^{k / rings_per_decade}` crossed with
/// `arg_samples` equispaced arguments in `[-theta1, theta1]`.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct ScanGrid {
    pub r_start: f64,
    pub decades: f64,
    pub rings_per_decade: usize,
    pub arg_samples: usize,
    pub nodes: usize,
    /// Log-log slope of the per-ring supremum above which the verdict is
    /// "growing".
    pub slope_threshold: f64,
}

impl Default for ScanGrid {
    fn default() -> Self {
        ScanGrid {
            r_start: 1e2,
            decades: 4.0,
            rings_per_decade: 8,
            arg_samples: 5,
            nodes: 256,
            slope_threshold: 0.1,
        }
    }
}

impl ScanGrid {
    pub fn points(&self, sector: &Sector) -> Result<Vec<(usize, Complex64)>> {
        if !(self.r_start > sector.r_min) {
            return Err(Error::Domain(format!(
                "scan must start beyond r_min = {}, got {}",
                sector.r_min, self.r_start
            )));
        }
        if self.rings_per_decade == 0 || self.arg_samples == 0 || !(self.decades > 0.0) {
            return Err(Error::Domain("scan grid must have rings and arguments".into()));
        }
        let rings = (self.decades * self.rings_per_decade as f64).round() as usize + 1;
        let mut pts = Vec::with_capacity(rings * self.arg_samples);
        for i in 0..rings {
            let r = self.r_start * 10f64.powf(i as f64 / self.rings_per_decade as f64);
            for j in 0..self.arg_samples {
                let t = if self.arg_samples == 1 {
                    0.0
                } else {
                    -sector.theta1 + 2.0 * sector.theta1 * j as f64 / (self.arg_samples - 1) as f64
                };
                pts.push((i, Complex64::from_polar(r, t)));
            }
        }
        Ok(pts)
    }
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct GtfSample {
    pub z: Complex64,
    pub radius: f64,
    pub c_hat: f64,
    pub margin: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GtfReport {
    pub function: String,
    pub samples: Vec<GtfSample>,
    pub sup_c_hat: f64,
    /// Fitted exponent of the per-ring supremum against `|z|`.
    pub slope: f64,
    pub verdict: Verdict,
    pub radius_rule_tag: String,
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn log_log_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let (sx, sy) = points
        .iter()
        .fold((0.0, 0.0), |(a, b), &(x, y)| (a + x.ln(), b + y.ln()));
    let (mx, my) = (sx / n, sy / n);
    let (num, den) = points.iter().fold((0.0, 0.0), |(a, b), &(x, y)| {
        let dx = x.ln() - mx;
        (a + dx * (y.ln() - my), b + dx * dx)
    });
    num / den
}

/// Evaluates [`gtf_ratio`] over the grid with the rule's radius, and
/// classifies by the growth of the per-ring supremum.
pub fn gtf_scan(g: &AnalyticFunction, sector: &Sector, rule: &RadiusRule, grid: &ScanGrid) -> Result<GtfReport> {
    g.validate()?;
    let pts = grid.points(sector)?;
    let samples: Vec<(usize, GtfSample)> = pts
        .par_iter()
        .map(|&(ring, z)| -> Result<(usize, GtfSample)> {
            let radius = rule.radius(z, sector);
            let circle = ContourCircle::new(z, radius, grid.nodes)?;
            let s = circle_stats(g, &circle, Some(sector))?;
            Ok((
                ring,
                GtfSample {
                    z,
                    radius,
                    c_hat: 2.0 * PI * s.mean / radius,
                    margin: sufficient_from(&s, radius).margin,
                },
            ))
        })
        .collect::<Result<_>>()?;
    let rings = samples.iter().map(|s| s.0).max().unwrap_or(0) + 1;
    let mut sup = vec![(0.0, 0.0f64); rings];
    for (ring, s) in &samples {
        sup[*ring].0 = s.z.norm();
        sup[*ring].1 = sup[*ring].1.max(s.c_hat);
    }
    let finite = sup.iter().all(|&(_, c)| c.is_finite() && c > 0.0);
    let slope = if finite && rings >= 3 { log_log_slope(&sup) } else { f64::NAN };
    let verdict = if !slope.is_finite() {
        Verdict::Inconclusive
    } else if slope > grid.slope_threshold {
        Verdict::Growing
    } else {
        Verdict::Bounded
    };
    let samples: Vec<GtfSample> = samples.into_iter().map(|s| s.1).collect();
    let sup_c_hat = samples.iter().map(|s| s.c_hat).fold(0.0, f64::max);
    Ok(GtfReport {
        function: g.name(),
        samples,
        sup_c_hat,
        slope,
        verdict,
        radius_rule_tag: rule.tag(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn re(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn cauchy_examples() {
        let sq = AnalyticFunction::power_log(2.0, 0.0);
        let d = cauchy_derivative(&sq, &ContourCircle::new(re(3.0), 1.0, 64).unwrap()).unwrap();
        assert!((d - 6.0).norm() < 1e-13);
        let ex = AnalyticFunction::power_exp(0.0, 1.0, 1.0);
        let d = cauchy_derivative(&ex, &ContourCircle::new(re(2.0), 0.5, 64).unwrap()).unwrap();
        assert!((d.re / 2f64.exp() - 1.0).abs() < 1e-12);
        let zl = AnalyticFunction::power_log(1.0, 1.0);
        let d = cauchy_derivative(&zl, &ContourCircle::new(re(10.0), 2.0, 64).unwrap()).unwrap();
        assert!((d.re / (10f64.ln() + 1.0) - 1.0).abs() < 1e-10);
    }

    #[test]
    fn ratio_examples() {
        let id = AnalyticFunction::power_log(1.0, 0.0);
        let c = gtf_ratio(&id, re(10.0), 1.0, 256, None).unwrap();
        assert!((c / (20.0 * PI) - 1.0).abs() < 1e-2);
        let ex = AnalyticFunction::power_exp(0.0, 1.0, 1.0);
        let c = gtf_ratio(&ex, re(20.0), 1.0, 256, None).unwrap();
        assert!(c <= 2.0 * PI * 1f64.exp() * (1.0 + 1e-12));
    }

    #[test]
    fn sufficient_examples() {
        let id = AnalyticFunction::power_log(1.0, 0.0);
        let s = sufficient_check(&id, re(10.0), 1.0, 256, None).unwrap();
        assert!((s.margin - 11.0).abs() < 1e-12);
        let ex = AnalyticFunction::power_exp(0.0, 1.0, 1.0);
        let s = sufficient_check(&ex, re(30.0), 1.0, 256, None).unwrap();
        assert!(s.margin <= 1f64.exp() * (1.0 + 1e-12));
    }

    #[test]
    fn necessary_examples() {
        let rho = necessary_check(&AnalyticFunction::PlainLog, re(1e6)).unwrap()
            / necessary_check(&AnalyticFunction::PlainLog, re(1e2)).unwrap();
        assert!((rho - 3.0).abs() < 1e-12);
        let p = necessary_check(&AnalyticFunction::power_log(2.5, 0.0), Complex64::new(3.0, 4.0)).unwrap();
        assert!((p - 0.4).abs() < 1e-14);
        let e = necessary_check(&AnalyticFunction::power_exp(0.0, 1.0, 1.0), re(50.0)).unwrap();
        assert!((e * 50.0 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn band_examples() {
        let ex = AnalyticFunction::power_exp(0.0, 1.0, 1.0);
        let b = log_band_bound(&ex, re(0.0), re(2.0), 1.0, 1.0).unwrap();
        assert!((b.bound / b.actual - 1.0).abs() < 1e-12);
        let zex = AnalyticFunction::power_exp(1.0, 1.0, 1.0);
        let b = log_band_bound(&zex, re(10.0), re(11.0), 1.0, 1.2).unwrap();
        assert!(b.actual <= b.bound);
        let b = log_band_bound(&zex, re(10.0), re(10.0), 1.0, 1.2).unwrap();
        assert!(b.actual <= b.bound);
        assert!(matches!(
            log_band_bound(&zex, re(10.0), re(11.0), 1.15, 1.2),
            Err(Error::BandViolation(_))
        ));
    }

    #[test]
    fn geometry_is_enforced() {
        let s = Sector::default();
        let z = Complex64::from_polar(10.0, 1.3);
        assert!(matches!(
            gtf_ratio(&AnalyticFunction::PlainLog, z, 4.0, 256, Some(&s)),
            Err(Error::Geometry(_))
        ));
    }
}
