//! Quadrature building blocks: compensated sums, Gauss-Legendre panels,
//! tanh-sinh for endpoint singularities, and the periodic trapezoid rule.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::OnceLock;

use num_complex::Complex64;

use crate::{Error, Result};

/// Neumaier-compensated sum of complex terms.
#[derive(Clone, Copy, Debug, Default)]
pub struct CompensatedSum {
    sum: Complex64,
    carry: Complex64,
}

fn two_sum_part(sum: f64, x: f64) -> (f64, f64) {
    let t = sum + x;
    let c = if sum.abs() >= x.abs() {
        (sum - t) + x
    } else {
        (x - t) + sum
    };
    (t, c)
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: Complex64) {
        let (re, cre) = two_sum_part(self.sum.re, x.re);
        let (im, cim) = two_sum_part(self.sum.im, x.im);
        self.sum = Complex64::new(re, im);
        self.carry += Complex64::new(cre, cim);
    }

    pub fn value(&self) -> Complex64 {
        self.sum + self.carry
    }
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`, by Newton iteration on
/// the Legendre recurrence.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let half = n.div_ceil(2);
    for i in 0..half {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 1 { x } else { p1 };
            let pnm1 = if n == 1 { 1.0 } else { p0 };
            dp = n as f64 * (x * pn - pnm1) / (x * x - 1.0);
            let dx = pn / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

fn gl20() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre(20))
}

fn gl10() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre(10))
}

/// Applies a fixed rule on `[a, b]`, returning the integral and `∫|f|`.
fn apply_rule<F>(f: &F, a: f64, b: f64, rule: &(Vec<f64>, Vec<f64>)) -> (Complex64, f64)
where
    F: Fn(f64) -> Complex64,
{
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut acc = CompensatedSum::new();
    let mut mass = 0.0;
    for (x, w) in rule.0.iter().zip(&rule.1) {
        let fx = f(mid + half * x);
        acc.add(fx * (w * half));
        mass += fx.norm() * w * half;
    }
    (acc.value(), mass)
}

/// 20-point Gauss-Legendre on a single interval.
pub fn gauss20<F>(f: &F, a: f64, b: f64) -> Complex64
where
    F: Fn(f64) -> Complex64,
{
    apply_rule(f, a, b, gl20()).0
}

#[derive(Clone, Copy, Debug)]
pub struct QuadResult {
    pub value: Complex64,
    /// Sum of per-panel discrepancies between the coarse and refined rule.
    pub error_estimate: f64,
    /// `∫|f|`, the scale against which roundoff is measured.
    pub mass: f64,
    pub panels: usize,
}

/// Panel rule used by [`adaptive_panels`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PanelRule {
    /// Compare GL20 on a panel against GL20 on its two halves.
    Bisect20,
    /// Compare GL10 against GL20 on the same panel (cheaper per panel).
    Nested10,
}

/// Adaptive composite Gauss-Legendre quadrature over consecutive panels
/// `breaks[0] < breaks[1] < ...`.
///
/// A panel is accepted when its coarse/refined discrepancy is below its
/// share of `abs_tol`, or below the roundoff floor `64 ulp * ∫_panel |f|`.
/// Running out of `max_panels` is reported as [`Error::ToleranceNotMet`].
pub fn adaptive_panels<F>(
    f: &F,
    breaks: &[f64],
    abs_tol: f64,
    max_panels: usize,
    rule: PanelRule,
) -> Result<QuadResult>
where
    F: Fn(f64) -> Complex64,
{
    adaptive_panels_rel(f, breaks, abs_tol, 0.0, max_panels, rule)
}

/// [`adaptive_panels`] that also accepts a panel whose discrepancy is below
/// `rel_tol` times the magnitude accumulated so far. Suited to integrands
/// whose scale is unknown in advance, with breaks ordered from the bulk
/// outwards.
pub fn adaptive_panels_rel<F>(
    f: &F,
    breaks: &[f64],
    abs_tol: f64,
    rel_tol: f64,
    max_panels: usize,
    rule: PanelRule,
) -> Result<QuadResult>
where
    F: Fn(f64) -> Complex64,
{
    assert!(breaks.len() >= 2);
    let total = breaks[breaks.len() - 1] - breaks[0];
    let mut acc = CompensatedSum::new();
    let mut err = 0.0;
    let mut mass = 0.0;
    let mut panels = 0usize;
    let mut stack: Vec<(f64, f64)> = breaks.windows(2).rev().map(|w| (w[0], w[1])).collect();
    // 20-point results by panel, reused when a panel comes round again
    let mut cache: HashMap<(u64, u64), (Complex64, f64)> = HashMap::new();
    let key = |a: f64, b: f64| (a.to_bits(), b.to_bits());
    for &(a, b) in &stack {
        cache.insert(key(a, b), apply_rule(f, a, b, gl20()));
    }
    // roundoff of the final sum is eps times the total mass, whatever the panels do
    let global_mass: f64 = cache.values().map(|r| r.1).sum();
    while let Some((a, b)) = stack.pop() {
        panels += 1;
        if panels > max_panels {
            return Err(Error::ToleranceNotMet(format!(
                "adaptive quadrature exceeded {max_panels} panels on [{}, {}]",
                breaks[0],
                breaks[breaks.len() - 1]
            )));
        }
        let whole = cache
            .remove(&key(a, b))
            .unwrap_or_else(|| apply_rule(f, a, b, gl20()));
        let mid = 0.5 * (a + b);
        let (coarse, fine, m) = match rule {
            PanelRule::Bisect20 => {
                let left = apply_rule(f, a, mid, gl20());
                let right = apply_rule(f, mid, b, gl20());
                cache.insert(key(a, mid), left);
                cache.insert(key(mid, b), right);
                (whole.0, left.0 + right.0, left.1 + right.1)
            }
            PanelRule::Nested10 => {
                let (c, _) = apply_rule(f, a, b, gl10());
                (c, whole.0, whole.1)
            }
        };
        let diff = (fine - coarse).norm();
        let share = abs_tol * (b - a) / total;
        let floor = 64.0 * f64::EPSILON * m.max(global_mass * (b - a) / total);
        let relative = rel_tol * (acc.value().norm() + fine.norm());
        if diff <= share.max(floor).max(relative) || (b - a) < 1e-12 * total {
            acc.add(fine);
            err += diff;
            mass += m;
            cache.remove(&key(a, mid));
            cache.remove(&key(mid, b));
        } else {
            stack.push((mid, b));
            stack.push((a, mid));
        }
    }
    Ok(QuadResult {
        value: acc.value(),
        error_estimate: err,
        mass,
        panels,
    })
}

/// Tanh-sinh quadrature on `[a, b]`; tolerates integrable endpoint
/// singularities. Levels are refined until successive estimates agree to
/// `rel_tol`.
pub fn tanh_sinh<F>(f: &F, a: f64, b: f64, rel_tol: f64) -> Result<Complex64>
where
    F: Fn(f64) -> Complex64,
{
    let half = 0.5 * (b - a);
    let t_max = 6.5;
    // node at parameter t: x = tanh(pi/2 sinh t); distance to endpoints
    // computed in complementary form to keep precision near the ends
    let eval = |t: f64| -> Complex64 {
        let s = 0.5 * PI * t.sinh();
        let ch = s.cosh();
        let w = 0.5 * PI * t.cosh() / (ch * ch);
        let x = s.tanh();
        // 1 - |x| = 1 / (e^{2|s|} + 1) * 2
        let comp = 2.0 / ((2.0 * s.abs()).exp() + 1.0);
        let point = if x >= 0.0 {
            b - half * comp
        } else {
            a + half * comp
        };
        if point <= a || point >= b || w == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        f(point) * (w * half)
    };
    let mut h = 0.5;
    let mut sum = CompensatedSum::new();
    sum.add(eval(0.0));
    let mut k = 1;
    while k as f64 * h <= t_max {
        let t = k as f64 * h;
        sum.add(eval(t));
        sum.add(eval(-t));
        k += 1;
    }
    let mut estimate = sum.value() * h;
    for _ in 0..12 {
        h *= 0.5;
        let mut k = 1;
        while k as f64 * h <= t_max {
            let t = k as f64 * h;
            sum.add(eval(t));
            sum.add(eval(-t));
            k += 2;
        }
        let next = sum.value() * h;
        if (next - estimate).norm() <= rel_tol * next.norm() {
            return Ok(next);
        }
        estimate = next;
    }
    Err(Error::NoConvergence(format!(
        "tanh-sinh on [{a}, {b}] did not reach relative tolerance {rel_tol}"
    )))
}

/// Mean of `f` over `n` equispaced angles `phi_k = -pi + 2 pi k / n`.
/// For a `2 pi`-periodic analytic `f` this is the spectrally accurate
/// trapezoid approximation of `(1/2pi) ∫_{-pi}^{pi} f`.
pub fn periodic_mean<F>(f: &F, n: usize) -> Complex64
where
    F: Fn(f64) -> Complex64,
{
    let mut acc = CompensatedSum::new();
    for k in 0..n {
        let phi = -PI + 2.0 * PI * k as f64 / n as f64;
        acc.add(f(phi));
    }
    acc.value() / n as f64
}

/// [`periodic_mean`] with node doubling from `start` until two successive
/// values agree to `rel_tol` (plus a tiny absolute floor).
pub fn periodic_mean_converged<F>(
    f: &F,
    start: usize,
    rel_tol: f64,
    max_nodes: usize,
) -> Result<(Complex64, usize)>
where
    F: Fn(f64) -> Complex64,
{
    let mut n = start.max(8);
    let mut prev = periodic_mean(f, n);
    while n < max_nodes {
        n *= 2;
        let next = periodic_mean(f, n);
        if (next - prev).norm() <= rel_tol * next.norm() || next == prev {
            return Ok((next, n));
        }
        prev = next;
    }
    Err(Error::NoConvergence(format!(
        "periodic trapezoid not converged with {max_nodes} nodes"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn legendre_rule_integrates_polynomials_exactly() {
        let (x, w) = gauss_legendre(20);
        let total: f64 = w.iter().sum();
        assert!((total - 2.0).abs() < 1e-14);
        let m38: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(38)).sum();
        assert!((m38 - 2.0 / 39.0).abs() < 1e-14);
    }

    #[test]
    fn adaptive_handles_oscillation() {
        // ∫_0^{10} cos(7x) dx = sin(70)/7
        let f = |x: f64| c((7.0 * x).cos());
        let r = adaptive_panels(&f, &[0.0, 5.0, 10.0], 1e-14, 1000, PanelRule::Bisect20).unwrap();
        assert!((r.value.re - 70f64.sin() / 7.0).abs() < 1e-14);
    }

    #[test]
    fn adaptive_reports_stall() {
        let f = |x: f64| c(1.0 / x.abs().sqrt().max(1e-300));
        let r = adaptive_panels(&f, &[-1.0, 1.0], 1e-15, 16, PanelRule::Bisect20);
        assert!(matches!(r, Err(Error::ToleranceNotMet(_))));
    }

    #[test]
    fn tanh_sinh_endpoint_singularity() {
        // ∫_0^1 x^{-1/2} dx = 2
        let f = |x: f64| c(1.0 / x.sqrt());
        let v = tanh_sinh(&f, 0.0, 1.0, 1e-13).unwrap();
        assert!((v.re - 2.0).abs() < 1e-11);
    }

    #[test]
    fn periodic_mean_is_spectral() {
        // (1/2pi) ∫ e^{cos phi} = I_0(1)
        let f = |p: f64| c(p.cos().exp());
        let (v, _) = periodic_mean_converged(&f, 16, 1e-15, 1 << 12).unwrap();
        assert!((v.re - 1.266_065_877_752_008_4).abs() < 1e-15);
    }
}
