use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Half-width of the strip `|Im v| < delta` where `p(n,1;u,v)` is analytic
/// and evaluated for complex `v`.
pub const STRIP_DELTA: f64 = 0.2;

/// Beyond this `|v|` the real-line quadrature loses the value to roundoff.
pub const DIRECT_V_MAX: f64 = 8.0;

/// Below this `Re v` the contour route is not used.
pub const CONTOUR_V_MIN: f64 = 4.0;

/// Which evaluation path serves a parameter point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    Direct,
    Contour,
    Recurrence,
}

/// Index of `p(n, m; u, v)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct KernelParams {
    pub n: u32,
    pub m: u32,
    pub u: f64,
    pub v: Complex64,
}

impl KernelParams {
    pub fn new(n: u32, m: u32, u: f64, v: f64) -> Result<Self> {
        Self::complex(n, m, u, Complex64::new(v, 0.0))
    }

    pub fn complex(n: u32, m: u32, u: f64, v: Complex64) -> Result<Self> {
        let p = KernelParams { n, m, u, v };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 1 || self.m < 1 {
            return Err(Error::Domain(format!(
                "n and m must be >= 1, got n = {}, m = {}",
                self.n, self.m
            )));
        }
        if !(self.u >= 0.0) || !self.u.is_finite() {
            return Err(Error::Domain(format!("u must be finite and >= 0, got {}", self.u)));
        }
        if !self.v.re.is_finite() || !self.v.im.is_finite() {
            return Err(Error::Domain(format!("v must be finite, got {}", self.v)));
        }
        if self.v.im != 0.0 {
            if self.m != 1 {
                return Err(Error::Domain("complex v is only supported for m = 1".into()));
            }
            if self.v.im.abs() >= STRIP_DELTA {
                return Err(Error::Domain(format!(
                    "|Im v| must be < {STRIP_DELTA}, got {}",
                    self.v.im
                )));
            }
        }
        Ok(())
    }

    pub fn with_m(&self, m: u32) -> Self {
        KernelParams { m, ..*self }
    }

    pub fn with_v(&self, v: f64) -> Self {
        KernelParams {
            v: Complex64::new(v, 0.0),
            ..*self
        }
    }

    /// The path chosen by automatic routing.
    pub fn regime(&self) -> Regime {
        if self.v.re.abs() <= DIRECT_V_MAX {
            Regime::Direct
        } else if self.m == 1 {
            Regime::Contour
        } else {
            Regime::Recurrence
        }
    }
}

/// Numerical knobs shared by the kernel evaluators.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadratureConfig {
    pub rel_tol: f64,
    /// Natural log of the absolute accuracy floor.
    pub abs_floor: f64,
    pub max_panels: usize,
    /// E-folds of decay below the peak after which tails are dropped.
    pub truncation_margin: f64,
    /// Accepted Richardson estimate of finite-difference truncation, relative.
    pub derivative_tol: f64,
    /// Starting node count on the circle around `i pi`.
    pub circle_nodes: usize,
    /// Skip the line integral on `Im s = 3pi/2` when its a-priori bound is
    /// negligible against the circle term.
    pub skip_negligible_line: bool,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            rel_tol: 1e-10,
            abs_floor: -700.0,
            max_panels: 1 << 16,
            truncation_margin: 40.0,
            derivative_tol: 1e-5,
            circle_nodes: 512,
            skip_negligible_line: true,
        }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.rel_tol <= 1e-3) {
            return Err(Error::Domain(format!("rel_tol must lie in (0, 1e-3], got {}", self.rel_tol)));
        }
        if self.max_panels < 8 {
            return Err(Error::Domain(format!("max_panels must be >= 8, got {}", self.max_panels)));
        }
        if !(self.truncation_margin > 0.0) {
            return Err(Error::Domain("truncation_margin must be > 0".into()));
        }
        if self.circle_nodes < 16 {
            return Err(Error::Domain("circle_nodes must be >= 16".into()));
        }
        Ok(())
    }

    pub(crate) fn abs_tol(&self) -> f64 {
        self.abs_floor.exp()
    }
}
