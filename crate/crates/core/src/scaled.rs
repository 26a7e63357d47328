use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// A complex number stored as `mantissa * e^{log_scale}`.
///
/// The mantissa is kept with `0.5 <= |mantissa| < 2` (zero is `0 * e^0`), so
/// products and quotients of very large or very small values never leave the
/// range of `f64`. Renormalization rescales by exact powers of two.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScaledValue {
    mantissa: Complex64,
    log_scale: f64,
}

const LN_2: f64 = std::f64::consts::LN_2;

/// Splits `a > 0` as `a = f * 2^e` with `f` in `[1, 2)`.
fn frexp(a: f64) -> (f64, i32) {
    debug_assert!(a > 0.0 && a.is_finite());
    let (a, bias) = if a < f64::MIN_POSITIVE {
        (a * 2f64.powi(64), -64)
    } else {
        (a, 0)
    };
    let bits = a.to_bits();
    let e = ((bits >> 52) & 0x7ff) as i32 - 1023;
    let f = f64::from_bits((bits & !(0x7ff << 52)) | (1023u64 << 52));
    (f, e + bias)
}

impl ScaledValue {
    pub const ZERO: ScaledValue = ScaledValue {
        mantissa: Complex64 { re: 0.0, im: 0.0 },
        log_scale: 0.0,
    };

    pub const ONE: ScaledValue = ScaledValue {
        mantissa: Complex64 { re: 1.0, im: 0.0 },
        log_scale: 0.0,
    };

    /// Builds `mantissa * e^{log_scale}` and renormalizes.
    pub fn new(mantissa: Complex64, log_scale: f64) -> Self {
        let a = mantissa.norm();
        if a == 0.0 {
            return Self::ZERO;
        }
        if !a.is_finite() || !log_scale.is_finite() {
            return ScaledValue {
                mantissa: Complex64::new(f64::NAN, f64::NAN),
                log_scale: f64::NAN,
            };
        }
        let (_, e) = frexp(a);
        let shrink = 2f64.powi(-e);
        ScaledValue {
            mantissa: mantissa * shrink,
            log_scale: log_scale + e as f64 * LN_2,
        }
    }

    pub fn from_real(x: f64) -> Self {
        Self::new(Complex64::new(x, 0.0), 0.0)
    }

    pub fn from_complex(z: Complex64) -> Self {
        Self::new(z, 0.0)
    }

    /// `e^z` without overflow.
    pub fn exp(z: Complex64) -> Self {
        Self::new(Complex64::from_polar(1.0, z.im), z.re)
    }

    /// `x * e^{log_scale}` for real `x`.
    pub fn from_parts(x: f64, log_scale: f64) -> Self {
        Self::new(Complex64::new(x, 0.0), log_scale)
    }

    pub fn mantissa(&self) -> Complex64 {
        self.mantissa
    }

    pub fn log_scale(&self) -> f64 {
        self.log_scale
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa.re == 0.0 && self.mantissa.im == 0.0
    }

    pub fn is_finite(&self) -> bool {
        self.log_scale.is_finite() && self.mantissa.re.is_finite() && self.mantissa.im.is_finite()
    }

    /// Principal natural logarithm.
    pub fn ln(&self) -> Complex64 {
        let l = self.mantissa.ln();
        Complex64::new(l.re + self.log_scale, l.im)
    }

    /// `ln |self|`; `-inf` for zero.
    pub fn ln_abs(&self) -> f64 {
        if self.is_zero() {
            f64::NEG_INFINITY
        } else {
            self.mantissa.norm().ln() + self.log_scale
        }
    }

    pub fn abs(&self) -> ScaledValue {
        Self::new(Complex64::new(self.mantissa.norm(), 0.0), self.log_scale)
    }

    pub fn re(&self) -> ScaledValue {
        Self::new(Complex64::new(self.mantissa.re, 0.0), self.log_scale)
    }

    pub fn conj(&self) -> ScaledValue {
        Self::new(self.mantissa.conj(), self.log_scale)
    }

    /// The plain complex value; may underflow to zero or overflow.
    pub fn to_complex(&self) -> Complex64 {
        if self.is_zero() {
            return Complex64::new(0.0, 0.0);
        }
        // split the exponent so that e^{log_scale} alone cannot overflow early
        let half = self.log_scale / 2.0;
        self.mantissa * half.exp() * (self.log_scale - half).exp()
    }

    /// Real part of [`to_complex`](Self::to_complex).
    pub fn to_f64(&self) -> f64 {
        self.to_complex().re
    }

    /// `self / other` as a plain complex number.
    pub fn ratio(&self, other: &ScaledValue) -> Complex64 {
        (*self / *other).to_complex()
    }

    pub fn powi(&self, k: i32) -> ScaledValue {
        if k == 0 {
            return Self::ONE;
        }
        Self::new(self.mantissa.powi(k), self.log_scale * k as f64)
    }

    /// Decimal rendering when the value fits in an `f64` without losing it
    /// to underflow; `None` otherwise.
    pub fn decimal(&self) -> Option<f64> {
        let z = self.to_complex();
        if self.is_zero() || (z.re != 0.0 && z.re.is_normal()) {
            Some(z.re)
        } else {
            None
        }
    }
}

impl fmt::Display for ScaledValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.mantissa.im == 0.0 {
            write!(f, "{:e}*e^{}", self.mantissa.re, self.log_scale)
        } else {
            write!(
                f,
                "({:e}{:+e}i)*e^{}",
                self.mantissa.re, self.mantissa.im, self.log_scale
            )
        }
    }
}

impl Mul for ScaledValue {
    type Output = ScaledValue;
    fn mul(self, rhs: ScaledValue) -> ScaledValue {
        ScaledValue::new(self.mantissa * rhs.mantissa, self.log_scale + rhs.log_scale)
    }
}

impl Div for ScaledValue {
    type Output = ScaledValue;
    fn div(self, rhs: ScaledValue) -> ScaledValue {
        ScaledValue::new(self.mantissa / rhs.mantissa, self.log_scale - rhs.log_scale)
    }
}

impl Mul<f64> for ScaledValue {
    type Output = ScaledValue;
    fn mul(self, rhs: f64) -> ScaledValue {
        ScaledValue::new(self.mantissa * rhs, self.log_scale)
    }
}

impl Mul<Complex64> for ScaledValue {
    type Output = ScaledValue;
    fn mul(self, rhs: Complex64) -> ScaledValue {
        ScaledValue::new(self.mantissa * rhs, self.log_scale)
    }
}

impl Neg for ScaledValue {
    type Output = ScaledValue;
    fn neg(self) -> ScaledValue {
        ScaledValue {
            mantissa: -self.mantissa,
            log_scale: self.log_scale,
        }
    }
}

impl Add for ScaledValue {
    type Output = ScaledValue;
    fn add(self, rhs: ScaledValue) -> ScaledValue {
        if self.is_zero() {
            return rhs;
        }
        if rhs.is_zero() {
            return self;
        }
        let (big, small) = if self.log_scale >= rhs.log_scale {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let gap = small.log_scale - big.log_scale;
        if gap < -800.0 {
            return big;
        }
        ScaledValue::new(big.mantissa + small.mantissa * gap.exp(), big.log_scale)
    }
}

impl Sub for ScaledValue {
    type Output = ScaledValue;
    fn sub(self, rhs: ScaledValue) -> ScaledValue {
        self + (-rhs)
    }
}

impl std::iter::Sum for ScaledValue {
    fn sum<I: Iterator<Item = ScaledValue>>(iter: I) -> ScaledValue {
        iter.fold(ScaledValue::ZERO, |a, b| a + b)
    }
}
