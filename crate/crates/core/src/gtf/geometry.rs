use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::{Complex64, Error, Result};

/// The sector `Delta = {|z| > R, |arg z| < theta0}` and its closed
/// subsector `Delta' = {|z| > R, |arg z| <= theta1}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Sector {
    pub r_min: f64,
    pub theta0: f64,
    pub theta1: f64,
}

impl Sector {
    pub fn new(r_min: f64, theta0: f64, theta1: f64) -> Result<Self> {
        if !(r_min > 0.0) || !r_min.is_finite() {
            return Err(Error::Domain(format!("r_min must be > 0, got {r_min}")));
        }
        if !(theta0 > 0.0 && theta0 < PI) {
            return Err(Error::Domain(format!("theta0 must lie in (0, pi), got {theta0}")));
        }
        if !(theta1 > 0.0 && theta1 < theta0) {
            return Err(Error::Domain(format!(
                "theta1 must lie in (0, theta0) = (0, {theta0}), got {theta1}"
            )));
        }
        Ok(Sector { r_min, theta0, theta1 })
    }

    pub fn contains(&self, z: Complex64) -> bool {
        z.norm() > self.r_min && z.arg().abs() < self.theta0
    }

    pub fn contains_inner(&self, z: Complex64) -> bool {
        z.norm() > self.r_min && z.arg().abs() <= self.theta1
    }
}

impl Default for Sector {
    fn default() -> Self {
        Sector {
            r_min: 1.0,
            theta0: 0.5 * PI,
            theta1: 0.25 * PI,
        }
    }
}

/// The circle `|xi - center| = radius`, sampled at `nodes` equispaced points.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ContourCircle {
    pub center: Complex64,
    pub radius: f64,
    pub nodes: usize,
}

impl ContourCircle {
    /// Requires `0 < radius <= |center|/2` and at least 16 nodes.
    pub fn new(center: Complex64, radius: f64, nodes: usize) -> Result<Self> {
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(Error::Geometry(format!("radius must be > 0, got {radius}")));
        }
        if radius > 0.5 * center.norm() {
            return Err(Error::Geometry(format!(
                "radius {radius} exceeds |z|/2 = {}",
                0.5 * center.norm()
            )));
        }
        if nodes < 16 {
            return Err(Error::Domain(format!("a circle needs at least 16 nodes, got {nodes}")));
        }
        Ok(ContourCircle { center, radius, nodes })
    }

    pub fn point(&self, phi: f64) -> Complex64 {
        self.center + Complex64::from_polar(self.radius, phi)
    }

    /// Whether the whole closed circle lies in `Delta`.
    pub fn inside(&self, sector: &Sector) -> bool {
        let c = self.center;
        if c.norm() - self.radius <= sector.r_min {
            return false;
        }
        // the circle subtends asin(r/|c|) either side of arg c
        let half_angle = (self.radius / c.norm()).asin();
        c.arg().abs() + half_angle < sector.theta0
    }

    pub fn check_inside(&self, sector: &Sector) -> Result<()> {
        if self.inside(sector) {
            Ok(())
        } else {
            Err(Error::Geometry(format!(
                "circle |xi - {}| = {} leaves the sector |z| > {}, |arg z| < {}",
                self.center, self.radius, sector.r_min, sector.theta0
            )))
        }
    }
}

/// How the circle radius `R(z)` is chosen at each point.
#[derive(Clone)]
pub enum RadiusRule {
    /// `R(z) = sin(theta0 - theta1) |z| / 2`.
    HalfSine,
    /// `R(z) = |z|^exponent`.
    Power(f64),
    Fixed(f64),
    /// Caller-supplied rule; must be safe to call from several threads.
    Custom(Arc<dyn Fn(Complex64) -> f64 + Send + Sync>),
}

impl RadiusRule {
    pub fn radius(&self, z: Complex64, sector: &Sector) -> f64 {
        match self {
            RadiusRule::HalfSine => 0.5 * (sector.theta0 - sector.theta1).sin() * z.norm(),
            RadiusRule::Power(e) => z.norm().powf(*e),
            RadiusRule::Fixed(r) => *r,
            RadiusRule::Custom(f) => f(z),
        }
    }

    pub fn tag(&self) -> String {
        match self {
            RadiusRule::HalfSine => "half_sine".into(),
            RadiusRule::Power(e) => format!("power({e})"),
            RadiusRule::Fixed(r) => format!("fixed({r})"),
            RadiusRule::Custom(_) => "custom".into(),
        }
    }
}

impl fmt::Debug for RadiusRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.tag())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn sector_validation() {
        assert!(Sector::new(1.0, 1.0, 2.0).is_err());
        assert!(Sector::new(0.0, 1.0, 0.5).is_err());
        assert!(Sector::new(1.0, 3.5, 0.5).is_err());
        assert!(Sector::new(1.0, 1.0, 0.5).is_ok());
    }

    #[test]
    fn circle_radius_limit() {
        assert!(ContourCircle::new(Complex64::new(3.0, 0.0), 1.0, 64).is_ok());
        assert!(matches!(
            ContourCircle::new(Complex64::new(3.0, 0.0), 2.0, 64),
            Err(Error::Geometry(_))
        ));
    }

    #[test]
    fn half_sine_circles_stay_inside() {
        let s = Sector::default();
        let z = Complex64::from_polar(100.0, s.theta1);
        let c = ContourCircle::new(z, RadiusRule::HalfSine.radius(z, &s), 64).unwrap();
        assert!(c.inside(&s));
        for k in 0..64 {
            assert!(s.contains(c.point(k as f64 * 0.1)));
        }
    }

    proptest! {
        #[test]
        fn inner_sector_is_inside(r in 1.01f64..1e6, t in -1.0f64..1.0, r0 in 0.1f64..1.0, a in 0.2f64..3.0, b in 0.05f64..0.95) {
            let s = Sector::new(r0, a, a * b).unwrap();
            let z = Complex64::from_polar(r, t * s.theta0);
            if s.contains_inner(z) {
                prop_assert!(s.contains(z));
            }
        }
    }
}
