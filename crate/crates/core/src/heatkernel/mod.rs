//! Evaluation of the reduced heat kernel `p(n,m;u,v)` on H-type groups.
//!
//! Three families of evaluators are provided: real-line quadrature of the
//! Bessel and Fourier representations (trustworthy for `|v| <= 8`), the
//! shifted-contour evaluation of `p(n,1;u,v)` for large `v`, and the
//! recurrences in `m` that lift `m = 1` to any `m`.

mod contour;
mod direct;
mod params;
mod recurrence;

pub use contour::{p_contour, ContourEvaluation, MAX_RADIUS};
pub use direct::{p_bessel_form, p_direct, p_fourier_form};
pub use params::{
    KernelParams, QuadratureConfig, Regime, CONTOUR_V_MIN, DIRECT_V_MAX, STRIP_DELTA,
};
pub use recurrence::{
    derive_m_plus_2, dv_p, evaluate, heat_kernel, integrate_key2, key2_integrand, p_auto, Route,
};
