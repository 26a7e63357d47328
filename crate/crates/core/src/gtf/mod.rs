//! Numerical checks of the contour-integral criterion that lets asymptotic
//! relations be differentiated inside a sector: sectors and circles, a
//! catalog of analytic functions, Cauchy differentiation, the per-point
//! constant of the criterion, grid scans and expansion remainders.

mod criterion;
mod expansion;
mod function;
mod geometry;

pub use criterion::{
    cauchy_derivative, gtf_ratio, gtf_scan, log_band_bound, log_log_slope, necessary_check,
    sufficient_check, BandBound, GtfReport, GtfSample, ScanGrid, SufficientCheck, Verdict, NODE_TOL,
};
pub use expansion::{
    derivative_bound_sup, diff_expansion_check, oscillation_amplitude, ExpansionRow, ExpansionSpec,
    ExpansionTable,
};
pub use function::{AnalyticFunction, UserFunction};
pub use geometry::{ContourCircle, RadiusRule, Sector};
