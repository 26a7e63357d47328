//! Numerical toolkit for two related problems in asymptotic analysis.
//!
//! * [`gtf`]: the contour-integral criterion that lets an asymptotic relation
//!   `f ~ g` inside a sector be differentiated into `f' ~ g'`, with empirical
//!   checkers and a catalog of functions that pass or fail it.
//! * [`heatkernel`] and [`asymptotics`]: evaluation of the reduced heat
//!   kernel `p(n, m; u, v)` of the H-type group `H(2n, m)` by several
//!   independent routes, and its large-`v` asymptotic forms.
//!
//! Quantities of size `e^{-pi v}` with `v` in the hundreds are carried as
//! [`ScaledValue`]s so nothing underflows.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod asymptotics;
pub mod cli;
mod error;
pub mod gtf;
pub mod heatkernel;
pub mod quadrature;
mod scaled;
pub mod specfun;

pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use scaled::ScaledValue;
