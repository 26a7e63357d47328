//! Leading-order large-`v` approximations of `p(n,m;u,v)`, ratio tables
//! that witness their `(1 + o(1))` accuracy, and the saddle-point quantities
//! behind the `u > 0` law.

mod approx;
mod saddle;
mod table;

pub use approx::{approximation, b_asymp, q_theorem, q_theorem_with, AsymptoticApprox, AsymptoticRegime};
pub use saddle::{
    angular_bessel_closed, angular_bessel_integral, g_function, g_prime, remainder_bound_constant,
    remainder_r, s_factor, saddle_diagnostics, saddle_diagnostics_with, saddle_phi, saddle_phi_prime,
    SaddleDiagnostics,
};
pub use table::{
    even_m_reduction, exponential_ratio, log_derivative_q, ratio_table, strictly_decreasing, RatioRow,
};
