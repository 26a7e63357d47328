use thiserror::Error;

/// Errors produced by the evaluators, scans and diagnostics in this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the function.
    #[error("domain error: {0}")]
    Domain(String),

    /// A route or operation was asked to work outside its validity regime.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// Evaluation at a pole of a meromorphic function.
    #[error("pole at {0}")]
    Pole(String),

    /// An iterative method failed to reach its tolerance.
    #[error("no convergence: {0}")]
    NoConvergence(String),

    /// Adaptive refinement ran out of budget before meeting its tolerance.
    #[error("tolerance not met: {0}")]
    ToleranceNotMet(String),

    /// A contour left the sector it has to live in.
    #[error("geometry error: {0}")]
    Geometry(String),

    /// The derivative of a test function vanishes where it is needed.
    #[error("zero derivative at {0}")]
    ZeroDerivative(String),

    /// A logarithmic derivative lies outside the band `[c1, c2]`.
    #[error("band violation: {0}")]
    BandViolation(String),
}

impl Error {
    /// True for failures of the numerics rather than of the inputs.
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::NoConvergence(_) | Error::ToleranceNotMet(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
