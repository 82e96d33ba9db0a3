use num_complex::Complex64;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("Gamma function pole at {0}")]
    Pole(Complex64),

    #[error("{what} did not converge after {iterations} iterations")]
    NonConvergence { what: &'static str, iterations: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("no known pseudo-Hermiticity shift: {0}")]
    NoKnownShift(String),

    #[error("square-root branch is ambiguous: Re sqrt(V1) = 0 for V1 = {0}")]
    BranchAmbiguity(Complex64),

    #[error("effective Morse parameter C = {0} is not real; closed-form spectrum does not apply")]
    NonRealC(Complex64),

    #[error("potential overflows at x = {0}")]
    Overflow(Complex64),

    #[error("integrand is not finite at x = {0}")]
    NonFiniteIntegrand(f64),

    #[error("{family} requires kinetic coefficient {expected}, got {got}")]
    WrongKinetic {
        family: &'static str,
        expected: f64,
        got: f64,
    },

    #[error(
        "quadrature did not converge by level {level}: error estimate {estimate:e} (trace {trace:?})"
    )]
    Quadrature {
        level: usize,
        estimate: f64,
        trace: Vec<f64>,
    },

    #[error(
        "QR iteration did not converge after {sweeps} sweeps: {deflated} of {dim} eigenvalues deflated"
    )]
    Eigen {
        sweeps: usize,
        deflated: usize,
        dim: usize,
    },
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}
