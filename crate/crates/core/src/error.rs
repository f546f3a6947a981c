use alloc::string::String;
use alloc::vec::Vec;

use num_complex::Complex64;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("order {requested} out of range: series has orders 0..={available}")]
    OutOfRange { requested: usize, available: usize },

    #[error("no local minimum of |a_k λ^k| within orders 0..={scanned}; extend the series")]
    NoLocalMinimum { scanned: usize },

    #[error("quadrature did not reach tolerance after {subdivisions} subdivisions (best {value:e} ± {error:e})")]
    Quadrature {
        value: f64,
        error: f64,
        subdivisions: usize,
    },

    #[error("every Padé order down to M = 0 is degenerate")]
    PadeDegenerate,

    #[error("non-Borel-summable along real axis: pole of the continued transform at {pole}")]
    NonBorelSummable { pole: Complex64 },

    #[error("degenerate saddle at {location}: vanishing second derivative")]
    DegenerateSaddle { location: Complex64 },

    #[error("test function does not vanish near the origin as a punctured distribution requires")]
    PunctureViolation,

    #[error("dimension mismatch: distribution in {distribution}, test function in {test_function}")]
    DimensionMismatch {
        distribution: usize,
        test_function: usize,
    },

    #[error("kernel is not locally integrable at the origin; construct it punctured")]
    NotLocallyIntegrable,

    #[error("scaling-degree regression inconclusive (best r² = {best_r2})")]
    Inconclusive {
        best_r2: f64,
        samples: Vec<Vec<f64>>,
    },

    #[error("ε-limit did not converge (last step {last_step:e})")]
    NonConvergence { last_step: f64, sequence: Vec<f64> },

    #[error("derivative of order {order} is not available")]
    DerivativeUnavailable { order: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("unsupported: {0}")]
    Unsupported(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }
}
