use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is not Hermitian (max asymmetry {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("trace is not 1 (got {trace})")]
    TraceNotOne { trace: f64 },

    #[error("negative eigenvalue {value:e}")]
    NegativeEigenvalue { value: f64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("{what} did not converge after {iterations} iterations")]
    ConvergenceFailure {
        what: &'static str,
        iterations: usize,
    },

    #[error("constraint target {target} outside the open interval ({lower}, {upper})")]
    TargetOutOfRange { target: f64, lower: f64, upper: f64 },

    #[error("variance g(α) = {variance:e} is degenerate")]
    DegenerateVariance { variance: f64 },

    #[error("reference spectrum is degenerate: {0}")]
    DegenerateSpectrum(String),

    #[error("invalid reference potential: {0}")]
    InvalidPotential(String),

    #[error("time series has {len} samples, need at least 2")]
    SeriesTooShort { len: usize },

    #[error("time series is not strictly increasing at index {index}")]
    NonMonotoneTime { index: usize },

    #[error("series lengths differ: {0}")]
    LengthMismatch(String),

    #[error("non-finite state at t = {t}")]
    NonFiniteState { t: f64 },

    #[error("occupation must be positive, got {value:e}")]
    NonPositiveOccupation { value: f64 },

    #[error("unphysical Gaussian moments: {0}")]
    Unphysical(String),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),
}

impl Error {
    /// True for failures of the numerics themselves rather than of the inputs.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::ConvergenceFailure { .. }
                | Error::NonFiniteState { .. }
                | Error::DegenerateVariance { .. }
                | Error::NonPositiveOccupation { .. }
                | Error::Unphysical(_)
        )
    }
}
