use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix size must be at least 1")]
    EmptySize,

    #[error("invalid {name} = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("laguerre constraint violated: a = {a} must exceed (k-1)*beta/2 = {bound}")]
    LaguerreConstraint { a: f64, bound: f64 },

    #[error("laguerre ensemble needs exactly one of a, gamma or p")]
    MissingLaguerreParam,

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("malformed matrix: {0}")]
    Malformed(&'static str),

    #[error("tridiagonal QL failed to converge for eigenvalue {index} of a {size}x{size} matrix")]
    NoConvergence { index: usize, size: usize },

    #[error("spectrum is degenerate: smallest gap {gap:e} below {threshold:e}")]
    DegenerateSpectrum { gap: f64, threshold: f64 },

    #[error("no distinct spectrum after {attempts} resamples")]
    ResampleExhausted { attempts: usize },

    #[error("eigenvector has zero norm")]
    ZeroVector,

    #[error("no samples available{0}")]
    EmptySample(&'static str),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn param(name: &'static str, value: f64, reason: &'static str) -> Self {
        Error::InvalidParameter {
            name,
            value,
            reason,
        }
    }
}
