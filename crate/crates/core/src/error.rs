use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("log-gamma domain error: argument {0} is not positive")]
    Domain(f64),
    #[error("matrix is not positive definite: pivot {index} is {pivot:e}")]
    NotPositiveDefinite { index: usize, pivot: f64 },
    #[error("Jacobi iteration did not converge after {sweeps} sweeps (off-diagonal norm {residual:e})")]
    NoConvergence { sweeps: usize, residual: f64 },
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("the zero polynomial has no isolated roots")]
    ZeroPolynomial,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("level {level} is out of range for usable basis size {usable}")]
    LevelOutOfRange { level: usize, usable: usize },
    #[error("usable basis size {usable} is below the {required} required levels")]
    BasisCollapsed { usable: usize, required: usize },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    /// True for errors caused by bad caller input rather than numerical trouble.
    pub fn is_argument_error(&self) -> bool {
        matches!(
            self,
            Error::Domain(_)
                | Error::DimensionMismatch(..)
                | Error::ZeroPolynomial
                | Error::InvalidArgument(_)
                | Error::LevelOutOfRange { .. }
        )
    }
}
