use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An input lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The requested two-body state has zero norm.
    #[error("degenerate state: {0}")]
    DegenerateState(String),

    #[error("states with different statistics cannot be combined")]
    MixedStatistics,

    #[error("invalid bipartition: {0}")]
    Bipartition(String),

    #[error("matrix of dimension {dim} exceeds the limit of {limit}; reduce the cutoff (raise epsilon or lower M)")]
    Dimension { dim: usize, limit: usize },

    /// Iterative numerics (eigensolver, quadrature, series) failed to converge.
    #[error("convergence failure in {routine}: {detail}")]
    Convergence {
        routine: &'static str,
        detail: String,
    },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// True for errors raised by numerical routines rather than by bad inputs.
    pub fn is_numeric(&self) -> bool {
        matches!(self, Error::Convergence { .. } | Error::Dimension { .. })
    }
}
