use thiserror::Error;

/// Errors reported by the solvers and certificate checkers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An input violated a documented precondition.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A vector or matrix does not match the problem dimension.
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    /// The Newton system's Jacobian was numerically singular.
    #[error("singular jacobian in newton iteration")]
    SingularJacobian,

    /// Newton iteration exhausted its budget without meeting the tolerance.
    #[error("newton iteration did not converge within {0} iterations")]
    NewtonDiverged(usize),

    /// A pivot of the shifted hessian fell below the singularity floor.
    #[error("shifted hessian is numerically singular")]
    SingularShiftedHessian,

    /// Multistart kept `found` distinct roots, reaching the configured cap.
    /// Degenerate objectives whose stationary points form a continuum land here.
    #[error("suspected continuum of stationary pairs: {found} distinct roots reached the cap of {cap}")]
    SuspectedContinuum { found: usize, cap: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
