use thiserror::Error;

/// Errors produced by the evaluators and the optimizer.
#[derive(Debug, Error)]
pub enum Error {
    /// Invalid input data (bad pmf, negative power, axis mismatch, ...).
    #[error("validation: {0}")]
    Validation(String),

    /// Node geometry that cannot be mapped to gains.
    #[error("geometry: {0}")]
    Geometry(String),

    /// Numerically undefined operation (singular noise covariance, ...).
    #[error("numerical domain: {0}")]
    NumericalDomain(String),

    /// Constraint set with no feasible point.
    #[error("infeasible: {0}")]
    Infeasible(String),

    /// Enumeration or evaluation budget exceeded.
    #[error("budget exceeded: {0}")]
    Budget(String),

    /// API misuse that violates an operation contract.
    #[error("contract: {0}")]
    Contract(String),
}

pub type Result<T> = std::result::Result<T, Error>;
