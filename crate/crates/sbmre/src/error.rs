//! Error types shared across the crate.

/// Crate-wide error type.
///
/// The variants mirror the failure classes of the library: bad parameters at
/// construction time, inputs outside an operation's domain, special-function
/// non-convergence, and adaptive quadrature giving up.
#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    /// A constructor received parameters violating an invariant.
    #[error("invalid parameter: {0}")]
    Parameter(String),

    /// An operation was called outside its domain of validity.
    #[error("domain error: {0}")]
    Domain(String),

    /// A special-function evaluation failed to converge.
    #[error("numerics error: {0}")]
    Numerics(String),

    /// Adaptive quadrature could not reach the requested tolerance.
    /// Carries the worst-panel diagnostics.
    #[error("quadrature failed to converge: {0}")]
    Quadrature(String),
}

pub type Result<T> = std::result::Result<T, Error>;
