use thiserror::Error;

/// Errors raised by the geometry kernels and solvers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the requested function.
    #[error("domain error: {0}")]
    Domain(String),

    /// Elliptic coordinates are undefined at the pendulum equilibria.
    #[error("covector ({gamma}, {c}) is an equilibrium and has no elliptic coordinates")]
    NoEllipticCoords { gamma: f64, c: f64 },

    /// A bracketed root search could not find a sign change.
    #[error("no root: {0}")]
    NoRoot(String),

    /// The target pose is not one of the closed-form special families.
    #[error("target does not belong to a closed-form family")]
    NotApplicable,

    /// No start of the inverse solver converged.
    #[error("inverse exponential solver failed: {0}")]
    Convergence(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
