//! Error type shared across the laboratory modules.

use thiserror::Error;

/// Unified error for mechanism, kernel, tree, sampler and packing operations.
#[derive(Debug, Error)]
pub enum LabError {
    /// An argument violated a documented precondition.
    #[error("domain error: {0}")]
    Domain(String),

    /// A bracketing root finder could not enclose or refine a root.
    #[error("root finding failed: {0}")]
    RootFind(String),

    /// Adaptive quadrature failed to converge, or detected divergence.
    #[error("quadrature failure: {0}")]
    Quadrature(String),

    /// The requested integral diverges (e.g. a mechanism without the
    /// finite-tail-integral property).
    #[error("integral diverges: {0}")]
    Divergent(String),

    /// The adaptive ODE integrator underflowed its step size. Carries the
    /// last abscissa and value reached.
    #[error("ode integration stalled at a={a}, value={value}")]
    OdeStall { a: f64, value: f64 },

    /// The operation is not available for this mechanism kind.
    #[error("unsupported exponent: {0}")]
    UnsupportedExponent(String),

    /// A sampler exhausted its retry or work budget.
    #[error("sampling budget exhausted: {0}")]
    BudgetExhausted(String),

    /// Problem size exceeds the exact solver cap.
    #[error("instance too large for exact solver: {0}")]
    ExactCapExceeded(String),

    /// Malformed serialized data.
    #[error("format error: {0}")]
    Format(String),

    /// Underlying I/O failure.
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

/// Alias used by every fallible operation in the crate.
pub type Result<T> = std::result::Result<T, LabError>;
