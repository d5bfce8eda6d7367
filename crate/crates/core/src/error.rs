use thiserror::Error;

/// Errors raised by the free-probability toolkit.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid order {0}: must be at least 1")]
    InvalidOrder(usize),

    #[error("order mismatch: {left} vs {right}")]
    OrderMismatch { left: usize, right: usize },

    #[error("insufficient order: need {needed}, have {available}")]
    InsufficientOrder { needed: usize, available: usize },

    #[error("invalid measure: {0}")]
    InvalidMeasure(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("evaluation at {re}{im:+}i is too close to a pole or the positive half-line")]
    Pole { re: f64, im: f64 },

    #[error("first moment is zero; the multiplicative recursion needs m_1 != 0")]
    ZeroFirstMoment,

    #[error("no convergence after {iterations} iterations (residuals {residuals:?})")]
    NonConvergence { iterations: usize, residuals: [f64; 2] },

    #[error("quadrature did not reach tolerance {tolerance:e} (error estimate {estimate:e})")]
    Quadrature { tolerance: f64, estimate: f64 },

    #[error("Krein expansion ratios do not decay; measure and moments look inconsistent")]
    InconsistentExpansion,

    #[error("quadratic form spec fails condition {0}")]
    InvalidSpec(String),

    #[error("Jacobi eigensolver did not converge in {0} sweeps")]
    JacobiNonConvergence(usize),

    #[error("matrix budget exceeded: {bytes} bytes requested, limit {limit}")]
    DimensionOverflow { bytes: u128, limit: u128 },
}

pub type Result<T> = std::result::Result<T, Error>;
