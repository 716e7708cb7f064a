use thiserror::Error;

/// Errors raised by the dynamics routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum DynamicsError {
    #[error("parameter lambda must be a positive finite real, got {0}")]
    InvalidParameter(f64),

    #[error("point {re}{im:+}i lies on the pole z = -1")]
    Pole { re: f64, im: f64 },

    #[error("Schwarzian derivative is singular at critical point {re}{im:+}i")]
    CriticalPoint { re: f64, im: f64 },

    #[error("tolerance {tol:e} is below the floating-point spacing {spacing:e} near x = {near}")]
    Tolerance { tol: f64, spacing: f64, near: f64 },

    #[error("{x} is not a fixed point (residual {residual:e})")]
    NotAFixedPoint { x: f64, residual: f64 },

    #[error("seed {0} is the pole")]
    SeedIsPole(f64),

    #[error("orbit escaped past {bound:e} at step {step}")]
    OrbitEscaped { step: usize, bound: f64 },

    #[error("invalid argument `{name}`: {reason}")]
    InvalidArgument { name: &'static str, reason: String },

    #[error("invalid render configuration: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, DynamicsError>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> DynamicsError {
    DynamicsError::InvalidArgument {
        name,
        reason: reason.into(),
    }
}
