use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Parameters or inputs outside the region where a formula is defined.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid interval [{lo}, {hi}]")]
    InvalidInterval { lo: f64, hi: f64 },

    #[error("invalid argument `{name}`: {reason}")]
    InvalidArgument { name: &'static str, reason: String },

    /// The integrator lost more energy than its budget allows; usually `dt` is too large.
    #[error("energy drift {drift:e} exceeds budget {budget:e} after {steps} steps")]
    EnergyDrift { drift: f64, budget: f64, steps: usize },

    #[error("no root of {what} in [{lo}, {hi}]")]
    NoRoot { what: &'static str, lo: f64, hi: f64 },

    #[error("cross-check failed: {0}")]
    CrossCheck(String),

    #[error("saddle is degenerate or not hyperbolic: {0}")]
    DegenerateSaddle(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn is_domain(&self) -> bool {
        matches!(self, Error::Domain(_) | Error::DegenerateSaddle(_))
    }
}
