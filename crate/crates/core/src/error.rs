use thiserror::Error;

/// Errors raised by the evaluation, quadrature and reporting layers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("argument out of domain: {0}")]
    Domain(String),

    /// The level-difference estimate stayed above tolerance. `value` is the
    /// best available value (its modulus for complex or vector integrands).
    #[error("quadrature did not converge in {levels} levels (value {value:e}, estimate {estimate:e}, tolerance {tolerance:e})")]
    NonConvergence {
        value: f64,
        estimate: f64,
        tolerance: f64,
        levels: usize,
    },

    #[error("integrand returned a non-finite value {value} at interior node t = {t:e}")]
    NonFinite { t: f64, value: f64 },

    #[error("kernel is singular at t = {t}, theta = {theta}")]
    SingularPoint { t: f64, theta: f64 },

    #[error("function `{which}` is not monotone as declared (first failure near t = {at})")]
    MonotonicityViolated { which: &'static str, at: f64 },

    #[error("unknown check `{0}`")]
    UnknownCheck(String),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
