use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An input lies outside the domain of the formula (non-positive price,
    /// negative time to maturity, NaN, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// A combination of otherwise valid inputs that an operation refuses,
    /// e.g. a hedge whose strike differs from the LP entry price.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// A finite-difference bump pushed an input out of its valid domain.
    #[error("finite-difference step collapse: {0}")]
    StepCollapse(String),

    /// A Monte Carlo payoff evaluated to NaN or infinity.
    #[error("non-finite payoff value at path {path}")]
    NonFinite { path: u64 },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}

pub(crate) fn ensure_positive(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(domain(format!("{name} must be positive and finite, got {v}")))
    }
}

pub(crate) fn ensure_non_negative(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v >= 0.0 {
        Ok(())
    } else {
        Err(domain(format!("{name} must be non-negative and finite, got {v}")))
    }
}

pub(crate) fn ensure_finite(name: &str, v: f64) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(domain(format!("{name} must be finite, got {v}")))
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
