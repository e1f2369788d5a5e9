use thiserror::Error;

/// Errors raised by evaluators, constant engines and the verification lab.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A precondition on the mathematical inputs was violated.
    #[error("domain error: {0}")]
    Domain(String),

    /// The zeta function was requested at its pole.
    #[error("zeta has a pole at s = 1")]
    Pole,

    /// The requested evaluator does not support this combination of inputs.
    #[error("unsupported mode: {0}")]
    Unsupported(String),

    /// Precision or iteration caps make the request unattainable.
    #[error("configuration error: {0}")]
    Configuration(String),

    #[error("insufficient data: {usable} usable samples, at least {required} required")]
    InsufficientData { usable: usize, required: usize },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
