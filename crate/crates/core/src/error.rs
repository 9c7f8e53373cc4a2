use thiserror::Error;

/// Errors reported by the library.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("malformed input: {0}")]
    Malformed(String),

    #[error("value {value} of variable `{variable}` is outside the value universe")]
    ValueOutsideUniverse { variable: String, value: i64 },

    #[error("value {value} is not in the domain of variable `{variable}`")]
    ValueNotInDomain { variable: String, value: i64 },

    #[error("domain of variable `{0}` is empty")]
    EmptyDomain(String),

    #[error("constraint on ({0}, {1}) declared more than once")]
    DuplicateConstraint(String, String),

    #[error("unknown variable `{0}`")]
    UnknownVariable(String),

    #[error("unknown point `{0}`")]
    UnknownPoint(String),

    #[error("invalid pattern: {0}")]
    InvalidPattern(String),

    #[error("order contains a cycle: {0}")]
    CyclicOrder(String),

    #[error("invalid order: {0}")]
    InvalidOrder(String),

    #[error("search budget of {0} nodes exceeded")]
    BudgetExceeded(u64),

    #[error("ordering problem mixes min-closed and max-closed constraints")]
    MixedClosure,

    #[error("unknown name `{0}`")]
    UnknownName(String),

    #[error("invalid formula: {0}")]
    InvalidFormula(String),

    #[error("internal check failed: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Malformed(e.to_string())
    }
}
