use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(u32, u32),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("{0} is not a prime power")]
    NotPrimePower(u64),

    #[error("verification failed in {context}: {witness}")]
    VerificationFailed { context: String, witness: String },

    #[error("search budget exhausted for {target} (best coverage {coverage:.4})")]
    BudgetExhausted { target: String, coverage: f64 },

    #[error("ingredient unresolved: {0}")]
    Unresolved(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParams(msg.into())
    }

    pub fn verification(context: impl Into<String>, witness: impl Into<String>) -> Self {
        Error::VerificationFailed {
            context: context.into(),
            witness: witness.into(),
        }
    }
}
