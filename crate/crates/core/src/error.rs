use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("zero input: {0}")]
    ZeroInput(String),
    #[error("degenerate form")]
    DegenerateForm,
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("factorization exceeded budget for {0}")]
    BudgetExceeded(String),
    #[error("polynomial is not monic")]
    NonMonic,
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("polynomials share a root")]
    SharedRoot,
    #[error("inadmissible invariants: {condition}: {detail}")]
    Inadmissible { condition: String, detail: String },
    #[error("invalid field descriptor: {0}")]
    InvalidField(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("internal consistency check failed: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn inadmissible(condition: &str, detail: impl Into<String>) -> Self {
        Error::Inadmissible { condition: condition.to_string(), detail: detail.into() }
    }

    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    /// Name of the violated admissibility condition, if this is one.
    pub fn condition(&self) -> Option<&str> {
        match self {
            Error::Inadmissible { condition, .. } => Some(condition),
            _ => None,
        }
    }
}
