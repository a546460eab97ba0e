use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("series does not terminate: {0}")]
    NonTerminating(String),

    #[error("pole in series denominator at term {term}")]
    Pole { term: usize },

    #[error("resource limit: {0}")]
    Resource(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("missing operator {0}")]
    MissingOperator(String),

    #[error("relation {relation} violated, residual {residual:e}")]
    Inconsistent { relation: String, residual: f64 },

    #[error("invalid chain: {0}")]
    InvalidChain(String),

    #[error("singular system: {0}")]
    Singular(String),

    #[error("step size underflow at r = {r}")]
    StepUnderflow { r: f64 },

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
