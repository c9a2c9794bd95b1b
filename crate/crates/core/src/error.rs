use thiserror::Error;

/// Errors surfaced by table generation, verification, and I/O.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("invalid rational literal {literal:?}: {reason}")]
    ParseRational { literal: String, reason: String },

    #[error("division by zero")]
    DivisionByZero,

    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error("cross-check failed: {0}")]
    CrossCheck(String),

    #[error("{check}: nonzero residual {residual} ({params})")]
    NonzeroResidual {
        check: String,
        params: String,
        residual: String,
    },

    #[error("argument {value} lies outside the convergence domain for p = {prime}")]
    OutsideDomain { value: String, prime: u64 },

    #[error("tables cover k <= {covered}, but k = {requested} was requested")]
    TableTooShort { covered: usize, requested: usize },

    #[error("singular linear system at k = {0}")]
    SingularSystem(usize),

    #[error("unknown sequence id {0:?}")]
    UnknownSequence(String),

    #[error("b-file line {line}: {reason}")]
    BFile { line: usize, reason: String },

    #[error("malformed table file: {0}")]
    TableFormat(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
