use thiserror::Error;

/// Errors produced anywhere in the workbench.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("arity mismatch: expected {expected}, got {actual}")]
    ArityMismatch { expected: usize, actual: usize },

    #[error("arity {arity} exceeds the limit of {limit} for {operation}")]
    ArityOverflow {
        arity: usize,
        limit: usize,
        operation: &'static str,
    },

    #[error("variable index {index} out of range 1..={arity}")]
    IndexOutOfRange { index: usize, arity: usize },

    #[error("assignment {bits} does not fit in {arity} bits")]
    AssignmentOutOfRange { bits: u64, arity: usize },

    #[error("unknown built-in {0:?}")]
    UnknownBuiltin(String),

    #[error("parse error at line {line}, position {position}: {message}")]
    Parse {
        line: usize,
        position: usize,
        message: String,
    },

    #[error("invalid weight {0:?}")]
    InvalidWeight(String),

    #[error("malformed scheme: {0}")]
    MalformedScheme(String),

    #[error("empty relation: {0}")]
    EmptyRelation(&'static str),

    #[error("scheme is not balanced (v_A = {v_a}, v_B = {v_b})")]
    Unbalanced { v_a: String, v_b: String },

    #[error("square root of {0} is not representable as q*sqrt(r)")]
    NotRepresentable(String),

    #[error("linear program failed: {0}")]
    Lp(String),

    #[error("matrix {index} is not unitary (deviation {deviation:.3e})")]
    NotUnitary { index: usize, deviation: f64 },

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("simulation too large: {0}")]
    SimulationTooLarge(String),

    #[error("depth {depth} exceeds materialization limit {limit}")]
    DepthOverflow { depth: usize, limit: usize },

    #[error("verification failed: {0}")]
    VerificationFailed(String),

    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
