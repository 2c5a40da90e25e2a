use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Parameters fall outside the admissible range of the requested pipeline.
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error("polynomial variable mismatch: {0} vs {1}")]
    VariableMismatch(&'static str, &'static str),

    #[error("division by zero: {0}")]
    DivisionByZero(String),

    #[error("failed to parse exact rational from {0:?}")]
    Parse(String),

    /// A Frobenius back-substitution pivot vanished; the nested scheme handles this case.
    #[error("resonant Frobenius pivot (solution {solution}, order {order}, row {row}); fall back to the nested scheme")]
    Resonance { solution: usize, order: usize, row: usize },

    #[error("numeric failure: {0}")]
    Numeric(String),

    /// An identity that must hold exactly (sum rule, degree bound, exponent range) failed.
    #[error("invariant violated: {0}")]
    Invariant(String),
}

impl Error {
    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidParameters(_) | Error::Parse(_) | Error::VariableMismatch(..) => 1,
            Error::Invariant(_) => 3,
            _ => 2,
        }
    }
}
