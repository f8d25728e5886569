use thiserror::Error;

/// Errors raised by the library.
///
/// Decision outcomes (a polynomial is not a ROP, a family member is not
/// expressible, ...) are never reported through this type; they are data.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands belong to different fields")]
    FieldMismatch,
    #[error("{0} is not a prime in [2, 2^31)")]
    InvalidPrime(u64),
    #[error("variable index {index} out of range 1..={n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("variable indices must differ")]
    EqualIndices,
    #[error("operands share variables")]
    SharedVariables,
    #[error("operands have different variable counts ({0} vs {1})")]
    ArityMismatch(usize, usize),
    #[error("expected a {expected}-variate polynomial, got {got} variables")]
    WrongArity { expected: usize, got: usize },
    #[error("too many variables: {0}")]
    TooManyVariables(usize),
    #[error("too few variables: {0}")]
    TooFewVariables(usize),
    #[error("individual degree exceeds 4")]
    ExponentOverflow,
    #[error("formula contains an addition gate")]
    NotMultiplicative,
    #[error("leaf for x{0} has a zero coefficient")]
    DegenerateLeaf(usize),
    #[error("x{0} does not label a leaf of the formula")]
    VariableNotPresent(usize),
    #[error("invalid formula: {0}")]
    InvalidFormula(String),
    #[error("operation requires a field of characteristic other than 2")]
    CharacteristicTwo,
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("exhaustive enumeration infeasible for p = {p}, n = {n}")]
    InfeasibleParameters { p: u64, n: usize },
    #[error("parameter mismatch: {0}")]
    ParameterMismatch(String),
    #[error("parse error at offset {position}: {message}")]
    Parse { position: usize, message: String },
    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn parse(position: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            position,
            message: message.into(),
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
