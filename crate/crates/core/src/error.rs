use thiserror::Error;

/// Errors produced by the synthesis toolkit.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("width {width} exceeds the supported maximum of {max} lines")]
    WidthOverflow { width: usize, max: usize },

    #[error("invalid width: {0}")]
    InvalidWidth(String),

    #[error("value {value} does not fit in {width} bits")]
    ValueOutOfRange { value: u32, width: usize },

    #[error("table has {got} entries, expected {expected}")]
    TableLength { got: usize, expected: usize },

    #[error("table is not a bijection: value {0} appears more than once")]
    NotBijective(u32),

    #[error("at least {required} ancilla lines are needed, {given} were given")]
    InsufficientAncilla { required: usize, given: usize },

    #[error("odd permutation on {n} >= 4 lines cannot be realized without an ancilla line")]
    OddPermutationNoAncilla { n: usize },

    #[error("odd permutation on {m} >= 4 lines is not realizable by NOT/CNOT/Toffoli gates")]
    OddPermutation { m: usize },

    #[error("invalid gate: {0}")]
    InvalidGate(String),

    #[error("gate {gate} has no free line to borrow on a {lines}-line circuit")]
    NoBorrowLine { gate: String, lines: usize },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("permutation is not reachable in the atlas")]
    Unreachable,

    #[error("I/O error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
