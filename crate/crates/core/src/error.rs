use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Errors raised by the library. Analysis outcomes (a code that is not
/// decodable, a failed necessary condition) are values, not errors.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),

    #[error("symbol index {index} is outside an alphabet of size {size}")]
    SymbolOutOfRange { index: usize, size: usize },

    #[error("no codeword for symbol {symbol} (previous symbol: {previous:?})")]
    MissingWord {
        previous: Option<usize>,
        symbol: usize,
    },

    #[error("invalid digit `{digit}` for radix {radix}")]
    InvalidDigit { digit: char, radix: u8 },

    #[error("transition matrix is reducible: no unique stationary distribution")]
    Reducible,

    #[error("graph is not strongly connected on its active states")]
    NotStronglyConnected,

    #[error("enumeration of {count} sequences exceeds the limit of {limit}")]
    EnumerationLimit { count: u128, limit: u128 },

    #[error("counter overflow while counting sequences")]
    CountOverflow,

    #[error("matrix has a negative entry {value} at ({row}, {col})")]
    NegativeEntry { row: usize, col: usize, value: f64 },

    #[error("power iteration did not converge after {iterations} iterations; bracket [{lower}, {upper}]")]
    NoConvergence {
        iterations: usize,
        lower: f64,
        upper: f64,
    },

    #[error("no producible sequence encodes to the given digits")]
    NoParse,

    #[error("digits admit at least two producible parses")]
    AmbiguousParse {
        first: Vec<usize>,
        second: Vec<usize>,
    },
}

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::Invalid(msg.into())
}
