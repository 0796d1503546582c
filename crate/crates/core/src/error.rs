use thiserror::Error;

/// Errors raised by the codec library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid code parameters: {0}")]
    InvalidParams(String),

    #[error("symbol power {power} is outside [0, {max}]")]
    InvalidSymbol { power: u32, max: u32 },

    #[error("level {level} is outside [0, {max}]")]
    InvalidLevel { level: u32, max: u32 },

    #[error("{what} {value} outside the supported range [{low}, {high}]")]
    OutOfRange {
        what: &'static str,
        value: i64,
        low: i64,
        high: i64,
    },

    #[error("codeword contains {count} forbidden pattern(s), first at offset {first}")]
    InvalidCodeword { count: usize, first: usize },

    #[error("codeword has length {actual}, expected {expected}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("message has {actual} bits, expected s^c = {expected}")]
    MessageLength { expected: u64, actual: usize },

    #[error("invalid bit character {0:?}")]
    InvalidBit(char),

    #[error("non-message codeword (index {index} outside [1, 2^{bits}])")]
    NonMessageCodeword { index: String, bits: u64 },

    #[error(
        "stream length {len} does not frame into codewords of length {m} with {x} bridging symbols"
    )]
    Framing { len: usize, m: usize, x: usize },

    #[error("frame {frame}: {source}")]
    Frame {
        frame: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("bridge before frame {frame} is {found:?}, expected {expected:?}")]
    BridgeMismatch {
        frame: usize,
        expected: Vec<u8>,
        found: Vec<u8>,
    },

    #[error("enumeration of {q}^{m} strings exceeds the limit of {limit}")]
    InstanceTooLarge { q: u32, m: usize, limit: u64 },

    #[error("word not present in the enumerated code")]
    NotFound,

    #[error("power iteration did not converge after {0} iterations")]
    NoConvergence(usize),

    #[error("malformed stream data: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;
