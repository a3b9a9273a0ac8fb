use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid half-integer `{0}`: expected n/2 with odd n >= 3")]
    InvalidHalfInt(String),

    #[error("malformed rational `{0}`")]
    MalformedRational(String),

    #[error("{what}: index {index} outside {lo}..={hi}")]
    IndexOutOfRange {
        what: &'static str,
        index: i64,
        lo: i64,
        hi: i64,
    },

    #[error("substitution of a non-invertible value into a negative power of {0}")]
    Pole(String),

    #[error("division by an expression whose numerator is identically zero")]
    DivisionByZero,

    #[error("unknown generator name `{0}`")]
    UnknownGenerator(String),

    #[error("invalid tree label ({k}, {m}) for l = {ell}")]
    InvalidLabel { k: i64, m: i64, ell: String },

    #[error("{0}")]
    Unsupported(String),

    #[error("parse error at {line}:{column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
}
