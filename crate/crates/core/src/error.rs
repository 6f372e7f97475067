use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("alphabet mismatch: {0} vs {1}")]
    AlphabetMismatch(usize, usize),
    #[error("series has nonzero constant term")]
    NonzeroConstant,
    #[error("strand count mismatch: {0} vs {1}")]
    StrandMismatch(usize, usize),
    #[error("index {index} out of range 1..={max}")]
    OutOfRange { index: usize, max: usize },
    #[error("invalid braid letter {0}")]
    BadLetter(i64),
    #[error("color mismatch: {0}")]
    ColorMismatch(String),
    #[error("object mismatch: {0}")]
    ObjectMismatch(String),
    #[error("ill-formed morphism: {0}")]
    IllFormed(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("inconsistent linear system")]
    Inconsistent,
    #[error("table error: {0}")]
    Table(String),
}

pub type Result<T> = std::result::Result<T, Error>;
