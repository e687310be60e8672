use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension too small: {0}")]
    DimensionTooSmall(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("weight vector is empty")]
    EmptyWeights,

    #[error("conditional entropy needs two distinct cells, got {0} twice")]
    SameCell(usize),

    #[error("exponent {value} out of range for alphabet of size {alphabet}")]
    ExponentOutOfRange { value: usize, alphabet: usize },
}
