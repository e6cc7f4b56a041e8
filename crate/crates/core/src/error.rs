use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{name} is not normalized: value at 1 is {value}")]
    NotNormalized { name: String, value: String },

    #[error("{name} is only defined for 1 <= n <= {len}, got n = {n}")]
    OutOfTable { name: String, n: usize, len: usize },

    #[error("{name} vanishes at n = {n}")]
    Vanishing { name: String, n: usize },

    #[error("index out of range: {0}")]
    Range(String),

    #[error("series constant term is not an invertible constant")]
    NonInvertibleSeries,

    #[error("exp needs a series with zero constant term")]
    NonZeroConstantTerm,

    #[error("negative entry at index {0}; shape predicates need nonnegative sequences")]
    NegativeEntry(usize),

    #[error("bad function descriptor `{0}`")]
    Descriptor(String),

    #[error("multinomial parts sum to {sum}, expected {n}")]
    PartsSum { n: u64, sum: u64 },

    #[error("malformed table: {0}")]
    Table(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
