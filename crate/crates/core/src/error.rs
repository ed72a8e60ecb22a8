use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("exponent matrix must have at least one row and one column, got {rows}x{cols}")]
    EmptyMatrix { rows: usize, cols: usize },

    #[error("row {row} has {found} entries, expected {expected}")]
    RaggedRows {
        row: usize,
        found: usize,
        expected: usize,
    },

    #[error("lifting degree must be positive")]
    ZeroLiftingDegree,

    #[error("operation requires a lifting degree but none is set")]
    MissingLiftingDegree,

    #[error("entry ({row}, {col}) = {value} is outside [0, {lifting_degree})")]
    EntryOutOfRange {
        row: usize,
        col: usize,
        value: u64,
        lifting_degree: u64,
    },

    #[error("cycle half-length bound {0} is outside the supported range 2..=6")]
    UnsupportedHalfLength(usize),

    #[error("relation index ({row}, {col}) lies outside a {rows}x{cols} matrix")]
    RelationOutOfBounds {
        row: usize,
        col: usize,
        rows: usize,
        cols: usize,
    },

    #[error("window of {window} blocks cannot hold a band of {needed} blocks")]
    WindowTooSmall { window: usize, needed: usize },

    #[error("invalid SMC specification: {0}")]
    InvalidSmc(String),

    #[error("invalid search configuration: {0}")]
    InvalidConfig(String),

    #[error("relation {index} has a zero coefficient on the newest column")]
    ZeroCoefficient { index: usize },

    #[error("input matrix is not girth-certified: a cycle of length {length} exists mod N")]
    NotCertified { length: usize },

    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("stream of {found} bits is shorter than one window of {needed} bits")]
    StreamTooShort { needed: usize, found: usize },

    #[error("invalid simulation config: {0}")]
    InvalidSimConfig(String),

    #[error("malformed alist: {0}")]
    Alist(String),
}

pub type Result<T> = std::result::Result<T, Error>;
