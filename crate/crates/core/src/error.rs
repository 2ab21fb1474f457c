use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Everything that can go wrong inside the library.
///
/// Indices carried by the variants are 1-based, matching the indices used in
/// reports and on the command line.
#[derive(Debug, Error)]
pub enum Error {
    #[error("series is empty")]
    EmptySeries,
    #[error("non-finite value at index {index}")]
    NonFiniteValue { index: usize },
    #[error("label index {index} outside [1, {n}]")]
    LabelOutOfRange { index: usize, n: usize },
    #[error("timestamps must be strictly increasing (violated at index {index})")]
    TimestampsNotIncreasing { index: usize },
    #[error("{timestamps} timestamps for {values} values")]
    TimestampLengthMismatch { timestamps: usize, values: usize },

    #[error("sample of size {len} is too small (need at least 2)")]
    SampleTooSmall { len: usize },
    #[error("alpha must lie in (0, 2], got {0}")]
    InvalidAlpha(f64),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("value {0} outside the tree domain [0, 1]")]
    OutOfRange(f64),
    #[error("removing {0} would drive a leaf count negative")]
    Underflow(f64),
    #[error("median of an empty tree")]
    EmptyTree,
    #[error("median of an empty heap pair")]
    EmptyHeap,
    #[error("median of an empty multiset")]
    EmptyMultiset,

    #[error("segment of length {len} is shorter than delta = {delta}")]
    SegmentTooShort { len: usize, delta: usize },
    #[error("series of length {n} is too short: need at least 2*delta = {required}")]
    SeriesTooShort { n: usize, required: usize },

    #[error("smoothing window {window} exceeds series length {n}")]
    WindowTooLarge { window: usize, n: usize },
    #[error("smoothing window must be odd and at least 3, got {0}")]
    InvalidWindow(usize),

    #[error("invalid synthetic spec: {0}")]
    InvalidSpec(String),
    #[error("parse error at row {row}: {message}")]
    Parse { row: usize, message: String },
    #[error("malformed labels in {file}: {message}")]
    MalformedLabels { file: String, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
