use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("curve must have at least one vertex")]
    EmptyCurve,
    #[error("vertex {index} duplicates its predecessor (zero-length edge)")]
    DuplicateVertex { index: usize },
    #[error("vertex {index} has dimension {got}, expected {expected}")]
    MixedDimensions {
        index: usize,
        got: usize,
        expected: usize,
    },
    #[error("coordinate is not finite at vertex {index}")]
    NonFiniteCoordinate { index: usize },
    #[error("zero-length segment")]
    DegenerateSegment,
    #[error("curves have different dimensions ({0} vs {1})")]
    DimensionMismatch(usize, usize),
    #[error("parse error at line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error("block start has no predecessor among the block endpoints")]
    NoPredecessor,
    #[error("code refers to the block-entry start but no carried value is present")]
    InconsistentCarriedStart,
    #[error("packed encoding has {got} bytes, expected {expected}")]
    PackedLengthMismatch { got: usize, expected: usize },
    #[error("packed encoding field out of range or non-canonical at code {index}")]
    PackedFieldInvalid { index: usize },
    #[error("memo file has layout version {got}, expected {expected}")]
    MemoVersionMismatch { got: u32, expected: u32 },
    #[error("memo file was built for alpha={file_alpha}, theta={file_theta}")]
    MemoParamMismatch { file_alpha: usize, file_theta: usize },
    #[error("memo file is truncated or malformed: {0}")]
    MemoFileMalformed(String),
    #[error("memoized output disagrees with recomputation (digest collision or corruption)")]
    MemoAuditFailure,
    #[error("critical-value enumeration cap exceeded (n*m*(n+m) = {cost} > {cap}); use bisection")]
    CriticalValueCapExceeded { cost: u128, cap: u128 },
    #[error("block partition parameter must be at least 1")]
    BadPartitionParameter,
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
