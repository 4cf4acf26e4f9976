use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("degenerate class structure: {0}")]
    DegenerateClasses(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("k = {k} exceeds the {available} usable neighbors")]
    KTooLarge { k: usize, available: usize },

    #[error("center packing infeasible: {0}")]
    CenterPacking(String),

    #[error("rare example placement infeasible: {0}")]
    RarePlacement(String),

    #[error("zero bandwidth: all points are identical")]
    ZeroBandwidth,

    #[error("fold lacks a class")]
    FoldLacksClass,

    #[error("empty sub-cluster {0}")]
    EmptyCluster(usize),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid data: {0}")]
    InvalidData(String),

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}
