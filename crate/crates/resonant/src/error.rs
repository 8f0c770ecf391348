use crate::partitions::BlockLabel;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Partition counts above this range no longer fit exact 64-bit arithmetic.
    #[error("m = {0} is outside the exact counting range (m <= {max})", max = crate::partitions::MAX_M)]
    PartitionRange(u32),

    #[error("block ({label}) has dimension {dim}, above the cap {cap}")]
    BlockTooLarge {
        label: BlockLabel,
        dim: u64,
        cap: usize,
    },

    #[error(
        "coupling value for quartet ({n},{m},{k},{l}) overflows the floating-point exponent range"
    )]
    CouplingOverflow { n: u32, m: u32, k: u32, l: u32 },

    #[error("eigensolver failed on block ({label}): {message}")]
    Diagonalization { label: BlockLabel, message: String },

    #[error("matrix for block ({label}) is not symmetric (max asymmetry {asymmetry:e})")]
    NotSymmetric { label: BlockLabel, asymmetry: f64 },

    #[error("spectrum has non-positive maximal eigenvalue {0}")]
    NonPositiveMax(f64),

    #[error("degenerate fit: need at least {need} samples with nonzero variance, got {got}")]
    DegenerateFit { need: usize, got: usize },

    #[error("unfolding window at level {index} is fully degenerate (delta = {delta})")]
    DegenerateWindow { index: usize, delta: usize },

    #[error("spectrum of dimension {dim} is too small to unfold with delta = {delta}")]
    WindowTooWide { dim: usize, delta: usize },

    #[error("no closed form is available for family `{0}`")]
    UnsupportedFamily(String),

    #[error("{0}")]
    InvalidArgument(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
