//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("unsupported edge label {0}: exact realizations cover labels 2..=6")]
    UnsupportedLabel(u32),

    #[error("diagram is not of finite type")]
    NotFinite,

    #[error("{0} has no extended diagram here: {1}")]
    NoExtendedDiagram(String, String),

    #[error("invalid diagram request: {0}")]
    InvalidDiagram(String),

    #[error("invalid type selector: {0}")]
    InvalidType(String),

    #[error("diagram parse error: {0}")]
    Parse(String),

    #[error("reflection group too large: order {order} exceeds cap {cap}")]
    GroupTooLarge { order: u64, cap: u64 },

    #[error("root closure exceeded {0} roots; input does not look finite")]
    RootClosureDiverged(usize),

    #[error("sampling failed after {0} rejected draws")]
    SamplingExhausted(u64),

    #[error(
        "full genericity certificate needs {subsets} hyperplane subsets, over the budget of {budget}"
    )]
    CertificateBudget { subsets: u64, budget: u64 },

    #[error("intersection lattice exceeded budget of {0} flats")]
    LatticeBudget(usize),

    #[error("point is not usable here: {0}")]
    NotGeneric(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("count mismatch at a sample point: expected {expected}, got {got} (coords {witness})")]
    CountMismatch {
        expected: u64,
        got: u64,
        witness: String,
    },

    #[error("alcove cone membership count was {got} (expected 1) at coords {witness}")]
    PartitionViolation { got: u64, witness: String },
}

pub type Result<T> = std::result::Result<T, Error>;
