use thiserror::Error;

/// Every failure the library can report.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid group spec: {0}")]
    InvalidSpec(String),
    #[error("size mismatch: expected {expected}, got {got}")]
    SizeMismatch { expected: usize, got: usize },
    #[error("matrix is not nilpotent")]
    NotNilpotent,
    #[error("parse error: {0}")]
    ParseError(String),
    #[error("unknown root: {0}")]
    UnknownRoot(String),
    #[error("Cartan vector lies on a wall")]
    NotRegular,
    #[error("plane vectors are linearly dependent")]
    DegeneratePlane,
    #[error("parameter shape does not match root {0}")]
    ShapeMismatch(String),
    #[error("parameter must be nonzero")]
    ZeroParameter,
    #[error("index out of range: {0}")]
    OutOfRange(String),
    #[error("vector is not on the unit sphere")]
    NotOnSphere,
    #[error("variant not supported for this family")]
    VariantUnsupported,
    #[error("roots {0} and {1} are opposite")]
    OppositeRoots(String, String),
    #[error("commutator decomposition residual {0:e} exceeds tolerance")]
    DecompositionResidual(f64),
    #[error("unknown suite: {0}")]
    UnknownSuite(String),
    #[error("side condition {0} violated")]
    SideConditionViolated(String),
    #[error("inner products differ: {0:e}")]
    PairingMismatch(f64),
    #[error("no certified solution found")]
    NoSolution,
    #[error("matrix is not in the group")]
    NotInGroup,
}

pub type Result<T> = std::result::Result<T, Error>;
