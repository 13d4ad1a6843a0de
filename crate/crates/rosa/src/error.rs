use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum RosaError {
    #[error("n must be even and at least 4, got {0}")]
    InvalidN(usize),
    #[error("{what} out of range: {value} (allowed {allowed})")]
    OutOfRange {
        what: &'static str,
        value: i64,
        allowed: String,
    },
    #[error("letter {letter} is not in the alphabet for n = {n}")]
    InvalidLetter { n: usize, letter: u32 },
    #[error("cannot parse edgeword {0:?}")]
    Parse(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("interval refinement could not separate the values within {bits} bits")]
    PrecisionExhausted { bits: u32 },
    #[error("exact tie between distinct crossing events")]
    Tie,
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("polygon does not close: {0}")]
    NotClosed(String),
    #[error("no Kenyon matching: property {0} fails")]
    NoMatching(KenyonProperty),
    #[error("interior tiling is stuck with {remaining} boundary edges left")]
    Stuck { remaining: usize },
    #[error("consistency check failed: {0}")]
    Consistency(String),
    #[error("corner condition cannot be met in the metatile of class {k}")]
    CornerConditionFailed { k: usize },
    #[error("conflicting tiles at {0}")]
    Conflict(String),
    #[error("no admissible index up to {max_i}")]
    NotFound { max_i: usize },
    #[error("size cap exceeded: {0}")]
    CapExceeded(String),
    #[error("degenerate triple intersection in the multigrid near ({x:.6}, {y:.6})")]
    TripleIntersection { x: f64, y: f64 },
}

impl RosaError {
    /// Short machine-readable name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            RosaError::InvalidN(_) => "InvalidN",
            RosaError::OutOfRange { .. } => "OutOfRange",
            RosaError::InvalidLetter { .. } => "InvalidLetter",
            RosaError::Parse(_) => "Parse",
            RosaError::DimensionMismatch { .. } => "DimensionMismatch",
            RosaError::PrecisionExhausted { .. } => "PrecisionExhausted",
            RosaError::Tie => "Tie",
            RosaError::PreconditionFailed(_) => "PreconditionFailed",
            RosaError::NotClosed(_) => "NotClosed",
            RosaError::NoMatching(_) => "NoMatching",
            RosaError::Stuck { .. } => "Stuck",
            RosaError::Consistency(_) => "Consistency",
            RosaError::CornerConditionFailed { .. } => "CornerConditionFailed",
            RosaError::Conflict(_) => "Conflict",
            RosaError::NotFound { .. } => "NotFound",
            RosaError::CapExceeded(_) => "CapExceeded",
            RosaError::TripleIntersection { .. } => "TripleIntersection",
        }
    }
}

/// The four properties of a Kenyon matching.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum KenyonProperty {
    K1,
    K2,
    K3,
    K4,
}

impl std::fmt::Display for KenyonProperty {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            KenyonProperty::K1 => "K1",
            KenyonProperty::K2 => "K2",
            KenyonProperty::K3 => "K3",
            KenyonProperty::K4 => "K4",
        };
        f.write_str(s)
    }
}

pub type Result<T> = std::result::Result<T, RosaError>;
