use thiserror::Error;

/// Errors raised by the solver library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("argument outside supported domain: {0}")]
    Domain(String),
    #[error("singular argument: {0}")]
    Singularity(String),
    #[error("invalid curve specification: {0}")]
    InvalidCurve(String),
    #[error("invalid mesh: {0}")]
    InvalidMesh(String),
    #[error("index {index} out of range for {len} basis functions")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("lossless medium has no finite penetration length")]
    Degenerate,
    #[error("assembly error: {0}")]
    Assembly(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("singular circulant: min |eigenvalue| = {min:e}, threshold {threshold:e}")]
    SingularCirculant { min: f64, threshold: f64 },
    #[error("compression ineffective: rank {rank} exceeds n/2 = {half}")]
    CompressionIneffective { rank: usize, half: usize },
    #[error("singular Woodbury core: condition number {0:e}")]
    SingularCore(f64),
    #[error("linear solve failed: {0}")]
    Solve(String),
    #[error("series truncation not converged: {0}")]
    SeriesNotConverged(String),
    #[error("polarization/formulation mismatch: {0}")]
    Polarization(String),
    #[error("point {index} lies in the excluded near-boundary band")]
    ExcludedPoint { index: usize },
    #[error("point {index} is not in the requested region")]
    WrongRegion { index: usize },
    #[error("memory estimate {estimate} bytes exceeds cap {cap} bytes")]
    MemoryCap { estimate: u64, cap: u64 },
    #[error("config error: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Process exit code for the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) => 2,
            _ => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
