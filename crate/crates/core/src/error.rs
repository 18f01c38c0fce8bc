use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid grid size {0}: N must be at least 1")]
    InvalidSize(usize),

    #[error("malformed boundary string at position {position}: {message}")]
    BoundaryParse { position: usize, message: String },

    #[error("boundary configuration does not match the grid: {0}")]
    BoundaryMismatch(String),

    #[error("boundary is not a one-run configuration")]
    NotOneRun,

    #[error("degenerate: {0}")]
    Degenerate(String),

    #[error("N = {n} exceeds the {solver} size cap of {cap}")]
    SizeGuard {
        solver: &'static str,
        n: usize,
        cap: usize,
    },

    #[error("incomplete configuration: {0}")]
    IncompleteConfig(String),

    #[error("more than {cap} shortest paths between run endpoints")]
    PathCap { cap: usize },

    #[error("degenerate curve: {0}")]
    DegenerateCurve(String),

    #[error("region classes do not partition the interior: {0}")]
    PartitionViolation(String),

    #[error("trace ends at iteration {available}, need iteration {needed}")]
    TraceTooShort { needed: usize, available: usize },

    #[error("tuple is not compatible: {0}")]
    IncompatibleTuple(String),

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("tree spec line {line}: {message}")]
    TreeSpec { line: usize, message: String },

    #[error("{0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Io(e.to_string())
    }
}
