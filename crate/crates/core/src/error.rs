use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("node index {index} out of range for a graph with {node_count} nodes")]
    NodeOutOfRange { index: usize, node_count: usize },

    #[error("unknown node label `{0}`")]
    UnknownLabel(String),

    #[error("duplicate node label `{0}`")]
    DuplicateLabel(String),

    #[error("expected {expected} labels, got {actual}")]
    LabelCount { expected: usize, actual: usize },

    #[error("self-loop on node {0}")]
    SelfLoop(String),

    #[error("more than one edge between {0} and {1}")]
    DuplicateEdge(String, String),

    #[error("unknown edge type `{0}` (expected `directed` or `bidirected`)")]
    UnknownEdgeType(String),

    #[error("malformed graph JSON: {0}")]
    Json(#[from] serde_json::Error),

    #[error("malformed DOT input at line {line}: {message}")]
    Dot { line: usize, message: String },

    #[error("graph is not a MAG: {0}")]
    NotMag(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("expected edge {expected}, found {found}")]
    EdgeMismatch { expected: String, found: String },

    #[error("query sets overlap: {0}")]
    OverlappingSets(String),

    #[error("{0} and {1} are adjacent")]
    AdjacentPair(String, String),

    #[error("invalid path: {0}")]
    InvalidPath(String),

    #[error("graphs are over different node sets: {0}")]
    NodeSetMismatch(String),

    #[error("graphs have different adjacencies: {0}")]
    AdjacencyMismatch(String),

    #[error("move rejected: {0}")]
    RejectedMove(String),

    #[error("node count {0} outside the supported range 1..={max}", max = crate::enumeration::MAX_ENUMERATION_NODES)]
    NodeCountOutOfRange(usize),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
