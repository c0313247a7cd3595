use thiserror::Error;

use crate::graph::VertexId;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("vertex {vertex} has {found} incident edges, expected {expected}")]
    DegreeMismatch {
        vertex: VertexId,
        found: usize,
        expected: usize,
    },
    #[error("vertices {0} and {1} share more than one edge")]
    MultiEdge(VertexId, VertexId),
    #[error("edge {edge} has {count} endpoints (expected 1 or 2 distinct)")]
    BadEndpointCount { edge: String, count: usize },
    #[error("unknown vertex {0}")]
    UnknownVertex(VertexId),
    #[error("duplicate vertex {0}")]
    DuplicateVertex(VertexId),
    #[error("duplicate edge id {0:?}")]
    DuplicateEdge(String),
    #[error("delta must be at least {min}, got {got}")]
    DeltaTooSmall { min: usize, got: usize },
    #[error("star size {k} is out of range 0..={delta}")]
    KOutOfRange { k: usize, delta: usize },
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("semantic error: {0}")]
    Semantic(String),
    #[error("graph contains a cycle")]
    NotAForest,
    #[error("vertex {vertex} has degree {degree} > {max}")]
    DegreeTooHigh {
        vertex: VertexId,
        degree: usize,
        max: usize,
    },
    #[error("subset of vertex constraints is empty")]
    EmptySubset,
    #[error("endpoint data is not drawn from the given subset")]
    WitnessNotInSubset,
    #[error("the subset is l-full for some l; no bad path witness exists")]
    SubsetIsFull,
    #[error("the label set is greedy; no bad star witness exists")]
    SetIsGreedy,
    #[error("certificate does not hold for this problem: {0}")]
    CertificateInvalid(String),
    #[error("piece {piece} admits no completion inside the certified subset")]
    CompletionFailure { piece: usize },
    #[error("problem is full; the hc construction requires a non-full problem")]
    LclIsFull,
    #[error("problem is greedy; the comp construction requires a non-greedy problem")]
    LclIsGreedy,
    #[error("construction invariant violated: {0}")]
    InvariantBreach(String),
    #[error("bad parameter: {0}")]
    BadParameter(String),
    #[error("graph has no vertices")]
    EmptyGraph,
    #[error("subset enumeration needs more than {cap} checks")]
    TooManySubsets { cap: u64 },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn from_json(err: &serde_json::Error) -> Self {
        Error::Syntax {
            line: err.line(),
            column: err.column(),
            message: err.to_string(),
        }
    }
}
