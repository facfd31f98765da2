use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("self-loop on vertex {vertex}")]
    SelfLoop { vertex: usize },

    #[error("vertex {vertex} out of range (graph has {vertex_count} vertices)")]
    VertexOutOfRange { vertex: usize, vertex_count: usize },

    #[error("edge ({source_vertex}, {target}) has non-positive capacity {capacity}")]
    NonPositiveCapacity {
        source_vertex: usize,
        target: usize,
        capacity: i64,
    },

    #[error("vertex set is empty")]
    EmptyVertexSet,

    #[error("source and sink are the same vertex ({0})")]
    SourceIsSink(usize),

    #[error("exhaustive min-cut enumeration supports at most {max} vertices, graph has {actual}")]
    TooManyVertices { max: usize, actual: usize },

    #[error("graph needs at least {required} vertices, has {actual}")]
    TooFewVertices { required: usize, actual: usize },

    #[error("level {level} asks for {k} partitions but graph has only {vertex_count} vertices")]
    LevelTooLarge {
        level: u32,
        k: usize,
        vertex_count: usize,
    },

    #[error("expected {expected} partition budgets, got {actual}")]
    BudgetCountMismatch { expected: usize, actual: usize },

    #[error("invalid generator config: {0}")]
    InvalidConfig(String),

    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}:{line}: {message}")]
    Malformed {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("{0} contains no edges")]
    NoEdges(PathBuf),

    #[error("level sweep has no l=0 baseline for {nodes} nodes")]
    MissingBaseline { nodes: usize },

    #[error("dataset {name}: {source}")]
    Dataset {
        name: String,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Write(#[from] std::io::Error),
}
