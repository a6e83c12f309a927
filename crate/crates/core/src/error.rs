use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid motif: {0}")]
    InvalidMotif(String),

    #[error("invalid graphon: {0}")]
    InvalidGraphon(String),

    #[error("motif has no edges")]
    EdgelessMotif,

    #[error("motif has {vertices} vertices, {operation} accepts at most {limit}")]
    MotifTooLarge {
        operation: &'static str,
        vertices: usize,
        limit: usize,
    },

    #[error("vertex index {index} out of range for a motif on {vertices} vertices")]
    VertexOutOfRange { index: usize, vertices: usize },

    #[error("block index {index} out of range for a graphon with {blocks} blocks")]
    BlockOutOfRange { index: usize, blocks: usize },

    #[error("pattern is not isomorphic to a subgraph of the motif")]
    NotEmbeddable,

    #[error("arithmetic overflow computing {0}")]
    Overflow(&'static str),

    #[error("enumeration too large: {0}")]
    TooLarge(String),

    #[error("critical constant undefined in regular case")]
    RegularGraphon,

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error("thread pool: {0}")]
    ThreadPool(#[from] rayon::ThreadPoolBuildError),
}

pub type Result<T> = std::result::Result<T, Error>;
