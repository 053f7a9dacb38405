use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("node index {index} out of range for graph with {d} nodes")]
    NodeOutOfRange { index: usize, d: usize },

    #[error("graph has {0} nodes; at most {max} are supported", max = crate::MAX_NODES)]
    TooManyNodes(usize),

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("graph contains a directed cycle")]
    Cyclic,

    #[error("equivalence class has more than {cap} member DAGs")]
    EnumerationOverflow { cap: usize },

    #[error("invalid data: {0}")]
    InvalidData(String),

    #[error("matrix is singular or too ill-conditioned (condition estimate {condition:e})")]
    Singular { condition: f64 },

    #[error("insufficient degrees of freedom: n={n}, |S|={cond_size}")]
    InsufficientDf { n: usize, cond_size: usize },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("majority-rule orientation requires an independence test")]
    MissingTest,

    #[error("no valid graphs were kept after screening")]
    NoValidGraphs,

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}
