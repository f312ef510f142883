use thiserror::Error;

/// Errors shared by the graph, welfare, solver and reduction modules.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("coalition is empty")]
    EmptyCoalition,

    #[error("vertex {vertex} is not in the coalition")]
    NotInCoalition { vertex: u32 },

    #[error("graph is not connected")]
    Disconnected,

    #[error("graph is not a tree")]
    NotATree,

    #[error("input has {n} vertices, limit for this operation is {limit}")]
    TooLarge { n: usize, limit: usize },

    #[error("invalid tree shape: {0}")]
    BadShape(String),

    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("clause {clause} has {true_count} true literals, expected exactly 1")]
    NotExactlyOneSatisfied { clause: usize, true_count: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
