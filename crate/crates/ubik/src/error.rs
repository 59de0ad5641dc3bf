use std::io;

use thiserror::Error;

/// Errors produced anywhere in the library.
#[derive(Debug, Error)]
pub enum Error {
    /// A line of an input file failed to parse or violated a format rule.
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("unknown node '{0}'")]
    UnknownNode(String),
    #[error("unknown skill '{0}'")]
    UnknownSkill(String),
    #[error("unknown dimension '{0}'")]
    UnknownDimension(String),
    #[error("invalid query: {0}")]
    InvalidQuery(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    /// Ranking comparisons require both rankings to cover the same nodes.
    #[error("rankings cover different node sets")]
    NodeSetMismatch,
    /// The naive reference implementation refuses large instances.
    #[error("instance has {nodes} nodes, above the reference-implementation limit of {limit}")]
    SizeGuard { nodes: usize, limit: usize },
    #[error("requested {requested} edges but at most {capacity} distinct (pair, dimension) edges exist")]
    Capacity { requested: usize, capacity: usize },
    #[error(transparent)]
    Io(#[from] io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
