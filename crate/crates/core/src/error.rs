use thiserror::Error;

use crate::tree::Violation;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid tree: {0}")]
    InvalidTree(#[from] Violation),

    #[error("k = {k} is outside the supported range 1..={max}")]
    KOutOfRange { k: usize, max: usize },

    /// The host has no k-vertex subtree, so densities are undefined.
    #[error("host tree with {n} vertices has no {k}-vertex subtree")]
    EmptyProfile { n: usize, k: usize },

    #[error("vertex {0} is not a leaf")]
    NotALeaf(usize),

    #[error("construction needs {needed} vertices, above the cap of {cap}")]
    VertexCap { needed: u128, cap: usize },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("cannot parse tree: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
