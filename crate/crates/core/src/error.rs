use std::path::PathBuf;

use thiserror::Error;

/// Everything that can go wrong while building groups or evaluating degrees.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("not a group: {reason}")]
    NotAGroup { reason: String, witness: Option<(usize, usize, usize)> },

    #[error("group order exceeds cap {cap} (reached {reached})")]
    OrderCapExceeded { cap: usize, reached: usize },

    #[error("invalid group spec: {0}")]
    BadSpec(String),

    #[error("invalid arguments: {0}")]
    BadArgs(String),

    #[error("action image of element {element} is not an automorphism: {reason}")]
    NotAnAutomorphism { element: usize, reason: String },

    #[error("action is not a homomorphism at ({0}, {1})")]
    NotAHomomorphism(usize, usize),

    #[error("subgroup is not normal")]
    NotNormal,

    #[error("subset is not closed under the group operation")]
    NotClosed,

    #[error("group is not a minimal Schmidt group: {0}")]
    NotMinimalSchmidt(String),

    #[error("group is not a Schmidt group")]
    NotSchmidt,

    #[error("unexpected Sylow structure: {0}")]
    SylowStructureUnexpected(String),

    #[error("Schmidt construction failed: {0}")]
    ConstructionFailure(String),

    #[error("lattice decomposition mismatch: {0}")]
    DecompositionMismatch(String),

    #[error("no admissible (p, q) pair for r = {r} below p = {bound}")]
    NoAdmissiblePair { r: u32, bound: u64 },

    #[error("{path}:{line}: {message}")]
    IngestParseError { path: PathBuf, line: usize, message: String },

    #[error("cache entry corrupt: {0}")]
    CacheCorrupt(String),

    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
