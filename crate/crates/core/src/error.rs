use std::path::PathBuf;

use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("empty segment")]
    EmptySegment,

    #[error("empty point cloud")]
    EmptyCloud,

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("matrix is not a proper rotation (orthonormality error {0:e})")]
    NotRotation(f64),

    #[error("degenerate viewpoint: point {0} coincides with the viewpoint")]
    DegenerateViewpoint(usize),

    #[error("fully occluded after {0} attempts")]
    FullyOccluded(usize),

    #[error("insufficient poses for KDE: need at least 2, got {0}")]
    InsufficientPoses(usize),

    #[error("empty pose list")]
    NoPoses,

    #[error("empty error list")]
    NoErrors,

    #[error("no evaluation records")]
    NoRecords,

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("bad magic at offset {offset}")]
    BadMagic { offset: u64 },

    #[error("unsupported version {found} at offset {offset} (expected {expected})")]
    VersionMismatch {
        offset: u64,
        found: u32,
        expected: u32,
    },

    #[error("truncated file at offset {offset}")]
    Truncated { offset: u64 },

    #[error("inconsistent batch: {0}")]
    InconsistentBatch(String),

    #[error("{path}:{line}: {msg}")]
    Parse {
        path: PathBuf,
        line: usize,
        msg: String,
    },

    #[error("{path}: {msg}")]
    Model { path: PathBuf, msg: String },

    #[error("{path}: {source}")]
    File {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
