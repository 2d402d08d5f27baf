use std::io;
use std::path::PathBuf;

use thiserror::Error;

use crate::corpus::NodeId;

#[derive(Debug, Error)]
pub enum Error {
    #[error("i/o failure: {0}")]
    Io(#[from] io::Error),

    #[error("i/o failure on {path}: {source}")]
    IoPath {
        path: PathBuf,
        #[source]
        source: io::Error,
    },

    #[error("unreadable input stream: {0}")]
    Stream(csv::Error),

    #[error("no structurally valid rows in {path} ({rows_read} rows read, all skipped)")]
    NoUsableRows { path: String, rows_read: u64 },

    #[error("sentence is empty after whitespace normalization")]
    EmptySentence,

    #[error("pair joins node {0} to itself")]
    SelfPair(NodeId),

    #[error("pair ({a}, {b}) is not in canonical order")]
    UnorderedPair { a: NodeId, b: NodeId },

    #[error("node {node} is out of range for a dataset with {n_nodes} sentences")]
    NodeOutOfRange { node: NodeId, n_nodes: usize },

    #[error("duplicate edge between nodes {a} and {b}")]
    DuplicateEdge { a: NodeId, b: NodeId },

    #[error("conflict report names pair ({a}, {b}) but the dataset has no such pair")]
    ConflictPairMissing { a: NodeId, b: NodeId },

    #[error("conflict report names pair ({a}, {b}) but the dataset pair is not negative")]
    ConflictPairNotNegative { a: NodeId, b: NodeId },

    #[error("input path {0} does not exist")]
    InputMissing(PathBuf),

    #[error("input path {input} lies inside the output directory {out_dir}")]
    InputInsideOutDir { input: PathBuf, out_dir: PathBuf },

    #[error("no input splits configured")]
    NoInputs,

    #[error("{0}")]
    InvalidConfig(String),
}

impl Error {
    pub(crate) fn io_path(path: impl Into<PathBuf>, source: io::Error) -> Self {
        Error::IoPath {
            path: path.into(),
            source,
        }
    }

    /// True for failures of reading or interpreting an input file as a
    /// dataset, as opposed to filesystem-level trouble.
    pub fn is_parse_failure(&self) -> bool {
        matches!(self, Error::Stream(_) | Error::NoUsableRows { .. })
    }

    /// True for filesystem-level failures (open, read, write, create).
    pub fn is_io_failure(&self) -> bool {
        matches!(
            self,
            Error::Io(_) | Error::IoPath { .. } | Error::InputMissing(_)
        )
    }
}
