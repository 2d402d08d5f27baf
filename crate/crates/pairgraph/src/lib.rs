//! Signed paraphrase graphs over sentence-pair corpora.
//!
//! A sentence-pair dataset (two sentences per row, labeled duplicate or not)
//! induces a signed graph: sentences are nodes, positive rows are positive
//! edges, negative rows are negative edges. Paraphrase clusters are the
//! connected components of the positive subgraph. On that graph this crate
//!
//! * flags label conflicts: negative edges joining two members of the same
//!   cluster, each reported with a positive witness path,
//! * repairs them by flipping the offending labels to positive, and
//! * augments the dataset with labels the graph already implies, positive
//!   within a cluster and negative across clusters linked by a negative edge.
//!
//! [`corpus`] reads and writes the tabular datasets, [`graph`] builds the
//! signed graph, [`balance`] classifies triads and finds conflicts,
//! [`inference`] derives new pairs, and [`pipeline`] wires the stages into
//! the operations exposed by the `pairgraph` binary.

pub mod balance;
pub mod corpus;
mod error;
pub mod graph;
pub mod inference;
pub mod pipeline;
pub mod report;

pub use balance::{classify_triad, detect_conflicts, flip_conflicts, is_weakly_balanced};
pub use balance::{BalanceClass, Conflict, ConflictReport, FlipEntry, FlipLog, MergedPair};
pub use corpus::{canonicalize_sentence, compute_stats, parse_dataset, write_dataset};
pub use corpus::{
    DatasetStats, FormatConfig, Label, LabeledDataset, LabeledPair, NodeId, ParseReport,
    Provenance, Sentence, Split,
};
pub use error::Error;
pub use graph::{ClusterId, ClusterIndex, ParaphraseGraph, PositivePath, SignedEdge};
pub use inference::{
    augment_dataset, infer_negative_pairs, infer_positive_pairs, AugmentationPolicy,
    AugmentationReport, ConflictedPairHandling, InferenceBasis, InferredPair,
};
pub use pipeline::PipelineConfig;
pub use report::ReportFormat;

/// Shorthand for results carrying this crate's [`Error`].
pub type Result<T> = std::result::Result<T, Error>;
