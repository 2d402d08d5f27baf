//! Dataset model: interned sentences, labeled pairs, splits, statistics.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::Result;

mod format;
mod parse;
mod write;

pub use format::{ColumnMap, FormatConfig, Layout};
pub use parse::{
    parse_dataset, parse_dataset_path, ParseReport, RawConflict, SelfPairDrop, SkipReason,
    SkippedRow,
};
pub use write::{dataset_file_name, write_dataset, write_dataset_path};

/// Index of an interned sentence. Dense: a dataset with `n` sentences uses
/// exactly the ids `0..n`.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize, Default,
)]
#[serde(transparent)]
pub struct NodeId(pub u32);

impl NodeId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Pair label: positive means the two sentences are duplicates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Label {
    Positive,
    Negative,
}

impl Label {
    /// Tabular encoding: `1` for positive, `0` for negative.
    pub fn as_digit(self) -> &'static str {
        match self {
            Label::Positive => "1",
            Label::Negative => "0",
        }
    }

    /// Strict inverse of [`Label::as_digit`]; anything but `"0"`/`"1"` is rejected.
    pub fn from_field(field: &str) -> Option<Label> {
        match field {
            "1" => Some(Label::Positive),
            "0" => Some(Label::Negative),
            _ => None,
        }
    }

    pub fn flipped(self) -> Label {
        match self {
            Label::Positive => Label::Negative,
            Label::Negative => Label::Positive,
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Label::Positive => "positive",
            Label::Negative => "negative",
        })
    }
}

/// Where a pair's label came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    /// Present in the input file with its original label.
    Original,
    /// Added by transitive closure within a paraphrase cluster.
    InferredPositive,
    /// Added across two clusters joined by a negative edge.
    InferredNegative,
    /// Original label overturned by conflict repair.
    Flipped,
}

impl Provenance {
    pub fn as_str(self) -> &'static str {
        match self {
            Provenance::Original => "original",
            Provenance::InferredPositive => "inferred_positive",
            Provenance::InferredNegative => "inferred_negative",
            Provenance::Flipped => "flipped",
        }
    }
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Which half of the corpus a dataset came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Split {
    Train,
    Test,
}

impl Split {
    pub fn as_str(self) -> &'static str {
        match self {
            Split::Train => "train",
            Split::Test => "test",
        }
    }
}

impl fmt::Display for Split {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One interned sentence.
///
/// `text` is canonical (see [`canonicalize_sentence`]) and unique within a
/// dataset. `source_ids` collects the external ids (e.g. question ids) the
/// sentence appeared under; empty when the input format carries none.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Sentence {
    pub id: NodeId,
    pub text: String,
    pub source_ids: BTreeSet<String>,
}

/// An unordered labeled sentence pair, stored with `a < b`.
///
/// `row_ids` are the 1-based input rows that asserted this pair; empty for
/// pairs that were inferred rather than read.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LabeledPair {
    pub a: NodeId,
    pub b: NodeId,
    pub label: Label,
    pub provenance: Provenance,
    pub row_ids: BTreeSet<u64>,
}

impl LabeledPair {
    /// Builds a pair in canonical order. Rejects `x == y`.
    pub fn new(x: NodeId, y: NodeId, label: Label, provenance: Provenance) -> Result<LabeledPair> {
        if x == y {
            return Err(Error::SelfPair(x));
        }
        let (a, b) = if x < y { (x, y) } else { (y, x) };
        Ok(LabeledPair {
            a,
            b,
            label,
            provenance,
            row_ids: BTreeSet::new(),
        })
    }

    pub fn key(&self) -> (NodeId, NodeId) {
        (self.a, self.b)
    }
}

/// A parsed (or derived) dataset.
///
/// Invariants, upheld by every producer in this crate and checked by
/// [`LabeledDataset::validate`]: sentence ids are dense and match their index,
/// pairs are sorted by `(a, b)` with no duplicate key, and every pair
/// endpoint names an existing sentence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledDataset {
    pub split: Split,
    pub sentences: Vec<Sentence>,
    pub pairs: Vec<LabeledPair>,
}

impl LabeledDataset {
    pub fn empty(split: Split) -> LabeledDataset {
        LabeledDataset {
            split,
            sentences: Vec::new(),
            pairs: Vec::new(),
        }
    }

    pub fn n_sentences(&self) -> usize {
        self.sentences.len()
    }

    pub fn text(&self, id: NodeId) -> Option<&str> {
        self.sentences.get(id.index()).map(|s| s.text.as_str())
    }

    /// Index of the pair with key `(a, b)` (in either order), if present.
    pub fn find_pair(&self, x: NodeId, y: NodeId) -> Option<usize> {
        let key = if x < y { (x, y) } else { (y, x) };
        self.pairs.binary_search_by_key(&key, LabeledPair::key).ok()
    }

    pub fn sort_pairs(&mut self) {
        self.pairs.sort_by_key(LabeledPair::key);
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.sentences.len();
        for (i, s) in self.sentences.iter().enumerate() {
            if s.id.index() != i {
                return Err(Error::InvalidConfig(format!(
                    "sentence at index {i} carries id {}",
                    s.id
                )));
            }
        }
        let mut prev: Option<(NodeId, NodeId)> = None;
        for p in &self.pairs {
            if p.a == p.b {
                return Err(Error::SelfPair(p.a));
            }
            if p.a > p.b {
                return Err(Error::UnorderedPair { a: p.a, b: p.b });
            }
            for node in [p.a, p.b] {
                if node.index() >= n {
                    return Err(Error::NodeOutOfRange { node, n_nodes: n });
                }
            }
            if let Some(prev) = prev {
                if prev >= p.key() {
                    return Err(Error::DuplicateEdge { a: p.a, b: p.b });
                }
            }
            prev = Some(p.key());
        }
        Ok(())
    }
}

/// Normalizes raw sentence text to its canonical form: surrounding
/// whitespace stripped, every internal whitespace run collapsed to one
/// space. Canonical text is what sentence identity is defined over; case
/// and punctuation are left alone. Errors if nothing remains.
pub fn canonicalize_sentence(raw: &str) -> Result<String> {
    let mut out = String::with_capacity(raw.len());
    let mut pending_gap = false;
    for token in raw.split_whitespace() {
        if pending_gap {
            out.push(' ');
        }
        out.push_str(token);
        pending_gap = true;
    }
    if out.is_empty() {
        return Err(Error::EmptySentence);
    }
    Ok(out)
}

/// Label and provenance tallies for one dataset.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DatasetStats {
    pub n_positive: u64,
    pub n_negative: u64,
    /// Positive share of all pairs, in `0.0..=1.0`. `None` for an empty dataset.
    pub positive_ratio: Option<f64>,
    pub n_by_provenance: BTreeMap<Provenance, u64>,
}

impl DatasetStats {
    pub fn total(&self) -> u64 {
        self.n_positive + self.n_negative
    }

    /// Positive share as a percentage with two decimals, `-` when undefined.
    pub fn ratio_display(&self) -> String {
        match self.positive_ratio {
            Some(r) => format!("{:.2}", r * 100.0),
            None => "-".to_owned(),
        }
    }
}

/// Tallies labels and provenances. Pure; counts only what is in `dataset.pairs`.
pub fn compute_stats(dataset: &LabeledDataset) -> DatasetStats {
    let mut n_positive = 0u64;
    let mut n_negative = 0u64;
    let mut n_by_provenance: BTreeMap<Provenance, u64> = BTreeMap::new();
    for p in &dataset.pairs {
        match p.label {
            Label::Positive => n_positive += 1,
            Label::Negative => n_negative += 1,
        }
        *n_by_provenance.entry(p.provenance).or_insert(0) += 1;
    }
    let total = n_positive + n_negative;
    let positive_ratio = if total == 0 {
        None
    } else {
        Some(n_positive as f64 / total as f64)
    };
    DatasetStats {
        n_positive,
        n_negative,
        positive_ratio,
        n_by_provenance,
    }
}
