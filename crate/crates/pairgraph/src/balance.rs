//! Structural balance over the signed graph: triad classification, the
//! conflicts that break balance, and their repair.
//!
//! A conflict is a negative edge whose endpoints sit in the same paraphrase
//! cluster; transitivity says they should be duplicates, the label says
//! they are not. Each conflict is reported with a shortest positive path as
//! a witness. A triangle of three mutual non-duplicates is *not* a
//! conflict: its nodes share no positive path, so all-negative triads are
//! tolerated (weak balance).

use std::collections::BTreeMap;

use serde::Serialize;

use crate::corpus::{Label, LabeledDataset, NodeId, Provenance, Split};
use crate::error::Error;
use crate::graph::{ClusterId, ClusterIndex, ParaphraseGraph, PositivePath};
use crate::Result;

/// Balance class of a triangle, by its number of negative edges: zero or
/// two negatives are balanced, exactly one is imbalanced, and all three is
/// the tolerated weakly-balanced case.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BalanceClass {
    Balanced,
    WeaklyBalanced,
    Imbalanced,
}

/// Classifies a triangle given its three edge signs, in any order.
pub fn classify_triad(signs: [Label; 3]) -> BalanceClass {
    match signs.iter().filter(|&&s| s == Label::Negative).count() {
        0 | 2 => BalanceClass::Balanced,
        1 => BalanceClass::Imbalanced,
        _ => BalanceClass::WeaklyBalanced,
    }
}

/// A negative edge inside a paraphrase cluster, with a positive path
/// between its endpoints as the witness that they should be duplicates.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Conflict {
    pub a: NodeId,
    pub b: NodeId,
    pub cluster: ClusterId,
    pub witness: PositivePath,
}

/// All conflicts of one split, sorted by `(a, b)`.
#[derive(Debug, Clone, Serialize)]
pub struct ConflictReport {
    pub split: Split,
    pub conflicts: Vec<Conflict>,
}

impl ConflictReport {
    pub fn is_empty(&self) -> bool {
        self.conflicts.is_empty()
    }

    pub fn len(&self) -> usize {
        self.conflicts.len()
    }
}

/// Finds every conflict in the graph. `index` must be the cluster index of
/// `graph`.
pub fn detect_conflicts(
    graph: &ParaphraseGraph,
    index: &ClusterIndex,
    split: Split,
) -> ConflictReport {
    assert_eq!(
        graph.n_nodes(),
        index.n_nodes(),
        "cluster index built for a different graph"
    );
    let mut conflicts = Vec::new();
    for e in graph.edges() {
        if e.sign == Label::Negative && index.same_cluster(e.a, e.b) {
            let witness = graph
                .shortest_positive_path(e.a, e.b)
                .expect("edge endpoints are in range")
                .expect("same cluster implies a positive path");
            conflicts.push(Conflict {
                a: e.a,
                b: e.b,
                cluster: index.cluster_of(e.a),
                witness,
            });
        }
    }
    ConflictReport { split, conflicts }
}

/// True when no negative edge lands inside a cluster. Cheaper than
/// [`detect_conflicts`] (no witness search) and equivalent to its report
/// being empty.
pub fn is_weakly_balanced(graph: &ParaphraseGraph, index: &ClusterIndex) -> bool {
    assert_eq!(
        graph.n_nodes(),
        index.n_nodes(),
        "cluster index built for a different graph"
    );
    graph
        .edges()
        .iter()
        .all(|e| e.sign == Label::Positive || !index.same_cluster(e.a, e.b))
}

/// One repaired pair: its label went negative to positive.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FlipEntry {
    pub a: NodeId,
    pub b: NodeId,
}

/// A flip landed on a pair another copy of which already existed; the
/// copies were merged into one.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MergedPair {
    pub a: NodeId,
    pub b: NodeId,
    pub n_absorbed: usize,
}

/// What [`flip_conflicts`] did.
#[derive(Debug, Clone, Default, Serialize)]
pub struct FlipLog {
    pub flipped: Vec<FlipEntry>,
    pub merged: Vec<MergedPair>,
}

/// Flips every pair named by `report` from negative to positive, marking it
/// `Flipped`, and returns the repaired dataset plus a log.
///
/// The input may carry several copies of one pair key (a raw form no parser
/// output produces); if flipping makes the copies agree they are merged,
/// the surviving copy being a non-flipped one when present, with all row
/// ids unioned. Errors if the report names a pair the dataset lacks or one
/// that is not negative, or if duplicate copies still disagree after
/// flipping.
pub fn flip_conflicts(
    dataset: &LabeledDataset,
    report: &ConflictReport,
) -> Result<(LabeledDataset, FlipLog)> {
    let n = dataset.n_sentences();
    let mut by_key: BTreeMap<(NodeId, NodeId), Vec<usize>> = BTreeMap::new();
    for (i, p) in dataset.pairs.iter().enumerate() {
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
        by_key.entry(p.key()).or_default().push(i);
    }

    let mut pairs = dataset.pairs.clone();
    let mut log = FlipLog::default();

    for conflict in &report.conflicts {
        let key = (conflict.a, conflict.b);
        let indices = by_key
            .get(&key)
            .ok_or(Error::ConflictPairMissing { a: key.0, b: key.1 })?;
        let mut flipped_any = false;
        for &i in indices {
            if pairs[i].label == Label::Negative {
                pairs[i].label = Label::Positive;
                pairs[i].provenance = Provenance::Flipped;
                flipped_any = true;
            }
        }
        if !flipped_any {
            return Err(Error::ConflictPairNotNegative { a: key.0, b: key.1 });
        }
        log.flipped.push(FlipEntry { a: key.0, b: key.1 });
    }

    let mut out_pairs = Vec::with_capacity(pairs.len());
    for (key, indices) in &by_key {
        if indices.len() == 1 {
            out_pairs.push(pairs[indices[0]].clone());
            continue;
        }
        let label = pairs[indices[0]].label;
        if indices.iter().any(|&i| pairs[i].label != label) {
            return Err(Error::DuplicateEdge { a: key.0, b: key.1 });
        }
        let survivor = indices
            .iter()
            .copied()
            .find(|&i| pairs[i].provenance != Provenance::Flipped)
            .unwrap_or(indices[0]);
        let mut merged = pairs[survivor].clone();
        for &i in indices {
            if i != survivor {
                merged.row_ids.extend(pairs[i].row_ids.iter().copied());
            }
        }
        out_pairs.push(merged);
        log.merged.push(MergedPair {
            a: key.0,
            b: key.1,
            n_absorbed: indices.len() - 1,
        });
    }

    let out = LabeledDataset {
        split: dataset.split,
        sentences: dataset.sentences.clone(),
        pairs: out_pairs,
    };
    debug_assert!(out.validate().is_ok());
    Ok((out, log))
}
