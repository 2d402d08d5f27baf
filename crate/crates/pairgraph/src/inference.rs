//! Label inference from the cluster structure, and dataset augmentation.
//!
//! Two rules, both conservative:
//!
//! * within a cluster, every non-adjacent node pair is a positive
//!   (transitive closure of the duplicate relation);
//! * across two clusters joined by at least one negative edge, every
//!   non-adjacent cross pair is a negative. Cluster pairs with no negative
//!   edge between them yield nothing; absence of evidence is not a label.
//!
//! When a cluster itself contains a negative edge (an unrepaired conflict)
//! the two rules disagree about that cluster's non-adjacent pairs: closure
//! says duplicate, the internal negative says the cluster is tainted. Such
//! pairs are *conflicted* and [`augment_dataset`] resolves them per policy
//! instead of silently picking a side.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::corpus::{
    compute_stats, Label, LabeledDataset, LabeledPair, NodeId, Provenance,
};
use crate::graph::{ClusterId, ClusterIndex, ParaphraseGraph, PositivePath};
use crate::Result;

/// Why an inferred pair holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum InferenceBasis {
    /// Both endpoints share a paraphrase cluster.
    WithinCluster { cluster: ClusterId },
    /// Endpoints lie in two clusters joined by the negative edge `origin`.
    AcrossClusters {
        origin: (NodeId, NodeId),
        clusters: (ClusterId, ClusterId),
    },
}

/// A pair proposed by one inference rule. Carries no row ids; it was never
/// in the input.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InferredPair {
    pub a: NodeId,
    pub b: NodeId,
    pub label: Label,
    pub provenance: Provenance,
    pub basis: InferenceBasis,
}

impl InferredPair {
    /// The positive path connecting the endpoints, for pairs inferred
    /// within a cluster. Computed on demand; paths are witness material
    /// for inspection, not part of the inference itself.
    pub fn witness(&self, graph: &ParaphraseGraph) -> Result<Option<PositivePath>> {
        match self.basis {
            InferenceBasis::WithinCluster { .. } => graph.shortest_positive_path(self.a, self.b),
            InferenceBasis::AcrossClusters { .. } => Ok(None),
        }
    }

    fn to_pair(&self) -> LabeledPair {
        LabeledPair {
            a: self.a,
            b: self.b,
            label: self.label,
            provenance: self.provenance,
            row_ids: BTreeSet::new(),
        }
    }
}

fn ordered(x: NodeId, y: NodeId) -> (NodeId, NodeId) {
    if x < y {
        (x, y)
    } else {
        (y, x)
    }
}

/// Every non-adjacent same-cluster pair, as positives. Existing edges are
/// never re-proposed, whatever their sign. Sorted by `(a, b)`.
pub fn infer_positive_pairs(graph: &ParaphraseGraph, index: &ClusterIndex) -> Vec<InferredPair> {
    let mut out = Vec::new();
    for (cluster, members) in index.clusters() {
        for (i, &x) in members.iter().enumerate() {
            for &y in &members[i + 1..] {
                if graph.has_edge(x, y) {
                    continue;
                }
                out.push(InferredPair {
                    a: x,
                    b: y,
                    label: Label::Positive,
                    provenance: Provenance::InferredPositive,
                    basis: InferenceBasis::WithinCluster { cluster },
                });
            }
        }
    }
    out.sort_by_key(|p| (p.a, p.b));
    out
}

/// Every non-adjacent cross pair between two *distinct* clusters joined by
/// at least one negative edge, as negatives. Each joined cluster pair is
/// processed once; `origin` is the smallest negative edge joining it.
/// Sorted by `(a, b)`.
pub fn infer_negative_pairs(graph: &ParaphraseGraph, index: &ClusterIndex) -> Vec<InferredPair> {
    let mut joined: BTreeMap<(ClusterId, ClusterId), (NodeId, NodeId)> = BTreeMap::new();
    for e in graph.edges() {
        if e.sign != Label::Negative {
            continue;
        }
        let (ca, cb) = (index.cluster_of(e.a), index.cluster_of(e.b));
        if ca == cb {
            continue;
        }
        let key = if ca < cb { (ca, cb) } else { (cb, ca) };
        // Edges arrive sorted, so the first one seen is the smallest.
        joined.entry(key).or_insert((e.a, e.b));
    }

    let mut out = Vec::new();
    for ((ca, cb), origin) in joined {
        for &x in index.members(ca) {
            for &y in index.members(cb) {
                if graph.has_edge(x, y) {
                    continue;
                }
                let (a, b) = ordered(x, y);
                out.push(InferredPair {
                    a,
                    b,
                    label: Label::Negative,
                    provenance: Provenance::InferredNegative,
                    basis: InferenceBasis::AcrossClusters {
                        origin,
                        clusters: (ca, cb),
                    },
                });
            }
        }
    }
    out.sort_by_key(|p| (p.a, p.b));
    out
}

/// What to do with a pair both rules claim (see module docs).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ConflictedPairHandling {
    /// Leave the pair out entirely.
    Drop,
    /// Trust the transitive closure.
    PreferPositive,
    /// Trust the internal negative evidence.
    PreferNegative,
}

/// Knobs for [`augment_dataset`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct AugmentationPolicy {
    pub infer_positives: bool,
    pub infer_negatives: bool,
    pub conflicted_pair_handling: ConflictedPairHandling,
    /// Cap on inferred positives per cluster, smallest `(a, b)` first.
    /// Guards against a giant cluster exploding the output.
    pub max_cluster_pairs: Option<u64>,
}

impl Default for AugmentationPolicy {
    fn default() -> AugmentationPolicy {
        AugmentationPolicy {
            infer_positives: true,
            infer_negatives: true,
            conflicted_pair_handling: ConflictedPairHandling::Drop,
            max_cluster_pairs: None,
        }
    }
}

/// Inferred positives dropped in one cluster by `max_cluster_pairs`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TruncationEvent {
    pub cluster: ClusterId,
    pub emitted: u64,
    pub dropped: u64,
}

/// What [`augment_dataset`] added and why.
#[derive(Debug, Clone, Serialize)]
pub struct AugmentationReport {
    pub n_inferred_positive: u64,
    pub n_inferred_negative: u64,
    /// Non-adjacent pairs inside a cluster that also carries an internal
    /// negative edge; counted whatever the handling did with them.
    pub conflicted_pairs: u64,
    pub conflicted_handling: ConflictedPairHandling,
    pub truncations: Vec<TruncationEvent>,
    /// Provenance tally of the *output* dataset.
    pub n_by_provenance: BTreeMap<Provenance, u64>,
}

/// Adds inferred pairs to a dataset according to `policy`. Input pairs are
/// preserved untouched (labels, provenance, row ids); inferred pairs never
/// overwrite an existing edge. Output pairs are sorted by `(a, b)`.
pub fn augment_dataset(
    dataset: &LabeledDataset,
    policy: &AugmentationPolicy,
) -> Result<(LabeledDataset, AugmentationReport)> {
    let graph = ParaphraseGraph::build(dataset)?;
    let index = graph.positive_components();

    // Clusters holding at least one internal negative edge (unrepaired
    // conflicts); their non-adjacent pairs are the contested ones.
    let mut tainted: BTreeSet<ClusterId> = BTreeSet::new();
    for e in graph.edges() {
        if e.sign == Label::Negative && index.same_cluster(e.a, e.b) {
            tainted.insert(index.cluster_of(e.a));
        }
    }

    let mut report = AugmentationReport {
        n_inferred_positive: 0,
        n_inferred_negative: 0,
        conflicted_pairs: 0,
        conflicted_handling: policy.conflicted_pair_handling,
        truncations: Vec::new(),
        n_by_provenance: BTreeMap::new(),
    };
    let mut added: Vec<LabeledPair> = Vec::new();

    if policy.infer_positives {
        for (cluster, members) in index.clusters() {
            let contested = policy.infer_negatives && tainted.contains(&cluster);
            let mut emitted = 0u64;
            let mut dropped = 0u64;
            for (i, &x) in members.iter().enumerate() {
                for &y in &members[i + 1..] {
                    if graph.has_edge(x, y) {
                        continue;
                    }
                    if contested {
                        report.conflicted_pairs += 1;
                        match policy.conflicted_pair_handling {
                            ConflictedPairHandling::Drop => continue,
                            ConflictedPairHandling::PreferNegative => {
                                added.push(LabeledPair {
                                    a: x,
                                    b: y,
                                    label: Label::Negative,
                                    provenance: Provenance::InferredNegative,
                                    row_ids: BTreeSet::new(),
                                });
                                report.n_inferred_negative += 1;
                                continue;
                            }
                            ConflictedPairHandling::PreferPositive => {}
                        }
                    }
                    if let Some(cap) = policy.max_cluster_pairs {
                        if emitted >= cap {
                            dropped += 1;
                            continue;
                        }
                    }
                    added.push(LabeledPair {
                        a: x,
                        b: y,
                        label: Label::Positive,
                        provenance: Provenance::InferredPositive,
                        row_ids: BTreeSet::new(),
                    });
                    report.n_inferred_positive += 1;
                    emitted += 1;
                }
            }
            if dropped > 0 {
                report.truncations.push(TruncationEvent {
                    cluster,
                    emitted,
                    dropped,
                });
            }
        }
    }

    if policy.infer_negatives {
        for inferred in infer_negative_pairs(&graph, &index) {
            added.push(inferred.to_pair());
            report.n_inferred_negative += 1;
        }
    }

    let mut pairs = dataset.pairs.clone();
    pairs.extend(added);
    let mut out = LabeledDataset {
        split: dataset.split,
        sentences: dataset.sentences.clone(),
        pairs,
    };
    out.sort_pairs();
    debug_assert!(out.validate().is_ok());
    report.n_by_provenance = compute_stats(&out).n_by_provenance;
    Ok((out, report))
}
