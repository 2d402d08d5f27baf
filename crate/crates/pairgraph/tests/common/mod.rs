//! Shared test helpers: dataset builders, seeded random datasets, and
//! deliberately naive brute-force oracles (adjacency matrices and
//! Floyd-Warshall) that the real implementations are compared against.

#![allow(dead_code)]
// Index loops are the point here: the oracles mirror textbook matrix
// algorithms as literally as possible.
#![allow(clippy::needless_range_loop)]

use std::collections::{BTreeMap, BTreeSet};

use pairgraph::corpus::{Label, LabeledDataset, LabeledPair, NodeId, Provenance, Sentence, Split};
use rand::rngs::StdRng;
use rand::Rng;

pub fn synthetic_dataset(n_nodes: u32, edges: &[(u32, u32, Label)]) -> LabeledDataset {
    let mut ds = LabeledDataset {
        split: Split::Train,
        sentences: (0..n_nodes)
            .map(|i| Sentence {
                id: NodeId(i),
                text: format!("synthetic sentence {i}"),
                source_ids: BTreeSet::new(),
            })
            .collect(),
        pairs: edges
            .iter()
            .map(|&(a, b, label)| {
                LabeledPair::new(NodeId(a), NodeId(b), label, Provenance::Original).unwrap()
            })
            .collect(),
    };
    ds.sort_pairs();
    ds.validate().expect("synthetic dataset is well formed");
    ds
}

/// Random signed dataset: up to `max_nodes` nodes, up to `max_edges`
/// distinct edges, each negative with probability `p_negative`.
pub fn random_dataset(
    rng: &mut StdRng,
    max_nodes: u32,
    max_edges: usize,
    p_negative: f64,
) -> LabeledDataset {
    let n = rng.random_range(1..=max_nodes);
    let mut seen = BTreeSet::new();
    let mut edges = Vec::new();
    for _ in 0..rng.random_range(0..=max_edges) {
        let a = rng.random_range(0..n);
        let b = rng.random_range(0..n);
        if a == b {
            continue;
        }
        let key = (a.min(b), a.max(b));
        if !seen.insert(key) {
            continue;
        }
        let label = if rng.random_bool(p_negative) {
            Label::Negative
        } else {
            Label::Positive
        };
        edges.push((key.0, key.1, label));
    }
    synthetic_dataset(n, &edges)
}

pub fn pair_keys(ds: &LabeledDataset) -> BTreeSet<(u32, u32)> {
    ds.pairs.iter().map(|p| (p.a.0, p.b.0)).collect()
}

/// Positive-subgraph reachability closure over an adjacency matrix.
pub fn oracle_positive_reach(ds: &LabeledDataset) -> Vec<Vec<bool>> {
    let n = ds.n_sentences();
    let mut reach = vec![vec![false; n]; n];
    for (i, row) in reach.iter_mut().enumerate() {
        row[i] = true;
    }
    for p in &ds.pairs {
        if p.label == Label::Positive {
            reach[p.a.index()][p.b.index()] = true;
            reach[p.b.index()][p.a.index()] = true;
        }
    }
    for k in 0..n {
        for i in 0..n {
            if reach[i][k] {
                for j in 0..n {
                    if reach[k][j] {
                        reach[i][j] = true;
                    }
                }
            }
        }
    }
    reach
}

/// Cluster assignment derived from the reachability oracle, numbered in
/// order of smallest member like the real implementation promises.
pub fn oracle_clusters(ds: &LabeledDataset) -> Vec<u32> {
    let reach = oracle_positive_reach(ds);
    let n = ds.n_sentences();
    let mut cluster = vec![u32::MAX; n];
    let mut next = 0;
    for i in 0..n {
        if cluster[i] != u32::MAX {
            continue;
        }
        for (j, c) in cluster.iter_mut().enumerate() {
            if reach[i][j] {
                *c = next;
            }
        }
        next += 1;
    }
    cluster
}

/// Unit-weight shortest-path distances through positive edges,
/// Floyd-Warshall. `u32::MAX / 2` stands for unreachable.
pub fn oracle_positive_distances(ds: &LabeledDataset) -> Vec<Vec<u32>> {
    const INF: u32 = u32::MAX / 2;
    let n = ds.n_sentences();
    let mut dist = vec![vec![INF; n]; n];
    for (i, row) in dist.iter_mut().enumerate() {
        row[i] = 0;
    }
    for p in &ds.pairs {
        if p.label == Label::Positive {
            dist[p.a.index()][p.b.index()] = 1;
            dist[p.b.index()][p.a.index()] = 1;
        }
    }
    for k in 0..n {
        for i in 0..n {
            let dik = dist[i][k];
            if dik == INF {
                continue;
            }
            for j in 0..n {
                let through = dik + dist[k][j];
                if through < dist[i][j] {
                    dist[i][j] = through;
                }
            }
        }
    }
    dist
}

/// Expected within-cluster positive inferences: all reachable non-adjacent
/// pairs.
pub fn oracle_inferred_positives(ds: &LabeledDataset) -> BTreeSet<(u32, u32)> {
    let reach = oracle_positive_reach(ds);
    let existing = pair_keys(ds);
    let n = ds.n_sentences();
    let mut out = BTreeSet::new();
    for i in 0..n {
        for j in i + 1..n {
            if reach[i][j] && !existing.contains(&(i as u32, j as u32)) {
                out.insert((i as u32, j as u32));
            }
        }
    }
    out
}

/// Expected across-cluster negative inferences: non-adjacent pairs whose
/// two distinct clusters are joined by at least one negative edge.
pub fn oracle_inferred_negatives(ds: &LabeledDataset) -> BTreeSet<(u32, u32)> {
    let cluster = oracle_clusters(ds);
    let existing = pair_keys(ds);
    let mut joined: BTreeSet<(u32, u32)> = BTreeSet::new();
    for p in &ds.pairs {
        if p.label == Label::Negative {
            let (ca, cb) = (cluster[p.a.index()], cluster[p.b.index()]);
            if ca != cb {
                joined.insert((ca.min(cb), ca.max(cb)));
            }
        }
    }
    let n = ds.n_sentences();
    let mut out = BTreeSet::new();
    for i in 0..n {
        for j in i + 1..n {
            let (ci, cj) = (cluster[i], cluster[j]);
            if ci == cj {
                continue;
            }
            if !joined.contains(&(ci.min(cj), ci.max(cj))) {
                continue;
            }
            if !existing.contains(&(i as u32, j as u32)) {
                out.insert((i as u32, j as u32));
            }
        }
    }
    out
}

/// Expected conflicts: negative edges whose endpoints are positively
/// connected.
pub fn oracle_conflicts(ds: &LabeledDataset) -> BTreeSet<(u32, u32)> {
    let reach = oracle_positive_reach(ds);
    ds.pairs
        .iter()
        .filter(|p| p.label == Label::Negative && reach[p.a.index()][p.b.index()])
        .map(|p| (p.a.0, p.b.0))
        .collect()
}

/// Text-level view of a dataset: unordered sentence pairs with labels,
/// independent of node numbering. Two parses of the same logical data must
/// agree on this.
pub fn text_view(ds: &LabeledDataset) -> BTreeMap<(String, String), Label> {
    let mut out = BTreeMap::new();
    for p in &ds.pairs {
        let mut a = ds.text(p.a).unwrap().to_owned();
        let mut b = ds.text(p.b).unwrap().to_owned();
        if a > b {
            std::mem::swap(&mut a, &mut b);
        }
        out.insert((a, b), p.label);
    }
    out
}

/// Recursively lists `dir` as sorted (relative path, file bytes) entries.
pub fn snapshot_dir(dir: &std::path::Path) -> BTreeMap<String, Vec<u8>> {
    fn walk(root: &std::path::Path, dir: &std::path::Path, out: &mut BTreeMap<String, Vec<u8>>) {
        let mut entries: Vec<_> = std::fs::read_dir(dir)
            .unwrap_or_else(|e| panic!("read_dir {}: {e}", dir.display()))
            .map(|e| e.unwrap().path())
            .collect();
        entries.sort();
        for path in entries {
            if path.is_dir() {
                walk(root, &path, out);
            } else {
                let rel = path.strip_prefix(root).unwrap().to_string_lossy().into_owned();
                out.insert(rel, std::fs::read(&path).unwrap());
            }
        }
    }
    let mut out = BTreeMap::new();
    walk(dir, dir, &mut out);
    out
}

/// Collects acceptance-check failures and prints the one-line verdict the
/// suite promises per criterion.
pub struct Criterion {
    number: u32,
    title: &'static str,
    failures: Vec<String>,
}

impl Criterion {
    pub fn new(number: u32, title: &'static str) -> Criterion {
        Criterion {
            number,
            title,
            failures: Vec::new(),
        }
    }

    pub fn check(&mut self, ok: bool, detail: impl FnOnce() -> String) {
        if !ok {
            self.failures.push(detail());
        }
    }

    pub fn note(&self, message: &str) {
        println!("ACCEPTANCE {}: NOTE - {message}", self.number);
    }

    pub fn skip(self, reason: &str) {
        println!("ACCEPTANCE {}: SKIP - {} ({reason})", self.number, self.title);
    }

    pub fn finish(self) {
        if self.failures.is_empty() {
            println!("ACCEPTANCE {}: PASS - {}", self.number, self.title);
        } else {
            println!("ACCEPTANCE {}: FAIL - {}", self.number, self.title);
            for f in &self.failures {
                println!("  {f}");
            }
            panic!(
                "acceptance criterion {} failed with {} problem(s)",
                self.number,
                self.failures.len()
            );
        }
    }
}
