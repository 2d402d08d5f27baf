//! The signed graph a dataset induces, and the positive-subgraph structure
//! (paraphrase clusters, shortest positive paths) everything downstream
//! runs on.

use std::collections::{HashMap, VecDeque};
use std::io::{self, Write};

use serde::Serialize;

use crate::corpus::{Label, LabeledDataset, NodeId};
use crate::error::Error;
use crate::Result;

/// An undirected signed edge, stored with `a < b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SignedEdge {
    pub a: NodeId,
    pub b: NodeId,
    pub sign: Label,
}

/// Index of a paraphrase cluster (positive-subgraph connected component).
/// Clusters are numbered in order of their smallest member, so ids are
/// stable across runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct ClusterId(pub u32);

impl ClusterId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl std::fmt::Display for ClusterId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.0.fmt(f)
    }
}

/// A path through positive edges only. `nodes` lists every node from one
/// endpoint to the other; a single node means a zero-hop path.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PositivePath {
    pub nodes: Vec<NodeId>,
}

impl PositivePath {
    pub fn hops(&self) -> usize {
        self.nodes.len().saturating_sub(1)
    }

    pub fn endpoints(&self) -> (NodeId, NodeId) {
        (
            *self.nodes.first().expect("path is never empty"),
            *self.nodes.last().expect("path is never empty"),
        )
    }
}

/// Immutable signed graph. Node ids come straight from the dataset; edges
/// are unique, self-loop free, and sorted by `(a, b)`; each adjacency list
/// is sorted by neighbor id.
#[derive(Debug, Clone)]
pub struct ParaphraseGraph {
    n_nodes: usize,
    edges: Vec<SignedEdge>,
    adjacency: Vec<Vec<(NodeId, Label)>>,
    sign_of: HashMap<(NodeId, NodeId), Label>,
}

impl ParaphraseGraph {
    /// Builds the graph for a dataset. Fails on the same malformations
    /// [`LabeledDataset::validate`] rejects (self-loop, duplicate pair,
    /// endpoint out of range); isolated sentences simply become isolated
    /// nodes.
    pub fn build(dataset: &LabeledDataset) -> Result<ParaphraseGraph> {
        dataset.validate()?;
        let n_nodes = dataset.n_sentences();
        let mut edges = Vec::with_capacity(dataset.pairs.len());
        let mut adjacency = vec![Vec::new(); n_nodes];
        let mut sign_of = HashMap::with_capacity(dataset.pairs.len());
        for pair in &dataset.pairs {
            let edge = SignedEdge {
                a: pair.a,
                b: pair.b,
                sign: pair.label,
            };
            edges.push(edge);
            adjacency[pair.a.index()].push((pair.b, pair.label));
            adjacency[pair.b.index()].push((pair.a, pair.label));
            sign_of.insert((pair.a, pair.b), pair.label);
        }
        for list in &mut adjacency {
            list.sort_unstable_by_key(|&(n, _)| n);
        }
        Ok(ParaphraseGraph {
            n_nodes,
            edges,
            adjacency,
            sign_of,
        })
    }

    pub fn n_nodes(&self) -> usize {
        self.n_nodes
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    /// All edges, sorted by `(a, b)`.
    pub fn edges(&self) -> &[SignedEdge] {
        &self.edges
    }

    /// Neighbors of `node` with edge signs, sorted by neighbor id.
    pub fn neighbors(&self, node: NodeId) -> &[(NodeId, Label)] {
        &self.adjacency[node.index()]
    }

    /// Sign of the edge between `x` and `y`, if one exists.
    pub fn sign(&self, x: NodeId, y: NodeId) -> Option<Label> {
        let key = if x < y { (x, y) } else { (y, x) };
        self.sign_of.get(&key).copied()
    }

    pub fn has_edge(&self, x: NodeId, y: NodeId) -> bool {
        self.sign(x, y).is_some()
    }

    fn check_node(&self, node: NodeId) -> Result<()> {
        if node.index() >= self.n_nodes {
            return Err(Error::NodeOutOfRange {
                node,
                n_nodes: self.n_nodes,
            });
        }
        Ok(())
    }

    /// Paraphrase clusters: connected components of the positive subgraph.
    /// Negative edges never join clusters; every isolated node is its own
    /// cluster.
    pub fn positive_components(&self) -> ClusterIndex {
        let mut uf = UnionFind::new(self.n_nodes);
        for e in &self.edges {
            if e.sign == Label::Positive {
                uf.union(e.a.0, e.b.0);
            }
        }
        let mut cluster_of = vec![ClusterId(0); self.n_nodes];
        let mut root_to_cluster: HashMap<u32, ClusterId> = HashMap::new();
        let mut members: Vec<Vec<NodeId>> = Vec::new();
        for node in 0..self.n_nodes as u32 {
            let root = uf.find(node);
            let cluster = *root_to_cluster.entry(root).or_insert_with(|| {
                members.push(Vec::new());
                ClusterId(members.len() as u32 - 1)
            });
            cluster_of[node as usize] = cluster;
            members[cluster.index()].push(NodeId(node));
        }
        ClusterIndex { cluster_of, members }
    }

    /// Shortest path between `from` and `to` using positive edges only,
    /// unit edge weights. `Ok(None)` when the endpoints are in different
    /// clusters. Breadth-first with neighbors expanded in ascending id
    /// order, so among equal-length paths the one discovered is fixed.
    pub fn shortest_positive_path(
        &self,
        from: NodeId,
        to: NodeId,
    ) -> Result<Option<PositivePath>> {
        self.check_node(from)?;
        self.check_node(to)?;
        if from == to {
            return Ok(Some(PositivePath { nodes: vec![from] }));
        }
        let mut parent: HashMap<NodeId, NodeId> = HashMap::new();
        parent.insert(from, from);
        let mut queue = VecDeque::new();
        queue.push_back(from);
        'search: while let Some(node) = queue.pop_front() {
            for &(next, sign) in self.neighbors(node) {
                if sign != Label::Positive || parent.contains_key(&next) {
                    continue;
                }
                parent.insert(next, node);
                if next == to {
                    break 'search;
                }
                queue.push_back(next);
            }
        }
        if !parent.contains_key(&to) {
            return Ok(None);
        }
        let mut nodes = vec![to];
        let mut cursor = to;
        while cursor != from {
            cursor = parent[&cursor];
            nodes.push(cursor);
        }
        nodes.reverse();
        Ok(Some(PositivePath { nodes }))
    }

    /// Debug export: one `a<TAB>b<TAB>sign` line per edge, sign `+` or `-`.
    pub fn write_edge_list<W: Write>(&self, mut sink: W) -> io::Result<()> {
        for e in &self.edges {
            let sign = match e.sign {
                Label::Positive => '+',
                Label::Negative => '-',
            };
            writeln!(sink, "{}\t{}\t{}", e.a, e.b, sign)?;
        }
        Ok(())
    }
}

/// Node-to-cluster assignment plus per-cluster member lists (each sorted
/// ascending).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClusterIndex {
    cluster_of: Vec<ClusterId>,
    members: Vec<Vec<NodeId>>,
}

impl ClusterIndex {
    pub fn n_nodes(&self) -> usize {
        self.cluster_of.len()
    }

    pub fn n_clusters(&self) -> usize {
        self.members.len()
    }

    /// Cluster containing `node`. Panics on a node id from a different
    /// graph than the one this index was computed for.
    pub fn cluster_of(&self, node: NodeId) -> ClusterId {
        self.cluster_of[node.index()]
    }

    pub fn members(&self, cluster: ClusterId) -> &[NodeId] {
        &self.members[cluster.index()]
    }

    pub fn same_cluster(&self, x: NodeId, y: NodeId) -> bool {
        self.cluster_of(x) == self.cluster_of(y)
    }

    pub fn clusters(&self) -> impl Iterator<Item = (ClusterId, &[NodeId])> {
        self.members
            .iter()
            .enumerate()
            .map(|(i, m)| (ClusterId(i as u32), m.as_slice()))
    }
}

/// Union-find with path halving and union by rank.
struct UnionFind {
    parent: Vec<u32>,
    rank: Vec<u8>,
}

impl UnionFind {
    fn new(n: usize) -> UnionFind {
        UnionFind {
            parent: (0..n as u32).collect(),
            rank: vec![0; n],
        }
    }

    fn find(&mut self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            let grandparent = self.parent[self.parent[x as usize] as usize];
            self.parent[x as usize] = grandparent;
            x = grandparent;
        }
        x
    }

    fn union(&mut self, a: u32, b: u32) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return;
        }
        let (hi, lo) = if self.rank[ra as usize] >= self.rank[rb as usize] {
            (ra, rb)
        } else {
            (rb, ra)
        };
        self.parent[lo as usize] = hi;
        if self.rank[hi as usize] == self.rank[lo as usize] {
            self.rank[hi as usize] += 1;
        }
    }
}
