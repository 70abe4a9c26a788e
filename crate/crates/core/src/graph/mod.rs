//! Graph data model: snapshots, dynamic graphs and datasets.

mod io;

pub use io::{load_dataset, parse_dg, save_dataset, write_dg, DG_EXTENSION, META_FILE};

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};

pub type NodeId = u32;
pub type Label = u32;
pub type ClassLabel = u32;

/// Undirected edge key with `u < v`.
pub type EdgeKey = (NodeId, NodeId);

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Edge {
    pub u: NodeId,
    pub v: NodeId,
    pub weight: f64,
}

impl Edge {
    pub fn new(u: NodeId, v: NodeId, weight: f64) -> Self {
        Edge { u, v, weight }
    }

    pub fn key(&self) -> EdgeKey {
        (self.u, self.v)
    }
}

/// A simple undirected graph with labelled nodes and weighted edges.
///
/// Nodes are kept sorted by id and edges sorted by `(u, v)` with `u < v`.
#[derive(Clone, Debug, PartialEq)]
pub struct GraphSnapshot {
    nodes: Vec<(NodeId, Label)>,
    edges: Vec<Edge>,
}

impl GraphSnapshot {
    /// Builds a snapshot, normalizing edge orientation and sort order.
    pub fn new(mut nodes: Vec<(NodeId, Label)>, mut edges: Vec<Edge>) -> Result<Self> {
        nodes.sort_unstable_by_key(|&(id, _)| id);
        if let Some(w) = nodes.windows(2).find(|w| w[0].0 == w[1].0) {
            return Err(Error::InvalidGraph(format!("duplicate node {}", w[0].0)));
        }
        for e in edges.iter_mut() {
            if e.u == e.v {
                return Err(Error::InvalidGraph(format!("self-loop on node {}", e.u)));
            }
            if !e.weight.is_finite() {
                return Err(Error::InvalidGraph(format!(
                    "non-finite weight on edge ({}, {})",
                    e.u, e.v
                )));
            }
            if e.u > e.v {
                std::mem::swap(&mut e.u, &mut e.v);
            }
            for end in [e.u, e.v] {
                if nodes.binary_search_by_key(&end, |&(id, _)| id).is_err() {
                    return Err(Error::InvalidGraph(format!(
                        "edge ({}, {}) references undeclared node {end}",
                        e.u, e.v
                    )));
                }
            }
        }
        edges.sort_unstable_by_key(Edge::key);
        if let Some(w) = edges.windows(2).find(|w| w[0].key() == w[1].key()) {
            return Err(Error::InvalidGraph(format!("duplicate edge ({}, {})", w[0].u, w[0].v)));
        }
        Ok(GraphSnapshot { nodes, edges })
    }

    pub fn nodes(&self) -> &[(NodeId, Label)] {
        &self.nodes
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Position of `id` in the sorted node list.
    pub fn index_of(&self, id: NodeId) -> Option<usize> {
        self.nodes.binary_search_by_key(&id, |&(n, _)| n).ok()
    }

    pub fn label(&self, id: NodeId) -> Option<Label> {
        self.index_of(id).map(|i| self.nodes[i].1)
    }

    /// Neighbour lists in node-index space, each sorted ascending.
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.nodes.len()];
        for e in &self.edges {
            let (a, b) = self.endpoint_indices(e);
            adj[a].push(b);
            adj[b].push(a);
        }
        for list in adj.iter_mut() {
            list.sort_unstable();
        }
        adj
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.nodes.len()];
        for e in &self.edges {
            let (a, b) = self.endpoint_indices(e);
            deg[a] += 1;
            deg[b] += 1;
        }
        deg
    }

    pub(crate) fn endpoint_indices(&self, e: &Edge) -> (usize, usize) {
        let a = self.index_of(e.u).expect("edge endpoint validated");
        let b = self.index_of(e.v).expect("edge endpoint validated");
        (a, b)
    }

    /// Copy of this snapshot with every edge weight set to `weight`.
    pub fn with_constant_weight(&self, weight: f64) -> Result<Self> {
        let edges = self.edges.iter().map(|e| Edge::new(e.u, e.v, weight)).collect();
        GraphSnapshot::new(self.nodes.clone(), edges)
    }

    /// Copy of this snapshot with node labels replaced by `label_of`.
    pub fn relabelled(&self, mut label_of: impl FnMut(NodeId) -> Label) -> Self {
        let nodes = self.nodes.iter().map(|&(id, _)| (id, label_of(id))).collect();
        GraphSnapshot {
            nodes,
            edges: self.edges.clone(),
        }
    }

    /// Vertex-induced subgraph on `keep` (ids not in the snapshot are ignored).
    pub fn induced(&self, keep: &BTreeSet<NodeId>) -> Self {
        let nodes = self.nodes.iter().copied().filter(|(id, _)| keep.contains(id)).collect();
        let edges = self
            .edges
            .iter()
            .copied()
            .filter(|e| keep.contains(&e.u) && keep.contains(&e.v))
            .collect();
        GraphSnapshot { nodes, edges }
    }
}

/// A discrete-time dynamic graph: an ordered list of snapshots and a class.
#[derive(Clone, Debug, PartialEq)]
pub struct DynamicGraph {
    id: String,
    class: ClassLabel,
    snapshots: Vec<GraphSnapshot>,
}

impl DynamicGraph {
    pub fn new(id: impl Into<String>, class: ClassLabel, snapshots: Vec<GraphSnapshot>) -> Result<Self> {
        let id = id.into();
        if snapshots.is_empty() {
            return Err(Error::InvalidGraph(format!("graph {id} has no snapshots")));
        }
        if id.is_empty() || id.contains(['/', '\\']) || id.chars().any(char::is_whitespace) {
            return Err(Error::InvalidGraph(format!("unusable graph id {id:?}")));
        }
        Ok(DynamicGraph { id, class, snapshots })
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn class(&self) -> ClassLabel {
        self.class
    }

    pub fn snapshots(&self) -> &[GraphSnapshot] {
        &self.snapshots
    }

    /// Number of timesteps.
    pub fn len(&self) -> usize {
        self.snapshots.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn map_snapshots(&self, f: impl FnMut(&GraphSnapshot) -> Result<GraphSnapshot>) -> Result<Self> {
        let snapshots = self.snapshots.iter().map(f).collect::<Result<Vec<_>>>()?;
        DynamicGraph::new(self.id.clone(), self.class, snapshots)
    }
}

/// A set of dynamic graphs ordered by graph id.
#[derive(Clone, Debug, PartialEq)]
pub struct Dataset {
    graphs: Vec<DynamicGraph>,
    label_alphabet: Vec<Label>,
    class_alphabet: Vec<ClassLabel>,
}

impl Dataset {
    pub fn new(mut graphs: Vec<DynamicGraph>) -> Result<Self> {
        graphs.sort_by(|a, b| a.id.cmp(&b.id));
        if let Some(w) = graphs.windows(2).find(|w| w[0].id == w[1].id) {
            return Err(Error::InvalidDataset(format!("duplicate graph id {}", w[0].id)));
        }
        let labels: BTreeSet<Label> = graphs
            .iter()
            .flat_map(|g| g.snapshots.iter())
            .flat_map(|s| s.nodes.iter().map(|&(_, l)| l))
            .collect();
        let classes: BTreeSet<ClassLabel> = graphs.iter().map(|g| g.class).collect();
        Ok(Dataset {
            graphs,
            label_alphabet: labels.into_iter().collect(),
            class_alphabet: classes.into_iter().collect(),
        })
    }

    pub fn graphs(&self) -> &[DynamicGraph] {
        &self.graphs
    }

    pub fn len(&self) -> usize {
        self.graphs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.graphs.is_empty()
    }

    /// Sorted distinct node labels occurring anywhere in the dataset.
    pub fn label_alphabet(&self) -> &[Label] {
        &self.label_alphabet
    }

    pub fn class_alphabet(&self) -> &[ClassLabel] {
        &self.class_alphabet
    }

    pub fn classes(&self) -> BTreeMap<String, ClassLabel> {
        self.graphs.iter().map(|g| (g.id.clone(), g.class)).collect()
    }

    /// Longest graph length in the dataset.
    pub fn max_len(&self) -> usize {
        self.graphs.iter().map(DynamicGraph::len).max().unwrap_or(0)
    }

    /// Copy of the dataset with every edge weight replaced by `weight`.
    pub fn with_constant_weight(&self, weight: f64) -> Result<Self> {
        let graphs = self
            .graphs
            .iter()
            .map(|g| g.map_snapshots(|s| s.with_constant_weight(weight)))
            .collect::<Result<Vec<_>>>()?;
        Dataset::new(graphs)
    }
}
