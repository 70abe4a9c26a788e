//! Synthetic dynamic graphs.
//!
//! * [`generate_synthetic`]: Barabási–Albert seed graph grown by
//!   preferential attachment, with class-dependent edge weight ranges.
//! * [`bfs_subgraphs`] and [`simulate_si`] / [`build_task`]: label dynamics
//!   from a susceptible-infected process on fixed subgraphs.

mod si;

pub use si::{build_task, si_dataset, simulate_si, simulate_si_from, SiConfig, SiTask, TaskParams};

use std::collections::{BTreeSet, VecDeque};

use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{Dataset, DynamicGraph, Edge, GraphSnapshot, Label, NodeId};
use crate::seed;

/// How edge weights are drawn from a class range.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WeightSampling {
    /// Uniform over the integers in the range.
    Integer,
    /// Uniform over the real interval.
    Continuous,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SynthConfig {
    pub n_graphs: usize,
    pub seed_nodes: usize,
    pub ba_m: usize,
    pub timesteps: usize,
    pub nodes_per_step: usize,
    pub class0_weight_range: (f64, f64),
    pub class1_weight_range: (f64, f64),
    pub weight_sampling: WeightSampling,
    pub seed: u64,
}

impl Default for SynthConfig {
    fn default() -> Self {
        SynthConfig {
            n_graphs: 100,
            seed_nodes: 10,
            ba_m: 2,
            timesteps: 10,
            nodes_per_step: 5,
            class0_weight_range: (1.0, 5.0),
            class1_weight_range: (6.0, 10.0),
            weight_sampling: WeightSampling::Integer,
            seed: 0,
        }
    }
}

impl SynthConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Config(msg));
        if self.n_graphs == 0 {
            return bad("n-graphs must be positive".into());
        }
        if self.ba_m == 0 || self.ba_m >= self.seed_nodes {
            return bad(format!(
                "ba-m ({}) must be in 1..seed-nodes ({})",
                self.ba_m, self.seed_nodes
            ));
        }
        if self.timesteps == 0 {
            return bad("timesteps must be positive".into());
        }
        for (name, (lo, hi)) in [
            ("class0", self.class0_weight_range),
            ("class1", self.class1_weight_range),
        ] {
            if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                return bad(format!("{name} weight range [{lo}, {hi}] is degenerate"));
            }
            if self.weight_sampling == WeightSampling::Integer && lo.ceil() > hi.floor() {
                return bad(format!("{name} weight range [{lo}, {hi}] contains no integer"));
            }
        }
        Ok(())
    }

    fn total_nodes(&self) -> usize {
        self.seed_nodes + (self.timesteps - 1) * self.nodes_per_step
    }
}

fn draw_weight(rng: &mut impl Rng, (lo, hi): (f64, f64), sampling: WeightSampling) -> f64 {
    match sampling {
        WeightSampling::Integer => rng.gen_range(lo.ceil() as i64..=hi.floor() as i64) as f64,
        WeightSampling::Continuous => rng.gen_range(lo..=hi),
    }
}

/// Node sequence with multiplicity equal to degree, for degree-proportional draws.
struct Attachment {
    repeated: Vec<NodeId>,
}

impl Attachment {
    /// `m` distinct targets, each drawn proportionally to current degree.
    fn targets(&self, m: usize, rng: &mut impl Rng) -> Vec<NodeId> {
        let mut chosen = BTreeSet::new();
        while chosen.len() < m {
            chosen.insert(self.repeated[rng.gen_range(0..self.repeated.len())]);
        }
        chosen.into_iter().collect()
    }

    fn record(&mut self, u: NodeId, v: NodeId) {
        self.repeated.push(u);
        self.repeated.push(v);
    }
}

/// Barabási–Albert graph on `n` nodes: the first `m` nodes start
/// unconnected and each later node links to `m` distinct earlier nodes.
pub fn barabasi_albert(n: usize, m: usize, rng: &mut impl Rng) -> Vec<(NodeId, NodeId)> {
    let mut edges = Vec::new();
    if n <= m || m == 0 {
        return edges;
    }
    let mut att = Attachment { repeated: Vec::new() };
    let mut targets: Vec<NodeId> = (0..m as NodeId).collect();
    for source in m as NodeId..n as NodeId {
        for &t in &targets {
            edges.push((t, source));
            att.record(t, source);
        }
        targets = att.targets(m, rng);
    }
    edges
}

fn grow_graph(cfg: &SynthConfig, index: usize) -> Result<DynamicGraph> {
    let mut rng = seed::rng(cfg.seed, &[index as u64]);
    let class = (index % 2) as u32;
    let range = if class == 0 {
        cfg.class0_weight_range
    } else {
        cfg.class1_weight_range
    };
    let mut labels: Vec<Label> = Vec::with_capacity(cfg.total_nodes());
    let mut edges: Vec<Edge> = Vec::new();
    let mut att = Attachment { repeated: Vec::new() };

    for _ in 0..cfg.seed_nodes {
        labels.push(rng.gen_range(0..2));
    }
    for (u, v) in barabasi_albert(cfg.seed_nodes, cfg.ba_m, &mut rng) {
        edges.push(Edge::new(u, v, draw_weight(&mut rng, range, cfg.weight_sampling)));
        att.record(u, v);
    }

    let snapshot = |labels: &[Label], edges: &[Edge]| {
        GraphSnapshot::new(
            labels.iter().enumerate().map(|(i, &l)| (i as NodeId, l)).collect(),
            edges.to_vec(),
        )
    };
    let mut snapshots = vec![snapshot(&labels, &edges)?];
    for _ in 1..cfg.timesteps {
        for _ in 0..cfg.nodes_per_step {
            let new = labels.len() as NodeId;
            labels.push(rng.gen_range(0..2));
            for t in att.targets(cfg.ba_m, &mut rng) {
                edges.push(Edge::new(t, new, draw_weight(&mut rng, range, cfg.weight_sampling)));
            }
            for e in &edges[edges.len() - cfg.ba_m..] {
                att.record(e.u, e.v);
            }
        }
        snapshots.push(snapshot(&labels, &edges)?);
    }
    DynamicGraph::new(graph_id(index), class, snapshots)
}

pub(crate) fn graph_id(index: usize) -> String {
    format!("g{index:06}")
}

/// `cfg.n_graphs` dynamic graphs with alternating classes 0, 1, 0, ...
pub fn generate_synthetic(cfg: &SynthConfig) -> Result<Dataset> {
    cfg.validate()?;
    let graphs = (0..cfg.n_graphs)
        .into_par_iter()
        .map(|i| grow_graph(cfg, i))
        .collect::<Result<Vec<_>>>()?;
    Dataset::new(graphs)
}

/// One vertex-induced subgraph per start node: breadth-first search in
/// node-id order, stopping once `size_cap` nodes are collected.
pub fn bfs_subgraphs(base: &GraphSnapshot, size_cap: usize) -> Vec<GraphSnapshot> {
    let adj = base.adjacency();
    let nodes = base.nodes();
    (0..base.node_count())
        .map(|start| {
            let mut seen = vec![false; nodes.len()];
            let mut keep = BTreeSet::new();
            let mut queue = VecDeque::from([start]);
            seen[start] = true;
            while let Some(a) = queue.pop_front() {
                keep.insert(nodes[a].0);
                if keep.len() >= size_cap {
                    break;
                }
                for &b in &adj[a] {
                    if !seen[b] {
                        seen[b] = true;
                        queue.push_back(b);
                    }
                }
            }
            base.induced(&keep)
        })
        .collect()
}
