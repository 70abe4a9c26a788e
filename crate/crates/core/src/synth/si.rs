use rand::Rng;
use rayon::prelude::*;

use super::{barabasi_albert, bfs_subgraphs, graph_id};
use crate::error::{Error, Result};
use crate::graph::{Dataset, DynamicGraph, Edge, GraphSnapshot, NodeId};
use crate::seed;

const SUSCEPTIBLE: u32 = 0;
const INFECTED: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SiConfig {
    pub p: f64,
    pub stop_fraction: f64,
    pub seed: u64,
}

impl SiConfig {
    pub fn new(p: f64, seed: u64) -> Self {
        SiConfig {
            p,
            stop_fraction: 0.5,
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.p) {
            return Err(Error::Config(format!(
                "infection probability {} outside [0, 1]",
                self.p
            )));
        }
        if !(self.stop_fraction > 0.0 && self.stop_fraction <= 1.0) {
            return Err(Error::Config(format!(
                "stop fraction {} outside (0, 1]",
                self.stop_fraction
            )));
        }
        Ok(())
    }
}

/// Runs the SI process from a uniformly random start node.
pub fn simulate_si(g: &GraphSnapshot, cfg: &SiConfig) -> Result<Vec<GraphSnapshot>> {
    if g.is_empty() {
        return Err(Error::InvalidGraph("SI simulation on an empty graph".into()));
    }
    let mut rng = seed::rng(cfg.seed, &[]);
    let start = g.nodes()[rng.gen_range(0..g.node_count())].0;
    run(g, start, cfg, &mut rng)
}

/// Runs the SI process from `start`. Timestep 0 has only `start` infected
/// (label 1); each later step lets every infected node infect each
/// susceptible neighbour with probability `p`. Stops at the first step with
/// at least `ceil(stop_fraction * |V|)` infected nodes.
pub fn simulate_si_from(g: &GraphSnapshot, start: NodeId, cfg: &SiConfig) -> Result<Vec<GraphSnapshot>> {
    let mut rng = seed::rng(cfg.seed, &[u64::from(start)]);
    run(g, start, cfg, &mut rng)
}

fn run(g: &GraphSnapshot, start: NodeId, cfg: &SiConfig, rng: &mut impl Rng) -> Result<Vec<GraphSnapshot>> {
    cfg.validate()?;
    let start_idx = g
        .index_of(start)
        .ok_or_else(|| Error::InvalidGraph(format!("start node {start} not in graph")))?;
    let n = g.node_count();
    let adj = g.adjacency();
    let target = ((cfg.stop_fraction * n as f64).ceil() as usize).clamp(1, n);
    let cap = 10 * n;

    let mut infected = vec![false; n];
    infected[start_idx] = true;
    let mut count = 1;
    let labelled = |infected: &[bool]| {
        let mut i = 0;
        g.relabelled(|_| {
            let l = if infected[i] { INFECTED } else { SUSCEPTIBLE };
            i += 1;
            l
        })
    };
    let mut snapshots = vec![labelled(&infected)];
    let mut steps = 0;
    while count < target {
        steps += 1;
        if steps > cap {
            return Err(Error::SiStepCap(cap));
        }
        let mut next = infected.clone();
        for a in (0..n).filter(|&a| infected[a]) {
            for &b in &adj[a] {
                if !next[b] && rng.gen_bool(cfg.p) {
                    next[b] = true;
                    count += 1;
                }
            }
        }
        infected = next;
        snapshots.push(labelled(&infected));
    }
    Ok(snapshots)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SiTask {
    /// SI labels (class 0) against i.i.d. random labels (class 1).
    Dissemination,
    /// SI with a low (class 0) against a high (class 1) infection probability.
    InfectionRate,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TaskParams {
    /// Infection probability of class 0 in the first task.
    pub p_dissemination: f64,
    pub p_class0: f64,
    pub p_class1: f64,
    pub stop_fraction: f64,
}

impl Default for TaskParams {
    fn default() -> Self {
        TaskParams {
            p_dissemination: 0.5,
            p_class0: 0.2,
            p_class1: 0.8,
            stop_fraction: 0.5,
        }
    }
}

/// Labels `base_graphs` with SI dynamics. Classes alternate 0, 1, 0, ...
/// so an odd count gives the extra graph to class 0.
pub fn build_task(base_graphs: &[GraphSnapshot], task: SiTask, params: &TaskParams, seed: u64) -> Result<Dataset> {
    if base_graphs.is_empty() {
        return Err(Error::Config("no base graphs".into()));
    }
    let graphs = base_graphs
        .par_iter()
        .enumerate()
        .map(|(i, g)| {
            let class = (i % 2) as u32;
            let s = seed::derive(seed, &[i as u64]);
            let si = |p: f64| {
                simulate_si(
                    g,
                    &SiConfig {
                        p,
                        stop_fraction: params.stop_fraction,
                        seed: s,
                    },
                )
            };
            let snapshots = match (task, class) {
                (SiTask::Dissemination, 0) => si(params.p_dissemination)?,
                (SiTask::Dissemination, _) => {
                    let len = si(params.p_dissemination)?.len();
                    let mut rng = seed::rng(s, &[1]);
                    (0..len).map(|_| g.relabelled(|_| rng.gen_range(0..2))).collect()
                }
                (SiTask::InfectionRate, 0) => si(params.p_class0)?,
                (SiTask::InfectionRate, _) => si(params.p_class1)?,
            };
            DynamicGraph::new(graph_id(i), class, snapshots)
        })
        .collect::<Result<Vec<_>>>()?;
    Dataset::new(graphs)
}

/// End-to-end SI dataset: a Barabási–Albert base graph (unit weights,
/// `max(n, 2 * size_cap)` nodes), cut into BFS subgraphs, first `n` kept.
pub fn si_dataset(n: usize, size_cap: usize, task: SiTask, params: &TaskParams, seed: u64) -> Result<Dataset> {
    if n == 0 || size_cap == 0 {
        return Err(Error::Config("n and size-cap must be positive".into()));
    }
    let base_nodes = n.max(2 * size_cap).max(3);
    let mut rng = seed::rng(seed, &[u64::MAX]);
    let edges = barabasi_albert(base_nodes, 2, &mut rng)
        .into_iter()
        .map(|(u, v)| Edge::new(u, v, 1.0))
        .collect();
    let base = GraphSnapshot::new((0..base_nodes as NodeId).map(|i| (i, 0)).collect(), edges)?;
    let subs: Vec<GraphSnapshot> = bfs_subgraphs(&base, size_cap).into_iter().take(n).collect();
    build_task(&subs, task, params, seed)
}
