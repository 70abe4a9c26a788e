use std::collections::{BTreeMap, VecDeque};

use super::transport::{wasserstein, DiscreteMeasure};
use crate::error::{Error, Result};
use crate::graph::{EdgeKey, GraphSnapshot, NodeId};

/// Hop-distance Ollivier–Ricci curvature over one snapshot, caching
/// breadth-first distances per source node.
pub(crate) struct RicciContext<'g> {
    graph: &'g GraphSnapshot,
    adjacency: Vec<Vec<usize>>,
    distances: Vec<Option<Vec<u32>>>,
}

impl<'g> RicciContext<'g> {
    pub(crate) fn new(graph: &'g GraphSnapshot) -> Self {
        RicciContext {
            graph,
            adjacency: graph.adjacency(),
            distances: vec![None; graph.node_count()],
        }
    }

    fn hops_from(&mut self, source: usize) -> &[u32] {
        let adjacency = &self.adjacency;
        self.distances[source].get_or_insert_with(|| {
            let mut dist = vec![u32::MAX; adjacency.len()];
            dist[source] = 0;
            let mut queue = VecDeque::from([source]);
            while let Some(a) = queue.pop_front() {
                for &b in &adjacency[a] {
                    if dist[b] == u32::MAX {
                        dist[b] = dist[a] + 1;
                        queue.push_back(b);
                    }
                }
            }
            dist
        })
    }

    /// `m_x^alpha`: mass `alpha` on x, `(1 - alpha) / deg(x)` on each neighbour.
    fn lazy_walk(&self, x: usize, alpha: f64) -> DiscreteMeasure {
        let nbrs = &self.adjacency[x];
        let share = (1.0 - alpha) / nbrs.len() as f64;
        let nodes = self.graph.nodes();
        let mut support = Vec::with_capacity(nbrs.len() + 1);
        let mut mass = Vec::with_capacity(nbrs.len() + 1);
        support.push(nodes[x].0);
        mass.push(alpha);
        for &n in nbrs {
            support.push(nodes[n].0);
            mass.push(share);
        }
        DiscreteMeasure::with_total(support, mass).expect("lazy walk is a valid measure")
    }

    pub(crate) fn curvature(&mut self, x: NodeId, y: NodeId, alpha: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&alpha) {
            return Err(Error::Config(format!("ricci alpha {alpha} outside [0, 1]")));
        }
        let (xi, yi) = match (self.graph.index_of(x), self.graph.index_of(y)) {
            (Some(a), Some(b)) if self.adjacency[a].binary_search(&b).is_ok() => (a, b),
            _ => return Err(Error::InvalidGraph(format!("({x}, {y}) is not an edge"))),
        };
        let mu = self.lazy_walk(xi, alpha);
        let nu = self.lazy_walk(yi, alpha);
        let sources: Vec<usize> = std::iter::once(xi).chain(self.adjacency[xi].iter().copied()).collect();
        for s in sources {
            self.hops_from(s);
        }
        let graph = self.graph;
        let distances = &self.distances;
        let ground = |a: NodeId, b: NodeId| -> f64 {
            let ai = graph.index_of(a).expect("support node exists");
            let bi = graph.index_of(b).expect("support node exists");
            let d = distances[ai].as_ref().expect("distances computed")[bi];
            if d == u32::MAX {
                f64::INFINITY
            } else {
                f64::from(d)
            }
        };
        let w = wasserstein(&mu, &nu, ground)?;
        let hop = f64::from(self.hops_from(xi)[yi]);
        Ok(1.0 - w / hop)
    }

    pub(crate) fn all_edges(&mut self, alpha: f64) -> Result<BTreeMap<EdgeKey, f64>> {
        let graph = self.graph;
        graph
            .edges()
            .iter()
            .map(|e| Ok((e.key(), self.curvature(e.u, e.v, alpha)?)))
            .collect()
    }
}

/// Ollivier–Ricci curvature `1 - W(m_x, m_y) / d(x, y)` of the edge `(x, y)`
/// with unweighted hop distance as both `d` and the transport ground cost.
pub fn ricci_curvature(g: &GraphSnapshot, x: NodeId, y: NodeId, alpha: f64) -> Result<f64> {
    RicciContext::new(g).curvature(x, y, alpha)
}
