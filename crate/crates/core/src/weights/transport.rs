//! Exact 1-Wasserstein distance between finitely supported measures,
//! solved with the transportation simplex (northwest-corner start, MODI
//! potentials, Bland's rule for entering and leaving cells).

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::graph::NodeId;

const MASS_TOL: f64 = 1e-9;
const REDUCED_COST_TOL: f64 = 1e-12;
const MAX_PIVOTS: usize = 100_000;

/// A finitely supported non-negative measure over node ids.
#[derive(Clone, Debug, PartialEq)]
pub struct DiscreteMeasure {
    support: Vec<NodeId>,
    mass: Vec<f64>,
}

impl DiscreteMeasure {
    /// A probability measure: masses must be non-negative and sum to one.
    pub fn new(support: Vec<NodeId>, mass: Vec<f64>) -> Result<Self> {
        let m = Self::with_total(support, mass)?;
        let total = m.total();
        if (total - 1.0).abs() > MASS_TOL {
            return Err(Error::InvalidMeasure(format!("masses sum to {total}, not 1")));
        }
        Ok(m)
    }

    /// A measure of arbitrary total mass.
    pub fn with_total(support: Vec<NodeId>, mass: Vec<f64>) -> Result<Self> {
        if support.len() != mass.len() {
            return Err(Error::InvalidMeasure(format!(
                "{} support points but {} masses",
                support.len(),
                mass.len()
            )));
        }
        if let Some(m) = mass.iter().find(|m| !m.is_finite() || **m < 0.0) {
            return Err(Error::InvalidMeasure(format!(
                "mass {m} is not a finite non-negative value"
            )));
        }
        let mut sorted = support.clone();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidMeasure("support entries are not distinct".into()));
        }
        Ok(DiscreteMeasure { support, mass })
    }

    pub fn point(at: NodeId) -> Self {
        DiscreteMeasure {
            support: vec![at],
            mass: vec![1.0],
        }
    }

    pub fn support(&self) -> &[NodeId] {
        &self.support
    }

    pub fn mass(&self) -> &[f64] {
        &self.mass
    }

    pub fn total(&self) -> f64 {
        self.mass.iter().sum()
    }
}

/// Minimum transport cost between `mu` and `nu` under `ground`.
///
/// `ground` must be finite, symmetric and zero on the diagonal.
pub fn wasserstein(mu: &DiscreteMeasure, nu: &DiscreteMeasure, ground: impl Fn(NodeId, NodeId) -> f64) -> Result<f64> {
    let (left, right) = (mu.total(), nu.total());
    if (left - right).abs() > MASS_TOL {
        return Err(Error::MassMismatch { left, right });
    }
    let rows: Vec<usize> = (0..mu.mass.len()).filter(|&i| mu.mass[i] > 0.0).collect();
    let cols: Vec<usize> = (0..nu.mass.len()).filter(|&j| nu.mass[j] > 0.0).collect();
    if rows.is_empty() || cols.is_empty() {
        return Ok(0.0);
    }
    let mut cost = Vec::with_capacity(rows.len());
    for &i in &rows {
        let mut row = Vec::with_capacity(cols.len());
        for &j in &cols {
            let c = ground(mu.support[i], nu.support[j]);
            if !c.is_finite() {
                return Err(Error::InvalidMeasure(format!(
                    "ground distance between {} and {} is not finite",
                    mu.support[i], nu.support[j]
                )));
            }
            row.push(c);
        }
        cost.push(row);
    }
    let supply: Vec<f64> = rows.iter().map(|&i| mu.mass[i]).collect();
    let demand: Vec<f64> = cols.iter().map(|&j| nu.mass[j]).collect();
    Ok(transport_cost(&supply, &demand, &cost))
}

/// Optimal value of the balanced transportation problem.
pub(crate) fn transport_cost(supply: &[f64], demand: &[f64], cost: &[Vec<f64>]) -> f64 {
    let plan = TransportPlan::solve(supply, demand, cost);
    plan.cells
        .iter()
        .map(|&(i, j)| plan.flow[i][j] * cost[i][j])
        .sum::<f64>()
        .max(0.0)
}

struct TransportPlan {
    m: usize,
    n: usize,
    flow: Vec<Vec<f64>>,
    basic: Vec<Vec<bool>>,
    /// Basis cells; always `m + n - 1` of them, forming a spanning tree
    /// of the bipartite row/column graph.
    cells: Vec<(usize, usize)>,
}

impl TransportPlan {
    fn solve(supply: &[f64], demand: &[f64], cost: &[Vec<f64>]) -> Self {
        let mut plan = Self::northwest_corner(supply, demand);
        for _ in 0..MAX_PIVOTS {
            let (u, v) = plan.potentials(cost);
            let entering = (0..plan.m)
                .flat_map(|i| (0..plan.n).map(move |j| (i, j)))
                .find(|&(i, j)| !plan.basic[i][j] && cost[i][j] - u[i] - v[j] < -REDUCED_COST_TOL);
            match entering {
                Some(cell) => plan.pivot(cell),
                None => break,
            }
        }
        plan
    }

    fn northwest_corner(supply: &[f64], demand: &[f64]) -> Self {
        let (m, n) = (supply.len(), demand.len());
        let mut flow = vec![vec![0.0; n]; m];
        let mut basic = vec![vec![false; n]; m];
        let mut cells = Vec::with_capacity(m + n - 1);
        let mut s = supply.to_vec();
        let mut d = demand.to_vec();
        let (mut i, mut j) = (0, 0);
        loop {
            let x = s[i].min(d[j]);
            flow[i][j] = x;
            basic[i][j] = true;
            cells.push((i, j));
            s[i] -= x;
            d[j] -= x;
            if i == m - 1 && j == n - 1 {
                break;
            }
            if i == m - 1 {
                j += 1;
            } else if j == n - 1 || s[i] <= d[j] {
                i += 1;
            } else {
                j += 1;
            }
        }
        debug_assert_eq!(cells.len(), m + n - 1);
        TransportPlan {
            m,
            n,
            flow,
            basic,
            cells,
        }
    }

    /// Tree adjacency over nodes `0..m` (rows) and `m..m+n` (columns);
    /// each entry is (neighbour node, cell index).
    fn tree(&self) -> Vec<Vec<(usize, usize)>> {
        let mut adj = vec![Vec::new(); self.m + self.n];
        for (k, &(i, j)) in self.cells.iter().enumerate() {
            adj[i].push((self.m + j, k));
            adj[self.m + j].push((i, k));
        }
        adj
    }

    fn potentials(&self, cost: &[Vec<f64>]) -> (Vec<f64>, Vec<f64>) {
        let adj = self.tree();
        let mut pot = vec![f64::NAN; self.m + self.n];
        let mut queue = VecDeque::from([0]);
        pot[0] = 0.0;
        while let Some(node) = queue.pop_front() {
            for &(next, k) in &adj[node] {
                if pot[next].is_nan() {
                    let (i, j) = self.cells[k];
                    // u_i + v_j = c_ij on basic cells
                    pot[next] = cost[i][j] - pot[node];
                    queue.push_back(next);
                }
            }
        }
        let v = pot.split_off(self.m);
        (pot, v)
    }

    /// Cells on the tree path from row `i` to column `j`, in order.
    fn tree_path(&self, i: usize, j: usize) -> Vec<usize> {
        let adj = self.tree();
        let target = self.m + j;
        let mut parent: Vec<Option<(usize, usize)>> = vec![None; self.m + self.n];
        let mut seen = vec![false; self.m + self.n];
        seen[i] = true;
        let mut queue = VecDeque::from([i]);
        while let Some(node) = queue.pop_front() {
            if node == target {
                break;
            }
            for &(next, k) in &adj[node] {
                if !seen[next] {
                    seen[next] = true;
                    parent[next] = Some((node, k));
                    queue.push_back(next);
                }
            }
        }
        let mut path = Vec::new();
        let mut node = target;
        while let Some((prev, k)) = parent[node] {
            path.push(k);
            node = prev;
        }
        path.reverse();
        path
    }

    fn pivot(&mut self, (ei, ej): (usize, usize)) {
        // path cells alternate -, +, -, ... starting at the entering row
        let path = self.tree_path(ei, ej);
        let leaving_pos = path
            .iter()
            .step_by(2)
            .copied()
            .min_by(|&a, &b| {
                let (ai, aj) = self.cells[a];
                let (bi, bj) = self.cells[b];
                self.flow[ai][aj]
                    .total_cmp(&self.flow[bi][bj])
                    .then((ai, aj).cmp(&(bi, bj)))
            })
            .expect("cycle has a minus cell");
        let (li, lj) = self.cells[leaving_pos];
        let theta = self.flow[li][lj];
        for (step, &k) in path.iter().enumerate() {
            let (i, j) = self.cells[k];
            if step % 2 == 0 {
                self.flow[i][j] = (self.flow[i][j] - theta).max(0.0);
            } else {
                self.flow[i][j] += theta;
            }
        }
        self.flow[li][lj] = 0.0;
        self.flow[ei][ej] = theta;
        self.basic[li][lj] = false;
        self.basic[ei][ej] = true;
        self.cells[leaving_pos] = (ei, ej);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path_metric(a: NodeId, b: NodeId) -> f64 {
        (a as f64 - b as f64).abs()
    }

    #[test]
    fn identical_measures_cost_nothing() {
        let mu = DiscreteMeasure::new(vec![0, 1, 2], vec![0.2, 0.3, 0.5]).unwrap();
        assert_eq!(wasserstein(&mu, &mu, path_metric).unwrap(), 0.0);
    }

    #[test]
    fn point_masses_cost_their_distance() {
        let w = wasserstein(&DiscreteMeasure::point(1), &DiscreteMeasure::point(4), path_metric).unwrap();
        assert_eq!(w, 3.0);
    }

    #[test]
    fn small_plan_on_a_path() {
        // path x=0, y=1, z=2
        let mu = DiscreteMeasure::new(vec![0, 1], vec![0.5, 0.5]).unwrap();
        let nu = DiscreteMeasure::new(vec![1, 0, 2], vec![0.5, 0.25, 0.25]).unwrap();
        let w = wasserstein(&mu, &nu, path_metric).unwrap();
        assert!((w - 0.5).abs() < 1e-12, "{w}");
    }

    #[test]
    fn mismatched_mass_is_an_error() {
        let mu = DiscreteMeasure::with_total(vec![0], vec![1.0]).unwrap();
        let nu = DiscreteMeasure::with_total(vec![1], vec![0.5]).unwrap();
        assert!(matches!(
            wasserstein(&mu, &nu, path_metric),
            Err(Error::MassMismatch { .. })
        ));
    }

    #[test]
    fn measure_validation() {
        assert!(DiscreteMeasure::new(vec![0, 1], vec![0.5, 0.4]).is_err());
        assert!(DiscreteMeasure::new(vec![0, 0], vec![0.5, 0.5]).is_err());
        assert!(DiscreteMeasure::new(vec![0, 1], vec![1.5, -0.5]).is_err());
        assert!(DiscreteMeasure::new(vec![0], vec![0.5, 0.5]).is_err());
    }

    #[test]
    fn degenerate_problem_terminates() {
        // equal row and column sums force degenerate pivots
        let supply = [0.25; 4];
        let demand = [0.25; 4];
        let cost: Vec<Vec<f64>> = (0..4)
            .map(|i| (0..4).map(|j| ((i * 3 + j * 5) % 4) as f64).collect())
            .collect();
        let v = transport_cost(&supply, &demand, &cost);
        // cost is a Latin square with one zero per row/column
        assert!(v.abs() < 1e-12, "{v}");
    }
}
