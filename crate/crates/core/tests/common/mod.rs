//! Independent reference implementations used by the integration tests.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use filtsurf::filtration::{DescriptorConfig, DescriptorKind};
use filtsurf::graph::{Edge, GraphSnapshot, NodeId};
use filtsurf::weights::EdgeWeights;
use minilp::{ComparisonOp, OptimizationDirection, Problem};
use num::bigint::BigInt;
use num::rational::BigRational;
use num::{Signed, ToPrimitive, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random connected graph: random spanning tree plus extra edges.
pub fn random_connected(rng: &mut impl Rng, max_nodes: usize, labels: u32) -> GraphSnapshot {
    let n = rng.gen_range(2..=max_nodes);
    let extra: f64 = rng.gen_range(0.0..0.6);
    let mut edges = BTreeSet::new();
    for v in 1..n {
        let u = rng.gen_range(0..v);
        edges.insert((u as u32, v as u32));
    }
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(extra) {
                edges.insert((u as u32, v as u32));
            }
        }
    }
    build(rng, n, edges, labels)
}

/// Random graph (possibly disconnected, possibly edgeless) with at most
/// `max_edges` edges and small integer weights so ties occur.
pub fn random_snapshot(rng: &mut impl Rng, max_nodes: usize, max_edges: usize, labels: u32) -> GraphSnapshot {
    let n = rng.gen_range(1..=max_nodes);
    let mut pairs: Vec<(u32, u32)> = (0..n as u32)
        .flat_map(|u| (u + 1..n as u32).map(move |v| (u, v)))
        .collect();
    let k = rng.gen_range(0..=pairs.len().min(max_edges));
    for i in 0..k {
        let j = rng.gen_range(i..pairs.len());
        pairs.swap(i, j);
    }
    build(rng, n, pairs[..k].iter().copied().collect(), labels)
}

fn build(rng: &mut impl Rng, n: usize, edges: BTreeSet<(u32, u32)>, labels: u32) -> GraphSnapshot {
    let nodes = (0..n as u32).map(|i| (i * 3 + 1, rng.gen_range(0..labels))).collect();
    let edges = edges
        .into_iter()
        .map(|(u, v)| Edge::new(u * 3 + 1, v * 3 + 1, f64::from(rng.gen_range(1..=6u32))))
        .collect();
    GraphSnapshot::new(nodes, edges).unwrap()
}

/// All-pairs hop distances by Floyd–Warshall, keyed by node position.
pub fn floyd_warshall(g: &GraphSnapshot) -> Vec<Vec<f64>> {
    let n = g.node_count();
    let mut d = vec![vec![f64::INFINITY; n]; n];
    for (i, row) in d.iter_mut().enumerate() {
        row[i] = 0.0;
    }
    for e in g.edges() {
        let (a, b) = (g.index_of(e.u).unwrap(), g.index_of(e.v).unwrap());
        d[a][b] = 1.0;
        d[b][a] = 1.0;
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if d[i][k] + d[k][j] < d[i][j] {
                    d[i][j] = d[i][k] + d[k][j];
                }
            }
        }
    }
    d
}

fn lazy_walk(g: &GraphSnapshot, x: usize, alpha: f64) -> Vec<f64> {
    let n = g.node_count();
    let mut m = vec![0.0; n];
    let nbrs: Vec<usize> = g
        .edges()
        .iter()
        .filter_map(|e| {
            let (a, b) = (g.index_of(e.u).unwrap(), g.index_of(e.v).unwrap());
            match (a == x, b == x) {
                (true, _) => Some(b),
                (_, true) => Some(a),
                _ => None,
            }
        })
        .collect();
    if nbrs.is_empty() {
        m[x] = 1.0;
        return m;
    }
    m[x] = alpha;
    for &v in &nbrs {
        m[v] += (1.0 - alpha) / nbrs.len() as f64;
    }
    m
}

/// Ollivier–Ricci curvature with the transport cost solved as a generic LP.
pub fn ricci_lp(g: &GraphSnapshot, x: NodeId, y: NodeId, alpha: f64) -> f64 {
    let d = floyd_warshall(g);
    let (xi, yi) = (g.index_of(x).unwrap(), g.index_of(y).unwrap());
    let mu = lazy_walk(g, xi, alpha);
    let nu = lazy_walk(g, yi, alpha);
    let supply: Vec<usize> = (0..mu.len()).filter(|&i| mu[i] > 0.0).collect();
    let demand: Vec<usize> = (0..nu.len()).filter(|&j| nu[j] > 0.0).collect();
    let mut lp = Problem::new(OptimizationDirection::Minimize);
    let vars: Vec<Vec<_>> = supply
        .iter()
        .map(|&i| {
            demand
                .iter()
                .map(|&j| lp.add_var(d[i][j], (0.0, f64::INFINITY)))
                .collect()
        })
        .collect();
    for (r, &i) in supply.iter().enumerate() {
        lp.add_constraint(vars[r].iter().map(|&v| (v, 1.0)), ComparisonOp::Le, mu[i]);
    }
    for (c, &j) in demand.iter().enumerate() {
        lp.add_constraint(vars.iter().map(|row| (row[c], 1.0)), ComparisonOp::Ge, nu[j]);
    }
    let w = lp.solve().unwrap().objective();
    1.0 - w / d[xi][yi]
}

/// Descriptor value of the edge-induced subgraph with weight <= t, by a
/// fresh scan and BFS, for every distinct threshold.
pub fn curve_oracle(g: &GraphSnapshot, weights: &EdgeWeights, desc: &DescriptorConfig) -> Vec<(f64, Vec<f64>)> {
    let mut ts: Vec<f64> = weights.values().copied().collect();
    ts.sort_by(f64::total_cmp);
    ts.dedup();
    ts.iter()
        .map(|&t| {
            let edges: Vec<(NodeId, NodeId)> = weights.iter().filter(|(_, &w)| w <= t).map(|(&k, _)| k).collect();
            let mut present: BTreeSet<NodeId> = edges.iter().flat_map(|&(u, v)| [u, v]).collect();
            if desc.include_isolated {
                present.extend(g.nodes().iter().map(|n| n.0));
            }
            let value = match desc.kind {
                DescriptorKind::LabelHistogram => desc
                    .label_alphabet
                    .iter()
                    .map(|&l| present.iter().filter(|&&v| g.label(v) == Some(l)).count() as f64)
                    .collect(),
                DescriptorKind::ComponentCount => vec![bfs_components(&present, &edges) as f64],
            };
            (t, value)
        })
        .collect()
}

fn bfs_components(nodes: &BTreeSet<NodeId>, edges: &[(NodeId, NodeId)]) -> usize {
    let mut adj: BTreeMap<NodeId, Vec<NodeId>> = BTreeMap::new();
    for &(u, v) in edges {
        adj.entry(u).or_default().push(v);
        adj.entry(v).or_default().push(u);
    }
    let mut seen = BTreeSet::new();
    let mut count = 0;
    for &s in nodes {
        if !seen.insert(s) {
            continue;
        }
        count += 1;
        let mut queue = VecDeque::from([s]);
        while let Some(a) = queue.pop_front() {
            for &b in adj.get(&a).into_iter().flatten() {
                if seen.insert(b) {
                    queue.push_back(b);
                }
            }
        }
    }
    count
}

// ---- exact Laplacian spectrum -------------------------------------------

type Poly = Vec<BigRational>;

fn q(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn trim(mut p: Poly) -> Poly {
    while p.len() > 1 && p.last().unwrap().is_zero() {
        p.pop();
    }
    if p.is_empty() {
        p.push(q(0));
    }
    p
}

fn deg(p: &Poly) -> usize {
    p.len() - 1
}

fn is_const(p: &Poly) -> bool {
    p.len() == 1
}

fn derivative(p: &Poly) -> Poly {
    if is_const(p) {
        return vec![q(0)];
    }
    trim((1..p.len()).map(|i| &p[i] * q(i as i64)).collect())
}

fn sub(a: &Poly, b: &Poly) -> Poly {
    let n = a.len().max(b.len());
    trim(
        (0..n)
            .map(|i| a.get(i).cloned().unwrap_or_else(|| q(0)) - b.get(i).cloned().unwrap_or_else(|| q(0)))
            .collect(),
    )
}

fn divrem(a: &Poly, b: &Poly) -> (Poly, Poly) {
    let mut r = a.clone();
    if deg(a) < deg(b) {
        return (vec![q(0)], r);
    }
    let lead = b.last().unwrap().clone();
    let mut quo = vec![q(0); deg(a) - deg(b) + 1];
    while r.len() >= b.len() && !(is_const(&r) && r[0].is_zero()) {
        let shift = r.len() - b.len();
        let c = r.last().unwrap() / &lead;
        for (i, bi) in b.iter().enumerate() {
            r[i + shift] = &r[i + shift] - &c * bi;
        }
        quo[shift] = c;
        r.pop();
        r = trim(r);
        if r.len() < b.len() {
            break;
        }
    }
    (trim(quo), trim(r))
}

fn monic(p: Poly) -> Poly {
    let lead = p.last().unwrap().clone();
    p.into_iter().map(|c| c / &lead).collect()
}

fn gcd(a: &Poly, b: &Poly) -> Poly {
    let (mut a, mut b) = (a.clone(), b.clone());
    while !(is_const(&b) && b[0].is_zero()) {
        let r = divrem(&a, &b).1;
        a = b;
        b = r;
    }
    monic(a)
}

fn eval(p: &Poly, x: &BigRational) -> BigRational {
    p.iter().rev().fold(q(0), |acc, c| acc * x + c)
}

/// det(λI − A) by Faddeev–LeVerrier, ascending coefficients.
fn char_poly(a: &[Vec<i64>]) -> Poly {
    let n = a.len();
    let a: Vec<Vec<BigRational>> = a.iter().map(|r| r.iter().map(|&v| q(v)).collect()).collect();
    let mut coeffs = vec![q(0); n + 1];
    coeffs[n] = q(1);
    let mut m = vec![vec![q(0); n]; n];
    for k in 1..=n {
        // M_k = A M_{k-1} + c_{n-k+1} I
        let mut next = vec![vec![q(0); n]; n];
        for i in 0..n {
            for j in 0..n {
                let mut s = q(0);
                for l in 0..n {
                    s += &a[i][l] * &m[l][j];
                }
                next[i][j] = s;
            }
            next[i][i] += &coeffs[n - k + 1];
        }
        m = next;
        let mut tr = q(0);
        for i in 0..n {
            for l in 0..n {
                tr += &a[i][l] * &m[l][i];
            }
        }
        coeffs[n - k] = -tr / q(k as i64);
    }
    coeffs
}

/// Yun's square-free factorization: `(factor, multiplicity)`.
fn square_free(f: &Poly) -> Vec<(Poly, usize)> {
    let f = monic(f.clone());
    let df = derivative(&f);
    let a0 = gcd(&f, &df);
    let mut b = divrem(&f, &a0).0;
    let c = divrem(&df, &a0).0;
    let mut d = sub(&c, &derivative(&b));
    let mut out = Vec::new();
    let mut i = 1;
    while !is_const(&b) {
        let a = gcd(&b, &d);
        let b_next = divrem(&b, &a).0;
        let c_next = divrem(&d, &a).0;
        d = sub(&c_next, &derivative(&b_next));
        if !is_const(&a) {
            out.push((a, i));
        }
        b = b_next;
        i += 1;
    }
    out
}

fn sturm_chain(p: &Poly) -> Vec<Poly> {
    let mut chain = vec![p.clone(), derivative(p)];
    loop {
        let n = chain.len();
        if is_const(&chain[n - 1]) {
            break;
        }
        let r = divrem(&chain[n - 2], &chain[n - 1]).1;
        if is_const(&r) && r[0].is_zero() {
            break;
        }
        chain.push(r.into_iter().map(|c| -c).collect());
    }
    chain
}

fn sign_changes(chain: &[Poly], x: &BigRational) -> usize {
    let signs: Vec<bool> = chain
        .iter()
        .map(|p| eval(p, x))
        .filter(|v| !v.is_zero())
        .map(|v| v.is_positive())
        .collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Real roots of a square-free polynomial in `(lo, hi]`.
fn real_roots(p: &Poly, lo: BigRational, hi: BigRational) -> Vec<f64> {
    let chain = sturm_chain(p);
    let count = |a: &BigRational, b: &BigRational| sign_changes(&chain, a) - sign_changes(&chain, b);
    let mut roots = Vec::new();
    let mut stack = vec![(lo, hi)];
    while let Some((a, b)) = stack.pop() {
        match count(&a, &b) {
            0 => {}
            1 => {
                let (mut a, mut b) = (a, b);
                for _ in 0..80 {
                    let mid = (&a + &b) / q(2);
                    if count(&a, &mid) == 1 {
                        b = mid;
                    } else {
                        a = mid;
                    }
                }
                roots.push(b.to_f64().unwrap());
            }
            _ => {
                let mid = (&a + &b) / q(2);
                stack.push((a, mid.clone()));
                stack.push((mid, b));
            }
        }
    }
    roots
}

/// Laplacian eigenvalues with multiplicity, from the exact characteristic
/// polynomial.
pub fn laplacian_spectrum(g: &GraphSnapshot) -> Vec<f64> {
    let n = g.node_count();
    let mut l = vec![vec![0i64; n]; n];
    for e in g.edges() {
        let (a, b) = (g.index_of(e.u).unwrap(), g.index_of(e.v).unwrap());
        l[a][b] -= 1;
        l[b][a] -= 1;
        l[a][a] += 1;
        l[b][b] += 1;
    }
    let p = char_poly(&l);
    let mut spectrum = Vec::new();
    for (factor, mult) in square_free(&p) {
        for r in real_roots(&factor, q(-1), q(2 * n as i64 + 1)) {
            spectrum.extend(std::iter::repeat_n(r, mult));
        }
    }
    spectrum.sort_by(f64::total_cmp);
    spectrum
}
