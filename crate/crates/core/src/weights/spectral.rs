use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::graph::{GraphSnapshot, NodeId};

const MAX_SWEEPS: usize = 100;
const RESIDUAL_TOL: f64 = 1e-8;

/// Eigenpairs of a symmetric matrix, eigenvalues ascending.
#[derive(Clone, Debug)]
pub struct SpectralDecomposition {
    pub eigenvalues: Vec<f64>,
    /// `eigenvectors[i]` is the unit eigenvector for `eigenvalues[i]`.
    pub eigenvectors: Vec<Vec<f64>>,
}

/// Combinatorial Laplacian `D - A` in node-index order, ignoring weights.
pub fn laplacian(g: &GraphSnapshot) -> Vec<Vec<f64>> {
    let n = g.node_count();
    let mut l = vec![vec![0.0; n]; n];
    for e in g.edges() {
        let (a, b) = g.endpoint_indices(e);
        l[a][b] -= 1.0;
        l[b][a] -= 1.0;
        l[a][a] += 1.0;
        l[b][b] += 1.0;
    }
    l
}

fn off_diagonal_norm(a: &[Vec<f64>]) -> f64 {
    let mut s = 0.0;
    for (p, row) in a.iter().enumerate() {
        for (q, x) in row.iter().enumerate() {
            if p != q {
                s += x * x;
            }
        }
    }
    s.sqrt()
}

fn max_residual(matrix: &[Vec<f64>], dec: &SpectralDecomposition) -> f64 {
    let n = matrix.len();
    let mut worst: f64 = 0.0;
    for (lambda, psi) in dec.eigenvalues.iter().zip(&dec.eigenvectors) {
        for r in 0..n {
            let lpsi: f64 = (0..n).map(|c| matrix[r][c] * psi[c]).sum();
            let res = (lpsi - lambda * psi[r]).abs() / lambda.abs().max(1.0);
            worst = worst.max(res);
        }
    }
    worst
}

/// Full eigendecomposition of a symmetric matrix by cyclic Jacobi rotations.
pub fn symmetric_eigen(matrix: &[Vec<f64>]) -> Result<SpectralDecomposition> {
    let n = matrix.len();
    if matrix.iter().any(|row| row.len() != n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: matrix.iter().map(Vec::len).find(|&l| l != n).unwrap_or(n),
        });
    }
    let mut a = matrix.to_vec();
    let mut v: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();
    let scale = a.iter().flatten().map(|x| x * x).sum::<f64>().sqrt().max(1.0);

    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        if off_diagonal_norm(&a) <= 1e-15 * scale {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p][q];
                if apq.abs() <= f64::MIN_POSITIVE {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for row in a.iter_mut() {
                    let (akp, akq) = (row[p], row[q]);
                    row[p] = c * akp - s * akq;
                    row[q] = s * akp + c * akq;
                }
                let (rp, rq) = (a[p].clone(), a[q].clone());
                for k in 0..n {
                    a[p][k] = c * rp[k] - s * rq[k];
                    a[q][k] = s * rp[k] + c * rq[k];
                }
                for row in v.iter_mut() {
                    let vp = row[p];
                    let vq = row[q];
                    row[p] = c * vp - s * vq;
                    row[q] = s * vp + c * vq;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[i][i].total_cmp(&a[j][j]));
    let dec = SpectralDecomposition {
        eigenvalues: order.iter().map(|&i| a[i][i]).collect(),
        eigenvectors: order.iter().map(|&i| v.iter().map(|row| row[i]).collect()).collect(),
    };
    let residual = max_residual(matrix, &dec);
    if !converged || residual > RESIDUAL_TOL {
        return Err(Error::EigenNonConvergence { residual });
    }
    Ok(dec)
}

/// Heat kernel signature `sum_i exp(-t lambda_i) psi_i(v)^2` of every node.
pub fn hks(g: &GraphSnapshot, t: f64) -> Result<BTreeMap<NodeId, f64>> {
    if g.is_empty() {
        return Err(Error::InvalidGraph("heat kernel signature of an empty graph".into()));
    }
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::Config(format!("hks diffusion time {t} must be positive")));
    }
    let dec = symmetric_eigen(&laplacian(g))?;
    Ok(heat_kernel_diagonal(g, &dec, t))
}

pub(crate) fn heat_kernel_diagonal(g: &GraphSnapshot, dec: &SpectralDecomposition, t: f64) -> BTreeMap<NodeId, f64> {
    g.nodes()
        .iter()
        .enumerate()
        .map(|(idx, &(id, _))| {
            let value = dec
                .eigenvalues
                .iter()
                .zip(&dec.eigenvectors)
                .map(|(lambda, psi)| (-t * lambda).exp() * psi[idx] * psi[idx])
                .sum();
            (id, value)
        })
        .collect()
}
