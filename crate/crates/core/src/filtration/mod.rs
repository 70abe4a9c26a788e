//! Edge filtrations of a snapshot and the descriptor curves evaluated along them.
//!
//! Edges enter in order of increasing weight, all edges of equal weight in
//! one step. `G_i` is the edge-induced subgraph of every edge with weight at
//! most the `i`-th distinct weight, so a node appears with its first
//! incident edge. Curves store only the thresholds at which the descriptor
//! value changes; before the first threshold the value is the zero vector.

mod union_find;

use std::fmt;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

pub use union_find::UnionFind;

use crate::error::{Error, Result};
use crate::graph::{EdgeKey, GraphSnapshot, Label};
use crate::weights::EdgeWeights;

/// Distinct ascending thresholds with the edges entering at each.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Filtration {
    thresholds: Vec<f64>,
    batches: Vec<Vec<EdgeKey>>,
}

impl Filtration {
    pub fn thresholds(&self) -> &[f64] {
        &self.thresholds
    }

    pub fn batches(&self) -> &[Vec<EdgeKey>] {
        &self.batches
    }

    pub fn len(&self) -> usize {
        self.thresholds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.thresholds.is_empty()
    }
}

pub fn build_filtration(weights: &EdgeWeights) -> Filtration {
    let mut edges: Vec<(f64, EdgeKey)> = weights.iter().map(|(&k, &w)| (w, k)).collect();
    edges.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    let mut filt = Filtration::default();
    for (w, key) in edges {
        if filt.thresholds.last() == Some(&w) {
            filt.batches.last_mut().expect("batch per threshold").push(key);
        } else {
            filt.thresholds.push(w);
            filt.batches.push(vec![key]);
        }
    }
    filt
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum DescriptorKind {
    LabelHistogram,
    ComponentCount,
}

impl fmt::Display for DescriptorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(match self {
            DescriptorKind::LabelHistogram => "label-histogram",
            DescriptorKind::ComponentCount => "component-count",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DescriptorConfig {
    pub kind: DescriptorKind,
    /// Sorted labels; one histogram bin each.
    pub label_alphabet: Vec<Label>,
    /// Adds every node of the snapshot at the first threshold.
    pub include_isolated: bool,
}

impl DescriptorConfig {
    pub fn label_histogram(mut label_alphabet: Vec<Label>) -> Result<Self> {
        label_alphabet.sort_unstable();
        label_alphabet.dedup();
        if label_alphabet.is_empty() {
            return Err(Error::Config("label histogram needs a nonempty label alphabet".into()));
        }
        Ok(DescriptorConfig {
            kind: DescriptorKind::LabelHistogram,
            label_alphabet,
            include_isolated: false,
        })
    }

    pub fn component_count() -> Self {
        DescriptorConfig {
            kind: DescriptorKind::ComponentCount,
            label_alphabet: Vec::new(),
            include_isolated: false,
        }
    }

    pub fn with_isolated(mut self, include: bool) -> Self {
        self.include_isolated = include;
        self
    }

    pub fn dim(&self) -> usize {
        match self.kind {
            DescriptorKind::LabelHistogram => self.label_alphabet.len(),
            DescriptorKind::ComponentCount => 1,
        }
    }
}

/// Sparse step function from thresholds to descriptor vectors.
#[derive(Clone, Debug, PartialEq)]
pub struct FiltrationCurve {
    dim: usize,
    entries: Vec<(f64, Vec<f64>)>,
}

impl FiltrationCurve {
    /// Builds a curve from change points, validating ordering, dimension and
    /// that consecutive values differ.
    pub fn new(dim: usize, entries: Vec<(f64, Vec<f64>)>) -> Result<Self> {
        for (t, v) in &entries {
            if !t.is_finite() {
                return Err(Error::Format {
                    what: "filtration curve",
                    msg: format!("non-finite threshold {t}"),
                });
            }
            if v.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: v.len(),
                });
            }
        }
        for w in entries.windows(2) {
            if w[0].0 >= w[1].0 {
                return Err(Error::Format {
                    what: "filtration curve",
                    msg: format!("thresholds {} and {} are not increasing", w[0].0, w[1].0),
                });
            }
            if w[0].1 == w[1].1 {
                return Err(Error::Format {
                    what: "filtration curve",
                    msg: format!("repeated value at threshold {}", w[1].0),
                });
            }
        }
        Ok(FiltrationCurve { dim, entries })
    }

    pub fn empty(dim: usize) -> Self {
        FiltrationCurve {
            dim,
            entries: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[(f64, Vec<f64>)] {
        &self.entries
    }

    pub fn thresholds(&self) -> impl Iterator<Item = f64> + '_ {
        self.entries.iter().map(|(t, _)| *t)
    }

    /// Value at `threshold` under step semantics (zero before the first entry).
    pub fn value_at(&self, threshold: f64) -> Vec<f64> {
        let pos = self.entries.partition_point(|(t, _)| *t <= threshold);
        match pos {
            0 => vec![0.0; self.dim],
            p => self.entries[p - 1].1.clone(),
        }
    }

    /// Debug dump: header `threshold,f_0,...,f_{d-1}` and one row per change point.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("threshold");
        for k in 0..self.dim {
            let _ = write!(out, ",f_{k}");
        }
        out.push('\n');
        for (t, v) in &self.entries {
            let _ = write!(out, "{t:?}");
            for x in v {
                let _ = write!(out, ",{x:?}");
            }
            out.push('\n');
        }
        out
    }
}

/// Evaluates `desc` on every subgraph of `filt`, keeping change points only.
pub fn evaluate_curve(g: &GraphSnapshot, filt: &Filtration, desc: &DescriptorConfig) -> Result<FiltrationCurve> {
    let dim = desc.dim();
    if desc.kind == DescriptorKind::LabelHistogram && dim == 0 {
        return Err(Error::Config("label histogram needs a nonempty label alphabet".into()));
    }
    let bins: Vec<usize> = match desc.kind {
        DescriptorKind::LabelHistogram => g
            .nodes()
            .iter()
            .map(|&(_, label)| {
                desc.label_alphabet
                    .binary_search(&label)
                    .map_err(|_| Error::UnknownLabel(label))
            })
            .collect::<Result<_>>()?,
        DescriptorKind::ComponentCount => Vec::new(),
    };

    let mut state = Sweep {
        appeared: vec![false; g.node_count()],
        uf: UnionFind::new(g.node_count()),
        components: 0,
        histogram: vec![0usize; dim],
        bins,
    };
    let mut entries: Vec<(f64, Vec<f64>)> = Vec::new();
    for (step, (&threshold, batch)) in filt.thresholds.iter().zip(&filt.batches).enumerate() {
        if step == 0 && desc.include_isolated {
            for idx in 0..g.node_count() {
                state.appear(idx);
            }
        }
        for &(u, v) in batch {
            let (a, b) = match (g.index_of(u), g.index_of(v)) {
                (Some(a), Some(b)) => (a, b),
                _ => {
                    return Err(Error::InvalidGraph(format!(
                        "filtration edge ({u}, {v}) is not in the snapshot"
                    )))
                }
            };
            state.appear(a);
            state.appear(b);
            if state.uf.union(a, b) {
                state.components -= 1;
            }
        }
        let value = state.value(desc.kind);
        if entries.last().map(|(_, prev)| prev != &value).unwrap_or(true) {
            entries.push((threshold, value));
        }
    }
    Ok(FiltrationCurve { dim, entries })
}

struct Sweep {
    appeared: Vec<bool>,
    uf: UnionFind,
    components: usize,
    histogram: Vec<usize>,
    bins: Vec<usize>,
}

impl Sweep {
    fn appear(&mut self, idx: usize) {
        if !self.appeared[idx] {
            self.appeared[idx] = true;
            self.components += 1;
            if let Some(&bin) = self.bins.get(idx) {
                self.histogram[bin] += 1;
            }
        }
    }

    fn value(&self, kind: DescriptorKind) -> Vec<f64> {
        match kind {
            DescriptorKind::LabelHistogram => self.histogram.iter().map(|&c| c as f64).collect(),
            DescriptorKind::ComponentCount => vec![self.components as f64],
        }
    }
}
