//! Filtration surfaces: per-timestep curves standardized over one shared
//! weight index, stacked in time and flattened into feature vectors.
//!
//! Dense values are laid out time-major, then threshold, then descriptor
//! dimension: entry `(t, j, k)` lives at `t * m * d + j * d + k`.

mod fsurf;

pub use fsurf::{decode_curves, encode_curves, FSURF_EXTENSION};

use crate::error::{Error, Result};
use crate::filtration::FiltrationCurve;
use crate::graph::ClassLabel;

/// Sorted, deduplicated union of every curve threshold in a dataset.
#[derive(Clone, Debug, PartialEq)]
pub struct SharedWeightIndex {
    thresholds: Vec<f64>,
}

impl SharedWeightIndex {
    pub fn build<'a>(curves: impl IntoIterator<Item = &'a FiltrationCurve>) -> Result<Self> {
        let mut seen_any = false;
        let mut thresholds = Vec::new();
        for c in curves {
            seen_any = true;
            thresholds.extend(c.thresholds());
        }
        if !seen_any {
            return Err(Error::EmptyIndex);
        }
        Ok(Self::from_unsorted(thresholds))
    }

    pub fn from_thresholds(thresholds: Vec<f64>) -> Result<Self> {
        if let Some(t) = thresholds.iter().find(|t| !t.is_finite()) {
            return Err(Error::Config(format!("non-finite threshold {t}")));
        }
        if thresholds.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Config("index thresholds must be strictly increasing".into()));
        }
        Ok(SharedWeightIndex { thresholds })
    }

    fn from_unsorted(mut thresholds: Vec<f64>) -> Self {
        thresholds.sort_by(f64::total_cmp);
        thresholds.dedup_by(|a, b| a.total_cmp(b).is_eq());
        SharedWeightIndex { thresholds }
    }

    pub fn thresholds(&self) -> &[f64] {
        &self.thresholds
    }

    pub fn len(&self) -> usize {
        self.thresholds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.thresholds.is_empty()
    }

    pub fn position(&self, threshold: f64) -> Option<usize> {
        self.thresholds.binary_search_by(|t| t.total_cmp(&threshold)).ok()
    }

    /// This index extended with the thresholds of `curve`.
    pub fn union(&self, curve: &FiltrationCurve) -> Self {
        let mut all = self.thresholds.clone();
        all.extend(curve.thresholds());
        Self::from_unsorted(all)
    }
}

/// Forward-fills `curve` onto `idx`: row `j` holds the curve value at
/// `idx[j]`. Every curve threshold must be in the index.
pub fn standardize(curve: &FiltrationCurve, idx: &SharedWeightIndex) -> Result<Vec<Vec<f64>>> {
    let mut flat = vec![0.0; idx.len() * curve.dim()];
    standardize_into(curve, idx, &mut flat)?;
    Ok(flat
        .chunks(curve.dim().max(1))
        .take(idx.len())
        .map(<[f64]>::to_vec)
        .collect())
}

fn standardize_into(curve: &FiltrationCurve, idx: &SharedWeightIndex, out: &mut [f64]) -> Result<()> {
    if let Some(t) = curve.thresholds().find(|&t| idx.position(t).is_none()) {
        return Err(Error::MissingThreshold(t));
    }
    project_into(curve, idx, out);
    Ok(())
}

/// Like [`standardize`] but tolerates curve thresholds absent from `idx`,
/// evaluating the step function at each index threshold. Used to place
/// unseen graphs onto a trained model's index.
pub fn project(curve: &FiltrationCurve, idx: &SharedWeightIndex) -> Vec<Vec<f64>> {
    let d = curve.dim();
    let mut flat = vec![0.0; idx.len() * d];
    project_into(curve, idx, &mut flat);
    flat.chunks(d.max(1)).take(idx.len()).map(<[f64]>::to_vec).collect()
}

fn project_into(curve: &FiltrationCurve, idx: &SharedWeightIndex, out: &mut [f64]) {
    let d = curve.dim();
    let entries = curve.entries();
    let mut p = 0;
    for (j, &t) in idx.thresholds().iter().enumerate() {
        while p < entries.len() && entries[p].0 <= t {
            p += 1;
        }
        let row = &mut out[j * d..(j + 1) * d];
        match p {
            0 => row.fill(0.0),
            _ => row.copy_from_slice(&entries[p - 1].1),
        }
    }
}

/// Dense `n_std x m x d` tensor of one dynamic graph.
#[derive(Clone, Debug, PartialEq)]
pub struct FiltrationSurface {
    graph_id: String,
    class: ClassLabel,
    /// Real timesteps; slices at `len..n_std` repeat the last real one.
    len: usize,
    n_std: usize,
    m: usize,
    d: usize,
    values: Vec<f64>,
}

impl FiltrationSurface {
    /// Stacks the standardized curves of one graph, padding in time to `n_std`.
    pub fn assemble(
        graph_id: impl Into<String>,
        class: ClassLabel,
        curves: &[FiltrationCurve],
        idx: &SharedWeightIndex,
        n_std: usize,
    ) -> Result<Self> {
        Self::assemble_with(graph_id, class, curves, idx, n_std, |c, out| {
            standardize_into(c, idx, out)
        })
    }

    /// Like [`FiltrationSurface::assemble`] but via [`project`], for curves
    /// that did not contribute to `idx`.
    pub fn assemble_projected(
        graph_id: impl Into<String>,
        class: ClassLabel,
        curves: &[FiltrationCurve],
        idx: &SharedWeightIndex,
        n_std: usize,
    ) -> Result<Self> {
        Self::assemble_with(graph_id, class, curves, idx, n_std, |c, out| {
            project_into(c, idx, out);
            Ok(())
        })
    }

    fn assemble_with(
        graph_id: impl Into<String>,
        class: ClassLabel,
        curves: &[FiltrationCurve],
        idx: &SharedWeightIndex,
        n_std: usize,
        mut fill: impl FnMut(&FiltrationCurve, &mut [f64]) -> Result<()>,
    ) -> Result<Self> {
        let len = curves.len();
        if len == 0 {
            return Err(Error::InvalidGraph("surface needs at least one curve".into()));
        }
        if n_std < len {
            return Err(Error::TooShort { n_std, len });
        }
        let d = curves[0].dim();
        if let Some(c) = curves.iter().find(|c| c.dim() != d) {
            return Err(Error::DimensionMismatch {
                expected: d,
                got: c.dim(),
            });
        }
        let m = idx.len();
        let slice = m * d;
        let mut values = vec![0.0; n_std * slice];
        for (t, curve) in curves.iter().enumerate() {
            fill(curve, &mut values[t * slice..(t + 1) * slice])?;
        }
        let mut s = FiltrationSurface {
            graph_id: graph_id.into(),
            class,
            len,
            n_std,
            m,
            d,
            values,
        };
        s.pad_time();
        Ok(s)
    }

    fn pad_time(&mut self) {
        let slice = self.m * self.d;
        let (real, pad) = self.values.split_at_mut(self.len * slice);
        let last = &real[(self.len - 1) * slice..];
        for chunk in pad.chunks_mut(slice.max(1)) {
            chunk.copy_from_slice(&last[..chunk.len()]);
        }
    }

    pub fn graph_id(&self) -> &str {
        &self.graph_id
    }

    pub fn class(&self) -> ClassLabel {
        self.class
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// `(n_std, m, d)`.
    pub fn shape(&self) -> (usize, usize, usize) {
        (self.n_std, self.m, self.d)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, t: usize, j: usize, k: usize) -> f64 {
        self.values[t * self.m * self.d + j * self.d + k]
    }

    /// Flattened feature vector, time-major.
    pub fn vectorize(&self) -> Vec<f64> {
        self.values.clone()
    }

    /// Inverse of [`FiltrationSurface::vectorize`].
    pub fn from_vector(
        graph_id: impl Into<String>,
        class: ClassLabel,
        len: usize,
        (n_std, m, d): (usize, usize, usize),
        values: Vec<f64>,
    ) -> Result<Self> {
        if values.len() != n_std * m * d {
            return Err(Error::DimensionMismatch {
                expected: n_std * m * d,
                got: values.len(),
            });
        }
        if len == 0 || len > n_std {
            return Err(Error::TooShort { n_std, len });
        }
        Ok(FiltrationSurface {
            graph_id: graph_id.into(),
            class,
            len,
            n_std,
            m,
            d,
            values,
        })
    }

    /// Re-expresses this surface, built over `old`, on the superset index
    /// `new` by forward-filling the inserted threshold columns.
    pub fn expand_to_index(&self, old: &SharedWeightIndex, new: &SharedWeightIndex) -> Result<Self> {
        if old.len() != self.m {
            return Err(Error::DimensionMismatch {
                expected: self.m,
                got: old.len(),
            });
        }
        if let Some(&t) = old.thresholds().iter().find(|&&t| new.position(t).is_none()) {
            return Err(Error::MissingThreshold(t));
        }
        let (d, m_new) = (self.d, new.len());
        // source column for each new column: old column, or the previous new column
        let mut source: Vec<Option<usize>> = Vec::with_capacity(m_new);
        let mut p = 0;
        for &t in new.thresholds() {
            if p < old.len() && old.thresholds()[p].total_cmp(&t).is_eq() {
                source.push(Some(p));
                p += 1;
            } else {
                source.push(None);
            }
        }
        let mut values = vec![0.0; self.n_std * m_new * d];
        for t in 0..self.n_std {
            let src = &self.values[t * self.m * d..(t + 1) * self.m * d];
            let dst = &mut values[t * m_new * d..(t + 1) * m_new * d];
            for (j, s) in source.iter().enumerate() {
                match s {
                    Some(oj) => dst[j * d..(j + 1) * d].copy_from_slice(&src[oj * d..(oj + 1) * d]),
                    None if j > 0 => dst.copy_within((j - 1) * d..j * d, j * d),
                    None => {}
                }
            }
        }
        Ok(FiltrationSurface {
            values,
            m: m_new,
            ..self.clone()
        })
    }

    /// Online update: adds `curve` as the next real timestep, growing the
    /// index by its thresholds. The result equals a full rebuild over the
    /// enlarged curve set.
    pub fn append_timestep(
        &self,
        curve: &FiltrationCurve,
        idx: &SharedWeightIndex,
    ) -> Result<(FiltrationSurface, SharedWeightIndex)> {
        if curve.dim() != self.d {
            return Err(Error::DimensionMismatch {
                expected: self.d,
                got: curve.dim(),
            });
        }
        let new_idx = idx.union(curve);
        let mut s = self.expand_to_index(idx, &new_idx)?;
        let slice = s.m * s.d;
        if s.len == s.n_std {
            s.n_std += 1;
            s.values.resize(s.n_std * slice, 0.0);
        }
        let t = s.len;
        standardize_into(curve, &new_idx, &mut s.values[t * slice..(t + 1) * slice])?;
        s.len += 1;
        s.pad_time();
        Ok((s, new_idx))
    }
}

/// Row-per-graph feature vectors with aligned columns.
#[derive(Clone, Debug, PartialEq)]
pub struct FeatureMatrix {
    n_features: usize,
    data: Vec<f64>,
    labels: Vec<ClassLabel>,
    ids: Vec<String>,
}

impl FeatureMatrix {
    pub fn new(rows: Vec<Vec<f64>>, labels: Vec<ClassLabel>) -> Result<Self> {
        let ids = (0..rows.len()).map(|i| i.to_string()).collect();
        Self::with_ids(rows, labels, ids)
    }

    pub fn with_ids(rows: Vec<Vec<f64>>, labels: Vec<ClassLabel>, ids: Vec<String>) -> Result<Self> {
        if rows.len() != labels.len() || rows.len() != ids.len() {
            return Err(Error::DimensionMismatch {
                expected: rows.len(),
                got: labels.len().min(ids.len()),
            });
        }
        let n_features = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(rows.len() * n_features);
        for r in &rows {
            if r.len() != n_features {
                return Err(Error::DimensionMismatch {
                    expected: n_features,
                    got: r.len(),
                });
            }
            data.extend_from_slice(r);
        }
        Ok(FeatureMatrix {
            n_features,
            data,
            labels,
            ids,
        })
    }

    pub fn from_surfaces(surfaces: &[FiltrationSurface]) -> Result<Self> {
        let shape = surfaces.first().map(FiltrationSurface::shape);
        if let Some(s) = surfaces.iter().find(|s| Some(s.shape()) != shape) {
            let (n, m, d) = shape.unwrap_or_default();
            let (n2, m2, d2) = s.shape();
            return Err(Error::DimensionMismatch {
                expected: n * m * d,
                got: n2 * m2 * d2,
            });
        }
        let n_features = shape.map_or(0, |(n, m, d)| n * m * d);
        let mut data = Vec::with_capacity(surfaces.len() * n_features);
        for s in surfaces {
            data.extend_from_slice(s.values());
        }
        Ok(FeatureMatrix {
            n_features,
            data,
            labels: surfaces.iter().map(FiltrationSurface::class).collect(),
            ids: surfaces.iter().map(|s| s.graph_id().to_string()).collect(),
        })
    }

    pub fn n_samples(&self) -> usize {
        self.labels.len()
    }

    pub fn n_features(&self) -> usize {
        self.n_features
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n_features..(i + 1) * self.n_features]
    }

    pub fn value(&self, i: usize, f: usize) -> f64 {
        self.data[i * self.n_features + f]
    }

    pub fn labels(&self) -> &[ClassLabel] {
        &self.labels
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    /// Rows `indices` as a new matrix.
    pub fn subset(&self, indices: &[usize]) -> Self {
        let mut data = Vec::with_capacity(indices.len() * self.n_features);
        for &i in indices {
            data.extend_from_slice(self.row(i));
        }
        FeatureMatrix {
            n_features: self.n_features,
            data,
            labels: indices.iter().map(|&i| self.labels[i]).collect(),
            ids: indices.iter().map(|&i| self.ids[i].clone()).collect(),
        }
    }
}
