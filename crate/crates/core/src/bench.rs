//! Scaling benchmark: surface construction, training and inference time and
//! on-disk surface size as the number of graphs grows.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::time::Instant;

use serde::Serialize;

use crate::classify::{stratified_folds, train, ForestConfig};
use crate::error::{Error, Result};
use crate::filtration::DescriptorKind;
use crate::graph::save_dataset;
use crate::pipeline::{descriptor_for, transform_dataset, SURFACES_DIR};
use crate::seed;
use crate::synth::{generate_synthetic, SynthConfig};
use crate::weights::WeightConfig;

pub const BENCH_HEADER: &str = "n_graphs,cumulative_construction_seconds,train_seconds,inference_seconds,cumulative_surface_bytes,gram_matrix_bytes";

#[derive(Clone, Debug)]
pub struct BenchConfig {
    pub sizes: Vec<usize>,
    /// `n_graphs` is overridden by each size.
    pub synth: SynthConfig,
    pub weights: WeightConfig,
    pub descriptor: DescriptorKind,
    pub forest: ForestConfig,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BenchRecord {
    pub n_graphs: usize,
    pub cumulative_construction_seconds: f64,
    pub train_seconds: f64,
    pub inference_seconds: f64,
    /// Total size of the written `.fsurf` files.
    pub cumulative_surface_bytes: u64,
    /// Size a dense `n x n` f64 Gram matrix would need; computed, not built.
    pub gram_matrix_bytes: u64,
}

impl BenchRecord {
    pub fn csv_row(&self) -> String {
        format!(
            "{},{:.3},{:.3},{:.3},{},{}",
            self.n_graphs,
            self.cumulative_construction_seconds,
            self.train_seconds,
            self.inference_seconds,
            self.cumulative_surface_bytes,
            self.gram_matrix_bytes
        )
    }
}

pub fn bench_csv(records: &[BenchRecord]) -> String {
    let mut out = String::from(BENCH_HEADER);
    out.push('\n');
    for r in records {
        let _ = writeln!(out, "{}", r.csv_row());
    }
    out
}

fn millis(start: Instant) -> f64 {
    start.elapsed().as_millis() as f64 / 1000.0
}

/// Runs every size in turn, writing datasets and surfaces under `workdir/n<size>/`.
/// Inference is timed on a stratified held-out tenth.
pub fn run_bench(cfg: &BenchConfig, workdir: &Path) -> Result<Vec<BenchRecord>> {
    if cfg.sizes.is_empty() {
        return Err(Error::Config("no benchmark sizes given".into()));
    }
    let mut records = Vec::with_capacity(cfg.sizes.len());
    for &n in &cfg.sizes {
        let synth = SynthConfig {
            n_graphs: n,
            ..cfg.synth.clone()
        };
        let ds = generate_synthetic(&synth)?;
        let dir = workdir.join(format!("n{n}"));
        save_dataset(&ds, dir.join("data"))?;

        let start = Instant::now();
        let desc = descriptor_for(&ds, cfg.descriptor, false)?;
        let transformed = transform_dataset(&ds, &cfg.weights, &desc)?;
        let surf_dir = dir.join("transformed");
        transformed.save(&surf_dir)?;
        let construction = millis(start);
        let bytes = dir_bytes(&surf_dir.join(SURFACES_DIR))?;

        let features = transformed.feature_matrix()?;
        let folds = stratified_folds(features.labels(), 10, seed::derive(cfg.forest.seed, &[n as u64]))?;
        let (test, train_idx): (Vec<usize>, Vec<usize>) = (0..features.n_samples()).partition(|&i| folds[i] == 0);
        let start = Instant::now();
        let model = train(&features.subset(&train_idx), &cfg.forest)?;
        let train_seconds = millis(start);
        let test_set = features.subset(&test);
        let start = Instant::now();
        let predicted = model.predict_all(&test_set)?;
        let inference_seconds = millis(start);
        let correct = predicted.iter().zip(test_set.labels()).filter(|(p, y)| p == y).count();
        log::info!("n={n}: held-out accuracy {correct}/{}", test.len());

        let record = BenchRecord {
            n_graphs: n,
            cumulative_construction_seconds: construction,
            train_seconds,
            inference_seconds,
            cumulative_surface_bytes: bytes,
            gram_matrix_bytes: 8 * (n as u64) * (n as u64),
        };
        log::info!("bench row: {}", record.csv_row());
        records.push(record);
    }
    Ok(records)
}

fn dir_bytes(dir: &Path) -> Result<u64> {
    let mut total = 0;
    for entry in fs::read_dir(dir).map_err(|e| Error::io(dir, e))? {
        let entry = entry.map_err(|e| Error::io(dir, e))?;
        total += entry.metadata().map_err(|e| Error::io(entry.path(), e))?.len();
    }
    Ok(total)
}
