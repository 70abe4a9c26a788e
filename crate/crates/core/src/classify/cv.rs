use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use super::forest::{train, ForestConfig};
use crate::error::{Error, Result};
use crate::graph::ClassLabel;
use crate::seed;
use crate::surface::FeatureMatrix;

/// Accuracies (percent) of repeated stratified k-fold cross-validation.
///
/// `std` is the population standard deviation over all
/// `repetitions * folds` accuracies.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CvReport {
    pub mean: f64,
    pub std: f64,
    /// `folds[r][k]`: accuracy of fold `k` in repetition `r`.
    pub folds: Vec<Vec<f64>>,
    pub n_folds: usize,
    pub repetitions: usize,
    pub std_convention: String,
}

impl CvReport {
    pub fn from_accuracies(folds: Vec<Vec<f64>>) -> Self {
        let all: Vec<f64> = folds.iter().flatten().copied().collect();
        let (mean, std) = mean_std(&all);
        CvReport {
            mean,
            std,
            n_folds: folds.first().map_or(0, Vec::len),
            repetitions: folds.len(),
            folds,
            std_convention: "population".into(),
        }
    }

    /// `mean ± std` with two decimals.
    pub fn summary(&self) -> String {
        format!("{:.2} ± {:.2}", self.mean, self.std)
    }
}

pub(crate) fn mean_std(xs: &[f64]) -> (f64, f64) {
    if xs.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / n;
    (mean, var.sqrt())
}

/// Fold id of every sample: samples of each class are shuffled, then dealt
/// round-robin, continuing the rotation from one class to the next.
pub fn stratified_folds(labels: &[ClassLabel], folds: usize, seed: u64) -> Result<Vec<usize>> {
    if folds < 2 {
        return Err(Error::Config(format!("need at least 2 folds, got {folds}")));
    }
    let mut by_class: BTreeMap<ClassLabel, Vec<usize>> = BTreeMap::new();
    for (i, &l) in labels.iter().enumerate() {
        by_class.entry(l).or_default().push(i);
    }
    if let Some((&class, members)) = by_class.iter().find(|(_, m)| m.len() < folds) {
        return Err(Error::ClassTooSmall {
            class,
            count: members.len(),
            folds,
        });
    }
    let mut assignment = vec![0; labels.len()];
    let mut next = 0;
    for (&class, members) in by_class.iter_mut() {
        let mut rng = seed::rng(seed, &[u64::from(class)]);
        members.shuffle(&mut rng);
        for &i in members.iter() {
            assignment[i] = next % folds;
            next += 1;
        }
    }
    Ok(assignment)
}

pub fn cross_validate(
    features: &FeatureMatrix,
    cfg: &ForestConfig,
    folds: usize,
    repetitions: usize,
) -> Result<CvReport> {
    if repetitions == 0 {
        return Err(Error::Config("need at least one repetition".into()));
    }
    let mut all = Vec::with_capacity(repetitions);
    for rep in 0..repetitions {
        let assignment = stratified_folds(features.labels(), folds, seed::derive(cfg.seed, &[rep as u64]))?;
        let mut accs = Vec::with_capacity(folds);
        for fold in 0..folds {
            let (test, train_idx): (Vec<usize>, Vec<usize>) =
                (0..features.n_samples()).partition(|&i| assignment[i] == fold);
            let fold_cfg = ForestConfig {
                seed: seed::derive(cfg.seed, &[rep as u64, fold as u64, 1]),
                ..cfg.clone()
            };
            let model = train(&features.subset(&train_idx), &fold_cfg)?;
            let test_set = features.subset(&test);
            let predicted = model.predict_all(&test_set)?;
            let correct = predicted.iter().zip(test_set.labels()).filter(|(p, y)| p == y).count();
            accs.push(100.0 * correct as f64 / test.len() as f64);
        }
        all.push(accs);
    }
    Ok(CvReport::from_accuracies(all))
}
