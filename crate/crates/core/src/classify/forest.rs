use rand::Rng;
use rayon::prelude::*;

use super::tree::{grow, DecisionTree, GrowParams};
use crate::error::{Error, Result};
use crate::graph::ClassLabel;
use crate::seed;
use crate::surface::FeatureMatrix;

/// How many features each split considers.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FeatureSubset {
    /// `floor(sqrt(D))`, at least one.
    Sqrt,
    All,
    Count(usize),
}

impl FeatureSubset {
    pub fn resolve(self, n_features: usize) -> usize {
        let k = match self {
            FeatureSubset::Sqrt => (n_features as f64).sqrt().floor() as usize,
            FeatureSubset::All => n_features,
            FeatureSubset::Count(k) => k.min(n_features),
        };
        k.max(1)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ForestConfig {
    pub n_trees: usize,
    pub max_depth: Option<usize>,
    pub min_samples_split: usize,
    pub features_per_split: FeatureSubset,
    pub seed: u64,
}

impl Default for ForestConfig {
    fn default() -> Self {
        ForestConfig {
            n_trees: 1000,
            max_depth: None,
            min_samples_split: 2,
            features_per_split: FeatureSubset::Sqrt,
            seed: 0,
        }
    }
}

impl ForestConfig {
    pub fn with_trees(n_trees: usize, seed: u64) -> Self {
        ForestConfig {
            n_trees,
            seed,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_trees == 0 {
            return Err(Error::Config("forest needs at least one tree".into()));
        }
        if self.min_samples_split < 2 {
            return Err(Error::Config("min-samples-split must be at least 2".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ForestModel {
    trees: Vec<DecisionTree>,
    n_features: usize,
    classes: Vec<ClassLabel>,
    seed: u64,
}

impl ForestModel {
    pub fn from_trees(trees: Vec<DecisionTree>, n_features: usize, classes: Vec<ClassLabel>, seed: u64) -> Self {
        ForestModel {
            trees,
            n_features,
            classes,
            seed,
        }
    }

    pub fn trees(&self) -> &[DecisionTree] {
        &self.trees
    }

    pub fn n_features(&self) -> usize {
        self.n_features
    }

    pub fn classes(&self) -> &[ClassLabel] {
        &self.classes
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Majority vote over trees; vote ties go to the smallest class label.
    pub fn predict(&self, x: &[f64]) -> Result<ClassLabel> {
        if x.len() != self.n_features {
            return Err(Error::DimensionMismatch {
                expected: self.n_features,
                got: x.len(),
            });
        }
        let mut votes = vec![0usize; self.classes.len()];
        for t in &self.trees {
            let c = t.predict(x);
            let pos = self.classes.binary_search(&c).expect("leaf class in alphabet");
            votes[pos] += 1;
        }
        let mut best = 0;
        for (i, &v) in votes.iter().enumerate() {
            if v > votes[best] {
                best = i;
            }
        }
        assert!(votes[best] > 0, "forest without trees");
        Ok(self.classes[best])
    }

    pub fn predict_all(&self, features: &FeatureMatrix) -> Result<Vec<ClassLabel>> {
        (0..features.n_samples())
            .into_par_iter()
            .map(|i| self.predict(features.row(i)))
            .collect()
    }
}

/// Fits a random forest: one bootstrap sample and one derived seed per tree.
pub fn train(features: &FeatureMatrix, cfg: &ForestConfig) -> Result<ForestModel> {
    cfg.validate()?;
    let mut classes: Vec<ClassLabel> = features.labels().to_vec();
    classes.sort_unstable();
    classes.dedup();
    if classes.len() < 2 {
        return Err(Error::SingleClass);
    }
    let targets: Vec<usize> = features
        .labels()
        .iter()
        .map(|l| classes.binary_search(l).expect("label collected above"))
        .collect();
    let n = features.n_samples();
    let params = GrowParams {
        max_depth: cfg.max_depth,
        min_samples_split: cfg.min_samples_split,
        features_per_split: cfg.features_per_split.resolve(features.n_features()),
    };
    let trees = (0..cfg.n_trees)
        .into_par_iter()
        .map(|t| {
            let mut rng = seed::rng(cfg.seed, &[t as u64]);
            let sample: Vec<usize> = (0..n).map(|_| rng.gen_range(0..n)).collect();
            grow(features, &targets, &classes, sample, &params, &mut rng)
        })
        .collect();
    Ok(ForestModel {
        trees,
        n_features: features.n_features(),
        classes,
        seed: cfg.seed,
    })
}
