use rand::seq::index;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::graph::ClassLabel;
use crate::surface::FeatureMatrix;

#[derive(Clone, Debug, PartialEq)]
pub enum TreeNode {
    Leaf {
        class: ClassLabel,
    },
    /// Samples with `x[feature] <= threshold` go left.
    Split {
        feature: usize,
        threshold: f64,
        left: usize,
        right: usize,
    },
}

/// Axis-aligned binary classification tree; node 0 is the root.
#[derive(Clone, Debug, PartialEq)]
pub struct DecisionTree {
    nodes: Vec<TreeNode>,
}

impl DecisionTree {
    pub fn from_nodes(nodes: Vec<TreeNode>) -> Self {
        assert!(!nodes.is_empty(), "tree needs a root");
        DecisionTree { nodes }
    }

    pub fn nodes(&self) -> &[TreeNode] {
        &self.nodes
    }

    pub fn predict(&self, x: &[f64]) -> ClassLabel {
        let mut at = 0;
        loop {
            match self.nodes[at] {
                TreeNode::Leaf { class } => return class,
                TreeNode::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => at = if x[feature] <= threshold { left } else { right },
            }
        }
    }

    pub fn depth(&self) -> usize {
        let mut best = 0;
        let mut stack = vec![(0usize, 0usize)];
        while let Some((at, d)) = stack.pop() {
            best = best.max(d);
            if let TreeNode::Split { left, right, .. } = self.nodes[at] {
                stack.push((left, d + 1));
                stack.push((right, d + 1));
            }
        }
        best
    }
}

pub(crate) struct GrowParams {
    pub max_depth: Option<usize>,
    pub min_samples_split: usize,
    pub features_per_split: usize,
}

/// Gini criterion summed over a node, `n * gini = n - sum(c^2) / n`.
fn scaled_gini(counts: &[usize], n: usize) -> f64 {
    if n == 0 {
        return 0.0;
    }
    let sq: f64 = counts.iter().map(|&c| (c * c) as f64).sum();
    n as f64 - sq / n as f64
}

/// Majority class; ties go to the smallest class index.
fn majority(counts: &[usize]) -> usize {
    let mut best = 0;
    for (i, &c) in counts.iter().enumerate() {
        if c > counts[best] {
            best = i;
        }
    }
    best
}

#[derive(Clone, Copy, Debug)]
struct Candidate {
    impurity: f64,
    feature: usize,
    threshold: f64,
}

impl Candidate {
    fn better_than(&self, other: &Option<Candidate>) -> bool {
        match other {
            None => true,
            Some(o) => {
                self.impurity < o.impurity
                    || (self.impurity == o.impurity
                        && (self.feature < o.feature || (self.feature == o.feature && self.threshold < o.threshold)))
            }
        }
    }
}

struct Grower<'a> {
    data: &'a FeatureMatrix,
    /// Class index per sample row.
    targets: &'a [usize],
    classes: &'a [ClassLabel],
    params: &'a GrowParams,
    scratch: Vec<(f64, usize)>,
}

impl Grower<'_> {
    fn counts(&self, samples: &[usize]) -> Vec<usize> {
        let mut counts = vec![0; self.classes.len()];
        for &s in samples {
            counts[self.targets[s]] += 1;
        }
        counts
    }

    /// Best split of `samples` on `feature`, if the feature is not constant.
    fn best_on_feature(&mut self, samples: &[usize], feature: usize) -> Option<Candidate> {
        self.scratch.clear();
        self.scratch
            .extend(samples.iter().map(|&s| (self.data.value(s, feature), self.targets[s])));
        self.scratch.sort_by(|a, b| a.0.total_cmp(&b.0));
        let n = self.scratch.len();
        let total = {
            let mut c = vec![0; self.classes.len()];
            for &(_, k) in &self.scratch {
                c[k] += 1;
            }
            c
        };
        let mut left = vec![0; self.classes.len()];
        let mut best: Option<Candidate> = None;
        for i in 0..n - 1 {
            let (v, k) = self.scratch[i];
            left[k] += 1;
            let next = self.scratch[i + 1].0;
            if v >= next {
                continue;
            }
            let right: Vec<usize> = total.iter().zip(&left).map(|(t, l)| t - l).collect();
            let nl = i + 1;
            let impurity = scaled_gini(&left, nl) + scaled_gini(&right, n - nl);
            let mut threshold = v + (next - v) / 2.0;
            if !(threshold >= v && threshold < next) {
                threshold = v;
            }
            let cand = Candidate {
                impurity,
                feature,
                threshold,
            };
            if best.is_none_or(|b| cand.impurity < b.impurity) {
                best = Some(cand);
            }
        }
        best
    }

    fn find_split(&mut self, samples: &[usize], rng: &mut impl Rng) -> Option<Candidate> {
        let n_features = self.data.n_features();
        let k = self
            .params
            .features_per_split
            .clamp(1, n_features.max(1))
            .min(n_features);
        let first = index::sample(rng, n_features, k).into_vec();
        let mut best = None;
        for &f in &first {
            if let Some(c) = self.best_on_feature(samples, f) {
                if c.better_than(&best) {
                    best = Some(c);
                }
            }
        }
        if best.is_some() || k == n_features {
            return best;
        }
        // every sampled feature was constant here; keep drawing
        let mut rest: Vec<usize> = {
            let mut seen = vec![false; n_features];
            for &f in &first {
                seen[f] = true;
            }
            (0..n_features).filter(|&f| !seen[f]).collect()
        };
        rest.shuffle(rng);
        for f in rest {
            if let Some(c) = self.best_on_feature(samples, f) {
                return Some(c);
            }
        }
        None
    }
}

/// Grows one tree on `samples` (row indices, duplicates allowed).
pub(crate) fn grow(
    data: &FeatureMatrix,
    targets: &[usize],
    classes: &[ClassLabel],
    samples: Vec<usize>,
    params: &GrowParams,
    rng: &mut impl Rng,
) -> DecisionTree {
    let mut grower = Grower {
        data,
        targets,
        classes,
        params,
        scratch: Vec::with_capacity(samples.len()),
    };
    let mut nodes = vec![TreeNode::Leaf { class: classes[0] }];
    // (node slot, samples, depth)
    let mut stack = vec![(0usize, samples, 0usize)];
    while let Some((slot, samples, depth)) = stack.pop() {
        let counts = grower.counts(&samples);
        let leaf = TreeNode::Leaf {
            class: classes[majority(&counts)],
        };
        let pure = counts.iter().filter(|&&c| c > 0).count() <= 1;
        let depth_capped = params.max_depth.is_some_and(|d| depth >= d);
        if pure || depth_capped || samples.len() < params.min_samples_split {
            nodes[slot] = leaf;
            continue;
        }
        let Some(split) = grower.find_split(&samples, rng) else {
            nodes[slot] = leaf;
            continue;
        };
        let (left, right): (Vec<usize>, Vec<usize>) = samples
            .iter()
            .partition(|&&s| data.value(s, split.feature) <= split.threshold);
        debug_assert!(!left.is_empty() && !right.is_empty());
        debug_assert!(
            split.impurity <= scaled_gini(&counts, samples.len()) + 1e-9,
            "split increased impurity"
        );
        let li = nodes.len();
        nodes.push(leaf.clone());
        nodes.push(leaf);
        nodes[slot] = TreeNode::Split {
            feature: split.feature,
            threshold: split.threshold,
            left: li,
            right: li + 1,
        };
        stack.push((li + 1, right, depth + 1));
        stack.push((li, left, depth + 1));
    }
    DecisionTree { nodes }
}
