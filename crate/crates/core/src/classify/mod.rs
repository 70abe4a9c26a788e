//! Random forest over flattened surface vectors and its cross-validation.
//!
//! Trees use Gini impurity with midpoint thresholds, split candidates
//! compared by (impurity, feature index, threshold). Every tree draws a
//! bootstrap sample from its own seed derived from the forest seed, so
//! serial and parallel training produce identical models.

mod cv;
mod forest;
mod persist;
mod tree;

pub use cv::{cross_validate, stratified_folds, CvReport};
pub use forest::{train, FeatureSubset, ForestConfig, ForestModel};
pub use tree::{DecisionTree, TreeNode};
