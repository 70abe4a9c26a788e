//! Versioned binary encoding of a [`ForestModel`], little-endian.

use super::forest::ForestModel;
use super::tree::{DecisionTree, TreeNode};
use crate::error::{Error, Result};

const MAGIC: &[u8; 8] = b"FSRFORST";
const VERSION: u32 = 1;

fn corrupt(msg: impl Into<String>) -> Error {
    Error::Format {
        what: "forest model",
        msg: msg.into(),
    }
}

impl ForestModel {
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::new();
        out.extend_from_slice(MAGIC);
        out.extend_from_slice(&VERSION.to_le_bytes());
        out.extend_from_slice(&(self.n_features() as u64).to_le_bytes());
        out.extend_from_slice(&self.seed().to_le_bytes());
        out.extend_from_slice(&(self.classes().len() as u32).to_le_bytes());
        for c in self.classes() {
            out.extend_from_slice(&c.to_le_bytes());
        }
        out.extend_from_slice(&(self.trees().len() as u32).to_le_bytes());
        for tree in self.trees() {
            out.extend_from_slice(&(tree.nodes().len() as u32).to_le_bytes());
            for node in tree.nodes() {
                match *node {
                    TreeNode::Leaf { class } => {
                        out.push(0);
                        out.extend_from_slice(&class.to_le_bytes());
                    }
                    TreeNode::Split {
                        feature,
                        threshold,
                        left,
                        right,
                    } => {
                        out.push(1);
                        out.extend_from_slice(&(feature as u64).to_le_bytes());
                        out.extend_from_slice(&threshold.to_le_bytes());
                        out.extend_from_slice(&(left as u32).to_le_bytes());
                        out.extend_from_slice(&(right as u32).to_le_bytes());
                    }
                }
            }
        }
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let mut pos = 0usize;
        let mut take = |n: usize| -> Result<&[u8]> {
            let end = pos + n;
            let s = bytes
                .get(pos..end)
                .ok_or_else(|| corrupt(format!("truncated at byte {pos}")))?;
            pos = end;
            Ok(s)
        };
        if take(8)? != MAGIC {
            return Err(corrupt("bad magic"));
        }
        let u32_at = |s: &[u8]| u32::from_le_bytes(s.try_into().expect("4 bytes"));
        let u64_at = |s: &[u8]| u64::from_le_bytes(s.try_into().expect("8 bytes"));
        let version = u32_at(take(4)?);
        if version != VERSION {
            return Err(corrupt(format!("unsupported version {version}")));
        }
        let n_features = u64_at(take(8)?) as usize;
        let seed = u64_at(take(8)?);
        let n_classes = u32_at(take(4)?) as usize;
        let mut classes = Vec::with_capacity(n_classes.min(1024));
        for _ in 0..n_classes {
            classes.push(u32_at(take(4)?));
        }
        if classes.windows(2).any(|w| w[0] >= w[1]) {
            return Err(corrupt("class alphabet not sorted"));
        }
        let n_trees = u32_at(take(4)?) as usize;
        let mut trees = Vec::with_capacity(n_trees.min(1 << 16));
        for _ in 0..n_trees {
            let n_nodes = u32_at(take(4)?) as usize;
            if n_nodes == 0 {
                return Err(corrupt("empty tree"));
            }
            let mut nodes = Vec::with_capacity(n_nodes.min(1 << 20));
            for _ in 0..n_nodes {
                let node = match take(1)?[0] {
                    0 => {
                        let class = u32_at(take(4)?);
                        if classes.binary_search(&class).is_err() {
                            return Err(corrupt(format!("leaf class {class} not in alphabet")));
                        }
                        TreeNode::Leaf { class }
                    }
                    1 => {
                        let feature = u64_at(take(8)?) as usize;
                        let threshold = f64::from_le_bytes(take(8)?.try_into().expect("8 bytes"));
                        let left = u32_at(take(4)?) as usize;
                        let right = u32_at(take(4)?) as usize;
                        if feature >= n_features || left >= n_nodes || right >= n_nodes {
                            return Err(corrupt("split references out of range"));
                        }
                        TreeNode::Split {
                            feature,
                            threshold,
                            left,
                            right,
                        }
                    }
                    tag => return Err(corrupt(format!("unknown node tag {tag}"))),
                };
                nodes.push(node);
            }
            trees.push(DecisionTree::from_nodes(nodes));
        }
        if pos != bytes.len() {
            return Err(corrupt("trailing bytes"));
        }
        Ok(ForestModel::from_trees(trees, n_features, classes, seed))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::{train, ForestConfig};
    use crate::surface::FeatureMatrix;

    #[test]
    fn model_round_trip() {
        let fm = FeatureMatrix::new(
            vec![vec![0.0, 3.0], vec![0.5, 1.0], vec![1.0, 2.0], vec![1.5, 0.0]],
            vec![0, 0, 2, 2],
        )
        .unwrap();
        let model = train(&fm, &ForestConfig::with_trees(7, 3)).unwrap();
        let bytes = model.to_bytes();
        assert_eq!(ForestModel::from_bytes(&bytes).unwrap(), model);
        assert!(ForestModel::from_bytes(&bytes[..bytes.len() - 2]).is_err());
        let mut bad = bytes;
        bad[8] = 9;
        assert!(ForestModel::from_bytes(&bad).is_err());
    }
}
