//! A fully grown, unpruned binary decision-tree classifier over the labeled
//! grid. Points route left when `point[feature] <= threshold`. Growth stops
//! only at pure nodes, so the tree reproduces every training label exactly;
//! there are no depth or size knobs and no randomness.

use serde::{Deserialize, Serialize};

use crate::domain::Label;
use crate::error::{Error, Result};
use crate::grid::LabeledDataset;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TreeNode {
    Internal {
        feature_index: usize,
        threshold: f64,
        left: Box<TreeNode>,
        right: Box<TreeNode>,
    },
    Leaf {
        label: Label,
        count: usize,
    },
}

impl TreeNode {
    /// Routes `point` to a leaf and returns its label.
    pub fn predict(&self, point: &[f64]) -> Label {
        let mut node = self;
        loop {
            match node {
                TreeNode::Leaf { label, .. } => return *label,
                TreeNode::Internal {
                    feature_index,
                    threshold,
                    left,
                    right,
                } => {
                    node = if point[*feature_index] <= *threshold {
                        left
                    } else {
                        right
                    };
                }
            }
        }
    }

    pub fn leaf_count(&self) -> usize {
        match self {
            TreeNode::Leaf { .. } => 1,
            TreeNode::Internal { left, right, .. } => left.leaf_count() + right.leaf_count(),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            TreeNode::Leaf { .. } => 0,
            TreeNode::Internal { left, right, .. } => 1 + left.depth().max(right.depth()),
        }
    }
}

/// Trains the tree on the labeled grid.
///
/// At each impure node, the candidate thresholds are the midpoints between
/// consecutive distinct values of each feature among the node's points; the
/// split minimizing the weighted Gini impurity wins, with ties broken by
/// lowest feature index, then smallest threshold. Identical points with
/// different labels (possible only with a misbehaving external model) are
/// an error.
pub fn train(data: &LabeledDataset) -> Result<TreeNode> {
    if data.is_empty() {
        return Err(Error::Validation("cannot train on an empty dataset".into()));
    }
    let indices: Vec<u32> = (0..data.len() as u32).collect();
    grow(data, indices)
}

struct BestSplit {
    weighted_gini: f64,
    feature: usize,
    threshold: f64,
}

fn grow(data: &LabeledDataset, indices: Vec<u32>) -> Result<TreeNode> {
    let inside = indices
        .iter()
        .filter(|&&i| data.label(i as usize) == Label::Inside)
        .count();
    if inside == 0 || inside == indices.len() {
        let label = if inside == 0 {
            Label::Outside
        } else {
            Label::Inside
        };
        return Ok(TreeNode::Leaf {
            label,
            count: indices.len(),
        });
    }

    let best = find_best_split(data, &indices).ok_or(Error::ContradictoryData)?;
    let (left_idx, right_idx): (Vec<u32>, Vec<u32>) = indices
        .into_iter()
        .partition(|&i| data.point(i as usize)[best.feature] <= best.threshold);
    debug_assert!(!left_idx.is_empty() && !right_idx.is_empty());
    let left = grow(data, left_idx)?;
    let right = grow(data, right_idx)?;
    Ok(TreeNode::Internal {
        feature_index: best.feature,
        threshold: best.threshold,
        left: Box::new(left),
        right: Box::new(right),
    })
}

fn find_best_split(data: &LabeledDataset, indices: &[u32]) -> Option<BestSplit> {
    let total = indices.len();
    let total_inside = indices
        .iter()
        .filter(|&&i| data.label(i as usize) == Label::Inside)
        .count();
    let mut best: Option<BestSplit> = None;

    for feature in 0..data.dims() {
        // Sort the node's values along this feature; candidate thresholds
        // sit between consecutive distinct values.
        let mut order: Vec<u32> = indices.to_vec();
        order.sort_by(|&a, &b| {
            data.point(a as usize)[feature]
                .partial_cmp(&data.point(b as usize)[feature])
                .expect("grid values are never NaN")
        });

        let mut left_count = 0usize;
        let mut left_inside = 0usize;
        let mut k = 0;
        while k < order.len() {
            let value = data.point(order[k] as usize)[feature];
            // Consume the run of equal values.
            while k < order.len() && data.point(order[k] as usize)[feature] == value {
                if data.label(order[k] as usize) == Label::Inside {
                    left_inside += 1;
                }
                left_count += 1;
                k += 1;
            }
            if k == order.len() {
                break;
            }
            let next = data.point(order[k] as usize)[feature];
            let mid = value + (next - value) / 2.0;
            // Prefer the midpoint's 12-digit decimal rounding when it stays
            // strictly between the neighbors (same partition, cleaner box
            // bounds); for adjacent floats the midpoint can round onto a
            // neighbor, where `value` induces the same partition.
            let snapped = crate::grid::round_to_decimal(mid);
            let threshold = if snapped > value && snapped < next {
                snapped
            } else if mid > value && mid < next {
                mid
            } else {
                value
            };
            let right_count = total - left_count;
            let right_inside = total_inside - left_inside;
            let score = left_count as f64 * gini(left_inside, left_count)
                + right_count as f64 * gini(right_inside, right_count);
            let better = match &best {
                None => true,
                Some(b) => score < b.weighted_gini,
            };
            if better {
                best = Some(BestSplit {
                    weighted_gini: score,
                    feature,
                    threshold,
                });
            }
        }
    }
    best
}

#[inline]
fn gini(inside: usize, count: usize) -> f64 {
    let p = inside as f64 / count as f64;
    1.0 - p * p - (1.0 - p) * (1.0 - p)
}

/// Fraction of training points the tree classifies correctly; a fully grown
/// tree scores exactly 1.
pub fn training_accuracy(tree: &TreeNode, data: &LabeledDataset) -> f64 {
    let correct = (0..data.len())
        .filter(|&i| tree.predict(data.point(i)) == data.label(i))
        .count();
    correct as f64 / data.len() as f64
}
