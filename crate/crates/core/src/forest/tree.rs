//! CART classification trees with the Gini criterion.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::ForestConfig;
use crate::dataset::EncodedMatrix;
use crate::error::{Error, Result};

/// A node of a fitted tree. Samples go left iff `value <= threshold`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TreeNode {
    Internal {
        feature: usize,
        threshold: f64,
        n_samples: usize,
        /// Unweighted Gini decrease achieved by this split.
        impurity_decrease: f64,
        left: Box<TreeNode>,
        right: Box<TreeNode>,
    },
    Leaf {
        positive_fraction: f64,
        n_samples: usize,
    },
}

impl TreeNode {
    /// Routes `row` to a leaf and returns its positive fraction.
    pub fn predict(&self, row: &[f64]) -> f64 {
        let mut node = self;
        loop {
            match node {
                TreeNode::Internal {
                    feature,
                    threshold,
                    left,
                    right,
                    ..
                } => node = if row[*feature] <= *threshold { left } else { right },
                TreeNode::Leaf { positive_fraction, .. } => return *positive_fraction,
            }
        }
    }

    pub fn n_samples(&self) -> usize {
        match self {
            TreeNode::Internal { n_samples, .. } | TreeNode::Leaf { n_samples, .. } => *n_samples,
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            TreeNode::Internal { left, right, .. } => 1 + left.depth().max(right.depth()),
            TreeNode::Leaf { .. } => 0,
        }
    }

    pub fn n_leaves(&self) -> usize {
        match self {
            TreeNode::Internal { left, right, .. } => left.n_leaves() + right.n_leaves(),
            TreeNode::Leaf { .. } => 1,
        }
    }

    /// Calls `visit(feature, n_samples, impurity_decrease)` for every split.
    pub fn for_each_split(&self, visit: &mut impl FnMut(usize, usize, f64)) {
        if let TreeNode::Internal {
            feature,
            n_samples,
            impurity_decrease,
            left,
            right,
            ..
        } = self
        {
            visit(*feature, *n_samples, *impurity_decrease);
            left.for_each_split(visit);
            right.for_each_split(visit);
        }
    }
}

/// Binary Gini impurity `2p(1 - p)`.
pub fn gini_impurity(n_pos: usize, n_neg: usize) -> Result<f64> {
    let n = n_pos + n_neg;
    if n == 0 {
        return Err(Error::InvalidArgument("Gini impurity of an empty node".into()));
    }
    Ok(gini(n_pos, n_neg))
}

fn gini(n_pos: usize, n_neg: usize) -> f64 {
    let n = (n_pos + n_neg) as f64;
    let p = n_pos as f64 / n;
    2.0 * p * (1.0 - p)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Split {
    pub feature: usize,
    pub threshold: f64,
    pub impurity_decrease: f64,
}

/// A threshold `t` with `low <= t < high`.
fn split_point(low: f64, high: f64) -> f64 {
    let mid = low + (high - low) / 2.0;
    if mid >= low && mid < high {
        mid
    } else {
        low
    }
}

/// Weighted child impurity as an exact fraction: `n/2` times
/// `(n_L/n) I(L) + (n_R/n) I(R)` equals
/// `(lp*ln*n_R + rp*rn*n_L) / (n_L*n_R)`.
#[derive(Debug, Clone, Copy)]
struct ChildCost {
    numerator: u128,
    denominator: u128,
}

impl ChildCost {
    fn new(lp: usize, ln: usize, rp: usize, rn: usize) -> Self {
        let (nl, nr) = ((lp + ln) as u128, (rp + rn) as u128);
        ChildCost {
            numerator: (lp as u128) * (ln as u128) * nr + (rp as u128) * (rn as u128) * nl,
            denominator: nl * nr,
        }
    }

    fn less_than(&self, other: &ChildCost) -> bool {
        self.numerator * other.denominator < other.numerator * self.denominator
    }
}

/// Exhaustive Gini split search over `candidate_features`.
///
/// Thresholds are midpoints between consecutive distinct values among
/// `samples` (duplicates count with multiplicity). Only splits leaving at
/// least `min_samples_leaf` samples on each side are considered. Returns the
/// split with the largest impurity decrease, or `None` when no split
/// decreases impurity. Equal decreases go to the lowest feature index, then
/// the lowest threshold; comparisons are exact.
pub fn best_split(
    matrix: &EncodedMatrix,
    samples: &[usize],
    candidate_features: &[usize],
    min_samples_leaf: usize,
) -> Option<Split> {
    let labels = matrix.labels();
    let n = samples.len();
    let n_pos = samples.iter().filter(|&&s| labels[s]).count();
    let n_neg = n - n_pos;
    if n < 2 || n_pos == 0 || n_neg == 0 {
        return None;
    }
    let min_leaf = min_samples_leaf.max(1);

    let mut features = candidate_features.to_vec();
    features.sort_unstable();
    features.dedup();

    // Parent cost on the same scale as ChildCost: n/2 * I(parent) = P*N/n.
    let parent = ChildCost {
        numerator: (n_pos as u128) * (n_neg as u128),
        denominator: n as u128,
    };
    let mut best: Option<(ChildCost, Split, [usize; 4])> = None;
    let mut column: Vec<(f64, bool)> = Vec::with_capacity(n);
    for &feature in &features {
        column.clear();
        column.extend(samples.iter().map(|&s| (matrix.value(s, feature), labels[s])));
        column.sort_by(|a, b| a.0.total_cmp(&b.0));
        if column[0].0 == column[n - 1].0 {
            continue;
        }
        let (mut lp, mut ln) = (0usize, 0usize);
        for i in 0..n - 1 {
            if column[i].1 {
                lp += 1;
            } else {
                ln += 1;
            }
            if column[i].0 == column[i + 1].0 {
                continue;
            }
            let left = i + 1;
            if left < min_leaf || n - left < min_leaf {
                continue;
            }
            let cost = ChildCost::new(lp, ln, n_pos - lp, n_neg - ln);
            if !cost.less_than(&parent) {
                continue;
            }
            if best.as_ref().map_or(true, |(b, _, _)| cost.less_than(b)) {
                let split = Split {
                    feature,
                    threshold: split_point(column[i].0, column[i + 1].0),
                    impurity_decrease: 0.0,
                };
                best = Some((cost, split, [lp, ln, n_pos - lp, n_neg - ln]));
            }
        }
    }
    best.map(|(_, mut split, [lp, ln, rp, rn])| {
        let (nl, nr) = ((lp + ln) as f64, (rp + rn) as f64);
        let nf = n as f64;
        let decrease = gini(n_pos, n_neg) - nl / nf * gini(lp, ln) - nr / nf * gini(rp, rn);
        split.impurity_decrease = decrease.max(0.0);
        split
    })
}

/// Whether `feature` takes more than one value over `samples`.
fn varies(matrix: &EncodedMatrix, samples: &[usize], feature: usize) -> bool {
    let first = matrix.value(samples[0], feature);
    samples[1..].iter().any(|&s| matrix.value(s, feature) != first)
}

struct Grower<'a, R> {
    matrix: &'a EncodedMatrix,
    max_depth: Option<usize>,
    min_samples_leaf: usize,
    features_per_split: usize,
    rng: &'a mut R,
    feature_order: Vec<usize>,
}

impl<R: Rng> Grower<'_, R> {
    fn leaf(&self, samples: &[usize]) -> TreeNode {
        let labels = self.matrix.labels();
        let n_pos = samples.iter().filter(|&&s| labels[s]).count();
        TreeNode::Leaf {
            positive_fraction: n_pos as f64 / samples.len() as f64,
            n_samples: samples.len(),
        }
    }

    /// Draws features in random order, skipping those constant on
    /// `samples`, until `features_per_split` varying ones are found.
    fn draw_candidates(&mut self, samples: &[usize]) -> Vec<usize> {
        let n_features = self.feature_order.len();
        let mut candidates = Vec::with_capacity(self.features_per_split);
        for i in 0..n_features {
            let j = self.rng.gen_range(i..n_features);
            self.feature_order.swap(i, j);
            let feature = self.feature_order[i];
            if varies(self.matrix, samples, feature) {
                candidates.push(feature);
                if candidates.len() == self.features_per_split {
                    break;
                }
            }
        }
        candidates
    }

    fn grow(&mut self, samples: Vec<usize>, depth: usize) -> TreeNode {
        let labels = self.matrix.labels();
        let n_pos = samples.iter().filter(|&&s| labels[s]).count();
        let pure = n_pos == 0 || n_pos == samples.len();
        if pure
            || self.max_depth.is_some_and(|d| depth >= d)
            || samples.len() < 2 * self.min_samples_leaf
        {
            return self.leaf(&samples);
        }
        let candidates = self.draw_candidates(&samples);
        let Some(split) = best_split(self.matrix, &samples, &candidates, self.min_samples_leaf) else {
            return self.leaf(&samples);
        };
        let n_samples = samples.len();
        let (left, right): (Vec<usize>, Vec<usize>) = samples
            .into_iter()
            .partition(|&s| self.matrix.value(s, split.feature) <= split.threshold);
        TreeNode::Internal {
            feature: split.feature,
            threshold: split.threshold,
            n_samples,
            impurity_decrease: split.impurity_decrease,
            left: Box::new(self.grow(left, depth + 1)),
            right: Box::new(self.grow(right, depth + 1)),
        }
    }
}

/// Grows one tree on `samples` (row indices, duplicates allowed) using
/// `rng` for feature draws.
pub(crate) fn grow_tree<R: Rng>(
    matrix: &EncodedMatrix,
    samples: Vec<usize>,
    config: &ForestConfig,
    rng: &mut R,
) -> Result<TreeNode> {
    if samples.is_empty() {
        return Err(Error::InvalidArgument("cannot grow a tree on zero samples".into()));
    }
    let features_per_split = config.features_per_split.resolve(matrix.n_cols())?;
    let mut grower = Grower {
        matrix,
        max_depth: config.max_depth,
        min_samples_leaf: config.min_samples_leaf.max(1),
        features_per_split,
        rng,
        feature_order: (0..matrix.n_cols()).collect(),
    };
    Ok(grower.grow(samples, 0))
}

/// Fits a single tree on `sample_indices` with its own seeded generator.
/// Bootstrapping is left to the caller.
pub fn fit_tree(
    matrix: &EncodedMatrix,
    sample_indices: &[usize],
    config: &ForestConfig,
    tree_seed: u64,
) -> Result<TreeNode> {
    let mut rng = crate::seed::rng(tree_seed);
    grow_tree(matrix, sample_indices.to_vec(), config, &mut rng)
}
