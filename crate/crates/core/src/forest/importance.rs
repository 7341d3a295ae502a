use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use super::{ForestModel, TreeNode};
use crate::dataset::EncodedMatrix;
use crate::error::{Error, Result};
use crate::metrics;
use crate::seed;

/// Per feature: sum over splits on it of `(n_node / n_root) * decrease`,
/// averaged over trees and normalized to sum to 1. All zeros when no tree
/// split at all.
pub(crate) fn gini_importance(trees: &[TreeNode], n_features: usize) -> Vec<f64> {
    let mut totals = vec![0.0; n_features];
    for tree in trees {
        let root = tree.n_samples() as f64;
        let mut per_tree = vec![0.0; n_features];
        tree.for_each_split(&mut |feature, n_samples, decrease| {
            per_tree[feature] += n_samples as f64 / root * decrease;
        });
        for (total, value) in totals.iter_mut().zip(per_tree) {
            *total += value;
        }
    }
    let n_trees = trees.len().max(1) as f64;
    totals.iter_mut().for_each(|t| *t /= n_trees);
    let sum: f64 = totals.iter().sum();
    if sum > 0.0 {
        totals.iter_mut().for_each(|t| *t /= sum);
    }
    totals
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ImportanceMetric {
    /// Balanced accuracy at the operating point chosen on the unpermuted
    /// scores of the evaluation matrix.
    BalancedAccuracy,
    Auc,
}

struct Scorer<'a> {
    labels: &'a [bool],
    metric: ImportanceMetric,
    threshold: f64,
}

impl Scorer<'_> {
    fn score(&self, scores: &[f64]) -> Result<f64> {
        match self.metric {
            ImportanceMetric::Auc => metrics::auc(scores, self.labels),
            ImportanceMetric::BalancedAccuracy => {
                metrics::balanced_accuracy(&metrics::confusion_at_threshold(scores, self.labels, self.threshold)?)
            }
        }
    }
}

/// Mean drop in `metric` when one column at a time is shuffled, over
/// `n_repeats` shuffles per column. Shuffle `r` of feature `j` draws from
/// `seed::mix(seed::mix(seed, j), r)`.
pub fn permutation_importance(
    model: &ForestModel,
    matrix: &EncodedMatrix,
    metric: ImportanceMetric,
    seed: u64,
    n_repeats: usize,
) -> Result<Vec<f64>> {
    if n_repeats == 0 {
        return Err(Error::InvalidArgument("n_repeats must be at least 1".into()));
    }
    let baseline_scores = model.predict_matrix(matrix)?;
    let threshold = metrics::select_operating_point(&baseline_scores, matrix.labels())?.threshold;
    let scorer = Scorer {
        labels: matrix.labels(),
        metric,
        threshold,
    };
    let baseline = scorer.score(&baseline_scores)?;

    (0..matrix.n_cols())
        .map(|feature| {
            let original: Vec<f64> = matrix.column(feature).collect();
            let feature_seed = seed::mix(seed, feature as u64);
            let mut total_drop = 0.0;
            for repeat in 0..n_repeats {
                let mut shuffled = original.clone();
                shuffled.shuffle(&mut seed::rng(seed::mix(feature_seed, repeat as u64)));
                let permuted = matrix.with_column(feature, &shuffled);
                total_drop += baseline - scorer.score(&model.predict_matrix(&permuted)?)?;
            }
            Ok(total_drop / n_repeats as f64)
        })
        .collect()
}
