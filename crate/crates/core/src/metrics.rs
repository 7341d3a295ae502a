//! Confusion counts, balanced accuracy, operating points and ROC/AUC.
//!
//! Decision rule everywhere: a case is predicted positive iff
//! `score >= threshold`.

use std::cmp::Ordering;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionCounts {
    pub tp: usize,
    pub fp: usize,
    pub tn: usize,
    #[serde(rename = "fn")]
    pub fn_: usize,
}

impl ConfusionCounts {
    pub fn positives(&self) -> usize {
        self.tp + self.fn_
    }

    pub fn negatives(&self) -> usize {
        self.tn + self.fp
    }

    pub fn total(&self) -> usize {
        self.positives() + self.negatives()
    }

    /// `None` when there are no positive labels.
    pub fn sensitivity(&self) -> Option<f64> {
        (self.positives() > 0).then(|| self.tp as f64 / self.positives() as f64)
    }

    /// `None` when there are no negative labels.
    pub fn specificity(&self) -> Option<f64> {
        (self.negatives() > 0).then(|| self.tn as f64 / self.negatives() as f64)
    }

    /// Raw accuracy; `None` for an empty table.
    pub fn accuracy(&self) -> Option<f64> {
        (self.total() > 0).then(|| (self.tp + self.tn) as f64 / self.total() as f64)
    }
}

fn check_inputs(scores: &[f64], labels: &[bool]) -> Result<()> {
    if scores.len() != labels.len() {
        return Err(Error::InvalidArgument(format!(
            "{} scores but {} labels",
            scores.len(),
            labels.len()
        )));
    }
    if scores.is_empty() {
        return Err(Error::InvalidArgument("no scores".into()));
    }
    if scores.iter().any(|s| s.is_nan()) {
        return Err(Error::InvalidArgument("NaN score".into()));
    }
    Ok(())
}

fn class_totals(labels: &[bool]) -> (usize, usize) {
    let positives = labels.iter().filter(|l| **l).count();
    (positives, labels.len() - positives)
}

fn require_both_classes(labels: &[bool]) -> Result<(usize, usize)> {
    let (p, n) = class_totals(labels);
    if p == 0 || n == 0 {
        return Err(Error::SingleClass(format!("{p} positive and {n} negative labels")));
    }
    Ok((p, n))
}

pub fn confusion_at_threshold(scores: &[f64], labels: &[bool], threshold: f64) -> Result<ConfusionCounts> {
    check_inputs(scores, labels)?;
    Ok(confusion_from_predictions(
        scores.iter().map(|s| *s >= threshold),
        labels.iter().copied(),
    ))
}

pub fn confusion_from_predictions(
    predictions: impl IntoIterator<Item = bool>,
    labels: impl IntoIterator<Item = bool>,
) -> ConfusionCounts {
    let mut c = ConfusionCounts::default();
    for (predicted, actual) in predictions.into_iter().zip(labels) {
        match (predicted, actual) {
            (true, true) => c.tp += 1,
            (true, false) => c.fp += 1,
            (false, false) => c.tn += 1,
            (false, true) => c.fn_ += 1,
        }
    }
    c
}

/// Mean of sensitivity and specificity.
pub fn balanced_accuracy(c: &ConfusionCounts) -> Result<f64> {
    match (c.sensitivity(), c.specificity()) {
        (Some(sens), Some(spec)) => Ok((sens + spec) / 2.0),
        _ => Err(Error::SingleClass(format!(
            "balanced accuracy needs both classes ({} positive, {} negative)",
            c.positives(),
            c.negatives()
        ))),
    }
}

/// Decision threshold chosen on training scores.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OperatingPoint {
    pub threshold: f64,
    pub train_balanced_accuracy: f64,
}

/// A threshold strictly above `low` and at most `high` (`low < high`).
fn midpoint(low: f64, high: f64) -> f64 {
    let mid = low + (high - low) / 2.0;
    if mid > low && mid <= high {
        mid
    } else {
        high
    }
}

fn sorted_pairs(scores: &[f64], labels: &[bool]) -> Vec<(f64, bool)> {
    let mut pairs: Vec<(f64, bool)> = scores.iter().copied().zip(labels.iter().copied()).collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    pairs
}

/// Picks the threshold maximizing balanced accuracy on the given (training)
/// scores.
///
/// Candidates are a sentinel below the minimum score, the midpoints between
/// consecutive distinct scores, and a sentinel above the maximum. Ties go to
/// the smallest threshold.
pub fn select_operating_point(train_scores: &[f64], train_labels: &[bool]) -> Result<OperatingPoint> {
    check_inputs(train_scores, train_labels)?;
    let (p, n) = require_both_classes(train_labels)?;
    let pairs = sorted_pairs(train_scores, train_labels);

    // Balanced accuracy times 2PN is tp*N + tn*P: compare in integers.
    let objective = |tp: usize, tn: usize| (tp as u128) * (n as u128) + (tn as u128) * (p as u128);

    let mut tp = p;
    let mut tn = 0;
    let mut best_threshold = pairs[0].0 - 1.0;
    let mut best = objective(tp, tn);

    let mut i = 0;
    while i < pairs.len() {
        let value = pairs[i].0;
        while i < pairs.len() && pairs[i].0 == value {
            if pairs[i].1 {
                tp -= 1;
            } else {
                tn += 1;
            }
            i += 1;
        }
        let threshold = match pairs.get(i) {
            Some(next) => midpoint(value, next.0),
            None => value + 1.0,
        };
        let score = objective(tp, tn);
        if score > best {
            best = score;
            best_threshold = threshold;
        }
    }
    Ok(OperatingPoint {
        threshold: best_threshold,
        train_balanced_accuracy: best as f64 / (2.0 * p as f64 * n as f64),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RocPoint {
    pub fpr: f64,
    pub tpr: f64,
}

/// ROC curve from `(0, 0)` to `(1, 1)`, one point per distinct score.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RocCurve {
    pub points: Vec<RocPoint>,
}

impl RocCurve {
    /// Writes `fpr,tpr` rows with a header.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut csv = csv::Writer::from_writer(writer);
        csv.write_record(["fpr", "tpr"])?;
        for p in &self.points {
            csv.write_record([p.fpr.to_string(), p.tpr.to_string()])?;
        }
        csv.flush()?;
        Ok(())
    }
}

/// ROC curve and trapezoidal AUC. Tied scores form a single diagonal step, so
/// the area equals `P(score_pos > score_neg) + P(score_pos == score_neg) / 2`.
pub fn roc_and_auc(scores: &[f64], labels: &[bool]) -> Result<(RocCurve, f64)> {
    check_inputs(scores, labels)?;
    let (p, n) = require_both_classes(labels)?;
    let mut pairs = sorted_pairs(scores, labels);
    pairs.reverse();

    let mut points = vec![RocPoint { fpr: 0.0, tpr: 0.0 }];
    let (mut tp, mut fp) = (0usize, 0usize);
    // Twice the area in units of 1/(P*N).
    let mut doubled_area: u128 = 0;
    let mut i = 0;
    while i < pairs.len() {
        let value = pairs[i].0;
        let (tp_before, fp_before) = (tp, fp);
        while i < pairs.len() && pairs[i].0.total_cmp(&value) == Ordering::Equal {
            if pairs[i].1 {
                tp += 1;
            } else {
                fp += 1;
            }
            i += 1;
        }
        doubled_area += (fp - fp_before) as u128 * (tp + tp_before) as u128;
        points.push(RocPoint {
            fpr: fp as f64 / n as f64,
            tpr: tp as f64 / p as f64,
        });
    }
    let auc = doubled_area as f64 / (2.0 * p as f64 * n as f64);
    Ok((RocCurve { points }, auc))
}

pub fn auc(scores: &[f64], labels: &[bool]) -> Result<f64> {
    roc_and_auc(scores, labels).map(|(_, a)| a)
}
