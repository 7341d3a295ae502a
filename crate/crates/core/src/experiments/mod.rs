//! Repeated evaluations and the analyses built on them.
//!
//! Every run derives its randomness from `seed::mix(base_seed, run)`: the
//! run seed drives the random split, and `seed::mix(run_seed, 0)` seeds the
//! model. Runs are independent, so they may execute on the rayon pool; the
//! assembled reports are identical to serial execution.

mod case_study;
mod config;
mod eval;
mod gains;
mod ranking;
pub mod report;
mod selectors;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dataset::{random_split, retrodiction_split, EncodedMatrix, FeatureSetSpec, PolicyCase, SplitPlan};
use crate::dataset::DEFAULT_CUTOFF_YEAR;
use crate::error::Result;
use crate::forest::{fit_forest_with, Execution, ForestConfig};
use crate::logistic::{self, LogisticConfig};
use crate::metrics::{self, ConfusionCounts, OperatingPoint};
use crate::seed;

pub use case_study::{nonlinearity_case_study, CaseStudyPoint, CaseStudyReport, Region, RegionCounts, DEFAULT_PIVOT};
pub use config::{ExperimentConfig, FeatureSetChoice};
pub use eval::{run_feature_set_eval, EvalReport, RunResult};
pub use gains::{gain_per_ig, subgroup_accuracy_gain, GainReport, IgGain, DEFAULT_MIN_TEST_CASES};
pub use ranking::{
    build_set_c, correlation, ig_outcome_correlation, rank_igs_by_domain, Correlation, DomainRanking,
    DomainRankingRow, SetCSelection, DEFAULT_RANKING_SPLITS, DEFAULT_SET_C_SIZE,
};
pub use selectors::{compare_selectors, Selector, SelectorCell, SelectorComparison, SelectorGain, SelectorSplit};

/// Share of cases used for training in a random draw.
pub const DEFAULT_TRAIN_FRACTION: f64 = 0.67;
/// Random draws per evaluation.
pub const DEFAULT_RANDOM_RUNS: usize = 25;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    RandomDraw,
    Retrodiction,
}

impl Regime {
    pub fn default_runs(self) -> usize {
        match self {
            Regime::RandomDraw => DEFAULT_RANDOM_RUNS,
            Regime::Retrodiction => 1,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Regime::RandomDraw => "random_draw",
            Regime::Retrodiction => "retrodiction",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelKind {
    Forest,
    Logistic,
}

impl ModelKind {
    pub fn label(self) -> &'static str {
        match self {
            ModelKind::Forest => "forest",
            ModelKind::Logistic => "logistic",
        }
    }
}

/// Knobs shared by every experiment.
///
/// `forest.seed` is ignored: model seeds are derived per run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Settings {
    pub forest: ForestConfig,
    pub logistic: LogisticConfig,
    pub train_fraction: f64,
    pub cutoff_year: i32,
    /// Not part of any report: results do not depend on it.
    #[serde(skip)]
    pub execution: Execution,
}

impl Default for Settings {
    fn default() -> Self {
        Settings {
            forest: ForestConfig::default(),
            logistic: LogisticConfig::default(),
            train_fraction: DEFAULT_TRAIN_FRACTION,
            cutoff_year: DEFAULT_CUTOFF_YEAR,
            execution: Execution::Parallel,
        }
    }
}

/// Mean and sample standard deviation (`n - 1` denominator; 0 when `n = 1`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeanStd {
    pub mean: f64,
    pub std: f64,
    pub n: usize,
}

impl MeanStd {
    /// `None` for an empty slice.
    pub fn of(values: &[f64]) -> Option<MeanStd> {
        let n = values.len();
        if n == 0 {
            return None;
        }
        let mean = values.iter().sum::<f64>() / n as f64;
        let std = if n > 1 {
            (values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1) as f64).sqrt()
        } else {
            0.0
        };
        Some(MeanStd { mean, std, n })
    }

    /// `mean ± std` after multiplying by `scale`.
    pub fn display_scaled(&self, scale: f64, decimals: usize) -> String {
        format!("{:.*} ± {:.*}", decimals, self.mean * scale, decimals, self.std * scale)
    }
}

pub(crate) fn run_seed(base_seed: u64, run: usize) -> u64 {
    seed::mix(base_seed, run as u64)
}

pub(crate) fn model_seed(run_seed: u64) -> u64 {
    seed::mix(run_seed, 0)
}

/// Maps `f` over `0..n`, on the rayon pool when allowed. Output order is
/// always `0..n`.
pub(crate) fn map_units<T, F>(n: usize, execution: Execution, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(usize) -> Result<T> + Sync + Send,
{
    match execution {
        Execution::Serial => (0..n).map(f).collect(),
        Execution::Parallel => (0..n).into_par_iter().map(f).collect(),
    }
}

/// Cases every spec can encode, so that row `i` of each encoding is case
/// `i` of the result.
pub(crate) fn eligible_cases(cases: &[PolicyCase], specs: &[&FeatureSetSpec]) -> Vec<PolicyCase> {
    let kept: Vec<PolicyCase> = cases
        .iter()
        .filter(|c| specs.iter().all(|s| s.accepts(c)))
        .cloned()
        .collect();
    if kept.len() < cases.len() {
        log::warn!("skipping {} case(s) without p90", cases.len() - kept.len());
    }
    kept
}

pub(crate) fn plan_split(cases: &[PolicyCase], regime: Regime, settings: &Settings, run_seed: u64) -> Result<SplitPlan> {
    match regime {
        Regime::RandomDraw => random_split(cases.len(), settings.train_fraction, run_seed),
        Regime::Retrodiction => retrodiction_split(cases, settings.cutoff_year),
    }
}

pub(crate) struct Scores {
    pub train: Vec<f64>,
    pub test: Vec<f64>,
}

/// Fits `kind` on `train` and scores both matrices.
pub(crate) fn fit_scores(
    kind: ModelKind,
    train: &EncodedMatrix,
    test: &EncodedMatrix,
    settings: &Settings,
    model_seed: u64,
) -> Result<Scores> {
    match kind {
        ModelKind::Forest => {
            let model = fit_forest_with(train, &settings.forest.with_seed(model_seed), settings.execution)?;
            Ok(Scores {
                train: model.predict_matrix(train)?,
                test: model.predict_matrix(test)?,
            })
        }
        ModelKind::Logistic => {
            let model = logistic::fit(train, &settings.logistic)?;
            Ok(Scores {
                train: model.predict_matrix(train)?,
                test: model.predict_matrix(test)?,
            })
        }
    }
}

/// Normalized Gini importances of a forest fitted on `train`.
pub(crate) fn fit_scores_forest_importance(train: &EncodedMatrix, settings: &Settings, model_seed: u64) -> Result<Vec<f64>> {
    let model = fit_forest_with(train, &settings.forest.with_seed(model_seed), settings.execution)?;
    Ok(model.gini_importance().to_vec())
}

/// Test-set performance at the operating point chosen on training scores.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Evaluation {
    pub operating_point: OperatingPoint,
    pub confusion: ConfusionCounts,
    pub balanced_accuracy: f64,
    pub auc: f64,
}

pub(crate) fn evaluate(scores: &Scores, train_labels: &[bool], test_labels: &[bool]) -> Result<Evaluation> {
    let operating_point = metrics::select_operating_point(&scores.train, train_labels)?;
    let confusion = metrics::confusion_at_threshold(&scores.test, test_labels, operating_point.threshold)?;
    Ok(Evaluation {
        operating_point,
        confusion,
        balanced_accuracy: metrics::balanced_accuracy(&confusion)?,
        auc: metrics::auc(&scores.test, test_labels)?,
    })
}
