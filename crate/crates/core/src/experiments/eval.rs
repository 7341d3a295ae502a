use serde::{Deserialize, Serialize};

use super::{eligible_cases, evaluate, fit_scores, map_units, model_seed, plan_split, run_seed, Evaluation, MeanStd, ModelKind, Regime, Settings};
use crate::dataset::{encode, FeatureSetId, FeatureSetSpec, PolicyCase};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunResult {
    pub run: usize,
    /// Seeds the split (random draw) and, through one more mix, the model.
    pub run_seed: u64,
    pub model_seed: u64,
    pub n_train: usize,
    pub n_test: usize,
    #[serde(flatten)]
    pub evaluation: Evaluation,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub feature_set_id: FeatureSetId,
    pub feature_set: FeatureSetSpec,
    pub column_names: Vec<String>,
    pub regime: Regime,
    pub model_kind: ModelKind,
    pub base_seed: u64,
    pub settings: Settings,
    pub skipped_missing_p90: usize,
    pub runs: Vec<RunResult>,
    pub balanced_accuracy: MeanStd,
    pub auc: MeanStd,
}

impl EvalReport {
    /// Recomputes the aggregates from the per-run entries.
    pub fn recompute(&self) -> (MeanStd, MeanStd) {
        let bal: Vec<f64> = self.runs.iter().map(|r| r.evaluation.balanced_accuracy).collect();
        let auc: Vec<f64> = self.runs.iter().map(|r| r.evaluation.auc).collect();
        (MeanStd::of(&bal).expect("runs"), MeanStd::of(&auc).expect("runs"))
    }
}

/// Splits, fits on the training side, picks the operating point on training
/// scores and evaluates on the test side, `n_runs` times.
///
/// Random draws use a fresh split per run. Retrodiction has one fixed split;
/// extra runs only refit the model with new seeds.
pub fn run_feature_set_eval(
    cases: &[PolicyCase],
    spec: &FeatureSetSpec,
    regime: Regime,
    model_kind: ModelKind,
    n_runs: usize,
    base_seed: u64,
    settings: &Settings,
) -> Result<EvalReport> {
    spec.validate()?;
    if n_runs == 0 {
        return Err(Error::InvalidArgument("n_runs must be at least 1".into()));
    }
    let all = cases.len();
    let cases = eligible_cases(cases, &[spec]);
    let skipped_missing_p90 = all - cases.len();
    let matrix = encode(&cases, spec)?;

    let runs = map_units(n_runs, settings.execution, |run| {
        let run_seed = run_seed(base_seed, run);
        let plan = plan_split(&cases, regime, settings, run_seed)?;
        let train = matrix.select_rows(&plan.train);
        let test = matrix.select_rows(&plan.test);
        let model_seed = model_seed(run_seed);
        let scores = fit_scores(model_kind, &train, &test, settings, model_seed)?;
        Ok(RunResult {
            run,
            run_seed,
            model_seed,
            n_train: plan.train.len(),
            n_test: plan.test.len(),
            evaluation: evaluate(&scores, train.labels(), test.labels())?,
        })
    })?;

    let mut report = EvalReport {
        feature_set_id: spec.id,
        feature_set: spec.clone(),
        column_names: matrix.column_names().to_vec(),
        regime,
        model_kind,
        base_seed,
        settings: settings.clone(),
        skipped_missing_p90,
        runs,
        balanced_accuracy: MeanStd { mean: 0.0, std: 0.0, n: 0 },
        auc: MeanStd { mean: 0.0, std: 0.0, n: 0 },
    };
    (report.balanced_accuracy, report.auc) = report.recompute();
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiments::testing::planted_cases;
    use crate::forest::{Execution, ForestConfig};
    use rand::seq::SliceRandom;

    fn quick() -> Settings {
        Settings {
            forest: ForestConfig { n_trees: 25, ..ForestConfig::default() },
            ..Settings::default()
        }
    }

    #[test]
    fn separable_data_scores_near_perfect() {
        // Outcome is decided by the first interest group alone.
        let mut cases = planted_cases(300, &[0], 3);
        for c in &mut cases {
            if c.ig_alignments[0] == 0 {
                c.ig_alignments[0] = if c.outcome { 1 } else { -1 };
            }
        }
        for kind in [ModelKind::Forest, ModelKind::Logistic] {
            let report = run_feature_set_eval(&cases, &FeatureSetSpec::set_b(), Regime::RandomDraw, kind, 4, 1, &quick()).unwrap();
            assert_eq!(report.runs.len(), 4);
            assert!(report.balanced_accuracy.mean > 0.97, "{kind:?} {}", report.balanced_accuracy.mean);
            assert!(report.auc.mean > 0.97, "{kind:?} {}", report.auc.mean);
        }
    }

    #[test]
    fn shuffled_labels_are_near_chance() {
        let mut cases = planted_cases(600, &[0, 1], 5);
        let mut outcomes: Vec<bool> = cases.iter().map(|c| c.outcome).collect();
        outcomes.shuffle(&mut crate::seed::rng(99));
        for (c, o) in cases.iter_mut().zip(outcomes) {
            c.outcome = o;
        }
        let report =
            run_feature_set_eval(&cases, &FeatureSetSpec::set_a(), Regime::RandomDraw, ModelKind::Forest, 8, 2, &quick()).unwrap();
        assert!((report.balanced_accuracy.mean - 0.5).abs() < 0.08, "{}", report.balanced_accuracy.mean);
    }

    #[test]
    fn runs_have_distinct_seeds_and_aggregates_recompute() {
        let cases = planted_cases(200, &[2], 7);
        let report =
            run_feature_set_eval(&cases, &FeatureSetSpec::set_d(), Regime::RandomDraw, ModelKind::Forest, 6, 11, &quick()).unwrap();
        let mut seeds: Vec<u64> = report.runs.iter().map(|r| r.run_seed).collect();
        seeds.sort_unstable();
        seeds.dedup();
        assert_eq!(seeds.len(), 6);
        assert_eq!(report.recompute(), (report.balanced_accuracy, report.auc));
    }

    #[test]
    fn retrodiction_defaults_to_one_run_on_the_cutoff_split() {
        let cases = planted_cases(220, &[2], 8);
        let regime = Regime::Retrodiction;
        let report = run_feature_set_eval(&cases, &FeatureSetSpec::set_b(), regime, ModelKind::Logistic, regime.default_runs(), 0, &quick()).unwrap();
        assert_eq!(report.runs.len(), 1);
        let expected_test = cases.iter().filter(|c| c.year >= 1997).count();
        assert_eq!(report.runs[0].n_test, expected_test);
    }

    #[test]
    fn serial_and_parallel_reports_match() {
        let cases = planted_cases(150, &[4], 9);
        let mut settings = quick();
        settings.execution = Execution::Serial;
        let serial = run_feature_set_eval(&cases, &FeatureSetSpec::set_b(), Regime::RandomDraw, ModelKind::Forest, 3, 5, &settings).unwrap();
        settings.execution = Execution::Parallel;
        let parallel = run_feature_set_eval(&cases, &FeatureSetSpec::set_b(), Regime::RandomDraw, ModelKind::Forest, 3, 5, &settings).unwrap();
        // `execution` is not serialized, so the written reports are identical.
        assert_eq!(serde_json::to_string(&serial).unwrap(), serde_json::to_string(&parallel).unwrap());
        assert_eq!(serial.runs, parallel.runs);
    }

    #[test]
    fn missing_p90_cases_are_skipped() {
        let mut cases = planted_cases(120, &[1], 4);
        cases[0].p90 = None;
        cases[1].p90 = None;
        let report =
            run_feature_set_eval(&cases, &FeatureSetSpec::set_a(), Regime::RandomDraw, ModelKind::Logistic, 1, 0, &quick()).unwrap();
        assert_eq!(report.runs[0].n_train + report.runs[0].n_test, 118);
    }
}
