use serde::{Deserialize, Serialize};

use super::{eligible_cases, fit_scores, map_units, model_seed, plan_split, run_seed, MeanStd, ModelKind, Regime, Settings};
use crate::dataset::schema::{self, IG_COUNT};
use crate::dataset::{encode, FeatureSetId, FeatureSetSpec, PolicyCase};
use crate::error::{Error, Result};
use crate::metrics;

pub const DEFAULT_MIN_TEST_CASES: usize = 20;

/// Accuracy of `pred_b` minus accuracy of `pred_a` over the cases flagged in
/// `in_group`, with the group size. `None` for an empty group.
pub fn subgroup_accuracy_gain(
    in_group: &[bool],
    labels: &[bool],
    pred_b: &[bool],
    pred_a: &[bool],
) -> Option<(f64, usize)> {
    let mut n = 0usize;
    let mut net = 0i64;
    for i in 0..labels.len() {
        if in_group[i] {
            n += 1;
            net += i64::from(pred_b[i] == labels[i]) - i64::from(pred_a[i] == labels[i]);
        }
    }
    (n > 0).then(|| (net as f64 / n as f64, n))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IgGain {
    pub ig: String,
    pub display_name: String,
    /// Subgroup accuracy of the B model minus the A model, over runs.
    pub gain: MeanStd,
    pub test_cases: MeanStd,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GainReport {
    pub spec_b: FeatureSetId,
    pub spec_a: FeatureSetId,
    pub n_runs: usize,
    pub base_seed: u64,
    pub min_test_cases: usize,
    /// Qualifying groups in canonical order.
    pub rows: Vec<IgGain>,
    /// Groups that fell short of `min_test_cases` in some run.
    pub omitted: Vec<String>,
}

/// Per interest group, the accuracy gain of a forest on `spec_b` over a
/// forest on `spec_a`, restricted to test cases where the group strongly
/// favored or strongly opposed the change.
///
/// Both models share each run's random split and predict at their own
/// training-set operating points. A group is reported only if it had at
/// least `min_test_cases` such test cases in every run.
pub fn gain_per_ig(
    cases: &[PolicyCase],
    spec_b: &FeatureSetSpec,
    spec_a: &FeatureSetSpec,
    n_runs: usize,
    base_seed: u64,
    min_test_cases: usize,
    settings: &Settings,
) -> Result<GainReport> {
    if n_runs == 0 {
        return Err(Error::InvalidArgument("n_runs must be at least 1".into()));
    }
    let cases = eligible_cases(cases, &[spec_b, spec_a]);
    let matrix_b = encode(&cases, spec_b)?;
    let matrix_a = encode(&cases, spec_a)?;

    // Per run, per group: (gain, group size), or the size alone when empty.
    let per_run = map_units(n_runs, settings.execution, |run| {
        let seed = run_seed(base_seed, run);
        let plan = plan_split(&cases, Regime::RandomDraw, settings, seed)?;
        let predictions = |matrix: &crate::dataset::EncodedMatrix| -> Result<Vec<bool>> {
            let train = matrix.select_rows(&plan.train);
            let test = matrix.select_rows(&plan.test);
            let scores = fit_scores(ModelKind::Forest, &train, &test, settings, model_seed(seed))?;
            let threshold = metrics::select_operating_point(&scores.train, train.labels())?.threshold;
            Ok(scores.test.iter().map(|&s| s >= threshold).collect())
        };
        let pred_b = predictions(&matrix_b)?;
        let pred_a = predictions(&matrix_a)?;
        let labels: Vec<bool> = plan.test.iter().map(|&i| cases[i].outcome).collect();
        Ok((0..IG_COUNT)
            .map(|ig| {
                let in_group: Vec<bool> = plan.test.iter().map(|&i| cases[i].ig_alignments[ig].abs() == 2).collect();
                subgroup_accuracy_gain(&in_group, &labels, &pred_b, &pred_a)
            })
            .collect::<Vec<_>>())
    })?;

    let mut rows = Vec::new();
    let mut omitted = Vec::new();
    for ig in 0..IG_COUNT {
        let name = schema::INTEREST_GROUPS[ig].0.to_string();
        let qualifying: Option<Vec<(f64, usize)>> = per_run
            .iter()
            .map(|run| run[ig].filter(|&(_, n)| n >= min_test_cases))
            .collect();
        match qualifying {
            Some(values) => {
                let gains: Vec<f64> = values.iter().map(|v| v.0).collect();
                let sizes: Vec<f64> = values.iter().map(|v| v.1 as f64).collect();
                rows.push(IgGain {
                    ig: name,
                    display_name: schema::ig_display_name(ig).to_string(),
                    gain: MeanStd::of(&gains).expect("n_runs > 0"),
                    test_cases: MeanStd::of(&sizes).expect("n_runs > 0"),
                });
            }
            None => omitted.push(name),
        }
    }
    Ok(GainReport {
        spec_b: spec_b.id,
        spec_a: spec_a.id,
        n_runs,
        base_seed,
        min_test_cases,
        rows,
        omitted,
    })
}
