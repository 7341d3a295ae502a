use serde::{Deserialize, Serialize};

use super::{eligible_cases, evaluate, fit_scores, map_units, model_seed, plan_split, run_seed, MeanStd, ModelKind, Regime, Settings};
use crate::dataset::schema::{self, IG_COUNT};
use crate::dataset::{encode, EncodedMatrix, FeatureSetId, FeatureSetSpec, P90Scale, PolicyCase, PolicyEncoding};
use crate::error::{Error, Result};
use crate::forest::fit_forest_with;
use crate::logistic;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Selector {
    /// Top forest Gini importances.
    RfGini,
    /// Largest standardized logistic coefficients.
    LogisticBeta,
}

impl Selector {
    pub fn label(self) -> &'static str {
        match self {
            Selector::RfGini => "rf_gini",
            Selector::LogisticBeta => "logistic_beta",
        }
    }
}

const MODELS: [ModelKind; 2] = [ModelKind::Forest, ModelKind::Logistic];
const SELECTORS: [Selector; 2] = [Selector::RfGini, Selector::LogisticBeta];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SelectorResult {
    pub model: ModelKind,
    pub selector: Selector,
    pub balanced_accuracy: f64,
    pub auc: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelectorSplit {
    pub regime: Regime,
    pub split: usize,
    pub run_seed: u64,
    pub rf_igs: Vec<String>,
    pub logistic_igs: Vec<String>,
    pub results: Vec<SelectorResult>,
}

impl SelectorSplit {
    fn result(&self, model: ModelKind, selector: Selector) -> &SelectorResult {
        self.results
            .iter()
            .find(|r| r.model == model && r.selector == selector)
            .expect("every model/selector pair is evaluated")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelectorCell {
    pub regime: Regime,
    pub model: ModelKind,
    pub selector: Selector,
    pub balanced_accuracy: MeanStd,
    pub auc: MeanStd,
}

/// Mean of per-split differences, forest-chosen minus logistic-chosen.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelectorGain {
    pub regime: Regime,
    pub model: ModelKind,
    pub balanced_accuracy: MeanStd,
    pub auc: MeanStd,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelectorComparison {
    pub k: usize,
    pub n_splits: usize,
    pub base_seed: u64,
    pub splits: Vec<SelectorSplit>,
    pub cells: Vec<SelectorCell>,
    pub gains: Vec<SelectorGain>,
}

impl SelectorComparison {
    pub fn cell(&self, regime: Regime, model: ModelKind, selector: Selector) -> Option<&SelectorCell> {
        self.cells
            .iter()
            .find(|c| c.regime == regime && c.model == model && c.selector == selector)
    }

    pub fn gain(&self, regime: Regime, model: ModelKind) -> Option<&SelectorGain> {
        self.gains.iter().find(|g| g.regime == regime && g.model == model)
    }
}

fn selection_spec() -> FeatureSetSpec {
    FeatureSetSpec {
        id: FeatureSetId::Custom,
        policy_encoding: PolicyEncoding::None,
        ..FeatureSetSpec::set_b()
    }
}

fn subset_spec(igs: Vec<String>) -> FeatureSetSpec {
    FeatureSetSpec {
        id: FeatureSetId::Custom,
        use_p90: true,
        p90_scale: P90Scale::Raw,
        use_net_iga: false,
        ig_subset: igs,
        policy_encoding: PolicyEncoding::None,
    }
}

/// The `k` interest groups with the largest scores; ties go to canonical
/// order. `scores` is indexed by canonical interest-group index.
fn top_k(scores: &[f64], k: usize) -> Vec<String> {
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]).then(a.cmp(&b)));
    let mut chosen = order[..k].to_vec();
    chosen.sort_unstable();
    chosen.into_iter().map(|i| schema::INTEREST_GROUPS[i].0.to_string()).collect()
}

fn select(train: &EncodedMatrix, k: usize, settings: &Settings, model_seed: u64) -> Result<(Vec<String>, Vec<String>)> {
    let ig_columns: Vec<usize> = schema::ig_names()
        .map(|n| train.column_index(n).expect("selection matrix has every interest group"))
        .collect();
    let forest = fit_forest_with(train, &settings.forest.with_seed(model_seed), settings.execution)?;
    let gini: Vec<f64> = ig_columns.iter().map(|&c| forest.gini_importance()[c]).collect();
    let logit = logistic::fit(train, &settings.logistic)?;
    let beta: Vec<f64> = ig_columns.iter().map(|&c| logit.beta[c].abs()).collect();
    Ok((top_k(&gini, k), top_k(&beta, k)))
}

/// Chooses `k` interest groups on each split's training side by forest
/// importance and by logistic coefficient magnitude, then evaluates both
/// model kinds on P90 plus each choice.
///
/// Random draws use `n_splits` fresh splits; retrodiction refits
/// `n_splits` times on its one split.
pub fn compare_selectors(
    cases: &[PolicyCase],
    k: usize,
    regimes: &[Regime],
    n_splits: usize,
    base_seed: u64,
    settings: &Settings,
) -> Result<SelectorComparison> {
    if k == 0 || k > IG_COUNT {
        return Err(Error::InvalidArgument(format!("k = {k} outside [1, {IG_COUNT}]")));
    }
    if n_splits == 0 || regimes.is_empty() {
        return Err(Error::InvalidArgument("need at least one split and one regime".into()));
    }
    let selection = selection_spec();
    let cases = eligible_cases(cases, &[&selection]);
    let matrix = encode(&cases, &selection)?;

    let mut splits = Vec::new();
    for &regime in regimes {
        splits.extend(map_units(n_splits, settings.execution, |split| {
            let seed = run_seed(base_seed, split);
            let plan = plan_split(&cases, regime, settings, seed)?;
            let (rf_igs, logistic_igs) = select(&matrix.select_rows(&plan.train), k, settings, model_seed(seed))?;
            let mut results = Vec::with_capacity(4);
            for selector in SELECTORS {
                let igs = match selector {
                    Selector::RfGini => rf_igs.clone(),
                    Selector::LogisticBeta => logistic_igs.clone(),
                };
                let subset = encode(&cases, &subset_spec(igs))?;
                let train = subset.select_rows(&plan.train);
                let test = subset.select_rows(&plan.test);
                for model in MODELS {
                    // Seed differs from the selection forest's.
                    let scores = fit_scores(model, &train, &test, settings, model_seed(model_seed(seed)))?;
                    let eval = evaluate(&scores, train.labels(), test.labels())?;
                    results.push(SelectorResult {
                        model,
                        selector,
                        balanced_accuracy: eval.balanced_accuracy,
                        auc: eval.auc,
                    });
                }
            }
            Ok(SelectorSplit {
                regime,
                split,
                run_seed: seed,
                rf_igs,
                logistic_igs,
                results,
            })
        })?);
    }

    let mut cells = Vec::new();
    let mut gains = Vec::new();
    for &regime in regimes {
        let in_regime: Vec<&SelectorSplit> = splits.iter().filter(|s| s.regime == regime).collect();
        let collect = |f: &dyn Fn(&SelectorSplit) -> f64| -> MeanStd {
            MeanStd::of(&in_regime.iter().map(|s| f(s)).collect::<Vec<_>>()).expect("n_splits > 0")
        };
        for model in MODELS {
            for selector in SELECTORS {
                cells.push(SelectorCell {
                    regime,
                    model,
                    selector,
                    balanced_accuracy: collect(&|s| s.result(model, selector).balanced_accuracy),
                    auc: collect(&|s| s.result(model, selector).auc),
                });
            }
            let diff = |s: &SelectorSplit, metric: fn(&SelectorResult) -> f64| {
                metric(s.result(model, Selector::RfGini)) - metric(s.result(model, Selector::LogisticBeta))
            };
            gains.push(SelectorGain {
                regime,
                model,
                balanced_accuracy: collect(&|s| diff(s, |r| r.balanced_accuracy)),
                auc: collect(&|s| diff(s, |r| r.auc)),
            });
        }
    }
    Ok(SelectorComparison {
        k,
        n_splits,
        base_seed,
        splits,
        cells,
        gains,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiments::testing::planted_cases;
    use crate::forest::ForestConfig;

    fn quick() -> Settings {
        Settings {
            forest: ForestConfig { n_trees: 30, ..ForestConfig::default() },
            ..Settings::default()
        }
    }

    #[test]
    fn top_k_breaks_ties_by_canonical_order() {
        let mut scores = vec![0.0; IG_COUNT];
        scores[5] = 1.0;
        scores[2] = 0.5;
        scores[9] = 0.5;
        let names = |ix: &[usize]| ix.iter().map(|&i| schema::INTEREST_GROUPS[i].0.to_string()).collect::<Vec<_>>();
        assert_eq!(top_k(&scores, 2), names(&[2, 5]));
        assert_eq!(top_k(&scores, 4), names(&[0, 2, 5, 9]));
    }

    #[test]
    fn identical_subsets_give_zero_gains() {
        let cases = planted_cases(200, &[0, 1], 4);
        let cmp = compare_selectors(&cases, IG_COUNT, &[Regime::RandomDraw, Regime::Retrodiction], 2, 7, &quick()).unwrap();
        assert_eq!(cmp.splits.len(), 4);
        for gain in &cmp.gains {
            assert_eq!(gain.balanced_accuracy.mean, 0.0);
            assert_eq!(gain.auc.mean, 0.0);
        }
    }

    #[test]
    fn gains_are_means_of_paired_differences() {
        let cases = planted_cases(250, &[0, 7, 8], 5);
        let cmp = compare_selectors(&cases, 3, &[Regime::RandomDraw], 3, 1, &quick()).unwrap();
        for model in MODELS {
            let diffs: Vec<f64> = cmp
                .splits
                .iter()
                .map(|s| s.result(model, Selector::RfGini).balanced_accuracy - s.result(model, Selector::LogisticBeta).balanced_accuracy)
                .collect();
            let gain = cmp.gain(Regime::RandomDraw, model).unwrap();
            assert_eq!(gain.balanced_accuracy, MeanStd::of(&diffs).unwrap());
        }
    }

    #[test]
    fn forest_selection_wins_on_nonmonotone_plant() {
        // Cases pass when either planted group takes an extreme stance of
        // either sign: symmetric, so invisible to a linear model.
        let mut cases = planted_cases(600, &[], 13);
        for c in &mut cases {
            c.outcome = c.ig_alignments[10].abs() == 2 || c.ig_alignments[11].abs() == 2;
        }
        let cmp = compare_selectors(&cases, 2, &[Regime::RandomDraw], 3, 2, &quick()).unwrap();
        for split in &cmp.splits {
            assert_eq!(split.rf_igs, vec![schema::INTEREST_GROUPS[10].0, schema::INTEREST_GROUPS[11].0]);
        }
        assert!(cmp.gain(Regime::RandomDraw, ModelKind::Forest).unwrap().balanced_accuracy.mean > 0.1);
    }
}
