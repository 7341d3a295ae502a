use serde::{Deserialize, Serialize};

use super::{eligible_cases, fit_scores_forest_importance, map_units, model_seed, run_seed, MeanStd, Settings};
use crate::dataset::schema::{self, PolicyDomain, IG_COUNT};
use crate::dataset::{encode, random_split, rescale_p90, zero_noncommittal, FeatureSetSpec, PolicyCase};
use crate::error::{Error, Result};

pub const DEFAULT_RANKING_SPLITS: usize = 21;
pub const DEFAULT_SET_C_SIZE: usize = 14;

/// Signed agreement between a stance and the outcome over the cases where
/// the stance was not neutral.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Correlation {
    /// `None` when there were no non-neutral cases.
    pub corr: Option<f64>,
    pub at_bats: usize,
}

/// `0.5 / at_bats * (sum of x over passed cases - sum of x over failed cases)`,
/// counting only `x != 0`. With `x` in `[-2, 2]` the result is in `[-1, 1]`.
pub fn correlation(values: &[f64], labels: &[bool]) -> Correlation {
    let mut at_bats = 0;
    let mut sum = 0.0;
    for (&x, &y) in values.iter().zip(labels) {
        if x != 0.0 {
            at_bats += 1;
            sum += if y { x } else { -x };
        }
    }
    Correlation {
        corr: (at_bats > 0).then(|| 0.5 * sum / at_bats as f64),
        at_bats,
    }
}

/// The value a feature takes for correlation purposes: an interest group's
/// alignment, or P90 rescaled to `[-2, 2]` with the noncommittal band
/// zeroed. Cases without P90 count as neutral.
fn stance_values(cases: &[PolicyCase], feature: &str) -> Result<Vec<f64>> {
    if feature == schema::P90 {
        cases
            .iter()
            .map(|c| match c.p90 {
                Some(p) => rescale_p90(p).map(zero_noncommittal),
                None => Ok(0.0),
            })
            .collect()
    } else {
        let j = schema::ig_index(feature).ok_or_else(|| Error::UnknownInterestGroup(feature.to_string()))?;
        Ok(cases.iter().map(|c| f64::from(c.ig_alignments[j])).collect())
    }
}

/// [`correlation`] for `feature` (`p90` or a canonical interest-group name).
pub fn ig_outcome_correlation(cases: &[PolicyCase], feature: &str) -> Result<Correlation> {
    let values = stance_values(cases, feature)?;
    let labels: Vec<bool> = cases.iter().map(|c| c.outcome).collect();
    Ok(correlation(&values, &labels))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DomainRankingRow {
    pub feature: String,
    pub display_name: String,
    /// Normalized Gini importance across splits.
    pub rf_score: MeanStd,
    /// Over the splits whose test side had at least one at-bat; `None` if
    /// none did.
    pub correlation: Option<MeanStd>,
    pub at_bats: MeanStd,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DomainRanking {
    pub domain: PolicyDomain,
    pub n_cases: usize,
    pub n_splits: usize,
    pub base_seed: u64,
    pub test_size: MeanStd,
    /// Sorted by mean `rf_score`, descending; ties keep column order.
    pub rows: Vec<DomainRankingRow>,
}

impl DomainRanking {
    /// Features some tree split on.
    pub fn active_features(&self) -> Vec<&str> {
        self.rows
            .iter()
            .filter(|r| r.rf_score.mean > 0.0)
            .map(|r| r.feature.as_str())
            .collect()
    }

    pub fn position(&self, feature: &str) -> Option<usize> {
        self.rows.iter().position(|r| r.feature == feature)
    }
}

struct SplitStats {
    importance: Vec<f64>,
    correlations: Vec<Correlation>,
    test_size: usize,
}

/// Ranks rescaled P90 and the interest groups by forest importance within
/// one policy domain.
///
/// Each of `n_splits` random draws fits a forest on the training side; the
/// importances are averaged, and each feature's correlation and at-bats are
/// measured on the test side.
pub fn rank_igs_by_domain(
    cases: &[PolicyCase],
    domain: PolicyDomain,
    n_splits: usize,
    base_seed: u64,
    settings: &Settings,
) -> Result<DomainRanking> {
    if n_splits == 0 {
        return Err(Error::InvalidArgument("n_splits must be at least 1".into()));
    }
    let spec = FeatureSetSpec::ranking();
    let in_domain: Vec<PolicyCase> = cases.iter().filter(|c| c.policy_domain == domain).cloned().collect();
    let cases = eligible_cases(&in_domain, &[&spec]);
    let degenerate = |reason: String| Error::DegenerateDomain {
        domain: domain.label().to_string(),
        reason,
    };
    let positives = cases.iter().filter(|c| c.outcome).count();
    if positives == 0 || positives == cases.len() {
        return Err(degenerate(format!(
            "{} case(s), {positives} passed: both outcomes are needed",
            cases.len()
        )));
    }
    let matrix = encode(&cases, &spec)?;
    let names = matrix.column_names().to_vec();
    let stances: Vec<Vec<f64>> = names.iter().map(|n| stance_values(&cases, n)).collect::<Result<_>>()?;

    let splits = map_units(n_splits, settings.execution, |s| {
        let seed = run_seed(base_seed, s);
        let plan = random_split(cases.len(), settings.train_fraction, seed)
            .map_err(|e| degenerate(e.to_string()))?;
        let train = matrix.select_rows(&plan.train);
        let importance = fit_scores_forest_importance(&train, settings, model_seed(seed))?;
        let labels: Vec<bool> = plan.test.iter().map(|&i| cases[i].outcome).collect();
        let correlations = stances
            .iter()
            .map(|values| {
                let test_values: Vec<f64> = plan.test.iter().map(|&i| values[i]).collect();
                correlation(&test_values, &labels)
            })
            .collect();
        Ok(SplitStats {
            importance,
            correlations,
            test_size: plan.test.len(),
        })
    })?;

    let mut rows: Vec<DomainRankingRow> = names
        .iter()
        .enumerate()
        .map(|(j, name)| {
            let importance: Vec<f64> = splits.iter().map(|s| s.importance[j]).collect();
            let corrs: Vec<f64> = splits.iter().filter_map(|s| s.correlations[j].corr).collect();
            let at_bats: Vec<f64> = splits.iter().map(|s| s.correlations[j].at_bats as f64).collect();
            let display_name = match schema::ig_index(name) {
                Some(i) => schema::ig_display_name(i).to_string(),
                None => "P90".to_string(),
            };
            DomainRankingRow {
                feature: name.clone(),
                display_name,
                rf_score: MeanStd::of(&importance).expect("n_splits > 0"),
                correlation: MeanStd::of(&corrs),
                at_bats: MeanStd::of(&at_bats).expect("n_splits > 0"),
            }
        })
        .collect();
    // Stable sort keeps column order among ties.
    rows.sort_by(|a, b| b.rf_score.mean.total_cmp(&a.rf_score.mean));
    let test_sizes: Vec<f64> = splits.iter().map(|s| s.test_size as f64).collect();
    Ok(DomainRanking {
        domain,
        n_cases: cases.len(),
        n_splits,
        base_seed,
        test_size: MeanStd::of(&test_sizes).expect("n_splits > 0"),
        rows,
    })
}

/// Interest groups chosen for the reduced feature set, with the averaged
/// importances that chose them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SetCSelection {
    pub spec: FeatureSetSpec,
    pub n_splits: usize,
    pub base_seed: u64,
    /// Every interest group by mean Set B importance, descending; ties keep
    /// canonical order.
    pub ranked_igs: Vec<(String, f64)>,
}

/// Averages Set B forest importances over `n_splits` random draws (training
/// sides only) and keeps the `k` interest groups with the highest mean.
pub fn build_set_c(
    cases: &[PolicyCase],
    k: usize,
    n_splits: usize,
    base_seed: u64,
    settings: &Settings,
) -> Result<SetCSelection> {
    if k == 0 || k > IG_COUNT {
        return Err(Error::InvalidArgument(format!("k = {k} outside [1, {IG_COUNT}]")));
    }
    if n_splits == 0 {
        return Err(Error::InvalidArgument("n_splits must be at least 1".into()));
    }
    let spec_b = FeatureSetSpec::set_b();
    let cases = eligible_cases(cases, &[&spec_b]);
    let matrix = encode(&cases, &spec_b)?;
    let ig_columns: Vec<usize> = schema::ig_names()
        .map(|n| matrix.column_index(n).expect("set B has every interest group"))
        .collect();

    let importances = map_units(n_splits, settings.execution, |s| {
        let seed = run_seed(base_seed, s);
        let plan = random_split(cases.len(), settings.train_fraction, seed)?;
        fit_scores_forest_importance(&matrix.select_rows(&plan.train), settings, model_seed(seed))
    })?;
    let mut ranked: Vec<(usize, f64)> = ig_columns
        .iter()
        .enumerate()
        .map(|(ig, &col)| (ig, importances.iter().map(|imp| imp[col]).sum::<f64>() / n_splits as f64))
        .collect();
    ranked.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
    let chosen = ranked[..k].iter().map(|&(ig, _)| schema::INTEREST_GROUPS[ig].0.to_string()).collect();
    Ok(SetCSelection {
        spec: FeatureSetSpec::set_c(chosen)?,
        n_splits,
        base_seed,
        ranked_igs: ranked
            .into_iter()
            .map(|(ig, score)| (schema::INTEREST_GROUPS[ig].0.to_string(), score))
            .collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiments::testing::planted_cases;
    use crate::experiments::{run_feature_set_eval, ModelKind, Regime};
    use crate::forest::ForestConfig;
    use proptest::prelude::*;

    fn quick() -> Settings {
        Settings {
            forest: ForestConfig { n_trees: 30, ..ForestConfig::default() },
            ..Settings::default()
        }
    }

    #[test]
    fn correlation_examples() {
        assert_eq!(correlation(&[2.0], &[true]), Correlation { corr: Some(1.0), at_bats: 1 });
        assert_eq!(correlation(&[2.0, 2.0], &[true, false]).corr, Some(0.0));
        assert_eq!(correlation(&[0.0, 0.0], &[true, false]), Correlation { corr: None, at_bats: 0 });
        assert_eq!(correlation(&[-1.0, 0.0, 2.0], &[false, true, false]).corr, Some(-0.25));
    }

    proptest! {
        #[test]
        fn correlation_matches_loop_oracle(pairs in prop::collection::vec((-2i8..=2, any::<bool>()), 0..40)) {
            let values: Vec<f64> = pairs.iter().map(|p| f64::from(p.0)).collect();
            let labels: Vec<bool> = pairs.iter().map(|p| p.1).collect();
            let mut pos = 0i32;
            let mut neg = 0i32;
            let mut n = 0usize;
            for &(x, y) in &pairs {
                if x == 0 { continue; }
                n += 1;
                if y { pos += i32::from(x) } else { neg += i32::from(x) }
            }
            let got = correlation(&values, &labels);
            prop_assert_eq!(got.at_bats, n);
            match got.corr {
                None => prop_assert_eq!(n, 0),
                Some(c) => {
                    prop_assert!((c - 0.5 * f64::from(pos - neg) / n as f64).abs() < 1e-12);
                    prop_assert!((-1.0..=1.0).contains(&c));
                }
            }
        }
    }

    #[test]
    fn p90_correlation_zeroes_the_noncommittal_band() {
        let mut cases = planted_cases(4, &[0], 1);
        for (c, (p, y)) in cases.iter_mut().zip([(0.9, true), (0.55, false), (0.45, true), (0.1, false)]) {
            c.p90 = Some(p);
            c.outcome = y;
        }
        // 0.55 and 0.45 rescale to +-0.2 and are neutral.
        let got = ig_outcome_correlation(&cases, "p90").unwrap();
        assert_eq!(got.at_bats, 2);
        assert!((got.corr.unwrap() - 0.5 * (1.6 + 1.6) / 2.0).abs() < 1e-12);
        assert!(ig_outcome_correlation(&cases, "not_a_group").is_err());
    }

    #[test]
    fn planted_group_tops_domain_ranking() {
        let mut cases = planted_cases(400, &[], 21);
        let mut rng = crate::seed::rng(5);
        for c in &mut cases {
            c.outcome = rand::Rng::gen_bool(&mut rng, 0.4);
            c.policy_area = crate::dataset::PolicyArea::Defense;
            c.policy_domain = PolicyDomain::Foreign;
            c.ig_alignments[9] = if c.outcome { 2 } else { -2 };
            c.ig_alignments[30] = 0;
        }
        let ranking = rank_igs_by_domain(&cases, PolicyDomain::Foreign, 5, 3, &quick()).unwrap();
        assert_eq!(ranking.rows[0].feature, schema::INTEREST_GROUPS[9].0);
        assert_eq!(ranking.rows.len(), IG_COUNT + 1);
        let silent = &ranking.rows[ranking.position(schema::INTEREST_GROUPS[30].0).unwrap()];
        assert_eq!(silent.rf_score.mean, 0.0);
        assert!(silent.correlation.is_none());
        let active_min = ranking.rows.iter().filter(|r| r.at_bats.mean > 0.0).map(|r| r.rf_score.mean).fold(f64::INFINITY, f64::min);
        assert!(active_min > 0.0);
        for row in &ranking.rows {
            assert!(row.at_bats.mean <= ranking.test_size.mean);
        }
    }

    #[test]
    fn single_class_domain_is_named_in_the_error() {
        let mut cases = planted_cases(50, &[0], 2);
        for c in &mut cases {
            c.outcome = true;
            c.policy_area = crate::dataset::PolicyArea::Guns;
            c.policy_domain = PolicyDomain::Guns;
        }
        match rank_igs_by_domain(&cases, PolicyDomain::Guns, 3, 0, &quick()) {
            Err(Error::DegenerateDomain { domain, .. }) => assert_eq!(domain, "Guns"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn set_c_with_every_group_matches_set_b() {
        let cases = planted_cases(150, &[0, 5], 6);
        let selection = build_set_c(&cases, IG_COUNT, 2, 1, &quick()).unwrap();
        let b = FeatureSetSpec::set_b();
        assert_eq!(selection.spec.ig_indices().unwrap(), b.ig_indices().unwrap());
        assert_eq!(selection.spec.policy_encoding, b.policy_encoding);
        let rc = run_feature_set_eval(&cases, &selection.spec, Regime::RandomDraw, ModelKind::Forest, 2, 4, &quick()).unwrap();
        let rb = run_feature_set_eval(&cases, &b, Regime::RandomDraw, ModelKind::Forest, 2, 4, &quick()).unwrap();
        assert_eq!(rc.runs, rb.runs);
        assert!(build_set_c(&cases, IG_COUNT + 1, 2, 1, &quick()).is_err());
    }

    #[test]
    fn set_c_recovers_planted_groups() {
        let planted = [3, 17, 40];
        let cases = planted_cases(500, &planted, 12);
        let selection = build_set_c(&cases, 3, 3, 2, &quick()).unwrap();
        let expected: Vec<usize> = planted.to_vec();
        assert_eq!(selection.spec.ig_indices().unwrap(), expected);
    }
}
