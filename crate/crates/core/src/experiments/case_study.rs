use serde::{Deserialize, Serialize};

use super::{model_seed, run_seed, Settings};
use crate::dataset::schema::{self, PolicyDomain};
use crate::dataset::summary::ClassCounts;
use crate::dataset::{EncodedMatrix, PolicyCase};
use crate::error::{Error, Result};
use crate::forest::fit_forest_with;
use crate::logistic;
use crate::metrics::{self, OperatingPoint};

pub const DEFAULT_PIVOT: &str = "defense_contractors";

/// Where a case sits in the (pivot stance, P90) plane.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Region {
    PivotFavors,
    PivotOpposesP90Favors,
    PivotOpposesP90Opposes,
}

impl Region {
    pub const ALL: [Region; 3] = [Region::PivotFavors, Region::PivotOpposesP90Favors, Region::PivotOpposesP90Opposes];

    pub fn of(pivot: i8, p90: f64) -> Region {
        if pivot > 0 {
            Region::PivotFavors
        } else if p90 > 0.5 {
            Region::PivotOpposesP90Favors
        } else {
            Region::PivotOpposesP90Opposes
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Region::PivotFavors => "pivot_favors",
            Region::PivotOpposesP90Favors => "pivot_opposes_p90_favors",
            Region::PivotOpposesP90Opposes => "pivot_opposes_p90_opposes",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionCounts {
    pub region: Region,
    pub outcomes: ClassCounts,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaseStudyPoint {
    pub case_id: String,
    pub p90: f64,
    pub pivot: i8,
    pub outcome: bool,
    pub region: Region,
    pub forest_score: f64,
    pub forest_prediction: bool,
    pub logistic_score: f64,
    pub logistic_prediction: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaseStudyReport {
    pub pivot: String,
    pub domain: PolicyDomain,
    pub seed: u64,
    pub n_cases: usize,
    pub regions: Vec<RegionCounts>,
    pub forest_operating_point: OperatingPoint,
    pub logistic_operating_point: OperatingPoint,
    pub forest_balanced_accuracy: f64,
    pub logistic_balanced_accuracy: f64,
    pub points: Vec<CaseStudyPoint>,
}

/// Fits a forest and a logistic model on (raw P90, pivot stance) over the
/// domain's cases where the pivot group was not neutral, and reports both
/// models' in-sample predictions and balanced accuracies at their own
/// operating points.
pub fn nonlinearity_case_study(
    cases: &[PolicyCase],
    pivot: &str,
    domain: PolicyDomain,
    seed: u64,
    settings: &Settings,
) -> Result<CaseStudyReport> {
    let pivot_index = schema::ig_index(pivot).ok_or_else(|| Error::UnknownInterestGroup(pivot.to_string()))?;
    let selected: Vec<&PolicyCase> = cases
        .iter()
        .filter(|c| c.policy_domain == domain && c.p90.is_some() && c.ig_alignments[pivot_index] != 0)
        .collect();
    let degenerate = |reason: String| Error::DegenerateDomain {
        domain: domain.label().to_string(),
        reason,
    };
    if selected.is_empty() {
        return Err(degenerate(format!("`{pivot}` is neutral on every case")));
    }
    let first = selected[0].ig_alignments[pivot_index];
    if selected.iter().all(|c| c.ig_alignments[pivot_index] == first) {
        return Err(degenerate(format!("`{pivot}` takes the single stance {first}")));
    }

    let rows: Vec<Vec<f64>> = selected
        .iter()
        .map(|c| vec![c.p90.expect("filtered"), f64::from(c.ig_alignments[pivot_index])])
        .collect();
    let labels: Vec<bool> = selected.iter().map(|c| c.outcome).collect();
    if labels.iter().all(|&l| l) || labels.iter().all(|&l| !l) {
        return Err(degenerate("selected cases have a single outcome".into()));
    }
    let matrix = EncodedMatrix::from_rows(vec![schema::P90.to_string(), pivot.to_string()], &rows, labels.clone())?;

    let forest = fit_forest_with(&matrix, &settings.forest.with_seed(model_seed(run_seed(seed, 0))), settings.execution)?;
    let forest_scores = forest.predict_matrix(&matrix)?;
    let logit = logistic::fit(&matrix, &settings.logistic)?;
    let logistic_scores = logit.predict_matrix(&matrix)?;

    let forest_op = metrics::select_operating_point(&forest_scores, &labels)?;
    let logistic_op = metrics::select_operating_point(&logistic_scores, &labels)?;
    let accuracy = |scores: &[f64], threshold: f64| -> Result<f64> {
        metrics::balanced_accuracy(&metrics::confusion_at_threshold(scores, &labels, threshold)?)
    };

    let points: Vec<CaseStudyPoint> = selected
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let p90 = rows[i][0];
            let stance = c.ig_alignments[pivot_index];
            CaseStudyPoint {
                case_id: c.case_id.clone(),
                p90,
                pivot: stance,
                outcome: c.outcome,
                region: Region::of(stance, p90),
                forest_score: forest_scores[i],
                forest_prediction: forest_scores[i] >= forest_op.threshold,
                logistic_score: logistic_scores[i],
                logistic_prediction: logistic_scores[i] >= logistic_op.threshold,
            }
        })
        .collect();
    let regions = Region::ALL
        .iter()
        .map(|&region| {
            let mut outcomes = ClassCounts::default();
            for p in points.iter().filter(|p| p.region == region) {
                if p.outcome {
                    outcomes.positive += 1;
                } else {
                    outcomes.negative += 1;
                }
            }
            RegionCounts { region, outcomes }
        })
        .collect();

    Ok(CaseStudyReport {
        pivot: pivot.to_string(),
        domain,
        seed,
        n_cases: points.len(),
        regions,
        forest_balanced_accuracy: accuracy(&forest_scores, forest_op.threshold)?,
        logistic_balanced_accuracy: accuracy(&logistic_scores, logistic_op.threshold)?,
        forest_operating_point: forest_op,
        logistic_operating_point: logistic_op,
        points,
    })
}
