use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use super::case::PolicyCase;
use crate::error::{Error, Result};
use crate::seed;

/// Default first year of the retrodiction test set.
pub const DEFAULT_CUTOFF_YEAR: i32 = 1997;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SplitKind {
    RandomDraw,
    Retrodiction,
}

/// Disjoint train/test index sets covering `0..n`. Both lists are sorted.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitPlan {
    pub kind: SplitKind,
    pub train: Vec<usize>,
    pub test: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cutoff_year: Option<i32>,
}

/// Shuffles `0..n_cases` with a seeded generator and puts the first
/// `floor(train_fraction * n_cases)` indices in the training set.
pub fn random_split(n_cases: usize, train_fraction: f64, seed: u64) -> Result<SplitPlan> {
    if n_cases < 2 {
        return Err(Error::InvalidArgument(format!("cannot split {n_cases} case(s)")));
    }
    if !(train_fraction > 0.0 && train_fraction < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "train fraction {train_fraction} outside (0, 1)"
        )));
    }
    let n_train = (train_fraction * n_cases as f64).floor() as usize;
    if n_train == 0 || n_train == n_cases {
        return Err(Error::EmptySplit(format!(
            "fraction {train_fraction} of {n_cases} leaves an empty side"
        )));
    }
    let mut order: Vec<usize> = (0..n_cases).collect();
    order.shuffle(&mut seed::rng(seed));
    let mut train = order[..n_train].to_vec();
    let mut test = order[n_train..].to_vec();
    train.sort_unstable();
    test.sort_unstable();
    Ok(SplitPlan {
        kind: SplitKind::RandomDraw,
        train,
        test,
        seed: Some(seed),
        cutoff_year: None,
    })
}

/// Trains on cases before `cutoff_year` and tests on the rest.
pub fn retrodiction_split(cases: &[PolicyCase], cutoff_year: i32) -> Result<SplitPlan> {
    let (test, train): (Vec<usize>, Vec<usize>) = (0..cases.len()).partition(|&i| cases[i].year >= cutoff_year);
    if train.is_empty() {
        return Err(Error::EmptySplit(format!("no cases before {cutoff_year}")));
    }
    if test.is_empty() {
        return Err(Error::EmptySplit(format!("no cases in or after {cutoff_year}")));
    }
    Ok(SplitPlan {
        kind: SplitKind::Retrodiction,
        train,
        test,
        seed: None,
        cutoff_year: Some(cutoff_year),
    })
}
