use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::{ModelKind, Regime, Settings, DEFAULT_TRAIN_FRACTION};
use crate::dataset::{FeatureSetId, FeatureSetSpec, DEFAULT_CUTOFF_YEAR};
use crate::error::Result;
use crate::forest::ForestConfig;
use crate::logistic::LogisticConfig;

/// A named feature set or a full custom description.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FeatureSetChoice {
    Id(FeatureSetId),
    Spec(FeatureSetSpec),
}

impl Default for FeatureSetChoice {
    fn default() -> Self {
        FeatureSetChoice::Id(FeatureSetId::D)
    }
}

/// An evaluation described in JSON. Every field is optional.
///
/// ```json
/// { "dataset": "cases.csv", "feature_set": "D", "regime": "random_draw",
///   "n_runs": 25, "base_seed": 7, "forest": { "n_trees": 300 } }
/// ```
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub dataset: Option<PathBuf>,
    pub mapping: Option<PathBuf>,
    pub feature_set: FeatureSetChoice,
    pub regime: Regime,
    pub model: ModelKind,
    /// Defaults to the regime's run count.
    pub n_runs: Option<usize>,
    pub base_seed: u64,
    pub forest: ForestConfig,
    pub logistic: LogisticConfig,
    pub train_fraction: f64,
    pub cutoff_year: i32,
    pub output_dir: Option<PathBuf>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            dataset: None,
            mapping: None,
            feature_set: FeatureSetChoice::default(),
            regime: Regime::RandomDraw,
            model: ModelKind::Forest,
            n_runs: None,
            base_seed: 0,
            forest: ForestConfig::default(),
            logistic: LogisticConfig::default(),
            train_fraction: DEFAULT_TRAIN_FRACTION,
            cutoff_year: DEFAULT_CUTOFF_YEAR,
            output_dir: None,
        }
    }
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    /// Relative `dataset`, `mapping` and `output_dir` paths resolve against
    /// the config file's directory.
    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let mut config = Self::parse(&std::fs::read_to_string(path)?)?;
        let base = path.parent().unwrap_or(Path::new(""));
        for field in [&mut config.dataset, &mut config.mapping, &mut config.output_dir] {
            if let Some(p) = field.as_mut() {
                if p.is_relative() {
                    *p = base.join(&*p);
                }
            }
        }
        Ok(config)
    }

    pub fn settings(&self) -> Settings {
        Settings {
            forest: self.forest.clone(),
            logistic: self.logistic.clone(),
            train_fraction: self.train_fraction,
            cutoff_year: self.cutoff_year,
            ..Settings::default()
        }
    }

    pub fn n_runs(&self) -> usize {
        self.n_runs.unwrap_or_else(|| self.regime.default_runs())
    }
}
