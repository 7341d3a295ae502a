//! Random forest classifier built from CART trees.
//!
//! Trees are grown on bootstrap resamples with random candidate-feature
//! subsets at every node and the exact best Gini split among the
//! candidates. Each tree's randomness derives only from
//! `seed::mix(config.seed, tree_index)`, so serial and parallel fits are
//! bit-identical.

mod importance;
mod tree;

use std::io::{Read, Write};
use std::path::Path;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dataset::EncodedMatrix;
use crate::error::{Error, Result};
use crate::seed;

pub use importance::{permutation_importance, ImportanceMetric};
pub use tree::{best_split, fit_tree, gini_impurity, Split, TreeNode};

/// Version of the JSON model envelope.
pub const SCHEMA_VERSION: u32 = 1;

/// Number of features examined at each node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FeaturesPerSplit {
    /// `ceil(sqrt(F))`.
    Sqrt,
    All,
    Count(usize),
}

impl FeaturesPerSplit {
    pub fn resolve(self, n_features: usize) -> Result<usize> {
        if n_features == 0 {
            return Err(Error::InvalidArgument("matrix has no features".into()));
        }
        match self {
            FeaturesPerSplit::Sqrt => Ok(((n_features as f64).sqrt().ceil() as usize).clamp(1, n_features)),
            FeaturesPerSplit::All => Ok(n_features),
            FeaturesPerSplit::Count(k) if (1..=n_features).contains(&k) => Ok(k),
            FeaturesPerSplit::Count(k) => Err(Error::InvalidArgument(format!(
                "features_per_split {k} outside [1, {n_features}]"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ForestConfig {
    pub n_trees: usize,
    /// `None` grows until leaves are pure or cannot be split.
    pub max_depth: Option<usize>,
    pub min_samples_leaf: usize,
    pub features_per_split: FeaturesPerSplit,
    pub bootstrap: bool,
    pub seed: u64,
}

impl Default for ForestConfig {
    fn default() -> Self {
        ForestConfig {
            n_trees: 500,
            max_depth: None,
            min_samples_leaf: 1,
            features_per_split: FeaturesPerSplit::Sqrt,
            bootstrap: true,
            seed: 0,
        }
    }
}

impl ForestConfig {
    pub fn validate(&self, n_features: usize) -> Result<()> {
        if self.n_trees == 0 {
            return Err(Error::InvalidArgument("n_trees must be at least 1".into()));
        }
        if self.min_samples_leaf == 0 {
            return Err(Error::InvalidArgument("min_samples_leaf must be at least 1".into()));
        }
        self.features_per_split.resolve(n_features).map(|_| ())
    }

    pub fn with_seed(&self, seed: u64) -> Self {
        ForestConfig { seed, ..self.clone() }
    }
}

/// Whether independent units of work (trees, runs) may run on the rayon
/// pool. Results are identical either way.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Execution {
    Serial,
    #[default]
    Parallel,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ForestModel {
    pub schema_version: u32,
    pub config: ForestConfig,
    pub column_names: Vec<String>,
    pub trees: Vec<TreeNode>,
    /// Normalized mean decrease in impurity per feature.
    pub gini_importance: Vec<f64>,
}

fn fit_one(matrix: &EncodedMatrix, config: &ForestConfig, tree_index: usize) -> Result<TreeNode> {
    let mut rng = seed::rng(seed::mix(config.seed, tree_index as u64));
    let n = matrix.n_rows();
    let samples: Vec<usize> = if config.bootstrap {
        (0..n).map(|_| rng.gen_range(0..n)).collect()
    } else {
        (0..n).collect()
    };
    tree::grow_tree(matrix, samples, config, &mut rng)
}

pub fn fit_forest(matrix: &EncodedMatrix, config: &ForestConfig) -> Result<ForestModel> {
    fit_forest_with(matrix, config, Execution::Parallel)
}

pub fn fit_forest_with(matrix: &EncodedMatrix, config: &ForestConfig, execution: Execution) -> Result<ForestModel> {
    config.validate(matrix.n_cols())?;
    if matrix.n_rows() < 2 {
        return Err(Error::InvalidArgument(format!(
            "forest needs at least 2 samples, got {}",
            matrix.n_rows()
        )));
    }
    let positives = matrix.labels().iter().filter(|l| **l).count();
    if positives == 0 || positives == matrix.n_rows() {
        return Err(Error::SingleClass(format!(
            "training labels are all {}",
            if positives == 0 { "negative" } else { "positive" }
        )));
    }
    let trees: Vec<TreeNode> = match execution {
        Execution::Serial => (0..config.n_trees)
            .map(|t| fit_one(matrix, config, t))
            .collect::<Result<_>>()?,
        Execution::Parallel => (0..config.n_trees)
            .into_par_iter()
            .map(|t| fit_one(matrix, config, t))
            .collect::<Result<_>>()?,
    };
    let gini_importance = importance::gini_importance(&trees, matrix.n_cols());
    Ok(ForestModel {
        schema_version: SCHEMA_VERSION,
        config: config.clone(),
        column_names: matrix.column_names().to_vec(),
        trees,
        gini_importance,
    })
}

impl ForestModel {
    pub fn n_features(&self) -> usize {
        self.column_names.len()
    }

    /// Mean positive fraction of the leaves `row` reaches.
    pub fn predict_proba(&self, row: &[f64]) -> Result<f64> {
        if row.len() != self.n_features() {
            return Err(Error::ArityMismatch {
                expected: self.n_features(),
                found: row.len(),
            });
        }
        let sum: f64 = self.trees.iter().map(|t| t.predict(row)).sum();
        Ok(sum / self.trees.len() as f64)
    }

    pub fn predict_matrix(&self, matrix: &EncodedMatrix) -> Result<Vec<f64>> {
        if matrix.column_names() != self.column_names.as_slice() {
            return Err(Error::ArityMismatch {
                expected: self.n_features(),
                found: matrix.n_cols(),
            });
        }
        matrix.rows().map(|row| self.predict_proba(row)).collect()
    }

    /// Same as the stored `gini_importance`.
    pub fn gini_importance(&self) -> &[f64] {
        &self.gini_importance
    }

    pub fn to_writer<W: Write>(&self, writer: W) -> Result<()> {
        serde_json::to_writer(writer, self)?;
        Ok(())
    }

    /// Reads a model written by [`ForestModel::to_writer`]. Deep trees are
    /// accepted.
    pub fn from_reader<R: Read>(reader: R) -> Result<Self> {
        let mut de = serde_json::Deserializer::from_reader(reader);
        de.disable_recursion_limit();
        let model = ForestModel::deserialize(&mut de)?;
        de.end()?;
        if model.schema_version != SCHEMA_VERSION {
            return Err(Error::Schema(format!(
                "forest schema version {} (expected {SCHEMA_VERSION})",
                model.schema_version
            )));
        }
        Ok(model)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let file = std::io::BufWriter::new(std::fs::File::create(path)?);
        self.to_writer(file)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_reader(std::io::BufReader::new(std::fs::File::open(path)?))
    }
}
