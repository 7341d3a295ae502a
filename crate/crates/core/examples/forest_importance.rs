//! Fits a forest on feature set D and lists the most important columns by
//! Gini and by permutation.

mod common;

use policy_forest::dataset::{encode, random_split, FeatureSetSpec};
use policy_forest::forest::{fit_forest, permutation_importance, ForestConfig, ForestModel, ImportanceMetric};

fn main() -> policy_forest::Result<()> {
    let cases = common::cases();
    let matrix = encode(&cases, &FeatureSetSpec::set_d())?;
    let split = random_split(matrix.n_rows(), 0.67, 3)?;
    let (train, test) = (matrix.select_rows(&split.train), matrix.select_rows(&split.test));

    let config = ForestConfig { n_trees: 200, seed: 3, ..ForestConfig::default() };
    let model = fit_forest(&train, &config)?;

    let gini = model.gini_importance();
    let perm = permutation_importance(&model, &test, ImportanceMetric::Auc, 3, 5)?;
    let mut order: Vec<usize> = (0..gini.len()).collect();
    order.sort_by(|&a, &b| gini[b].total_cmp(&gini[a]));
    println!("{:<40} {:>8} {:>10}", "column", "gini", "perm AUC");
    for &j in order.iter().take(8) {
        println!("{:<40} {:>8.4} {:>10.4}", train.column_names()[j], gini[j], perm[j]);
    }

    // Models serialize to JSON and predict identically after reloading.
    let mut json = Vec::new();
    model.to_writer(&mut json)?;
    let reloaded = ForestModel::from_reader(json.as_slice())?;
    assert_eq!(reloaded.predict_matrix(&test)?, model.predict_matrix(&test)?);
    Ok(())
}
