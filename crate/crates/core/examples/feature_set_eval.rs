//! Repeated random-split evaluation of feature sets A and D, plus one
//! retrodiction split, printed as balanced accuracy / AUC in percent.

mod common;

use policy_forest::dataset::FeatureSetSpec;
use policy_forest::experiments::{run_feature_set_eval, ModelKind, Regime, Settings};
use policy_forest::forest::ForestConfig;

fn main() -> policy_forest::Result<()> {
    let cases = common::cases();
    let settings = Settings { forest: ForestConfig { n_trees: 150, ..ForestConfig::default() }, ..Settings::default() };
    let runs = [
        (FeatureSetSpec::set_a(), Regime::RandomDraw, ModelKind::Forest),
        (FeatureSetSpec::set_d(), Regime::RandomDraw, ModelKind::Forest),
        (FeatureSetSpec::set_d(), Regime::RandomDraw, ModelKind::Logistic),
        (FeatureSetSpec::set_d(), Regime::Retrodiction, ModelKind::Forest),
    ];
    for (spec, regime, model) in runs {
        let r = run_feature_set_eval(&cases, &spec, regime, model, 10.min(regime.default_runs()), 1, &settings)?;
        println!(
            "{:?} {:<12} {:<8} BA {}  AUC {}",
            spec.id,
            regime.label(),
            model.label(),
            r.balanced_accuracy.display_scaled(100.0, 1),
            r.auc.display_scaled(100.0, 1)
        );
    }
    Ok(())
}
