//! How much adding interest groups (set B over set A) helps on the cases
//! each group cared most about.

mod common;

use policy_forest::experiments::{gain_per_ig, Settings};
use policy_forest::dataset::FeatureSetSpec;
use policy_forest::forest::ForestConfig;

fn main() -> policy_forest::Result<()> {
    let cases = common::cases();
    let settings = Settings { forest: ForestConfig { n_trees: 100, ..ForestConfig::default() }, ..Settings::default() };
    let report = gain_per_ig(&cases, &FeatureSetSpec::set_b(), &FeatureSetSpec::set_a(), 5, 1, 10, &settings)?;
    let mut rows = report.rows.clone();
    rows.sort_by(|a, b| b.gain.mean.total_cmp(&a.gain.mean));
    for g in rows.iter().take(8) {
        println!("{:<36} {:>14} over ~{:.0} cases", g.display_name, g.gain.display_scaled(100.0, 1), g.test_cases.mean);
    }
    println!("{} groups omitted for too few cases", report.omitted.len());
    Ok(())
}
