//! Forest-chosen versus logistic-chosen interest-group subsets.

mod common;

use policy_forest::experiments::{compare_selectors, Regime, Settings};
use policy_forest::forest::ForestConfig;

fn main() -> policy_forest::Result<()> {
    let cases = common::cases();
    let settings = Settings { forest: ForestConfig { n_trees: 100, ..ForestConfig::default() }, ..Settings::default() };
    let cmp = compare_selectors(&cases, 5, &[Regime::RandomDraw, Regime::Retrodiction], 4, 1, &settings)?;
    for cell in &cmp.cells {
        println!(
            "{:<12} {:<8} {:<14} BA {}",
            cell.regime.label(),
            cell.model.label(),
            cell.selector.label(),
            cell.balanced_accuracy.display_scaled(100.0, 1)
        );
    }
    for gain in &cmp.gains {
        println!("gain {:<12} {:<8} {}", gain.regime.label(), gain.model.label(), gain.balanced_accuracy.display_scaled(100.0, 1));
    }
    Ok(())
}
