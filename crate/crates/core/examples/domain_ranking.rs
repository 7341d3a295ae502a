//! Ranks P90 and the interest groups within one domain, then picks the
//! reduced group subset over all cases.

mod common;

use policy_forest::dataset::PolicyDomain;
use policy_forest::experiments::{build_set_c, rank_igs_by_domain, Settings};
use policy_forest::forest::ForestConfig;

fn main() -> policy_forest::Result<()> {
    let cases = common::cases();
    let settings = Settings { forest: ForestConfig { n_trees: 100, ..ForestConfig::default() }, ..Settings::default() };

    let ranking = rank_igs_by_domain(&cases, PolicyDomain::Guns, 5, 1, &settings)?;
    println!("{} ({} cases)", ranking.domain.label(), ranking.n_cases);
    for row in ranking.rows.iter().take(5) {
        let corr = row.correlation.as_ref().map_or("-".to_string(), |c| c.display_scaled(1.0, 2));
        println!("  {:<36} rf {:.4}  corr {corr}  at-bats {:.0}", row.display_name, row.rf_score.mean, row.at_bats.mean);
    }

    let set_c = build_set_c(&cases, 5, 5, 1, &settings)?;
    println!("reduced subset: {:?}", set_c.spec.ig_subset);
    Ok(())
}
