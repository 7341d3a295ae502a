//! Forest versus logistic regression on P90 and one pivot group, where the
//! group's stance flips how much P90 matters.

use policy_forest::dataset::{PolicyArea, PolicyDomain};
use policy_forest::experiments::{nonlinearity_case_study, Settings, DEFAULT_PIVOT};
use policy_forest::seed;
use rand::Rng;

mod common;

fn main() -> policy_forest::Result<()> {
    let pivot = policy_forest::dataset::schema::ig_index(DEFAULT_PIVOT).unwrap();
    let mut rng = seed::rng(99);
    let mut cases = common::synthetic(400, 5);
    for c in &mut cases {
        c.policy_area = PolicyArea::Defense;
        c.policy_domain = PolicyArea::Defense.domain();
        let stance: i8 = [-2, -1, 1, 2][rng.gen_range(0..4)];
        c.ig_alignments[pivot] = stance;
        let p = match (stance > 0, c.p90.unwrap() > 0.5) {
            (true, _) => 0.95,
            (false, true) => 0.7,
            (false, false) => 0.05,
        };
        c.outcome = rng.gen_bool(p);
    }

    let report = nonlinearity_case_study(&cases, DEFAULT_PIVOT, PolicyDomain::Foreign, 1, &Settings::default())?;
    for r in &report.regions {
        println!("{:?}: {} pass / {} fail", r.region, r.outcomes.positive, r.outcomes.negative);
    }
    println!(
        "in-sample balanced accuracy: forest {:.3}, logistic {:.3}",
        report.forest_balanced_accuracy, report.logistic_balanced_accuracy
    );
    Ok(())
}
