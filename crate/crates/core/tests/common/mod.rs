//! Synthetic policy cases for integration tests.
#![allow(dead_code)]

use policy_forest::dataset::{PolicyArea, PolicyCase, IG_COUNT};
use policy_forest::seed;
use rand::Rng;

/// Random cases whose outcome is decided by the summed stances of
/// `informative` groups (P90 breaks ties), spread over all policy areas and
/// the years 1981-2002.
pub fn planted_cases(n: usize, informative: &[usize], seed: u64) -> Vec<PolicyCase> {
    let mut rng = seed::rng(seed);
    (0..n)
        .map(|i| {
            let ig_alignments: Vec<i8> = (0..IG_COUNT).map(|_| rng.gen_range(-2..=2)).collect();
            let p90: f64 = rng.gen_range(0.0..1.0);
            let push: i32 = informative.iter().map(|&j| i32::from(ig_alignments[j])).sum();
            let area = PolicyArea::ALL[rng.gen_range(0..PolicyArea::ALL.len())];
            PolicyCase {
                case_id: format!("case-{i:04}"),
                year: 1981 + (i % 22) as i32,
                outcome: push > 0 || (push == 0 && p90 > 0.5),
                p90: Some(p90),
                p50: Some(rng.gen_range(0.0..1.0)),
                p10: Some(rng.gen_range(0.0..1.0)),
                ig_alignments,
                policy_area: area,
                policy_domain: area.domain(),
                provided_net_iga: None,
            }
        })
        .collect()
}

/// Foreign-policy cases in the three regions of the pivot-group picture:
/// pivot in favor passes almost always; pivot opposed passes with fair odds
/// when P90 favors and rarely otherwise.
pub fn three_region_cases(n: usize, pivot: usize, seed: u64) -> Vec<PolicyCase> {
    let mut rng = seed::rng(seed ^ 0x5EED);
    let mut cases = planted_cases(n, &[], seed);
    for c in &mut cases {
        c.policy_area = PolicyArea::Defense;
        c.policy_domain = PolicyArea::Defense.domain();
        let stance: i8 = [-2, -1, 1, 2][rng.gen_range(0..4)];
        c.ig_alignments[pivot] = stance;
        let p90 = c.p90.unwrap();
        c.outcome = if stance > 0 {
            rng.gen_bool(0.95)
        } else if p90 > 0.5 {
            rng.gen_bool(0.7)
        } else {
            rng.gen_bool(0.05)
        };
    }
    cases
}
