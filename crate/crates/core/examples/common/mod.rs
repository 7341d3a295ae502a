//! Case source shared by the examples: a CSV path as the first argument,
//! otherwise a synthetic set with a few influential groups.
#![allow(dead_code)]

use policy_forest::dataset::{load_cases_from_path, PolicyArea, PolicyCase, IG_COUNT};
use policy_forest::seed;
use rand::Rng;

pub fn cases() -> Vec<PolicyCase> {
    match std::env::args().nth(1) {
        Some(path) => load_cases_from_path(&path, None).unwrap_or_else(|e| {
            eprintln!("{path}: {e}");
            std::process::exit(1);
        }),
        None => synthetic(600, 7),
    }
}

/// AARP, the defense contractors and the NRA push outcomes; P90 nudges them.
pub fn synthetic(n: usize, seed: u64) -> Vec<PolicyCase> {
    let mut rng = seed::rng(seed);
    (0..n)
        .map(|i| {
            let mut ig_alignments: Vec<i8> = (0..IG_COUNT).map(|_| rng.gen_range(-2..=2)).collect();
            // Most groups sit out most cases.
            for a in ig_alignments.iter_mut() {
                if rng.gen_bool(0.7) {
                    *a = 0;
                }
            }
            let p90: f64 = rng.gen_range(0.0..1.0);
            let push = f64::from(ig_alignments[0] + ig_alignments[17] + ig_alignments[31]);
            let logit = 0.9 * push + 3.0 * (p90 - 0.5) - 0.6;
            let area = PolicyArea::ALL[rng.gen_range(0..PolicyArea::ALL.len())];
            PolicyCase {
                case_id: format!("syn-{i:04}"),
                year: 1981 + (i % 22) as i32,
                outcome: rng.gen_bool(1.0 / (1.0 + (-logit).exp())),
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
