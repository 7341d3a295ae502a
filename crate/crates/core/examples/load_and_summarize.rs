//! Round-trips cases through CSV, checks derived netIGA and prints outcome
//! counts per domain.
//!
//!     cargo run --example load_and_summarize [-- cases.csv]

mod common;

use policy_forest::dataset::{domain_counts, load_cases, net_iga_mismatches, write_cases};

fn main() -> policy_forest::Result<()> {
    let cases = common::cases();

    let mut csv = Vec::new();
    write_cases(&mut csv, &cases)?;
    let reloaded = load_cases(csv.as_slice())?;
    assert_eq!(reloaded.len(), cases.len());

    let bad = net_iga_mismatches(&reloaded, 1e-6);
    println!("{} cases, {} netIGA mismatches", reloaded.len(), bad.len());

    let counts = domain_counts(&reloaded);
    println!("{:<16} {:>6} {:>6} {:>8} {:>8}", "domain", "pass", "fail", "pass>=", counts.cutoff_year);
    for row in &counts.rows {
        println!(
            "{:<16} {:>6} {:>6} {:>8} {:>8}",
            row.domain, row.full.positive, row.full.negative, row.post_cutoff.positive, row.post_cutoff.negative
        );
    }
    Ok(())
}
