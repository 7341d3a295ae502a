//! Penalized logistic regression on the ranking columns (rescaled P90 and
//! the interest groups); prints the largest standardized coefficients.

mod common;

use policy_forest::dataset::{encode, FeatureSetSpec};
use policy_forest::logistic::{fit_with_trace, LogisticConfig};

fn main() -> policy_forest::Result<()> {
    let cases = common::cases();
    let matrix = encode(&cases, &FeatureSetSpec::ranking())?;
    let (model, trace) = fit_with_trace(&matrix, &LogisticConfig::default())?;
    println!(
        "converged={} after {} Newton steps; log-likelihood {:.3} -> {:.3}",
        model.converged,
        model.iterations,
        trace.objective[0],
        trace.objective.last().unwrap()
    );
    for f in model.coefficient_ranking().iter().take(6) {
        println!("{:<40} |beta| = {:.3}", f.name, f.magnitude);
    }
    let p = model.predict_proba(matrix.row(0))?;
    println!("first case: P(pass) = {p:.3}, passed = {}", matrix.labels()[0]);
    Ok(())
}
