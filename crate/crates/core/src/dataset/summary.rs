use serde::{Deserialize, Serialize};

use super::case::PolicyCase;
use super::schema::PolicyDomain;
use super::split::DEFAULT_CUTOFF_YEAR;

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct ClassCounts {
    pub positive: usize,
    pub negative: usize,
}

impl ClassCounts {
    pub fn total(&self) -> usize {
        self.positive + self.negative
    }

    /// Share of positive cases; 0 for an empty group.
    pub fn positive_fraction(&self) -> f64 {
        if self.total() == 0 {
            0.0
        } else {
            self.positive as f64 / self.total() as f64
        }
    }

    fn add(&mut self, outcome: bool) {
        if outcome {
            self.positive += 1;
        } else {
            self.negative += 1;
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DomainCountRow {
    /// Domain label, or `Total`.
    pub domain: String,
    pub full: ClassCounts,
    pub post_cutoff: ClassCounts,
}

/// Positive/negative counts per domain, over all cases and over cases from
/// the cutoff year on.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DomainCounts {
    pub cutoff_year: i32,
    pub rows: Vec<DomainCountRow>,
}

impl DomainCounts {
    pub fn total(&self) -> &DomainCountRow {
        self.rows.last().expect("total row present")
    }

    pub fn domain(&self, domain: PolicyDomain) -> &DomainCountRow {
        &self.rows[domain.index()]
    }
}

pub fn domain_counts(cases: &[PolicyCase]) -> DomainCounts {
    domain_counts_with_cutoff(cases, DEFAULT_CUTOFF_YEAR)
}

pub fn domain_counts_with_cutoff(cases: &[PolicyCase], cutoff_year: i32) -> DomainCounts {
    let mut full = [ClassCounts::default(); 6];
    let mut post = [ClassCounts::default(); 6];
    for case in cases {
        let d = case.policy_domain.index();
        full[d].add(case.outcome);
        if case.year >= cutoff_year {
            post[d].add(case.outcome);
        }
    }
    let sum = |counts: &[ClassCounts]| ClassCounts {
        positive: counts.iter().map(|c| c.positive).sum(),
        negative: counts.iter().map(|c| c.negative).sum(),
    };
    let mut rows: Vec<DomainCountRow> = PolicyDomain::ALL
        .iter()
        .map(|d| DomainCountRow {
            domain: d.label().to_string(),
            full: full[d.index()],
            post_cutoff: post[d.index()],
        })
        .collect();
    rows.push(DomainCountRow {
        domain: "Total".into(),
        full: sum(&full),
        post_cutoff: sum(&post),
    });
    DomainCounts { cutoff_year, rows }
}
