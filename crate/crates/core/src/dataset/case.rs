use serde::{Deserialize, Serialize};

use super::schema::{PolicyArea, PolicyDomain, IG_COUNT};
use crate::error::{Error, Result};

/// One policy case: a proposed federal policy change and its fate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolicyCase {
    pub case_id: String,
    pub year: i32,
    /// `true` when the change was adopted.
    pub outcome: bool,
    /// Fraction of 90th-percentile respondents in favor, in `[0, 1]`.
    pub p90: Option<f64>,
    pub p50: Option<f64>,
    pub p10: Option<f64>,
    /// Ordinal alignments in `{-2, ..., 2}`, one per interest group in
    /// canonical order.
    pub ig_alignments: Vec<i8>,
    pub policy_area: PolicyArea,
    pub policy_domain: PolicyDomain,
    /// netIGA as stored in the source file, if it had one.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provided_net_iga: Option<f64>,
}

impl PolicyCase {
    /// Checks the field invariants.
    pub fn validate(&self) -> Result<()> {
        if self.ig_alignments.len() != IG_COUNT {
            return Err(Error::InvalidArgument(format!(
                "case `{}` has {} alignments, expected {IG_COUNT}",
                self.case_id,
                self.ig_alignments.len()
            )));
        }
        if let Some(bad) = self.ig_alignments.iter().find(|a| !(-2..=2).contains(*a)) {
            return Err(Error::InvalidArgument(format!(
                "case `{}` has alignment {bad} outside [-2, 2]",
                self.case_id
            )));
        }
        for (name, value) in [("p90", self.p90), ("p50", self.p50), ("p10", self.p10)] {
            if let Some(v) = value {
                if !(0.0..=1.0).contains(&v) {
                    return Err(Error::InvalidArgument(format!(
                        "case `{}` has {name} = {v} outside [0, 1]",
                        self.case_id
                    )));
                }
            }
        }
        if self.policy_area.domain() != self.policy_domain {
            return Err(Error::InvalidArgument(format!(
                "case `{}`: policy area `{}` belongs to domain `{}`, not `{}`",
                self.case_id,
                self.policy_area,
                self.policy_area.domain(),
                self.policy_domain
            )));
        }
        Ok(())
    }

    pub fn net_iga(&self) -> f64 {
        net_iga(tally_alignments(self))
    }
}

/// Counts of non-neutral interest-group stances on one case.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlignmentTally {
    pub strongly_favor: u32,
    pub somewhat_favor: u32,
    pub strongly_oppose: u32,
    pub somewhat_oppose: u32,
}

impl AlignmentTally {
    pub fn new(strongly_favor: u32, somewhat_favor: u32, strongly_oppose: u32, somewhat_oppose: u32) -> Self {
        AlignmentTally {
            strongly_favor,
            somewhat_favor,
            strongly_oppose,
            somewhat_oppose,
        }
    }
}

pub fn tally_alignments(case: &PolicyCase) -> AlignmentTally {
    case.ig_alignments
        .iter()
        .fold(AlignmentTally::default(), |mut t, &a| {
            match a {
                2 => t.strongly_favor += 1,
                1 => t.somewhat_favor += 1,
                -1 => t.somewhat_oppose += 1,
                -2 => t.strongly_oppose += 1,
                _ => {}
            }
            t
        })
}

/// Net interest-group alignment:
/// `ln(F2 + F1/2 + 1) - ln(O2 + O1/2 + 1)`.
pub fn net_iga(tally: AlignmentTally) -> f64 {
    let favor = f64::from(tally.strongly_favor) + 0.5 * f64::from(tally.somewhat_favor) + 1.0;
    let oppose = f64::from(tally.strongly_oppose) + 0.5 * f64::from(tally.somewhat_oppose) + 1.0;
    favor.ln() - oppose.ln()
}

/// Maps a `[0, 1]` preference onto the `[-2, 2]` alignment scale.
pub fn rescale_p90(p: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidArgument(format!("p90 {p} outside [0, 1]")));
    }
    Ok(4.0 * p - 2.0)
}

/// Half-width of the band treated as noncommittal on the `[-2, 2]` scale.
pub const NONCOMMITTAL_BAND: f64 = 0.4;

/// Zeroes values with `|v| <= 0.4`.
pub fn zero_noncommittal(v: f64) -> f64 {
    if v.abs() <= NONCOMMITTAL_BAND {
        0.0
    } else {
        v
    }
}
