//! File outputs. Every file starts with provenance: a JSON envelope field,
//! or `#` comment lines ahead of a CSV header. CSV tables scale
//! importances, correlations, accuracies and gains by 100; JSON keeps raw
//! values.

use std::io::Write;
use std::path::Path;

use serde::Serialize;

use super::{CaseStudyReport, DomainRanking, EvalReport, GainReport, MeanStd, SelectorComparison, SetCSelection};
use crate::dataset::summary::DomainCounts;
use crate::error::Result;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Provenance {
    pub tool: String,
    pub version: String,
    pub argv: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub base_seed: Option<u64>,
}

impl Provenance {
    pub fn new(argv: &[String], base_seed: Option<u64>) -> Self {
        Provenance {
            tool: env!("CARGO_PKG_NAME").to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            argv: argv.to_vec(),
            base_seed,
        }
    }

    fn write_comments<W: Write>(&self, w: &mut W) -> Result<()> {
        writeln!(w, "# tool: {} {}", self.tool, self.version)?;
        writeln!(w, "# argv: {}", self.argv.join(" "))?;
        if let Some(seed) = self.base_seed {
            writeln!(w, "# base_seed: {seed}")?;
        }
        Ok(())
    }
}

#[derive(Serialize)]
struct Envelope<'a, T> {
    provenance: &'a Provenance,
    report: &'a T,
}

pub fn write_json<W: Write, T: Serialize>(mut writer: W, provenance: &Provenance, report: &T) -> Result<()> {
    serde_json::to_writer_pretty(&mut writer, &Envelope { provenance, report })?;
    writeln!(writer)?;
    Ok(())
}

/// Writes to `path` through a buffer, creating parent directories.
pub fn write_file(path: &Path, write: impl FnOnce(&mut Vec<u8>) -> Result<()>) -> Result<()> {
    if let Some(parent) = path.parent() {
        std::fs::create_dir_all(parent)?;
    }
    let mut buffer = Vec::new();
    write(&mut buffer)?;
    std::fs::write(path, buffer)?;
    Ok(())
}

fn scaled(value: f64) -> String {
    format!("{:.3}", value * 100.0)
}

fn mean_std(m: Option<&MeanStd>, scale: bool) -> [String; 2] {
    match m {
        Some(m) if scale => [scaled(m.mean), scaled(m.std)],
        Some(m) => [format!("{:.3}", m.mean), format!("{:.3}", m.std)],
        None => [String::new(), String::new()],
    }
}

fn csv_table<W: Write>(
    mut writer: W,
    provenance: &Provenance,
    header: &[&str],
    rows: impl IntoIterator<Item = Vec<String>>,
) -> Result<()> {
    provenance.write_comments(&mut writer)?;
    let mut csv = csv::Writer::from_writer(writer);
    csv.write_record(header)?;
    for row in rows {
        csv.write_record(&row)?;
    }
    csv.flush()?;
    Ok(())
}

/// One row per report: feature set, regime, model, balanced accuracy and AUC.
pub fn eval_summary_csv<W: Write>(writer: W, provenance: &Provenance, reports: &[EvalReport]) -> Result<()> {
    let header = ["feature_set", "regime", "model", "n_runs", "bal_acc_mean", "bal_acc_std", "auc_mean", "auc_std"];
    let rows = reports.iter().map(|r| {
        let mut row = vec![
            r.feature_set_id.to_string(),
            r.regime.label().to_string(),
            r.model_kind.label().to_string(),
            r.runs.len().to_string(),
        ];
        row.extend(mean_std(Some(&r.balanced_accuracy), true));
        row.extend(mean_std(Some(&r.auc), true));
        row
    });
    csv_table(writer, provenance, &header, rows)
}

pub fn ranking_csv<W: Write>(writer: W, provenance: &Provenance, ranking: &DomainRanking) -> Result<()> {
    let header = [
        "rank", "feature", "display_name", "rf_score_mean", "rf_score_std", "corr_mean", "corr_std", "at_bats_mean", "at_bats_std",
    ];
    let rows = ranking.rows.iter().enumerate().map(|(i, r)| {
        let mut row = vec![(i + 1).to_string(), r.feature.clone(), r.display_name.clone()];
        row.extend(mean_std(Some(&r.rf_score), true));
        row.extend(mean_std(r.correlation.as_ref(), true));
        row.extend(mean_std(Some(&r.at_bats), false));
        row
    });
    csv_table(writer, provenance, &header, rows)
}

pub fn set_c_csv<W: Write>(writer: W, provenance: &Provenance, selection: &SetCSelection) -> Result<()> {
    let header = ["rank", "ig", "mean_importance", "selected"];
    let rows = selection.ranked_igs.iter().enumerate().map(|(i, (ig, score))| {
        vec![
            (i + 1).to_string(),
            ig.clone(),
            scaled(*score),
            selection.spec.ig_subset.contains(ig).to_string(),
        ]
    });
    csv_table(writer, provenance, &header, rows)
}

pub fn gains_csv<W: Write>(writer: W, provenance: &Provenance, gains: &GainReport) -> Result<()> {
    let header = ["ig", "display_name", "gain_mean", "gain_std", "test_cases_mean", "test_cases_std"];
    let rows = gains.rows.iter().map(|g| {
        let mut row = vec![g.ig.clone(), g.display_name.clone()];
        row.extend(mean_std(Some(&g.gain), true));
        row.extend(mean_std(Some(&g.test_cases), false));
        row
    });
    csv_table(writer, provenance, &header, rows)
}

pub fn selectors_csv<W: Write>(writer: W, provenance: &Provenance, comparison: &SelectorComparison) -> Result<()> {
    let header = ["regime", "model", "selector", "bal_acc_mean", "bal_acc_std", "auc_mean", "auc_std"];
    let cells = comparison.cells.iter().map(|c| {
        let mut row = vec![c.regime.label().to_string(), c.model.label().to_string(), c.selector.label().to_string()];
        row.extend(mean_std(Some(&c.balanced_accuracy), true));
        row.extend(mean_std(Some(&c.auc), true));
        row
    });
    let gains = comparison.gains.iter().map(|g| {
        let mut row = vec![g.regime.label().to_string(), g.model.label().to_string(), "gain".to_string()];
        row.extend(mean_std(Some(&g.balanced_accuracy), true));
        row.extend(mean_std(Some(&g.auc), true));
        row
    });
    csv_table(writer, provenance, &header, cells.chain(gains))
}

/// Per-case point data for plotting.
pub fn case_study_csv<W: Write>(writer: W, provenance: &Provenance, report: &CaseStudyReport) -> Result<()> {
    let header = [
        "case_id",
        "p90",
        "pivot",
        "outcome",
        "region",
        "forest_score",
        "forest_prediction",
        "logistic_score",
        "logistic_prediction",
    ];
    let rows = report.points.iter().map(|p| {
        vec![
            p.case_id.clone(),
            p.p90.to_string(),
            p.pivot.to_string(),
            u8::from(p.outcome).to_string(),
            p.region.label().to_string(),
            p.forest_score.to_string(),
            u8::from(p.forest_prediction).to_string(),
            p.logistic_score.to_string(),
            u8::from(p.logistic_prediction).to_string(),
        ]
    });
    csv_table(writer, provenance, &header, rows)
}

pub fn domain_counts_csv<W: Write>(writer: W, provenance: &Provenance, counts: &DomainCounts) -> Result<()> {
    let header = ["domain", "positive", "negative", "post_cutoff_positive", "post_cutoff_negative"];
    let rows = counts.rows.iter().map(|r| {
        vec![
            r.domain.clone(),
            r.full.positive.to_string(),
            r.full.negative.to_string(),
            r.post_cutoff.positive.to_string(),
            r.post_cutoff.negative.to_string(),
        ]
    });
    csv_table(writer, provenance, &header, rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::summary::domain_counts;
    use crate::experiments::testing::planted_cases;

    #[test]
    fn csv_starts_with_provenance() {
        let prov = Provenance::new(&["policy-forest".into(), "summarize".into()], Some(7));
        let mut out = Vec::new();
        domain_counts_csv(&mut out, &prov, &domain_counts(&planted_cases(30, &[0], 1))).unwrap();
        let text = String::from_utf8(out).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert!(lines[0].starts_with("# tool: policy-forest "));
        assert_eq!(lines[1], "# argv: policy-forest summarize");
        assert_eq!(lines[2], "# base_seed: 7");
        assert_eq!(lines[3], "domain,positive,negative,post_cutoff_positive,post_cutoff_negative");
        assert_eq!(lines.len(), 4 + 7);
        assert!(lines[10].starts_with("Total,"));
    }

    #[test]
    fn json_envelope_holds_provenance() {
        let prov = Provenance::new(&["x".into()], None);
        let mut out = Vec::new();
        write_json(&mut out, &prov, &vec![1, 2]).unwrap();
        let value: serde_json::Value = serde_json::from_slice(&out).unwrap();
        assert_eq!(value["provenance"]["argv"][0], "x");
        assert!(value["provenance"].get("base_seed").is_none());
        assert_eq!(value["report"][1], 2);
    }
}
