//! CSV ingestion and serialization in the canonical schema.

use std::collections::{HashMap, HashSet};
use std::io::{Read, Write};
use std::path::Path;

use csv::{ReaderBuilder, StringRecord, WriterBuilder};

use super::case::PolicyCase;
use super::schema::{self, PolicyArea, PolicyDomain, IG_COUNT};
use crate::error::{Error, Result};

/// Source-to-canonical renames, read from `source_name=canonical_name` lines.
///
/// Renames apply to header names and to `policy_area` / `policy_domain`
/// cell values. Blank lines and lines starting with `#` are ignored.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct NameMapping {
    renames: HashMap<String, String>,
}

impl NameMapping {
    pub fn parse(text: &str) -> Result<Self> {
        let mut renames = HashMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (source, canonical) = line.split_once('=').ok_or_else(|| {
                Error::Schema(format!("mapping line {}: expected `source=canonical`", i + 1))
            })?;
            let (source, canonical) = (source.trim(), canonical.trim());
            if source.is_empty() || canonical.is_empty() {
                return Err(Error::Schema(format!("mapping line {}: empty name", i + 1)));
            }
            if renames.insert(source.to_string(), canonical.to_string()).is_some() {
                return Err(Error::Schema(format!(
                    "mapping line {}: `{source}` mapped twice",
                    i + 1
                )));
            }
        }
        Ok(NameMapping { renames })
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn apply<'a>(&'a self, name: &'a str) -> &'a str {
        self.renames.get(name).map(String::as_str).unwrap_or(name)
    }

    pub fn is_empty(&self) -> bool {
        self.renames.is_empty()
    }
}

/// Column positions resolved from a header row.
struct Columns {
    case_id: usize,
    year: usize,
    outcome: usize,
    p90: usize,
    p50: usize,
    p10: usize,
    igs: [usize; IG_COUNT],
    policy_area: usize,
    policy_domain: usize,
    net_iga: Option<usize>,
    names: Vec<String>,
}

impl Columns {
    fn resolve(header: &StringRecord, mapping: &NameMapping) -> Result<Self> {
        let names: Vec<String> = header.iter().map(|h| mapping.apply(h.trim()).to_string()).collect();
        let mut position = HashMap::new();
        for (i, name) in names.iter().enumerate() {
            if position.insert(name.as_str(), i).is_some() {
                return Err(Error::Schema(format!("column `{name}` appears twice")));
            }
        }
        let fixed: HashSet<&str> = [
            schema::CASE_ID,
            schema::YEAR,
            schema::OUTCOME,
            schema::P90,
            schema::P50,
            schema::P10,
            schema::POLICY_AREA,
            schema::POLICY_DOMAIN,
            schema::NET_IGA,
        ]
        .into_iter()
        .collect();
        for name in &names {
            if !fixed.contains(name.as_str()) && schema::ig_index(name).is_none() {
                return Err(Error::Schema(format!("unknown column `{name}`")));
            }
        }
        let require = |name: &str| {
            position
                .get(name)
                .copied()
                .ok_or_else(|| Error::Schema(format!("missing column `{name}`")))
        };
        let mut igs = [0usize; IG_COUNT];
        for (slot, name) in igs.iter_mut().zip(schema::ig_names()) {
            *slot = require(name)?;
        }
        Ok(Columns {
            case_id: require(schema::CASE_ID)?,
            year: require(schema::YEAR)?,
            outcome: require(schema::OUTCOME)?,
            p90: require(schema::P90)?,
            p50: require(schema::P50)?,
            p10: require(schema::P10)?,
            igs,
            policy_area: require(schema::POLICY_AREA)?,
            policy_domain: require(schema::POLICY_DOMAIN)?,
            net_iga: position.get(schema::NET_IGA).copied(),
            names,
        })
    }
}

struct RowParser<'a> {
    record: &'a StringRecord,
    row: usize,
    columns: &'a Columns,
}

impl RowParser<'_> {
    fn cell(&self, index: usize) -> &str {
        self.record.get(index).unwrap_or("").trim()
    }

    fn error(&self, index: usize, message: impl Into<String>) -> Error {
        Error::Cell {
            row: self.row,
            column: self.columns.names[index].clone(),
            message: message.into(),
        }
    }

    fn optional_fraction(&self, index: usize) -> Result<Option<f64>> {
        let cell = self.cell(index);
        if cell.is_empty() {
            return Ok(None);
        }
        let value: f64 = cell
            .parse()
            .map_err(|_| self.error(index, format!("`{cell}` is not a number")))?;
        if !(0.0..=1.0).contains(&value) {
            return Err(self.error(index, format!("{value} outside [0, 1]")));
        }
        Ok(Some(value))
    }

    fn parse(&self, mapping: &NameMapping) -> Result<PolicyCase> {
        let c = self.columns;
        let case_id = self.cell(c.case_id);
        if case_id.is_empty() {
            return Err(self.error(c.case_id, "empty case_id"));
        }
        let year_cell = self.cell(c.year);
        let year: i32 = year_cell
            .parse()
            .map_err(|_| self.error(c.year, format!("`{year_cell}` is not an integer year")))?;
        let outcome = match self.cell(c.outcome) {
            "0" => false,
            "1" => true,
            other => return Err(self.error(c.outcome, format!("`{other}` is not 0 or 1"))),
        };
        let mut ig_alignments = Vec::with_capacity(IG_COUNT);
        for &index in &c.igs {
            let cell = self.cell(index);
            let value: i8 = cell
                .parse()
                .map_err(|_| self.error(index, format!("`{cell}` is not an integer alignment")))?;
            if !(-2..=2).contains(&value) {
                return Err(self.error(index, format!("alignment {value} outside [-2, 2]")));
            }
            ig_alignments.push(value);
        }
        let area_cell = self.cell(c.policy_area);
        let policy_area: PolicyArea = mapping
            .apply(area_cell)
            .parse()
            .map_err(|e: Error| self.error(c.policy_area, e.to_string()))?;
        let domain_cell = self.cell(c.policy_domain);
        let policy_domain: PolicyDomain = mapping
            .apply(domain_cell)
            .parse()
            .map_err(|e: Error| self.error(c.policy_domain, e.to_string()))?;
        if policy_area.domain() != policy_domain {
            return Err(self.error(
                c.policy_domain,
                format!(
                    "policy area `{policy_area}` belongs to domain `{}`, not `{policy_domain}`",
                    policy_area.domain()
                ),
            ));
        }
        let provided_net_iga = match c.net_iga {
            Some(index) if !self.cell(index).is_empty() => {
                let cell = self.cell(index);
                Some(
                    cell.parse::<f64>()
                        .map_err(|_| self.error(index, format!("`{cell}` is not a number")))?,
                )
            }
            _ => None,
        };
        Ok(PolicyCase {
            case_id: case_id.to_string(),
            year,
            outcome,
            p90: self.optional_fraction(c.p90)?,
            p50: self.optional_fraction(c.p50)?,
            p10: self.optional_fraction(c.p10)?,
            ig_alignments,
            policy_area,
            policy_domain,
            provided_net_iga,
        })
    }
}

/// Reads policy cases from CSV text in the canonical schema.
pub fn load_cases<R: Read>(reader: R) -> Result<Vec<PolicyCase>> {
    load_cases_with_mapping(reader, &NameMapping::default())
}

/// Reads policy cases from CSV text whose column names (and area/domain
/// labels) are translated through `mapping` first.
pub fn load_cases_with_mapping<R: Read>(reader: R, mapping: &NameMapping) -> Result<Vec<PolicyCase>> {
    let mut csv = ReaderBuilder::new().flexible(true).from_reader(reader);
    let header = csv.headers()?.clone();
    let columns = Columns::resolve(&header, mapping)?;
    let width = header.len();

    let mut cases = Vec::new();
    let mut seen: HashMap<String, usize> = HashMap::new();
    for record in csv.records() {
        let record = record?;
        let row = record.position().map_or(cases.len() + 2, |p| p.line() as usize);
        if record.len() != width {
            let column = columns.names.get(record.len().min(width)).cloned().unwrap_or_default();
            return Err(Error::Cell {
                row,
                column,
                message: format!("row has {} cells, header has {width}", record.len()),
            });
        }
        let case = RowParser {
            record: &record,
            row,
            columns: &columns,
        }
        .parse(mapping)?;
        if let Some(first) = seen.insert(case.case_id.clone(), row) {
            log::debug!("case `{}` first seen at row {first}", case.case_id);
            return Err(Error::DuplicateCase {
                case_id: case.case_id,
                row,
            });
        }
        cases.push(case);
    }
    Ok(cases)
}

pub fn load_cases_from_path(path: impl AsRef<Path>, mapping: Option<&NameMapping>) -> Result<Vec<PolicyCase>> {
    let file = std::fs::File::open(path.as_ref())?;
    let default = NameMapping::default();
    load_cases_with_mapping(std::io::BufReader::new(file), mapping.unwrap_or(&default))
}

fn format_optional(value: Option<f64>) -> String {
    value.map(|v| v.to_string()).unwrap_or_default()
}

/// Writes cases in the canonical schema. A trailing `net_iga` column is
/// written only when some case carries a provided value.
pub fn write_cases<W: Write>(writer: W, cases: &[PolicyCase]) -> Result<()> {
    let with_net_iga = cases.iter().any(|c| c.provided_net_iga.is_some());
    let mut csv = WriterBuilder::new().from_writer(writer);
    let mut header = schema::canonical_header();
    if with_net_iga {
        header.push(schema::NET_IGA);
    }
    csv.write_record(&header)?;
    for case in cases {
        let mut record: Vec<String> = vec![
            case.case_id.clone(),
            case.year.to_string(),
            if case.outcome { "1" } else { "0" }.to_string(),
            format_optional(case.p90),
            format_optional(case.p50),
            format_optional(case.p10),
        ];
        record.extend(case.ig_alignments.iter().map(|a| a.to_string()));
        record.push(case.policy_area.label().to_string());
        record.push(case.policy_domain.label().to_string());
        if with_net_iga {
            record.push(format_optional(case.provided_net_iga));
        }
        csv.write_record(&record)?;
    }
    csv.flush()?;
    Ok(())
}

/// A case whose stored netIGA disagrees with the value derived from its
/// interest-group columns.
#[derive(Debug, Clone, PartialEq)]
pub struct NetIgaMismatch {
    pub case_id: String,
    pub provided: f64,
    pub derived: f64,
}

pub fn net_iga_mismatches(cases: &[PolicyCase], tolerance: f64) -> Vec<NetIgaMismatch> {
    cases
        .iter()
        .filter_map(|case| {
            let provided = case.provided_net_iga?;
            let derived = case.net_iga();
            ((provided - derived).abs() > tolerance).then(|| NetIgaMismatch {
                case_id: case.case_id.clone(),
                provided,
                derived,
            })
        })
        .collect()
}
