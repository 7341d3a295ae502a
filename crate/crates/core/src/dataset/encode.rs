//! Feature-set descriptions and the dense matrices built from them.

use serde::{Deserialize, Serialize};

use super::case::{rescale_p90, PolicyCase};
use super::schema::{self, PolicyArea, PolicyDomain, IG_COUNT};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FeatureSetId {
    A,
    B,
    C,
    D,
    Custom,
}

impl std::fmt::Display for FeatureSetId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            FeatureSetId::A => "A",
            FeatureSetId::B => "B",
            FeatureSetId::C => "C",
            FeatureSetId::D => "D",
            FeatureSetId::Custom => "custom",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PolicyEncoding {
    None,
    /// One-hot over the 6 policy domains.
    Domain,
    /// One-hot over the 19 policy areas.
    Area,
}

impl PolicyEncoding {
    pub fn width(self) -> usize {
        match self {
            PolicyEncoding::None => 0,
            PolicyEncoding::Domain => PolicyDomain::ALL.len(),
            PolicyEncoding::Area => PolicyArea::ALL.len(),
        }
    }
}

/// How the P90 column is presented to a model.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum P90Scale {
    /// Raw fraction in `[0, 1]`.
    #[default]
    Raw,
    /// Affinely rescaled to `[-2, 2]`, the alignment scale.
    Alignment,
}

/// Which columns make up a model input.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureSetSpec {
    pub id: FeatureSetId,
    pub use_p90: bool,
    #[serde(default)]
    pub p90_scale: P90Scale,
    pub use_net_iga: bool,
    /// Canonical interest-group names. Encoded in canonical order no matter
    /// how they are listed here.
    pub ig_subset: Vec<String>,
    pub policy_encoding: PolicyEncoding,
}

fn all_igs() -> Vec<String> {
    schema::ig_names().map(str::to_string).collect()
}

impl FeatureSetSpec {
    /// P90 and netIGA.
    pub fn set_a() -> Self {
        FeatureSetSpec {
            id: FeatureSetId::A,
            use_p90: true,
            p90_scale: P90Scale::Raw,
            use_net_iga: true,
            ig_subset: Vec::new(),
            policy_encoding: PolicyEncoding::None,
        }
    }

    /// P90, all interest groups, domain one-hots.
    pub fn set_b() -> Self {
        FeatureSetSpec {
            id: FeatureSetId::B,
            use_p90: true,
            p90_scale: P90Scale::Raw,
            use_net_iga: false,
            ig_subset: all_igs(),
            policy_encoding: PolicyEncoding::Domain,
        }
    }

    /// P90, a selected subset of interest groups, domain one-hots.
    pub fn set_c(igs: Vec<String>) -> Result<Self> {
        let spec = FeatureSetSpec {
            id: FeatureSetId::C,
            use_p90: true,
            p90_scale: P90Scale::Raw,
            use_net_iga: false,
            ig_subset: igs,
            policy_encoding: PolicyEncoding::Domain,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// P90, all interest groups, area one-hots.
    pub fn set_d() -> Self {
        FeatureSetSpec {
            id: FeatureSetId::D,
            use_p90: true,
            p90_scale: P90Scale::Raw,
            use_net_iga: false,
            ig_subset: all_igs(),
            policy_encoding: PolicyEncoding::Area,
        }
    }

    /// Rescaled P90 plus all interest groups, no policy columns. Used for
    /// per-domain rankings.
    pub fn ranking() -> Self {
        FeatureSetSpec {
            id: FeatureSetId::Custom,
            use_p90: true,
            p90_scale: P90Scale::Alignment,
            use_net_iga: false,
            ig_subset: all_igs(),
            policy_encoding: PolicyEncoding::None,
        }
    }

    pub fn by_id(id: FeatureSetId) -> Option<Self> {
        match id {
            FeatureSetId::A => Some(Self::set_a()),
            FeatureSetId::B => Some(Self::set_b()),
            FeatureSetId::D => Some(Self::set_d()),
            FeatureSetId::C | FeatureSetId::Custom => None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let mut seen = [false; IG_COUNT];
        for name in &self.ig_subset {
            let index = schema::ig_index(name).ok_or_else(|| Error::UnknownInterestGroup(name.clone()))?;
            if std::mem::replace(&mut seen[index], true) {
                return Err(Error::InvalidArgument(format!("interest group `{name}` listed twice")));
            }
        }
        if self.width() == 0 {
            return Err(Error::InvalidArgument("feature set has no columns".into()));
        }
        Ok(())
    }

    /// Canonical indices of the selected interest groups, ascending.
    pub fn ig_indices(&self) -> Result<Vec<usize>> {
        let mut indices = self
            .ig_subset
            .iter()
            .map(|name| schema::ig_index(name).ok_or_else(|| Error::UnknownInterestGroup(name.clone())))
            .collect::<Result<Vec<_>>>()?;
        indices.sort_unstable();
        Ok(indices)
    }

    pub fn width(&self) -> usize {
        usize::from(self.use_p90) + usize::from(self.use_net_iga) + self.ig_subset.len() + self.policy_encoding.width()
    }

    pub fn column_names(&self) -> Result<Vec<String>> {
        let mut names = Vec::with_capacity(self.width());
        if self.use_p90 {
            names.push(schema::P90.to_string());
        }
        if self.use_net_iga {
            names.push(schema::NET_IGA.to_string());
        }
        names.extend(self.ig_indices()?.into_iter().map(|i| schema::INTEREST_GROUPS[i].0.to_string()));
        match self.policy_encoding {
            PolicyEncoding::None => {}
            PolicyEncoding::Domain => names.extend(PolicyDomain::ALL.iter().map(|d| format!("pd:{}", d.label()))),
            PolicyEncoding::Area => names.extend(PolicyArea::ALL.iter().map(|a| format!("pa:{}", a.label()))),
        }
        Ok(names)
    }

    /// Whether `case` can be encoded under this spec.
    pub fn accepts(&self, case: &PolicyCase) -> bool {
        !self.use_p90 || case.p90.is_some()
    }
}

/// Dense row-major feature matrix with binary labels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EncodedMatrix {
    column_names: Vec<String>,
    values: Vec<f64>,
    labels: Vec<bool>,
    /// Index of the source case for each row.
    case_indices: Vec<usize>,
    /// Cases skipped because a required P90 was missing.
    dropped_missing_p90: usize,
}

impl EncodedMatrix {
    /// Builds a matrix from explicit rows; used for synthetic data.
    pub fn from_rows(column_names: Vec<String>, rows: &[Vec<f64>], labels: Vec<bool>) -> Result<Self> {
        if rows.len() != labels.len() {
            return Err(Error::InvalidArgument(format!(
                "{} rows but {} labels",
                rows.len(),
                labels.len()
            )));
        }
        let width = column_names.len();
        let mut values = Vec::with_capacity(rows.len() * width);
        for row in rows {
            if row.len() != width {
                return Err(Error::ArityMismatch {
                    expected: width,
                    found: row.len(),
                });
            }
            values.extend_from_slice(row);
        }
        Ok(EncodedMatrix {
            column_names,
            values,
            case_indices: (0..labels.len()).collect(),
            labels,
            dropped_missing_p90: 0,
        })
    }

    /// Like [`EncodedMatrix::from_rows`] with generated names `x0, x1, ...`.
    pub fn from_unnamed_rows(rows: &[Vec<f64>], labels: Vec<bool>) -> Result<Self> {
        let width = rows.first().map_or(0, Vec::len);
        Self::from_rows((0..width).map(|j| format!("x{j}")).collect(), rows, labels)
    }

    pub fn n_rows(&self) -> usize {
        self.labels.len()
    }

    pub fn n_cols(&self) -> usize {
        self.column_names.len()
    }

    pub fn column_names(&self) -> &[String] {
        &self.column_names
    }

    pub fn labels(&self) -> &[bool] {
        &self.labels
    }

    pub fn case_indices(&self) -> &[usize] {
        &self.case_indices
    }

    pub fn dropped_missing_p90(&self) -> usize {
        self.dropped_missing_p90
    }

    pub fn row(&self, i: usize) -> &[f64] {
        let width = self.n_cols();
        &self.values[i * width..(i + 1) * width]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> + '_ {
        (0..self.n_rows()).map(move |i| self.row(i))
    }

    pub fn value(&self, row: usize, col: usize) -> f64 {
        self.values[row * self.n_cols() + col]
    }

    pub fn column(&self, col: usize) -> impl Iterator<Item = f64> + '_ {
        (0..self.n_rows()).map(move |i| self.value(i, col))
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.column_names.iter().position(|c| c == name)
    }

    /// Copies the given rows (duplicates allowed) into a new matrix.
    pub fn select_rows(&self, rows: &[usize]) -> EncodedMatrix {
        let width = self.n_cols();
        let mut values = Vec::with_capacity(rows.len() * width);
        for &r in rows {
            values.extend_from_slice(self.row(r));
        }
        EncodedMatrix {
            column_names: self.column_names.clone(),
            values,
            labels: rows.iter().map(|&r| self.labels[r]).collect(),
            case_indices: rows.iter().map(|&r| self.case_indices[r]).collect(),
            dropped_missing_p90: self.dropped_missing_p90,
        }
    }

    /// Returns a copy with `col` replaced by `values`.
    pub fn with_column(&self, col: usize, values: &[f64]) -> EncodedMatrix {
        assert_eq!(values.len(), self.n_rows());
        let mut out = self.clone();
        let width = self.n_cols();
        for (i, v) in values.iter().enumerate() {
            out.values[i * width + col] = *v;
        }
        out
    }
}

/// Encodes `cases` under `spec`. Cases lacking a required P90 are skipped
/// and counted in [`EncodedMatrix::dropped_missing_p90`].
pub fn encode(cases: &[PolicyCase], spec: &FeatureSetSpec) -> Result<EncodedMatrix> {
    spec.validate()?;
    let column_names = spec.column_names()?;
    let ig_indices = spec.ig_indices()?;
    let width = column_names.len();

    let mut values = Vec::with_capacity(cases.len() * width);
    let mut labels = Vec::with_capacity(cases.len());
    let mut case_indices = Vec::with_capacity(cases.len());
    let mut dropped = 0;
    for (index, case) in cases.iter().enumerate() {
        if !spec.accepts(case) {
            dropped += 1;
            continue;
        }
        if spec.use_p90 {
            let p90 = case.p90.expect("accepted case has p90");
            values.push(match spec.p90_scale {
                P90Scale::Raw => p90,
                P90Scale::Alignment => rescale_p90(p90)?,
            });
        }
        if spec.use_net_iga {
            values.push(case.net_iga());
        }
        values.extend(ig_indices.iter().map(|&i| f64::from(case.ig_alignments[i])));
        match spec.policy_encoding {
            PolicyEncoding::None => {}
            PolicyEncoding::Domain => {
                values.extend(PolicyDomain::ALL.iter().map(|&d| f64::from(u8::from(d == case.policy_domain))))
            }
            PolicyEncoding::Area => {
                values.extend(PolicyArea::ALL.iter().map(|&a| f64::from(u8::from(a == case.policy_area))))
            }
        }
        labels.push(case.outcome);
        case_indices.push(index);
    }
    if dropped > 0 {
        log::warn!("dropped {dropped} case(s) without p90");
    }
    Ok(EncodedMatrix {
        column_names,
        values,
        labels,
        case_indices,
        dropped_missing_p90: dropped,
    })
}
