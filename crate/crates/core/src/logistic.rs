//! Binary logistic regression fitted by penalized maximum likelihood.
//!
//! Columns are standardized to zero mean and unit variance before fitting;
//! constant columns are dropped and keep a zero coefficient. The optimizer
//! is a damped Newton method with backtracking, so the penalized
//! log-likelihood never decreases between iterations.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::dataset::EncodedMatrix;
use crate::error::{Error, Result};

pub const SCHEMA_VERSION: u32 = 1;

/// Logistic function `1 / (1 + e^-s)`, evaluated without overflow.
pub fn sigmoid(s: f64) -> f64 {
    if s >= 0.0 {
        1.0 / (1.0 + (-s).exp())
    } else {
        let e = s.exp();
        e / (1.0 + e)
    }
}

/// `ln(1 + e^x)`.
fn softplus(x: f64) -> f64 {
    x.max(0.0) + (-x.abs()).exp().ln_1p()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct LogisticConfig {
    pub max_iters: usize,
    /// Stop once the Euclidean norm of the gradient falls below this.
    pub tolerance: f64,
    /// Ridge penalty on the (standardized) coefficients; the intercept is
    /// not penalized.
    pub l2: f64,
}

impl Default for LogisticConfig {
    fn default() -> Self {
        LogisticConfig {
            max_iters: 1000,
            tolerance: 1e-8,
            l2: 1e-6,
        }
    }
}

/// Objective and gradient on an already standardized design.
pub mod objective {
    use super::{sigmoid, softplus};

    fn linear(row: &[f64], intercept: f64, beta: &[f64]) -> f64 {
        intercept + row.iter().zip(beta).map(|(x, b)| x * b).sum::<f64>()
    }

    /// `sum[y ln p + (1 - y) ln(1 - p)] - (l2 / 2) |beta|^2`.
    pub fn penalized_log_likelihood(rows: &[Vec<f64>], labels: &[bool], intercept: f64, beta: &[f64], l2: f64) -> f64 {
        let fit: f64 = rows
            .iter()
            .zip(labels)
            .map(|(row, &y)| {
                let s = linear(row, intercept, beta);
                if y {
                    -softplus(-s)
                } else {
                    -softplus(s)
                }
            })
            .sum();
        fit - 0.5 * l2 * beta.iter().map(|b| b * b).sum::<f64>()
    }

    /// Gradient of [`penalized_log_likelihood`] as `[d/d intercept, d/d beta...]`.
    pub fn gradient(rows: &[Vec<f64>], labels: &[bool], intercept: f64, beta: &[f64], l2: f64) -> Vec<f64> {
        let mut grad = vec![0.0; beta.len() + 1];
        for (row, &y) in rows.iter().zip(labels) {
            let residual = f64::from(u8::from(y)) - sigmoid(linear(row, intercept, beta));
            grad[0] += residual;
            for (g, x) in grad[1..].iter_mut().zip(row) {
                *g += residual * x;
            }
        }
        for (g, b) in grad[1..].iter_mut().zip(beta) {
            *g -= l2 * b;
        }
        grad
    }

    /// Negated Hessian (positive semi-definite), row-major, same layout as
    /// [`gradient`].
    pub(super) fn information(rows: &[Vec<f64>], intercept: f64, beta: &[f64], l2: f64) -> Vec<f64> {
        let dim = beta.len() + 1;
        let mut info = vec![0.0; dim * dim];
        let mut x = vec![1.0; dim];
        for row in rows {
            let p = sigmoid(linear(row, intercept, beta));
            let w = p * (1.0 - p);
            x[1..].copy_from_slice(row);
            for i in 0..dim {
                let wi = w * x[i];
                for j in i..dim {
                    info[i * dim + j] += wi * x[j];
                }
            }
        }
        for i in 0..dim {
            for j in 0..i {
                info[i * dim + j] = info[j * dim + i];
            }
        }
        for i in 1..dim {
            info[i * dim + i] += l2;
        }
        info
    }
}

/// Solves `a x = b` for symmetric positive definite `a` by Cholesky.
fn cholesky_solve(a: &[f64], b: &[f64]) -> Option<Vec<f64>> {
    let n = b.len();
    let mut l = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..=i {
            let mut sum = a[i * n + j];
            for k in 0..j {
                sum -= l[i * n + k] * l[j * n + k];
            }
            if i == j {
                if sum <= 0.0 || !sum.is_finite() {
                    return None;
                }
                l[i * n + i] = sum.sqrt();
            } else {
                l[i * n + j] = sum / l[j * n + j];
            }
        }
    }
    let mut y = vec![0.0; n];
    for i in 0..n {
        let mut sum = b[i];
        for k in 0..i {
            sum -= l[i * n + k] * y[k];
        }
        y[i] = sum / l[i * n + i];
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let mut sum = y[i];
        for k in i + 1..n {
            sum -= l[k * n + i] * x[k];
        }
        x[i] = sum / l[i * n + i];
    }
    Some(x)
}

/// Newton direction, adding Levenberg damping until the system is solvable.
fn newton_direction(info: &[f64], grad: &[f64]) -> Vec<f64> {
    let n = grad.len();
    let scale = (0..n).map(|i| info[i * n + i].abs()).fold(0.0, f64::max).max(1.0);
    let mut damping = 0.0;
    loop {
        let mut damped = info.to_vec();
        for i in 0..n {
            damped[i * n + i] += damping;
        }
        if let Some(step) = cholesky_solve(&damped, grad) {
            if step.iter().all(|v| v.is_finite()) {
                return step;
            }
        }
        damping = if damping == 0.0 { scale * 1e-12 } else { damping * 10.0 };
        if damping > scale * 1e12 {
            return grad.to_vec();
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ColumnScale {
    pub mean: f64,
    pub std: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LogisticModel {
    pub schema_version: u32,
    pub column_names: Vec<String>,
    /// Coefficients on the standardized scale; zero for dropped columns.
    pub beta: Vec<f64>,
    pub intercept: f64,
    pub standardization: Vec<ColumnScale>,
    /// Constant columns excluded from the fit.
    pub dropped_columns: Vec<usize>,
    pub config: LogisticConfig,
    pub iterations: usize,
    pub converged: bool,
}

/// Per-iteration record of a fit, starting at the zero initialization.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct FitTrace {
    pub objective: Vec<f64>,
    pub gradient_norm: Vec<f64>,
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn standardize(matrix: &EncodedMatrix) -> (Vec<ColumnScale>, Vec<usize>, Vec<usize>) {
    let n = matrix.n_rows() as f64;
    let mut scales = Vec::with_capacity(matrix.n_cols());
    let (mut kept, mut dropped) = (Vec::new(), Vec::new());
    for j in 0..matrix.n_cols() {
        let mean = matrix.column(j).sum::<f64>() / n;
        let var = matrix.column(j).map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
        let std = var.sqrt();
        if std > 1e-12 * mean.abs().max(1.0) {
            kept.push(j);
            scales.push(ColumnScale { mean, std });
        } else {
            dropped.push(j);
            scales.push(ColumnScale { mean, std: 1.0 });
        }
    }
    (scales, kept, dropped)
}

pub fn fit(matrix: &EncodedMatrix, config: &LogisticConfig) -> Result<LogisticModel> {
    fit_with_trace(matrix, config).map(|(model, _)| model)
}

pub fn fit_with_trace(matrix: &EncodedMatrix, config: &LogisticConfig) -> Result<(LogisticModel, FitTrace)> {
    if !(config.l2 >= 0.0) || !(config.tolerance > 0.0) {
        return Err(Error::InvalidArgument("l2 must be >= 0 and tolerance > 0".into()));
    }
    if matrix.n_rows() < 2 {
        return Err(Error::InvalidArgument("logistic fit needs at least 2 samples".into()));
    }
    let labels = matrix.labels();
    let positives = labels.iter().filter(|l| **l).count();
    if positives == 0 || positives == labels.len() {
        return Err(Error::SingleClass("logistic fit needs both outcome classes".into()));
    }

    let (scales, kept, dropped) = standardize(matrix);
    let rows: Vec<Vec<f64>> = matrix
        .rows()
        .map(|row| kept.iter().map(|&j| (row[j] - scales[j].mean) / scales[j].std).collect())
        .collect();

    let mut intercept = 0.0;
    let mut beta = vec![0.0; kept.len()];
    let mut value = objective::penalized_log_likelihood(&rows, labels, intercept, &beta, config.l2);
    let mut grad = objective::gradient(&rows, labels, intercept, &beta, config.l2);
    let mut trace = FitTrace {
        objective: vec![value],
        gradient_norm: vec![norm(&grad)],
    };
    let mut converged = norm(&grad) < config.tolerance;
    let mut iterations = 0;
    while !converged && iterations < config.max_iters {
        let info = objective::information(&rows, intercept, &beta, config.l2);
        let direction = newton_direction(&info, &grad);
        let mut step = 1.0;
        let mut accepted = None;
        for _ in 0..60 {
            let cand_intercept = intercept + step * direction[0];
            let cand_beta: Vec<f64> = beta.iter().zip(&direction[1..]).map(|(b, d)| b + step * d).collect();
            let cand_value = objective::penalized_log_likelihood(&rows, labels, cand_intercept, &cand_beta, config.l2);
            if cand_value >= value {
                accepted = Some((cand_intercept, cand_beta, cand_value));
                break;
            }
            step *= 0.5;
        }
        let Some((new_intercept, new_beta, new_value)) = accepted else {
            // No ascent left at floating-point resolution.
            break;
        };
        iterations += 1;
        intercept = new_intercept;
        beta = new_beta;
        value = new_value;
        grad = objective::gradient(&rows, labels, intercept, &beta, config.l2);
        trace.objective.push(value);
        trace.gradient_norm.push(norm(&grad));
        converged = norm(&grad) < config.tolerance;
    }

    if config.l2 == 0.0 {
        let separated = rows.iter().zip(labels).all(|(row, &y)| {
            let s = intercept + row.iter().zip(&beta).map(|(x, b)| x * b).sum::<f64>();
            if y {
                s > 0.0
            } else {
                s < 0.0
            }
        });
        if separated || !converged {
            return Err(Error::NonConvergence(format!(
                "coefficients diverge (|beta| = {:.3e} after {iterations} iterations); \
                 the classes look separable, use l2 > 0",
                norm(&beta)
            )));
        }
    }
    if !converged {
        log::warn!(
            "logistic fit stopped after {iterations} iterations with gradient norm {:.3e}",
            norm(&grad)
        );
    }

    let mut full_beta = vec![0.0; matrix.n_cols()];
    for (b, &j) in beta.iter().zip(&kept) {
        full_beta[j] = *b;
    }
    let model = LogisticModel {
        schema_version: SCHEMA_VERSION,
        column_names: matrix.column_names().to_vec(),
        beta: full_beta,
        intercept,
        standardization: scales,
        dropped_columns: dropped,
        config: config.clone(),
        iterations,
        converged,
    };
    Ok((model, trace))
}

/// A feature ranked by coefficient magnitude.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankedFeature {
    pub index: usize,
    pub name: String,
    pub magnitude: f64,
}

impl LogisticModel {
    pub fn n_features(&self) -> usize {
        self.column_names.len()
    }

    pub fn predict_proba(&self, row: &[f64]) -> Result<f64> {
        if row.len() != self.n_features() {
            return Err(Error::ArityMismatch {
                expected: self.n_features(),
                found: row.len(),
            });
        }
        let s = self.intercept
            + row
                .iter()
                .zip(&self.beta)
                .zip(&self.standardization)
                .map(|((x, b), scale)| b * (x - scale.mean) / scale.std)
                .sum::<f64>();
        Ok(sigmoid(s))
    }

    pub fn predict_matrix(&self, matrix: &EncodedMatrix) -> Result<Vec<f64>> {
        matrix.rows().map(|row| self.predict_proba(row)).collect()
    }

    /// Coefficients and intercept on the original feature scale.
    pub fn raw_coefficients(&self) -> (Vec<f64>, f64) {
        let beta: Vec<f64> = self
            .beta
            .iter()
            .zip(&self.standardization)
            .map(|(b, s)| b / s.std)
            .collect();
        let shift: f64 = beta.iter().zip(&self.standardization).map(|(b, s)| b * s.mean).sum();
        (beta, self.intercept - shift)
    }

    /// Features by descending `|beta|` on the standardized scale; ties keep
    /// column order.
    pub fn coefficient_ranking(&self) -> Vec<RankedFeature> {
        let mut ranked: Vec<RankedFeature> = self
            .beta
            .iter()
            .enumerate()
            .map(|(index, b)| RankedFeature {
                index,
                name: self.column_names[index].clone(),
                magnitude: b.abs(),
            })
            .collect();
        ranked.sort_by(|a, b| b.magnitude.total_cmp(&a.magnitude).then(a.index.cmp(&b.index)));
        ranked
    }

    pub fn to_writer<W: Write>(&self, writer: W) -> Result<()> {
        serde_json::to_writer(writer, self)?;
        Ok(())
    }

    pub fn from_reader<R: Read>(reader: R) -> Result<Self> {
        let model: LogisticModel = serde_json::from_reader(reader)?;
        if model.schema_version != SCHEMA_VERSION {
            return Err(Error::Schema(format!(
                "logistic schema version {} (expected {SCHEMA_VERSION})",
                model.schema_version
            )));
        }
        Ok(model)
    }
}
