//! Quadratic discriminant analysis on the `k`-dimensional summary vectors.
//!
//! The discriminant for class `j` is
//! `-log|S_j|/2 - (x - m_j)' S_j^{-1} (x - m_j)/2 + log(n_j/N)`, with `m_j`,
//! `S_j` the within-class sample mean and covariance (denominator `n_j - 1`).
//! Inverses and log-determinants come from a Cholesky factor. A covariance
//! that fails the factorization gets a ridge `eps * mean(diag) * I` with
//! `eps` stepping from 1e-8 to 1e-2 by factors of ten.

use nalgebra::{Cholesky, DMatrix, DVector, Dyn};
use serde::{Deserialize, Serialize};

use crate::distance::{class_counts, SummaryStats};
use crate::error::{Error, Result};

pub const MODEL_SCHEMA: u32 = 1;
const RIDGE_START: f64 = 1e-8;
const RIDGE_MAX: f64 = 1e-2;

/// Final-stage classifier over summary vectors. QDA is the shipped one;
/// any other low-dimensional classifier can be plugged in here.
pub trait SummaryClassifier: Sized + Send + Sync {
    fn fit(summary: &SummaryStats, labels: &[usize]) -> Result<Self>;

    /// Predicted label in `1..=k`.
    fn predict(&self, x: &[f64]) -> Result<usize>;
}

#[derive(Debug, Clone)]
pub struct QdaClass {
    pub mean: DVector<f64>,
    /// Covariance after any ridge.
    pub covariance: DMatrix<f64>,
    pub prior: f64,
    pub log_det: f64,
    pub regularization: f64,
    chol: Cholesky<f64, Dyn>,
}

impl QdaClass {
    /// Lower Cholesky factor of the stored covariance.
    pub fn cholesky_factor(&self) -> DMatrix<f64> {
        self.chol.l()
    }
}

/// Fitted per-class Gaussians.
#[derive(Debug, Clone)]
pub struct QdaModel {
    classes: Vec<QdaClass>,
}

impl QdaModel {
    pub fn fit(summary: &SummaryStats, labels: &[usize]) -> Result<Self> {
        if labels.len() != summary.n() {
            return Err(Error::invalid("labels do not match summary rows"));
        }
        Self::fit_rows(summary.rows(), labels, summary.k())
    }

    /// Fits from arbitrary `dim`-dimensional rows.
    pub fn fit_rows<'a>(
        rows: impl IntoIterator<Item = &'a [f64]>,
        labels: &[usize],
        dim: usize,
    ) -> Result<Self> {
        let rows: Vec<&[f64]> = rows.into_iter().collect();
        if rows.len() != labels.len() {
            return Err(Error::invalid("row/label count mismatch"));
        }
        if rows.iter().any(|r| r.len() != dim) {
            return Err(Error::invalid("row dimension mismatch"));
        }
        let counts = class_counts(labels)?;
        if counts.len() < 2 {
            return Err(Error::invalid("need at least two classes"));
        }
        if let Some(j) = counts.iter().position(|&c| c < 2) {
            return Err(Error::DegenerateClass {
                class: j + 1,
                size: counts[j],
            });
        }
        let n_total = labels.len() as f64;
        let mut params = Vec::with_capacity(counts.len());
        for (j, &nj) in counts.iter().enumerate() {
            let members: Vec<&[f64]> = rows
                .iter()
                .zip(labels)
                .filter(|(_, &g)| g == j + 1)
                .map(|(r, _)| *r)
                .collect();
            let mut mean = DVector::zeros(dim);
            for r in &members {
                mean += DVector::from_column_slice(r);
            }
            mean /= nj as f64;
            let mut cov = DMatrix::zeros(dim, dim);
            for r in &members {
                let c = DVector::from_column_slice(r) - &mean;
                cov += &c * c.transpose();
            }
            cov /= (nj - 1) as f64;
            params.push((mean, cov, nj as f64 / n_total));
        }
        Self::from_gaussians(params)
    }

    /// Builds a model from `(mean, covariance, prior)` triples, applying the
    /// ridge policy to covariances that are not positive definite.
    pub fn from_gaussians(params: Vec<(DVector<f64>, DMatrix<f64>, f64)>) -> Result<Self> {
        if params.is_empty() {
            return Err(Error::invalid("no classes"));
        }
        let dim = params[0].0.len();
        for (m, s, p) in &params {
            if m.len() != dim || s.nrows() != dim || s.ncols() != dim {
                return Err(Error::invalid("inconsistent class dimensions"));
            }
            if !(*p > 0.0 && *p <= 1.0) {
                return Err(Error::invalid(format!("prior {p} outside (0, 1]")));
            }
            if m.iter().chain(s.iter()).any(|v| !v.is_finite()) {
                return Err(Error::invalid("non-finite class parameters"));
            }
        }
        let mean_diag = |s: &DMatrix<f64>| s.diagonal().sum() / dim as f64;
        let positive: Vec<f64> = params
            .iter()
            .map(|(_, s, _)| mean_diag(s))
            .filter(|&v| v > 0.0)
            .collect();
        let fallback_scale = if positive.is_empty() {
            1.0
        } else {
            positive.iter().sum::<f64>() / positive.len() as f64
        };
        let classes = params
            .into_iter()
            .enumerate()
            .map(|(j, (mean, cov, prior))| {
                let cov = (&cov + cov.transpose()) * 0.5;
                let scale = match mean_diag(&cov) {
                    v if v > 0.0 => v,
                    _ => fallback_scale,
                };
                let (chol, regularization) =
                    factor_with_ridge(&cov, scale).ok_or(Error::SingularCovariance {
                        class: j + 1,
                        ridge: RIDGE_MAX * scale,
                    })?;
                let cov = cov + DMatrix::identity(dim, dim) * regularization;
                let log_det = 2.0
                    * chol
                        .l_dirty()
                        .diagonal()
                        .iter()
                        .map(|v| v.ln())
                        .sum::<f64>();
                if !log_det.is_finite() {
                    return Err(Error::SingularCovariance {
                        class: j + 1,
                        ridge: regularization,
                    });
                }
                Ok(QdaClass {
                    mean,
                    covariance: cov,
                    prior,
                    log_det,
                    regularization,
                    chol,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(QdaModel { classes })
    }

    pub fn classes(&self) -> &[QdaClass] {
        &self.classes
    }

    pub fn num_classes(&self) -> usize {
        self.classes.len()
    }

    pub fn dim(&self) -> usize {
        self.classes[0].mean.len()
    }

    /// Discriminant value for every class.
    pub fn scores(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.dim() {
            return Err(Error::invalid(format!(
                "summary vector has dimension {} but model expects {}",
                x.len(),
                self.dim()
            )));
        }
        let x = DVector::from_column_slice(x);
        Ok(self
            .classes
            .iter()
            .map(|c| {
                let diff = &x - &c.mean;
                let y = c
                    .chol
                    .l_dirty()
                    .solve_lower_triangular(&diff)
                    .expect("cholesky factor has a positive diagonal");
                -0.5 * c.log_det - 0.5 * y.norm_squared() + c.prior.ln()
            })
            .collect())
    }

    /// Label (`1..=k`) of the largest discriminant; ties go to the lowest
    /// label.
    pub fn predict(&self, x: &[f64]) -> Result<usize> {
        let scores = self.scores(x)?;
        let mut best = 0;
        for (j, &s) in scores.iter().enumerate().skip(1) {
            if s > scores[best] {
                best = j;
            }
        }
        Ok(best + 1)
    }

    pub fn to_document(&self) -> QdaDocument {
        QdaDocument {
            schema: MODEL_SCHEMA,
            classes: self
                .classes
                .iter()
                .enumerate()
                .map(|(j, c)| QdaClassDocument {
                    label: j + 1,
                    mean: c.mean.iter().copied().collect(),
                    covariance: c
                        .covariance
                        .row_iter()
                        .map(|r| r.iter().copied().collect())
                        .collect(),
                    prior: c.prior,
                    regularization: c.regularization,
                })
                .collect(),
        }
    }

    /// Rebuilds a model; stored covariances are already regularized, so the
    /// factorization must succeed without another ridge.
    pub fn from_document(doc: &QdaDocument) -> Result<Self> {
        if doc.schema != MODEL_SCHEMA {
            return Err(Error::Parse(format!(
                "unsupported model schema {}",
                doc.schema
            )));
        }
        let mut classes = Vec::with_capacity(doc.classes.len());
        for (j, c) in doc.classes.iter().enumerate() {
            if c.label != j + 1 {
                return Err(Error::Parse(format!("class {} out of order", c.label)));
            }
            let dim = c.mean.len();
            if c.covariance.len() != dim || c.covariance.iter().any(|r| r.len() != dim) {
                return Err(Error::Parse(format!(
                    "class {} covariance is not {dim}x{dim}",
                    c.label
                )));
            }
            let cov = DMatrix::from_fn(dim, dim, |r, s| c.covariance[r][s]);
            let chol = Cholesky::new(cov.clone()).ok_or(Error::SingularCovariance {
                class: c.label,
                ridge: c.regularization,
            })?;
            let log_det = 2.0
                * chol
                    .l_dirty()
                    .diagonal()
                    .iter()
                    .map(|v| v.ln())
                    .sum::<f64>();
            classes.push(QdaClass {
                mean: DVector::from_vec(c.mean.clone()),
                covariance: cov,
                prior: c.prior,
                log_det,
                regularization: c.regularization,
                chol,
            });
        }
        if classes.is_empty() {
            return Err(Error::Parse("model has no classes".into()));
        }
        Ok(QdaModel { classes })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_document()).expect("model document serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: QdaDocument =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_document(&doc)
    }
}

/// Returns the factor and the ridge that was added (0 if none).
fn factor_with_ridge(cov: &DMatrix<f64>, scale: f64) -> Option<(Cholesky<f64, Dyn>, f64)> {
    if let Some(ch) = Cholesky::new(cov.clone()) {
        return Some((ch, 0.0));
    }
    let mut eps = RIDGE_START;
    while eps <= RIDGE_MAX * (1.0 + 1e-9) {
        let ridge = eps * scale;
        let mut reg = cov.clone();
        for i in 0..reg.nrows() {
            reg[(i, i)] += ridge;
        }
        if let Some(ch) = Cholesky::new(reg) {
            return Some((ch, ridge));
        }
        eps *= 10.0;
    }
    None
}

impl SummaryClassifier for QdaModel {
    fn fit(summary: &SummaryStats, labels: &[usize]) -> Result<Self> {
        QdaModel::fit(summary, labels)
    }

    fn predict(&self, x: &[f64]) -> Result<usize> {
        QdaModel::predict(self, x)
    }
}

/// Serialized model: `{"schema": 1, "classes": [{label, mean, covariance,
/// prior, regularization}, ...]}`. Covariances are stored after any ridge.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QdaDocument {
    pub schema: u32,
    pub classes: Vec<QdaClassDocument>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QdaClassDocument {
    pub label: usize,
    pub mean: Vec<f64>,
    pub covariance: Vec<Vec<f64>>,
    pub prior: f64,
    pub regularization: f64,
}
