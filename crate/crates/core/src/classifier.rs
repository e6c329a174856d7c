//! End-to-end distance-based and rank-based classifiers.
//!
//! Fitting builds the training distance matrix, optionally its column
//! mid-ranks, the class-wise mean matrix and a final-stage classifier (QDA by
//! default) on those means. Prediction maps a query to its vector of
//! class-wise mean distances (or mean ranks) and hands it to the final stage.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dataset::{LabeledDataset, Observation};
use crate::distance::{
    query_distances, query_summary, ColumnRanks, PairwiseDistances, QueryVector, SortedColumns,
    SummaryStats,
};
use crate::error::{Error, Result};
use crate::metric::{Metric, VectorMetric};
use crate::qda::{QdaModel, SummaryClassifier};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Distance,
    Rank,
}

impl Mode {
    pub const ALL: [Mode; 2] = [Mode::Distance, Mode::Rank];

    /// Squared Euclidean for the distance path, plain Euclidean for ranks.
    pub fn default_metric(self) -> VectorMetric {
        match self {
            Mode::Distance => VectorMetric::SquaredEuclidean,
            Mode::Rank => VectorMetric::Euclidean,
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Distance => "distance",
            Mode::Rank => "rank",
        })
    }
}

impl FromStr for Mode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "distance" | "dist" => Ok(Mode::Distance),
            "rank" => Ok(Mode::Rank),
            other => Err(Error::Parse(format!("unknown mode {other:?}"))),
        }
    }
}

/// A trained classifier. Keeps the full training set, since every query
/// needs its distances to all training points.
#[derive(Debug, Clone)]
pub struct FittedClassifier<T, M, C = QdaModel> {
    mode: Mode,
    metric: M,
    training: LabeledDataset<T>,
    dist: PairwiseDistances,
    ranks: Option<ColumnRanks>,
    sorted: Option<SortedColumns>,
    summary: SummaryStats,
    final_stage: C,
}

impl<T: Observation, M: Metric<T>> FittedClassifier<T, M, QdaModel> {
    /// Fits with QDA as the final stage.
    pub fn fit(dataset: LabeledDataset<T>, mode: Mode, metric: M) -> Result<Self> {
        Self::fit_with(dataset, mode, metric)
    }
}

impl<T: Observation, M: Metric<T>, C: SummaryClassifier> FittedClassifier<T, M, C> {
    /// Fits with any final-stage classifier `C`.
    pub fn fit_with(dataset: LabeledDataset<T>, mode: Mode, metric: M) -> Result<Self> {
        let k = dataset.num_classes();
        if k < 2 {
            return Err(Error::invalid(format!("need at least 2 classes, got {k}")));
        }
        let ctx = |e: Error| e.context(format!("fitting {mode} classifier"));
        let dist = PairwiseDistances::compute(&dataset, &metric).map_err(ctx)?;
        let (ranks, summary) = match mode {
            Mode::Distance => (
                None,
                SummaryStats::from_distances(&dist, dataset.labels()).map_err(ctx)?,
            ),
            Mode::Rank => {
                let ranks = dist.column_ranks();
                let summary = SummaryStats::from_ranks(&ranks, dataset.labels()).map_err(ctx)?;
                (Some(ranks), summary)
            }
        };
        let final_stage = C::fit(&summary, dataset.labels()).map_err(ctx)?;
        let sorted = ranks.as_ref().map(|_| SortedColumns::new(&dist));
        Ok(FittedClassifier {
            mode,
            metric,
            training: dataset,
            dist,
            ranks,
            sorted,
            summary,
            final_stage,
        })
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn metric(&self) -> &M {
        &self.metric
    }

    pub fn training(&self) -> &LabeledDataset<T> {
        &self.training
    }

    pub fn distances(&self) -> &PairwiseDistances {
        &self.dist
    }

    pub fn ranks(&self) -> Option<&ColumnRanks> {
        self.ranks.as_ref()
    }

    pub fn summary(&self) -> &SummaryStats {
        &self.summary
    }

    pub fn final_stage(&self) -> &C {
        &self.final_stage
    }

    /// Distances, ranks (rank mode) and the class-wise summary for `w`.
    pub fn query(&self, w: &T) -> Result<QueryVector> {
        let distances = query_distances(w, &self.training, &self.metric)?;
        let labels = self.training.labels();
        match &self.sorted {
            None => {
                let summary = query_summary(&distances, labels)?;
                Ok(QueryVector {
                    distances,
                    ranks: None,
                    summary,
                })
            }
            Some(sorted) => {
                let ranks = sorted.query_ranks(&distances)?;
                let summary = query_summary(&ranks, labels)?;
                Ok(QueryVector {
                    distances,
                    ranks: Some(ranks),
                    summary,
                })
            }
        }
    }

    pub fn predict(&self, w: &T) -> Result<usize> {
        let q = self.query(w)?;
        self.final_stage.predict(&q.summary)
    }

    /// Predicts each query independently.
    pub fn predict_batch(&self, ws: &[T]) -> Result<Vec<usize>> {
        ws.par_iter().map(|w| self.predict(w)).collect()
    }

    /// Fraction of `test` whose predicted label differs from its own.
    pub fn misclassification_rate(&self, test: &LabeledDataset<T>) -> Result<f64> {
        self.misclassification_rate_of(test.observations(), test.labels())
    }

    pub fn misclassification_rate_of(&self, obs: &[T], labels: &[usize]) -> Result<f64> {
        if obs.is_empty() {
            return Err(Error::invalid("empty test set"));
        }
        if obs.len() != labels.len() {
            return Err(Error::invalid("test observation/label count mismatch"));
        }
        let predicted = self.predict_batch(obs)?;
        let wrong = predicted.iter().zip(labels).filter(|(p, l)| p != l).count();
        Ok(wrong as f64 / obs.len() as f64)
    }
}

/// Fits on vector data with the mode's default metric.
pub fn fit_vectors(
    dataset: LabeledDataset,
    mode: Mode,
) -> Result<FittedClassifier<Vec<f64>, VectorMetric>> {
    FittedClassifier::fit(dataset, mode, mode.default_metric())
}
