//! Distance functions between observations.

use serde::{Deserialize, Serialize};

use crate::dataset::Observation;
use crate::error::{Error, Result};

/// What a distance matrix was built from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MetricKind {
    SquaredEuclidean,
    Euclidean,
    Custom,
}

/// A symmetric dissimilarity that is zero on identical inputs.
pub trait Metric<T: ?Sized>: Send + Sync {
    fn distance(&self, a: &T, b: &T) -> f64;

    fn kind(&self) -> MetricKind {
        MetricKind::Custom
    }
}

/// Built-in metrics on real vectors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum VectorMetric {
    SquaredEuclidean,
    Euclidean,
}

pub fn squared_euclidean(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

impl<T: AsRef<[f64]> + ?Sized> Metric<T> for VectorMetric {
    fn distance(&self, a: &T, b: &T) -> f64 {
        let sq = squared_euclidean(a.as_ref(), b.as_ref());
        match self {
            VectorMetric::SquaredEuclidean => sq,
            VectorMetric::Euclidean => sq.sqrt(),
        }
    }

    fn kind(&self) -> MetricKind {
        match self {
            VectorMetric::SquaredEuclidean => MetricKind::SquaredEuclidean,
            VectorMetric::Euclidean => MetricKind::Euclidean,
        }
    }
}

/// Wraps a closure as a custom metric.
#[derive(Clone)]
pub struct FnMetric<F>(pub F);

impl<T: ?Sized, F: Fn(&T, &T) -> f64 + Send + Sync> Metric<T> for FnMetric<F> {
    fn distance(&self, a: &T, b: &T) -> f64 {
        (self.0)(a, b)
    }
}

impl<T: ?Sized, M: Metric<T> + ?Sized> Metric<T> for &M {
    fn distance(&self, a: &T, b: &T) -> f64 {
        (**self).distance(a, b)
    }

    fn kind(&self) -> MetricKind {
        (**self).kind()
    }
}

const SPOT_CHECKS: usize = 8;

/// Spot-checks a metric on the first few observations: zero self-distance,
/// symmetry, finite and non-negative values.
pub fn validate_metric<T: Observation, M: Metric<T> + ?Sized>(metric: &M, obs: &[T]) -> Result<()> {
    let m = obs.len().min(SPOT_CHECKS);
    for i in 0..m {
        let self_d = metric.distance(&obs[i], &obs[i]);
        if self_d != 0.0 {
            return Err(Error::InvalidMetric(format!(
                "distance of observation {i} to itself is {self_d}"
            )));
        }
        for j in (i + 1)..m {
            let dij = metric.distance(&obs[i], &obs[j]);
            let dji = metric.distance(&obs[j], &obs[i]);
            if !dij.is_finite() || dij < 0.0 {
                return Err(Error::InvalidMetric(format!(
                    "distance between {i} and {j} is {dij}"
                )));
            }
            if dij != dji {
                return Err(Error::InvalidMetric(format!(
                    "asymmetric: d({i},{j}) = {dij} but d({j},{i}) = {dji}"
                )));
            }
        }
    }
    Ok(())
}
