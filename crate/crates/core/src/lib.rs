//! Classification of high-dimensional data from inter-point distances.
//!
//! Every training point is summarized by its mean distance (or mean rank of
//! distance) to each class, and a quadratic discriminant is fit on those
//! `k`-dimensional summaries. Queries are summarized the same way against
//! the training set. The rank variant is robust to outliers and works with
//! any metric, including graph distances.
//!
//! Beyond the classifiers the crate ships:
//! * [`theory`]: closed-form mean and covariance of the distance summaries
//!   in the two-class linear model, a brute-force Monte Carlo check of those
//!   moments, and an analytic misclassification-rate estimate;
//! * [`datagen`]: the synthetic scenarios (AR(1)-correlated two- and
//!   four-class data, outliers, configuration-model graphs);
//! * [`bench`]: the seeded experiment runner behind the `distrank` binary.

pub mod bench;
pub mod classifier;
pub mod datagen;
pub mod dataset;
pub mod distance;
pub mod distributions;
pub mod error;
pub mod metric;
pub mod qda;
pub mod rng;
pub mod theory;

pub use classifier::{fit_vectors, FittedClassifier, Mode};
pub use dataset::{LabeledDataset, Observation};
pub use distance::{ColumnRanks, PairwiseDistances, QueryVector, SummaryStats};
pub use distributions::{BaseDist, RawMoments};
pub use error::{Error, Result};
pub use metric::{Metric, MetricKind, VectorMetric};
pub use qda::{QdaModel, SummaryClassifier};
