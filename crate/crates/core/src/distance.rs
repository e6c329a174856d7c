//! Pairwise distance matrices, column mid-ranks, class-wise summary
//! statistics, and the query-time analogues for a new observation.

use rayon::prelude::*;

use crate::dataset::{LabeledDataset, Observation};
use crate::error::{Error, Result};
use crate::metric::{validate_metric, Metric, MetricKind};

/// Symmetric, hollow, non-negative `N x N` matrix (row-major).
#[derive(Debug, Clone, PartialEq)]
pub struct PairwiseDistances {
    n: usize,
    values: Vec<f64>,
    metric: MetricKind,
}

impl PairwiseDistances {
    /// Builds the matrix from a dataset. Only the upper triangle is
    /// evaluated; the lower one is mirrored.
    pub fn compute<T: Observation, M: Metric<T> + ?Sized>(
        dataset: &LabeledDataset<T>,
        metric: &M,
    ) -> Result<Self> {
        Self::from_observations(dataset.observations(), metric)
    }

    pub fn from_observations<T: Observation, M: Metric<T> + ?Sized>(
        obs: &[T],
        metric: &M,
    ) -> Result<Self> {
        let n = obs.len();
        if n < 2 {
            return Err(Error::invalid(format!(
                "need at least 2 observations, got {n}"
            )));
        }
        if metric.kind() == MetricKind::Custom {
            validate_metric(metric, obs)?;
        }
        let upper: Vec<Vec<f64>> = (0..n)
            .into_par_iter()
            .map(|i| {
                ((i + 1)..n)
                    .map(|j| metric.distance(&obs[i], &obs[j]))
                    .collect()
            })
            .collect();
        let mut values = vec![0.0; n * n];
        for (i, row) in upper.iter().enumerate() {
            for (off, &d) in row.iter().enumerate() {
                let j = i + 1 + off;
                if !d.is_finite() || d < 0.0 {
                    return Err(Error::InvalidMetric(format!(
                        "distance between {i} and {j} is {d}"
                    )));
                }
                values[i * n + j] = d;
                values[j * n + i] = d;
            }
        }
        Ok(PairwiseDistances {
            n,
            values,
            metric: metric.kind(),
        })
    }

    /// Wraps an existing matrix after checking the invariants.
    pub fn from_matrix(n: usize, values: Vec<f64>, metric: MetricKind) -> Result<Self> {
        if values.len() != n * n || n < 2 {
            return Err(Error::invalid("distance matrix must be square with N >= 2"));
        }
        for i in 0..n {
            if values[i * n + i] != 0.0 {
                return Err(Error::invalid(format!("nonzero diagonal at {i}")));
            }
            for j in 0..n {
                let d = values[i * n + j];
                if !d.is_finite() || d < 0.0 || d != values[j * n + i] {
                    return Err(Error::invalid(format!(
                        "bad or asymmetric entry at ({i},{j})"
                    )));
                }
            }
        }
        Ok(PairwiseDistances { n, values, metric })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn metric(&self) -> MetricKind {
        self.metric
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.n + j]
    }

    /// Column `j`; equals row `j` by symmetry.
    pub fn column(&self, j: usize) -> &[f64] {
        &self.values[j * self.n..(j + 1) * self.n]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Mid-ranks within each column, diagonal included.
    pub fn column_ranks(&self) -> ColumnRanks {
        let n = self.n;
        let cols: Vec<Vec<f64>> = (0..n)
            .into_par_iter()
            .map(|j| mid_ranks(self.column(j)))
            .collect();
        let mut values = vec![0.0; n * n];
        for (j, col) in cols.iter().enumerate() {
            for (i, &r) in col.iter().enumerate() {
                values[i * n + j] = r;
            }
        }
        ColumnRanks { n, values }
    }
}

/// Mid-ranks (1-based) of `xs`; tied values share the average position.
pub fn mid_ranks(xs: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..xs.len()).collect();
    order.sort_by(|&a, &b| xs[a].total_cmp(&xs[b]));
    let mut ranks = vec![0.0; xs.len()];
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && xs[order[end]] == xs[order[start]] {
            end += 1;
        }
        // positions start+1 ..= end
        let r = (start + 1 + end) as f64 / 2.0;
        for &idx in &order[start..end] {
            ranks[idx] = r;
        }
        start = end;
    }
    ranks
}

/// `values[i, j]` is the mid-rank of `D[i, j]` within column `j`.
#[derive(Debug, Clone, PartialEq)]
pub struct ColumnRanks {
    n: usize,
    values: Vec<f64>,
}

impl ColumnRanks {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.n + j]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.n).map(|i| self.get(i, j)).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SummaryKind {
    DistanceMean,
    RankMean,
}

/// Row `i` is the vector of class-wise means for training point `i`.
#[derive(Debug, Clone, PartialEq)]
pub struct SummaryStats {
    n: usize,
    k: usize,
    values: Vec<f64>,
    kind: SummaryKind,
}

impl SummaryStats {
    /// Class-wise mean distances with the self-entry excluded.
    pub fn from_distances(dist: &PairwiseDistances, labels: &[usize]) -> Result<Self> {
        group_means(dist.n, &dist.values, labels, SummaryKind::DistanceMean)
    }

    /// Class-wise mean ranks with the self-entry excluded.
    pub fn from_ranks(ranks: &ColumnRanks, labels: &[usize]) -> Result<Self> {
        group_means(ranks.n, &ranks.values, labels, SummaryKind::RankMean)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn kind(&self) -> SummaryKind {
        self.kind
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.values[i * self.k..(i + 1) * self.k]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.values.chunks(self.k)
    }
}

/// Counts per class for labels in `1..=k`, with `k` the largest label.
pub(crate) fn class_counts(labels: &[usize]) -> Result<Vec<usize>> {
    let k = labels.iter().copied().max().unwrap_or(0);
    let mut counts = vec![0usize; k];
    for &l in labels {
        if l == 0 {
            return Err(Error::invalid("labels must be in 1..=k"));
        }
        counts[l - 1] += 1;
    }
    Ok(counts)
}

fn group_means(
    n: usize,
    source: &[f64],
    labels: &[usize],
    kind: SummaryKind,
) -> Result<SummaryStats> {
    if labels.len() != n {
        return Err(Error::invalid(format!(
            "{} labels for {n} observations",
            labels.len()
        )));
    }
    let counts = class_counts(labels)?;
    if let Some(j) = counts.iter().position(|&c| c < 2) {
        return Err(Error::DegenerateClass {
            class: j + 1,
            size: counts[j],
        });
    }
    let k = counts.len();
    let mut values = vec![0.0; n * k];
    for i in 0..n {
        let row = &mut values[i * k..(i + 1) * k];
        for (l, &g) in labels.iter().enumerate() {
            if l != i {
                row[g - 1] += source[i * n + l];
            }
        }
        for (j, v) in row.iter_mut().enumerate() {
            let denom = counts[j] - usize::from(labels[i] == j + 1);
            *v /= denom as f64;
        }
    }
    Ok(SummaryStats { n, k, values, kind })
}

/// Distances from `w` to every training observation.
pub fn query_distances<T: Observation, M: Metric<T> + ?Sized>(
    w: &T,
    dataset: &LabeledDataset<T>,
    metric: &M,
) -> Result<Vec<f64>> {
    if w.dim() != dataset.dim() {
        return Err(Error::invalid(format!(
            "query has dimension {} but training data has {}",
            w.dim(),
            dataset.dim()
        )));
    }
    Ok(dataset
        .observations()
        .iter()
        .map(|z| metric.distance(w, z))
        .collect())
}

/// Rank of each query distance within the matching training column:
/// `1/2 + #{t : D[t,i] < dW[i]} + #{t : D[t,i] = dW[i]} / 2`, counting all
/// `N` rows including `t = i`.
pub fn query_ranks(d_w: &[f64], dist: &PairwiseDistances) -> Result<Vec<f64>> {
    if d_w.len() != dist.n {
        return Err(Error::invalid(format!(
            "query vector has length {} but N = {}",
            d_w.len(),
            dist.n
        )));
    }
    Ok(d_w
        .iter()
        .enumerate()
        .map(|(i, &dw)| {
            let (mut less, mut equal) = (0usize, 0usize);
            for &d in dist.column(i) {
                if d < dw {
                    less += 1;
                } else if d == dw {
                    equal += 1;
                }
            }
            0.5 + less as f64 + 0.5 * equal as f64
        })
        .collect())
}

/// Each training column sorted ascending, for `O(log N)` query ranks.
#[derive(Debug, Clone, PartialEq)]
pub struct SortedColumns {
    n: usize,
    sorted: Vec<f64>,
}

impl SortedColumns {
    pub fn new(dist: &PairwiseDistances) -> Self {
        let n = dist.n;
        let mut sorted = dist.values.clone();
        for col in sorted.chunks_mut(n) {
            col.sort_by(f64::total_cmp);
        }
        SortedColumns { n, sorted }
    }

    /// Same value as [`query_ranks`].
    pub fn query_ranks(&self, d_w: &[f64]) -> Result<Vec<f64>> {
        if d_w.len() != self.n {
            return Err(Error::invalid(format!(
                "query vector has length {} but N = {}",
                d_w.len(),
                self.n
            )));
        }
        Ok(d_w
            .iter()
            .zip(self.sorted.chunks(self.n))
            .map(|(&dw, col)| {
                let less = col.partition_point(|&d| d < dw);
                let not_greater = col.partition_point(|&d| d <= dw);
                0.5 + less as f64 + 0.5 * (not_greater - less) as f64
            })
            .collect())
    }
}

/// Class-wise means of a per-training-point vector (no self-exclusion).
pub fn query_summary(per_point: &[f64], labels: &[usize]) -> Result<Vec<f64>> {
    if per_point.len() != labels.len() {
        return Err(Error::invalid(format!(
            "vector of length {} for {} labels",
            per_point.len(),
            labels.len()
        )));
    }
    let counts = class_counts(labels)?;
    let mut sums = vec![0.0; counts.len()];
    for (&v, &g) in per_point.iter().zip(labels) {
        sums[g - 1] += v;
    }
    Ok(sums
        .iter()
        .zip(&counts)
        .map(|(s, &c)| if c == 0 { f64::NAN } else { s / c as f64 })
        .collect())
}

/// Per-query intermediate values.
#[derive(Debug, Clone, PartialEq)]
pub struct QueryVector {
    pub distances: Vec<f64>,
    pub ranks: Option<Vec<f64>>,
    pub summary: Vec<f64>,
}
