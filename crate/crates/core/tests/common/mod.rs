//! Strategies and property checks shared by the property test suite and the
//! acceptance harness.

#![allow(dead_code)]

use distrank::datagen::{
    ar_apply, ar_correlation, ar_factor, configuration_model, vectorize_adjacency, FrobeniusGraph,
};
use distrank::distance::{query_distances, query_summary};
use distrank::metric::FnMetric;
use distrank::{
    FittedClassifier, LabeledDataset, Metric, MetricKind, Mode, PairwiseDistances, QdaModel,
    SummaryStats, VectorMetric,
};
use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;
use proptest::test_runner::TestCaseError;

pub const PROPERTY_CASES: u32 = 128;

/// Coordinates on a quarter-integer grid: distances are exact and ties occur.
fn grid_value() -> impl Strategy<Value = f64> {
    (-12i32..=12).prop_map(|v| f64::from(v) / 4.0)
}

/// A labelled dataset with 2 or 3 classes of 2..=5 points each, plus a query.
#[derive(Debug, Clone)]
pub struct DatasetCase {
    pub dataset: LabeledDataset,
    pub query: Vec<f64>,
}

pub fn dataset_case() -> impl Strategy<Value = DatasetCase> {
    (2usize..=3, 1usize..=4)
        .prop_flat_map(|(k, d)| (prop::collection::vec(2usize..=5, k), Just(d)))
        .prop_flat_map(|(counts, d)| {
            let n: usize = counts.iter().sum();
            let labels: Vec<usize> = counts
                .iter()
                .enumerate()
                .flat_map(|(j, &c)| std::iter::repeat_n(j + 1, c))
                .collect();
            (
                prop::collection::vec(prop::collection::vec(grid_value(), d), n),
                Just(labels),
                prop::collection::vec(grid_value(), d),
            )
        })
        .prop_map(|(obs, labels, query)| DatasetCase {
            dataset: LabeledDataset::new(obs, labels).expect("generated dataset is valid"),
            query,
        })
}

/// A dataset case together with a permutation of its rows.
pub fn permuted_case() -> impl Strategy<Value = (DatasetCase, Vec<usize>)> {
    dataset_case().prop_flat_map(|case| {
        let order: Vec<usize> = (0..case.dataset.len()).collect();
        (Just(case), Just(order).prop_shuffle())
    })
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * (1.0 + a.abs().max(b.abs()))
}

/// Permuting the observations permutes the distance matrix consistently and
/// leaves every point's class-wise summary unchanged.
pub fn permutation_invariance(
    (case, order): (DatasetCase, Vec<usize>),
) -> Result<(), TestCaseError> {
    let ds = &case.dataset;
    let perm = ds.permuted(&order).map_err(fail)?;
    for metric in [VectorMetric::SquaredEuclidean, VectorMetric::Euclidean] {
        let d0 = PairwiseDistances::compute(ds, &metric).map_err(fail)?;
        let d1 = PairwiseDistances::compute(&perm, &metric).map_err(fail)?;
        for i in 0..ds.len() {
            for j in 0..ds.len() {
                prop_assert_eq!(d1.get(i, j), d0.get(order[i], order[j]));
            }
        }
        let s0 = SummaryStats::from_distances(&d0, ds.labels()).map_err(fail)?;
        let s1 = SummaryStats::from_distances(&d1, perm.labels()).map_err(fail)?;
        let r0 = SummaryStats::from_ranks(&d0.column_ranks(), ds.labels()).map_err(fail)?;
        let r1 = SummaryStats::from_ranks(&d1.column_ranks(), perm.labels()).map_err(fail)?;
        for (i, &oi) in order.iter().enumerate() {
            for (a, b) in s1.row(i).iter().zip(s0.row(oi)) {
                prop_assert!(close(*a, *b, 1e-12), "distance summary {a} vs {b}");
            }
            for (a, b) in r1.row(i).iter().zip(r0.row(oi)) {
                prop_assert!(close(*a, *b, 1e-12), "rank summary {a} vs {b}");
            }
        }
        let q0 = query_summary(
            &query_distances(&case.query, ds, &metric).map_err(fail)?,
            ds.labels(),
        )
        .map_err(fail)?;
        let q1 = query_summary(
            &query_distances(&case.query, &perm, &metric).map_err(fail)?,
            perm.labels(),
        )
        .map_err(fail)?;
        for (a, b) in q0.iter().zip(&q1) {
            prop_assert!(close(*a, *b, 1e-12), "query summary {a} vs {b}");
        }
    }
    Ok(())
}

/// The rank path gives identical ranks and predictions for squared,
/// unsquared and log-transformed distances.
pub fn monotone_transform_invariance(case: DatasetCase) -> Result<(), TestCaseError> {
    let ds = &case.dataset;
    let sq = PairwiseDistances::compute(ds, &VectorMetric::SquaredEuclidean).map_err(fail)?;
    let eu = PairwiseDistances::compute(ds, &VectorMetric::Euclidean).map_err(fail)?;
    let log_metric = FnMetric(|a: &Vec<f64>, b: &Vec<f64>| {
        VectorMetric::SquaredEuclidean.distance(a, b).ln_1p()
    });
    let lg = PairwiseDistances::compute(ds, &log_metric).map_err(fail)?;
    let (r_sq, r_eu, r_lg) = (sq.column_ranks(), eu.column_ranks(), lg.column_ranks());
    prop_assert_eq!(r_sq.values(), r_eu.values());
    prop_assert_eq!(r_sq.values(), r_lg.values());

    let fit_sq = FittedClassifier::fit(ds.clone(), Mode::Rank, VectorMetric::SquaredEuclidean);
    let fit_eu = FittedClassifier::fit(ds.clone(), Mode::Rank, VectorMetric::Euclidean);
    match (fit_sq, fit_eu) {
        (Ok(a), Ok(b)) => {
            let qa = a.query(&case.query).map_err(fail)?;
            let qb = b.query(&case.query).map_err(fail)?;
            prop_assert_eq!(&qa.ranks, &qb.ranks);
            prop_assert_eq!(
                a.predict(&case.query).map_err(fail)?,
                b.predict(&case.query).map_err(fail)?
            );
            for w in ds.observations() {
                prop_assert_eq!(a.predict(w).map_err(fail)?, b.predict(w).map_err(fail)?);
            }
        }
        (Err(a), Err(b)) => prop_assert_eq!(a.to_string(), b.to_string()),
        (a, b) => {
            return Err(fail(format!(
                "fit outcome differs: {:?} vs {:?}",
                a.is_ok(),
                b.is_ok()
            )))
        }
    }
    Ok(())
}

/// A symmetric, hollow, non-negative matrix on a coarse grid (many ties).
pub fn tied_matrix() -> impl Strategy<Value = (usize, Vec<f64>)> {
    (2usize..=12)
        .prop_flat_map(|n| (Just(n), prop::collection::vec(0u8..6, n * n)))
        .prop_map(|(n, raw)| {
            let mut v = vec![0.0; n * n];
            for i in 0..n {
                for j in (i + 1)..n {
                    let x = f64::from(raw[i * n + j]) / 2.0;
                    v[i * n + j] = x;
                    v[j * n + i] = x;
                }
            }
            (n, v)
        })
}

/// Every column of mid-ranks sums to `n (n + 1) / 2`.
pub fn column_rank_sum((n, values): (usize, Vec<f64>)) -> Result<(), TestCaseError> {
    let dist = PairwiseDistances::from_matrix(n, values, MetricKind::Custom).map_err(fail)?;
    let ranks = dist.column_ranks();
    let expected = (n * (n + 1)) as f64 / 2.0;
    for j in 0..n {
        let sum: f64 = ranks.column(j).iter().sum();
        prop_assert_eq!(sum, expected, "column {}", j);
    }
    Ok(())
}

#[derive(Debug, Clone)]
pub struct NearestMeanCase {
    pub means: Vec<Vec<f64>>,
    pub scale: f64,
    pub point: Vec<f64>,
}

pub fn nearest_mean_case() -> impl Strategy<Value = NearestMeanCase> {
    (2usize..=5, 1usize..=4)
        .prop_flat_map(|(k, d)| {
            (
                prop::collection::vec(prop::collection::vec(-10.0f64..10.0, d), k),
                0.01f64..100.0,
                prop::collection::vec(-12.0f64..12.0, d),
            )
        })
        .prop_map(|(means, scale, point)| NearestMeanCase {
            means,
            scale,
            point,
        })
}

/// With covariances `c I` and equal priors QDA picks the nearest mean.
pub fn qda_nearest_mean(case: NearestMeanCase) -> Result<(), TestCaseError> {
    let k = case.means.len();
    let d = case.point.len();
    let sq = |m: &[f64]| {
        m.iter()
            .zip(&case.point)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
    };
    let dists: Vec<f64> = case.means.iter().map(|m| sq(m)).collect();
    let mut sorted = dists.clone();
    sorted.sort_by(f64::total_cmp);
    prop_assume!(sorted[1] - sorted[0] > 1e-9 * (1.0 + sorted[1]));
    let nearest = 1 + dists
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .map(|(j, _)| j)
        .unwrap();
    let params = case
        .means
        .iter()
        .map(|m| {
            (
                DVector::from_column_slice(m),
                DMatrix::identity(d, d) * case.scale,
                1.0 / k as f64,
            )
        })
        .collect();
    let model = QdaModel::from_gaussians(params).map_err(fail)?;
    prop_assert_eq!(model.predict(&case.point).map_err(fail)?, nearest);
    Ok(())
}

pub fn ar_case() -> impl Strategy<Value = (usize, f64, u64)> {
    (1usize..=60, -0.95f64..0.95, any::<u64>())
}

/// The AR(1) factor reproduces its correlation matrix, and the O(d)
/// recursion equals multiplication by the factor.
pub fn ar_reconstruction((d, rho, seed): (usize, f64, u64)) -> Result<(), TestCaseError> {
    let l = ar_factor(d, rho).map_err(fail)?;
    let err = (&l * l.transpose() - ar_correlation(d, rho)).amax();
    prop_assert!(err < 1e-10, "reconstruction error {err}");
    let x: Vec<f64> = (0..d)
        .map(|i| ((seed.wrapping_mul(i as u64 + 7) % 1000) as f64) / 250.0 - 2.0)
        .collect();
    let dense = &l * DVector::from_column_slice(&x);
    let mut fast = x.clone();
    ar_apply(rho, &mut fast);
    for (a, b) in dense.iter().zip(&fast) {
        prop_assert!((a - b).abs() < 1e-10, "recursion {b} vs product {a}");
    }
    Ok(())
}

#[derive(Debug, Clone)]
pub struct GraphCase {
    pub degrees: Vec<Vec<usize>>,
    pub seed: u64,
    pub simple: bool,
}

/// Four to eight graphs on a shared vertex count with even degree sums.
pub fn graph_case() -> impl Strategy<Value = GraphCase> {
    (3usize..=8, 4usize..=8)
        .prop_flat_map(|(v, g)| {
            (
                prop::collection::vec(prop::collection::vec(0usize..=4, v), g),
                any::<u64>(),
                any::<bool>(),
            )
        })
        .prop_map(|(mut degrees, seed, simple)| {
            for deg in &mut degrees {
                if deg.iter().sum::<usize>() % 2 == 1 {
                    deg[0] += 1;
                }
            }
            GraphCase {
                degrees,
                seed,
                simple,
            }
        })
}

/// The Frobenius graph metric equals the Euclidean metric on vectorized
/// adjacencies, and classifiers built either way predict identically.
pub fn graph_isometry(case: GraphCase) -> Result<(), TestCaseError> {
    let graphs = case
        .degrees
        .iter()
        .enumerate()
        .map(|(i, deg)| configuration_model(deg, case.seed.wrapping_add(i as u64), case.simple))
        .collect::<distrank::Result<Vec<_>>>()
        .map_err(fail)?;
    let vectors: Vec<Vec<f64>> = graphs.iter().map(vectorize_adjacency).collect();
    for (ga, va) in graphs.iter().zip(&vectors) {
        for (gb, vb) in graphs.iter().zip(&vectors) {
            let sq = FrobeniusGraph { squared: true }.distance(ga, gb);
            prop_assert_eq!(sq, VectorMetric::SquaredEuclidean.distance(va, vb));
            let eu = FrobeniusGraph { squared: false }.distance(ga, gb);
            prop_assert_eq!(eu, VectorMetric::Euclidean.distance(va, vb));
        }
    }
    let half = graphs.len() / 2;
    let labels: Vec<usize> = (0..graphs.len())
        .map(|i| if i < half { 1 } else { 2 })
        .collect();
    let train_g = LabeledDataset::new(graphs.clone(), labels.clone()).map_err(fail)?;
    let train_v = LabeledDataset::new(vectors.clone(), labels).map_err(fail)?;
    for mode in Mode::ALL {
        let direct = FittedClassifier::fit(
            train_g.clone(),
            mode,
            FrobeniusGraph {
                squared: mode == Mode::Distance,
            },
        );
        let flat = FittedClassifier::fit(train_v.clone(), mode, mode.default_metric());
        match (direct, flat) {
            (Ok(a), Ok(b)) => {
                for (g, v) in graphs.iter().zip(&vectors) {
                    prop_assert_eq!(a.predict(g).map_err(fail)?, b.predict(v).map_err(fail)?);
                }
            }
            (Err(a), Err(b)) => prop_assert_eq!(a.to_string(), b.to_string()),
            (a, b) => {
                return Err(fail(format!(
                    "fit outcome differs: {:?} vs {:?}",
                    a.is_ok(),
                    b.is_ok()
                )))
            }
        }
    }
    Ok(())
}

pub fn fail(e: impl std::fmt::Display) -> TestCaseError {
    TestCaseError::fail(e.to_string())
}
