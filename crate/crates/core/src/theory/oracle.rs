//! Brute-force Monte Carlo estimate of the summary moments, used to check
//! the closed forms.

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;

use super::moments::{MomentSpec, SummaryMoments};
use crate::distributions::BaseDist;
use crate::error::{Error, Result};
use crate::rng::{stream, StreamRng};

/// Replications are split over this many substreams regardless of the
/// thread count, so results depend only on the seed.
const PARTITIONS: usize = 16;

/// Empirical moments and their standard errors. Covariance entries carry the
/// standard error of the mean of the centered cross products.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EmpiricalMoments {
    pub estimate: SummaryMoments,
    pub std_error: SummaryMoments,
    pub reps: usize,
}

/// One scalar compared against its Monte Carlo estimate.
#[derive(Debug, Clone, PartialEq)]
pub struct Deviation {
    pub name: String,
    pub theory: f64,
    pub estimate: f64,
    pub std_error: f64,
}

impl Deviation {
    /// `|theory - estimate| / std_error`; infinite when the error is zero
    /// and the values differ.
    pub fn z(&self) -> f64 {
        let diff = (self.theory - self.estimate).abs();
        if self.std_error > 0.0 {
            diff / self.std_error
        } else if diff <= 1e-12 * self.theory.abs().max(1.0) {
            0.0
        } else {
            f64::INFINITY
        }
    }
}

impl EmpiricalMoments {
    /// Pairs each of the 20 components of `theory` with its estimate.
    pub fn compare(&self, theory: &SummaryMoments) -> Vec<Deviation> {
        theory
            .components()
            .into_iter()
            .zip(self.estimate.components())
            .zip(self.std_error.components())
            .map(|(((name, t), (_, e)), (_, s))| Deviation {
                name,
                theory: t,
                estimate: e,
                std_error: s,
            })
            .collect()
    }
}

fn draw(
    mat: &DMatrix<f64>,
    dist: BaseDist,
    shift: Option<&DVector<f64>>,
    rng: &mut StreamRng,
    buf: &mut [f64],
) -> DVector<f64> {
    dist.fill(rng, buf);
    let mut v = mat * DVector::from_column_slice(buf);
    if let Some(s) = shift {
        v += s;
    }
    v
}

fn mean_sq_dist(points: &[DVector<f64>], from: &DVector<f64>, skip: Option<usize>) -> f64 {
    let mut total = 0.0;
    let mut count = 0usize;
    for (i, p) in points.iter().enumerate() {
        if Some(i) != skip {
            total += (p - from).norm_squared();
            count += 1;
        }
    }
    total / count as f64
}

/// The eight summary coordinates of one replication:
/// `D(X_1), D(Y_1), D(W_x), D(W_y)`.
fn replicate(spec: &MomentSpec, gen_x: BaseDist, gen_y: BaseDist, rng: &mut StreamRng) -> [f64; 8] {
    let d = spec.dim();
    let mut buf = vec![0.0; d];
    let xs: Vec<_> = (0..spec.n)
        .map(|_| draw(&spec.a, gen_x, None, rng, &mut buf))
        .collect();
    let ys: Vec<_> = (0..spec.m)
        .map(|_| draw(&spec.b, gen_y, Some(&spec.mu), rng, &mut buf))
        .collect();
    let wx = draw(&spec.a, gen_x, None, rng, &mut buf);
    let wy = draw(&spec.b, gen_y, Some(&spec.mu), rng, &mut buf);
    [
        mean_sq_dist(&xs, &xs[0], Some(0)),
        mean_sq_dist(&ys, &xs[0], None),
        mean_sq_dist(&xs, &ys[0], None),
        mean_sq_dist(&ys, &ys[0], Some(0)),
        mean_sq_dist(&xs, &wx, None),
        mean_sq_dist(&ys, &wx, None),
        mean_sq_dist(&xs, &wy, None),
        mean_sq_dist(&ys, &wy, None),
    ]
}

/// Simulates the two-class model `reps` times with coordinates drawn from
/// `gen_x` and `gen_y` and returns the empirical means and covariances of
/// `D(X_1)`, `D(Y_1)`, `D(W_x)`, `D(W_y)`.
pub fn mc_oracle_moments(
    spec: &MomentSpec,
    gen_x: BaseDist,
    gen_y: BaseDist,
    reps: usize,
    seed: u64,
) -> Result<EmpiricalMoments> {
    spec.validate()?;
    gen_x.validate()?;
    gen_y.validate()?;
    if reps < 2 {
        return Err(Error::invalid("at least two replications are needed"));
    }
    let samples: Vec<[f64; 8]> = (0..PARTITIONS)
        .into_par_iter()
        .map(|p| {
            let lo = reps * p / PARTITIONS;
            let hi = reps * (p + 1) / PARTITIONS;
            let mut rng = stream(seed, &[p as u64]);
            (lo..hi)
                .map(|_| replicate(spec, gen_x, gen_y, &mut rng))
                .collect::<Vec<_>>()
        })
        .collect::<Vec<_>>()
        .concat();

    let r = reps as f64;
    let mut mean = [0.0; 8];
    for s in &samples {
        for (m, v) in mean.iter_mut().zip(s) {
            *m += v / r;
        }
    }
    // mean and standard error of a per-replication statistic
    let mean_se = |f: &dyn Fn(&[f64; 8]) -> f64| {
        let vals: Vec<f64> = samples.iter().map(f).collect();
        let mu = vals.iter().sum::<f64>() / r;
        let var = vals.iter().map(|v| (v - mu).powi(2)).sum::<f64>() / (r - 1.0);
        (mu, (var / r).sqrt())
    };

    let mut est = [[0.0; 2]; 4];
    let mut est_se = [[0.0; 2]; 4];
    let mut cov = [[[0.0; 2]; 2]; 4];
    let mut cov_se = [[[0.0; 2]; 2]; 4];
    for g in 0..4 {
        for i in 0..2 {
            let (m, se) = mean_se(&|s: &[f64; 8]| s[2 * g + i]);
            est[g][i] = m;
            est_se[g][i] = se;
        }
        for i in 0..2 {
            for j in i..2 {
                let (mi, mj) = (mean[2 * g + i], mean[2 * g + j]);
                let (c, se) = mean_se(&|s: &[f64; 8]| (s[2 * g + i] - mi) * (s[2 * g + j] - mj));
                // unbiased scaling of the plug-in covariance
                let c = c * r / (r - 1.0);
                cov[g][i][j] = c;
                cov[g][j][i] = c;
                cov_se[g][i][j] = se;
                cov_se[g][j][i] = se;
            }
        }
    }
    let build = |m: [[f64; 2]; 4], c: [[[f64; 2]; 2]; 4]| SummaryMoments {
        mu_dx: m[0],
        mu_dy: m[1],
        mu_dwx: m[2],
        mu_dwy: m[3],
        sig_dx: c[0],
        sig_dy: c[1],
        sig_dwx: c[2],
        sig_dwy: c[3],
    };
    Ok(EmpiricalMoments {
        estimate: build(est, cov),
        std_error: build(est_se, cov_se),
        reps,
    })
}
