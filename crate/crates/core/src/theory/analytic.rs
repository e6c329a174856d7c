//! Misclassification rate implied by the summary moments, treating the
//! summaries as Gaussian.

use nalgebra::{DMatrix, DVector};
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use super::moments::SummaryMoments;
use crate::error::{Error, Result};
use crate::qda::QdaModel;
use crate::rng::stream;

const PARTITIONS: usize = 16;

fn to_params(mean: [f64; 2], cov: [[f64; 2]; 2]) -> (DVector<f64>, DMatrix<f64>) {
    (
        DVector::from_row_slice(&mean),
        DMatrix::from_fn(2, 2, |i, j| cov[i][j]),
    )
}

/// Fits the two-class discriminant on the training-point moments
/// (`mu_dx`, `sig_dx`, `mu_dy`, `sig_dy`, equal class weights), then classifies
/// `num_samples` draws from the equal-weight mixture of the test-point
/// Gaussians and returns the fraction assigned to the wrong component.
pub fn analytic_misclassification(
    sm: &SummaryMoments,
    num_samples: usize,
    seed: u64,
) -> Result<f64> {
    if num_samples == 0 {
        return Err(Error::invalid("num_samples must be positive"));
    }
    let (mx, sx) = to_params(sm.mu_dx, sm.sig_dx);
    let (my, sy) = to_params(sm.mu_dy, sm.sig_dy);
    let model = QdaModel::from_gaussians(vec![(mx, sx, 0.5), (my, sy, 0.5)])?;

    // the sampling distributions get the same ridge treatment as the fit
    let test = QdaModel::from_gaussians(vec![
        {
            let (m, s) = to_params(sm.mu_dwx, sm.sig_dwx);
            (m, s, 0.5)
        },
        {
            let (m, s) = to_params(sm.mu_dwy, sm.sig_dwy);
            (m, s, 0.5)
        },
    ])?;
    let factors: Vec<(DVector<f64>, DMatrix<f64>)> = test
        .classes()
        .iter()
        .map(|c| (c.mean.clone(), c.cholesky_factor()))
        .collect();

    let errors: usize = (0..PARTITIONS)
        .into_par_iter()
        .map(|p| -> Result<usize> {
            let lo = num_samples * p / PARTITIONS;
            let hi = num_samples * (p + 1) / PARTITIONS;
            let mut rng = stream(seed, &[p as u64]);
            let mut wrong = 0;
            for _ in lo..hi {
                let component = usize::from(rand::Rng::random_bool(&mut rng, 0.5));
                let (mean, l) = &factors[component];
                let z = DVector::from_fn(2, |_, _| StandardNormal.sample(&mut rng));
                let point = mean + l * z;
                if model.predict(point.as_slice())? != component + 1 {
                    wrong += 1;
                }
            }
            Ok(wrong)
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .sum();
    Ok(errors as f64 / num_samples as f64)
}
