//! Lower-triangular factor of the AR(1) correlation matrix
//! `S[r, c] = rho^|r - c|`.
//!
//! The factor has the closed form `L[i, 0] = rho^i` and
//! `L[i, j] = rho^(i - j) * sqrt(1 - rho^2)` for `1 <= j <= i`, so `L x` is the
//! stationary AR(1) recursion and can be applied in `O(d)`.

use nalgebra::DMatrix;

use crate::error::{Error, Result};

fn check(d: usize, rho: f64) -> Result<()> {
    if d == 0 {
        return Err(Error::invalid("dimension must be at least 1"));
    }
    if rho.is_nan() || rho.abs() >= 1.0 {
        return Err(Error::invalid(format!(
            "AR coefficient {rho} must satisfy |rho| < 1"
        )));
    }
    Ok(())
}

/// Dense `d x d` factor `A` with `A A' = S`.
pub fn ar_factor(d: usize, rho: f64) -> Result<DMatrix<f64>> {
    check(d, rho)?;
    let innov = (1.0 - rho * rho).sqrt();
    let mut a = DMatrix::zeros(d, d);
    let mut pow = 1.0;
    for lag in 0..d {
        // entries on the `lag`-th subdiagonal
        for i in lag..d {
            let j = i - lag;
            a[(i, j)] = if j == 0 { pow } else { pow * innov };
        }
        pow *= rho;
    }
    Ok(a)
}

/// The correlation matrix itself.
pub fn ar_correlation(d: usize, rho: f64) -> DMatrix<f64> {
    DMatrix::from_fn(d, d, |r, c| rho.powi((r as i32 - c as i32).abs()))
}

/// Overwrites `x` with `A x` for the AR(1) factor.
pub fn ar_apply(rho: f64, x: &mut [f64]) {
    let innov = (1.0 - rho * rho).sqrt();
    for i in 1..x.len() {
        x[i] = rho * x[i - 1] + innov * x[i];
    }
}
