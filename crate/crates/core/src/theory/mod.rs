//! Population moments of the distance summaries in the two-class linear
//! model, a Monte Carlo check of them, and the misclassification rate they
//! imply.

mod analytic;
mod moments;
mod oracle;

pub use analytic::analytic_misclassification;
pub use moments::{
    moment_f, moment_g, moment_h1, moment_h2, reference, summary_moments, MomentSpec,
    MomentSpecDocument, ScaledFactorFamily, Side, SummaryMoments, MOMENT_SPEC_SCHEMA,
};
pub use oracle::{mc_oracle_moments, Deviation, EmpiricalMoments};

use crate::distributions::{BaseDist, RawMoments};
use crate::error::Result;

/// `(E x^2, E x^3, E x^4)` of a base distribution; fails when a moment is
/// infinite (Student t with `nu <= 4`).
pub fn distribution_moments(dist: BaseDist) -> Result<RawMoments> {
    dist.moments()
}
