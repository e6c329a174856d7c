//! Closed-form means and covariances of the distance summaries, checked
//! against a brute-force simulation of the same model.
//!
//! Run with `cargo run --release --example moment_theory`.

use distrank::datagen::{ar_factor, random_unit_direction};
use distrank::theory::{mc_oracle_moments, summary_moments, MomentSpec};
use distrank::BaseDist;
use nalgebra::DVector;

fn main() -> distrank::Result<()> {
    // X = A x and Y = 1.1 A y + mu with AR(1) correlation 0.1, d = 4,
    // skewed coordinates for X and normal ones for Y.
    let d = 4;
    let a = ar_factor(d, 0.1)?;
    let mu = DVector::from_vec(random_unit_direction(d, 1)) * 1.5;
    let (gx, gy) = (BaseDist::CenteredChiSquare(4), BaseDist::StandardNormal);
    let spec = MomentSpec::new(a.clone(), &a * 1.1, mu, gx.moments()?, gy.moments()?, 10, 8)?;

    let theory = summary_moments(&spec)?;
    println!(
        "E D(X_i)  = {:.3?}   (mean distance to class X, then to class Y)",
        theory.mu_dx
    );
    println!("E D(Y_j)  = {:.3?}", theory.mu_dy);
    println!("Cov D(W_x) = {:.3?}", theory.sig_dwx);

    let mc = mc_oracle_moments(&spec, gx, gy, 100_000, 2024)?;
    println!(
        "\n{:<14} {:>10} {:>10} {:>6}",
        "component", "formula", "simulated", "z"
    );
    for dev in mc.compare(&theory) {
        println!(
            "{:<14} {:>10.4} {:>10.4} {:>6.2}",
            dev.name,
            dev.theory,
            dev.estimate,
            dev.z()
        );
    }
    Ok(())
}
