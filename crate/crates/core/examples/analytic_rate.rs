//! Predicts the distance classifier's misclassification rate from the moment
//! formulas alone and compares it with simulation along a mean-shift grid.
//!
//! Run with `cargo run --release --example analytic_rate`.

use distrank::datagen::{ar_factor, gen_two_class, ScenarioConfig, ScenarioId};
use distrank::theory::{analytic_misclassification, ScaledFactorFamily};
use distrank::{fit_vectors, BaseDist, Mode};
use nalgebra::DVector;

fn main() -> distrank::Result<()> {
    let d = 500;
    let trials = 5;
    // Every grid point shares one factor, so the Gram statistics are computed once.
    let family = ScaledFactorFamily::new(ar_factor(d, 0.1)?)?;
    let normal = BaseDist::StandardNormal.moments()?;
    println!("mu0  analytic  simulated");
    for mu0 in [0.0, 2.0, 4.0, 6.0] {
        let cfg = ScenarioConfig {
            d,
            seed: 1,
            trials,
            ..ScenarioConfig::preset(ScenarioId::S10, mu0, 1.0)
        };
        let mu = DVector::from_vec(cfg.mean_shift(0));
        let spec = family.spec(1.0, mu, normal, normal, cfg.n_train, cfg.m_train)?;
        let analytic = analytic_misclassification(&family.summary_moments(&spec, 1.0)?, 50_000, 7)?;
        let mut simulated = 0.0;
        for trial in 0..trials {
            let (train, test) = gen_two_class(&cfg, trial)?;
            simulated +=
                fit_vectors(train, Mode::Distance)?.misclassification_rate(&test)? / trials as f64;
        }
        println!("{mu0:>3}  {analytic:>8.3}  {simulated:>9.3}");
    }
    Ok(())
}
