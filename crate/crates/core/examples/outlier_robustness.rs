//! Replaces some class-X training points with far-away outliers and compares
//! how the two classifiers degrade.
//!
//! Run with `cargo run --release --example outlier_robustness`.

use distrank::datagen::{gen_two_class, ScenarioConfig, ScenarioId};
use distrank::{fit_vectors, Mode};

fn main() -> distrank::Result<()> {
    let trials = 5;
    println!("outliers  distance  rank");
    for n_o in [0, 1, 3, 7] {
        let cfg = ScenarioConfig {
            seed: 9,
            trials,
            outliers: Some(n_o),
            ..ScenarioConfig::preset(ScenarioId::S1, 6.0, 1.0)
        };
        let mut mean = [0.0; 2];
        for trial in 0..trials {
            // Outliers only touch the training set; the test set stays clean.
            let (train, test) = gen_two_class(&cfg, trial)?;
            for (i, mode) in Mode::ALL.into_iter().enumerate() {
                mean[i] += fit_vectors(train.clone(), mode)?.misclassification_rate(&test)?
                    / trials as f64;
            }
        }
        println!("{n_o:>8}  {:>8.3}  {:>4.3}", mean[0], mean[1]);
    }
    Ok(())
}
