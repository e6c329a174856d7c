//! Rank-based classification on heavy-tailed data, side by side with the
//! distance-based classifier.
//!
//! Run with `cargo run --release --example rank_classifier`.

use distrank::datagen::{gen_two_class, ScenarioConfig, ScenarioId};
use distrank::{fit_vectors, Mode};

fn main() -> distrank::Result<()> {
    // Student t(5) coordinates, mean shift of length 4, d = 1000.
    let cfg = ScenarioConfig {
        seed: 7,
        trials: 5,
        ..ScenarioConfig::preset(ScenarioId::S2, 4.0, 1.0)
    };
    let mut totals = [0.0; 2];
    for trial in 0..cfg.trials {
        let (train, test) = gen_two_class(&cfg, trial)?;
        let mut line = format!("trial {trial}:");
        for (i, mode) in Mode::ALL.into_iter().enumerate() {
            let rate = fit_vectors(train.clone(), mode)?.misclassification_rate(&test)?;
            totals[i] += rate / cfg.trials as f64;
            line += &format!("  {mode} {rate:.2}");
        }
        println!("{line}");
    }
    println!(
        "mean over {} trials: distance {:.3}, rank {:.3}",
        cfg.trials, totals[0], totals[1]
    );

    // Rank mode turns each query distance into a mid-rank within the
    // corresponding column of training distances.
    let (train, test) = gen_two_class(&cfg, 0)?;
    let clf = fit_vectors(train, Mode::Rank)?;
    let q = clf.query(&test.observations()[0])?;
    let ranks = q.ranks.expect("rank mode keeps query ranks");
    println!(
        "first query: ranks {:.1?} ... -> class-wise mean ranks {:.2?}",
        &ranks[..5],
        q.summary
    );
    Ok(())
}
