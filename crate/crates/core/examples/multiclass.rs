//! Four classes that differ in location, scale or both, classified with
//! both paths. Prints a confusion matrix per scenario.
//!
//! Run with `cargo run --release --example multiclass`.

use distrank::datagen::{gen_multi_class, ScenarioConfig, ScenarioId};
use distrank::{fit_vectors, Mode};

fn main() -> distrank::Result<()> {
    for scenario in [ScenarioId::S5, ScenarioId::S6, ScenarioId::S7] {
        let cfg = ScenarioConfig {
            seed: 3,
            ..ScenarioConfig::preset(scenario, 12.0, 1.1)
        };
        let (train, test) = gen_multi_class(&cfg, 0)?;
        println!("{scenario} ({} / {}):", cfg.base_x, cfg.base_y);
        for mode in Mode::ALL {
            let clf = fit_vectors(train.clone(), mode)?;
            let predicted = clf.predict_batch(test.observations())?;
            let mut confusion = [[0usize; 4]; 4];
            for (p, l) in predicted.iter().zip(test.labels()) {
                confusion[l - 1][p - 1] += 1;
            }
            let rate = clf.misclassification_rate(&test)?;
            println!("  {mode}: rate {rate:.3}; rows are true classes, columns predictions");
            for row in confusion {
                println!("    {row:?}");
            }
        }
    }
    Ok(())
}
