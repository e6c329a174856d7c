//! Distance-based classification of two high-dimensional Gaussian classes
//! that differ only in their means.
//!
//! Run with `cargo run --release --example distance_classifier`.

use distrank::datagen::{gen_two_class, ScenarioConfig, ScenarioId};
use distrank::{fit_vectors, Mode};

fn main() -> distrank::Result<()> {
    // 50 + 50 training points in d = 1000, mean shift of length 6.
    let cfg = ScenarioConfig {
        seed: 42,
        ..ScenarioConfig::preset(ScenarioId::S1, 6.0, 1.0)
    };
    let (train, test) = gen_two_class(&cfg, 0)?;
    println!(
        "training: {} points in d = {}, class sizes {:?}",
        train.len(),
        train.dim(),
        train.class_counts()
    );

    let clf = fit_vectors(train, Mode::Distance)?;
    for class in clf.final_stage().classes() {
        println!(
            "class summary mean {:.1?}, prior {:.2}",
            class.mean.as_slice(),
            class.prior
        );
    }

    // A query is reduced to its mean squared distance to each class.
    let (w, label) = test.get(0);
    let q = clf.query(w)?;
    println!(
        "first test point (class {label}): mean distances {:.1?} -> predicted {}",
        q.summary,
        clf.predict(w)?
    );

    println!(
        "test misclassification rate: {:.3}",
        clf.misclassification_rate(&test)?
    );
    Ok(())
}
