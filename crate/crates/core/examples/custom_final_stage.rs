//! Swapping QDA for another classifier on the summary vectors. Here a
//! nearest-class-mean rule is plugged into the rank pipeline.
//!
//! Run with `cargo run --release --example custom_final_stage`.

use distrank::datagen::{gen_two_class, ScenarioConfig, ScenarioId};
use distrank::{FittedClassifier, Mode, SummaryClassifier, SummaryStats, VectorMetric};

/// Assigns a summary vector to the class with the closest mean summary.
struct NearestMean {
    means: Vec<Vec<f64>>,
}

impl SummaryClassifier for NearestMean {
    fn fit(summary: &SummaryStats, labels: &[usize]) -> distrank::Result<Self> {
        let k = summary.k();
        let mut means = vec![vec![0.0; k]; k];
        let mut counts = vec![0usize; k];
        for (row, &label) in summary.rows().zip(labels) {
            counts[label - 1] += 1;
            for (m, v) in means[label - 1].iter_mut().zip(row) {
                *m += v;
            }
        }
        for (mean, &n) in means.iter_mut().zip(&counts) {
            mean.iter_mut().for_each(|m| *m /= n as f64);
        }
        Ok(NearestMean { means })
    }

    fn predict(&self, x: &[f64]) -> distrank::Result<usize> {
        let dist = |m: &Vec<f64>| m.iter().zip(x).map(|(a, b)| (a - b) * (a - b)).sum::<f64>();
        let best = (0..self.means.len())
            .min_by(|&i, &j| dist(&self.means[i]).total_cmp(&dist(&self.means[j])));
        Ok(best.expect("at least two classes") + 1)
    }
}

fn main() -> distrank::Result<()> {
    // Equal means, different scales: the class-wise mean ranks still separate.
    let cfg = ScenarioConfig {
        seed: 2,
        ..ScenarioConfig::preset(ScenarioId::S1, 0.0, 1.1)
    };
    let (train, test) = gen_two_class(&cfg, 0)?;
    let nearest = FittedClassifier::<_, _, NearestMean>::fit_with(
        train.clone(),
        Mode::Rank,
        VectorMetric::Euclidean,
    )?;
    let qda = FittedClassifier::fit(train, Mode::Rank, VectorMetric::Euclidean)?;
    println!(
        "rank + nearest mean: {:.3}",
        nearest.misclassification_rate(&test)?
    );
    println!(
        "rank + QDA:          {:.3}",
        qda.misclassification_rate(&test)?
    );
    Ok(())
}
