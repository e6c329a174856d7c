//! Classifying random graphs with the Frobenius distance between adjacency
//! matrices, and checking it against the vectorized-adjacency route.
//!
//! Run with `cargo run --release --example graph_classification`.

use distrank::datagen::{degree_sequence, gen_network, FrobeniusGraph, ScenarioConfig, ScenarioId};
use distrank::{fit_vectors, FittedClassifier, Mode};

fn main() -> distrank::Result<()> {
    let a = 10;
    let seqs = degree_sequence(ScenarioId::S8, a)?;
    println!("class X degrees: {:?}", seqs.x);
    println!("class Y degrees: {:?}", seqs.y);

    let cfg = ScenarioConfig {
        seed: 5,
        ..ScenarioConfig::preset(ScenarioId::S8, 0.0, a as f64)
    };
    let (train, test) = gen_network(&cfg, 0)?;
    let g = &train.observations()[0];
    println!(
        "first training graph: {} edges, realized degrees {:?}",
        g.edge_count(),
        &g.realized_degrees()[..10]
    );
    let mut edges = Vec::new();
    g.write_edge_list(&mut edges).expect("writing to memory");
    let text = String::from_utf8(edges).expect("edge list is ASCII");
    println!(
        "edge list (first lines):\n{}",
        text.lines().take(4).collect::<Vec<_>>().join("\n")
    );

    let flat_train = train.map(|g| g.vectorize())?;
    for mode in Mode::ALL {
        let direct = FittedClassifier::fit(
            train.clone(),
            mode,
            FrobeniusGraph {
                squared: mode == Mode::Distance,
            },
        )?;
        let flat = fit_vectors(flat_train.clone(), mode)?;
        let agree = test
            .observations()
            .iter()
            .all(|g| direct.predict(g).ok() == flat.predict(&g.vectorize()).ok());
        println!(
            "{mode}: test rate {:.3}, graph metric and vectorized predictions agree: {agree}",
            direct.misclassification_rate(&test)?
        );
    }
    Ok(())
}
