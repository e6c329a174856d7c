//! Loading labelled data from delimited text, classifying new points and
//! saving the fitted discriminant as JSON.
//!
//! Run with `cargo run --release --example delimited_data`.

use distrank::{fit_vectors, LabeledDataset, Mode, QdaModel};

const TRAINING: &str = "\
x1,x2,x3,label
0.1,0.2,-0.1,1
-0.3,0.0,0.2,1
0.2,-0.2,0.1,1
0.0,0.4,-0.3,1
2.1,1.8,2.2,2
1.7,2.3,1.9,2
2.4,2.0,2.1,2
1.9,1.6,2.5,2
";

fn main() -> distrank::Result<()> {
    // The last column holds the class label.
    let train = LabeledDataset::read_delimited(TRAINING.as_bytes(), b',', true)?;
    println!(
        "{} points, d = {}, classes {:?}",
        train.len(),
        train.dim(),
        train.class_counts()
    );

    let clf = fit_vectors(train.clone(), Mode::Rank)?;
    for w in [
        vec![0.0, 0.1, 0.0],
        vec![2.0, 2.0, 2.0],
        vec![1.0, 1.0, 1.0],
    ] {
        println!("{w:?} -> class {}", clf.predict(&w)?);
    }

    let json = clf.final_stage().to_json();
    let restored = QdaModel::from_json(&json)?;
    let q = clf.query(&vec![1.0, 1.0, 1.0])?;
    println!(
        "restored model predicts {} from summary {:.2?}",
        restored.predict(&q.summary)?,
        q.summary
    );

    let mut out = Vec::new();
    train.write_delimited(&mut out, b'\t', true)?;
    println!("tab-separated copy:\n{}", String::from_utf8_lossy(&out));
    Ok(())
}
