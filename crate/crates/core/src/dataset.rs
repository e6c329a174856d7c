//! Labeled observation sets and the delimited-text dataset format.
//!
//! Text format: one observation per row, feature columns followed by a final
//! integer label column (labels `1..=k`). A header row is optional.

use std::io::{Read, Write};
use std::path::Path;

use crate::error::{Error, Result};

/// Anything the classifiers can measure distances between.
pub trait Observation: Clone + Send + Sync {
    /// Dimension used to reject mismatched queries.
    fn dim(&self) -> usize;
}

impl Observation for Vec<f64> {
    fn dim(&self) -> usize {
        self.len()
    }
}

/// `N` observations with class labels in `1..=k`.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledDataset<T = Vec<f64>> {
    observations: Vec<T>,
    labels: Vec<usize>,
    class_counts: Vec<usize>,
}

impl<T: Observation> LabeledDataset<T> {
    /// Builds a dataset; `k` is the largest label and every class in
    /// `1..=k` must be present.
    pub fn new(observations: Vec<T>, labels: Vec<usize>) -> Result<Self> {
        if observations.is_empty() {
            return Err(Error::invalid("dataset is empty"));
        }
        if observations.len() != labels.len() {
            return Err(Error::invalid(format!(
                "{} observations but {} labels",
                observations.len(),
                labels.len()
            )));
        }
        let dim = observations[0].dim();
        if dim == 0 {
            return Err(Error::invalid(
                "observations must have dimension at least 1",
            ));
        }
        if let Some(i) = observations.iter().position(|o| o.dim() != dim) {
            return Err(Error::invalid(format!(
                "observation {i} has dimension {} but expected {dim}",
                observations[i].dim()
            )));
        }
        if let Some(&bad) = labels.iter().find(|&&l| l == 0) {
            return Err(Error::invalid(format!("label {bad} outside 1..=k")));
        }
        let k = *labels.iter().max().expect("non-empty");
        let mut class_counts = vec![0; k];
        for &l in &labels {
            class_counts[l - 1] += 1;
        }
        if let Some(j) = class_counts.iter().position(|&c| c == 0) {
            return Err(Error::invalid(format!(
                "class {} has no observations",
                j + 1
            )));
        }
        Ok(LabeledDataset {
            observations,
            labels,
            class_counts,
        })
    }

    pub fn len(&self) -> usize {
        self.observations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.observations.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.observations[0].dim()
    }

    pub fn num_classes(&self) -> usize {
        self.class_counts.len()
    }

    pub fn observations(&self) -> &[T] {
        &self.observations
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn class_counts(&self) -> &[usize] {
        &self.class_counts
    }

    pub fn get(&self, i: usize) -> (&T, usize) {
        (&self.observations[i], self.labels[i])
    }

    pub fn into_parts(self) -> (Vec<T>, Vec<usize>) {
        (self.observations, self.labels)
    }

    /// Same observations with every label replaced by `f(label)`.
    pub fn relabel(&self, f: impl Fn(usize) -> usize) -> Result<Self> {
        LabeledDataset::new(
            self.observations.clone(),
            self.labels.iter().map(|&l| f(l)).collect(),
        )
    }

    /// Applies `f` to each observation, keeping labels.
    pub fn map<U: Observation>(&self, f: impl Fn(&T) -> U) -> Result<LabeledDataset<U>> {
        LabeledDataset::new(
            self.observations.iter().map(f).collect(),
            self.labels.clone(),
        )
    }

    /// Reorders observations; `order[i]` is the old index placed at `i`.
    pub fn permuted(&self, order: &[usize]) -> Result<Self> {
        if order.len() != self.len() {
            return Err(Error::invalid("permutation length mismatch"));
        }
        LabeledDataset::new(
            order
                .iter()
                .map(|&i| self.observations[i].clone())
                .collect(),
            order.iter().map(|&i| self.labels[i]).collect(),
        )
    }

    /// Concatenates two datasets.
    pub fn concat(&self, other: &Self) -> Result<Self> {
        let mut obs = self.observations.clone();
        obs.extend(other.observations.iter().cloned());
        let mut labels = self.labels.clone();
        labels.extend_from_slice(&other.labels);
        LabeledDataset::new(obs, labels)
    }
}

impl LabeledDataset<Vec<f64>> {
    /// Reads the delimited-text format.
    pub fn read_delimited<R: Read>(reader: R, delimiter: u8, has_header: bool) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .delimiter(delimiter)
            .has_headers(has_header)
            .trim(csv::Trim::All)
            .from_reader(reader);
        let mut observations = Vec::new();
        let mut labels = Vec::new();
        for (line, record) in rdr.records().enumerate() {
            let record = record.map_err(|e| Error::Parse(format!("row {line}: {e}")))?;
            if record.len() < 2 {
                return Err(Error::Parse(format!(
                    "row {line}: need at least one feature and a label"
                )));
            }
            let fields: Vec<&str> = record.iter().collect();
            let (label_field, features) = fields.split_last().expect("at least two fields");
            let label: usize = label_field
                .parse()
                .map_err(|_| Error::Parse(format!("row {line}: bad label {label_field:?}")))?;
            let row = features
                .iter()
                .map(|f| {
                    f.parse::<f64>()
                        .map_err(|_| Error::Parse(format!("row {line}: bad value {f:?}")))
                })
                .collect::<Result<Vec<_>>>()?;
            observations.push(row);
            labels.push(label);
        }
        LabeledDataset::new(observations, labels)
    }

    pub fn read_delimited_path(path: &Path, delimiter: u8, has_header: bool) -> Result<Self> {
        let file = std::fs::File::open(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::read_delimited(file, delimiter, has_header)
            .map_err(|e| e.context(format!("reading {}", path.display())))
    }

    /// Writes the delimited-text format. Values use Rust's shortest
    /// round-trip float formatting.
    pub fn write_delimited<W: Write>(&self, writer: W, delimiter: u8, header: bool) -> Result<()> {
        let mut wtr = csv::WriterBuilder::new()
            .delimiter(delimiter)
            .from_writer(writer);
        let to_err = |e: csv::Error| Error::Parse(e.to_string());
        if header {
            let mut names: Vec<String> = (1..=self.dim()).map(|j| format!("x{j}")).collect();
            names.push("label".into());
            wtr.write_record(&names).map_err(to_err)?;
        }
        for (obs, label) in self.observations.iter().zip(&self.labels) {
            let mut fields: Vec<String> = obs.iter().map(|v| v.to_string()).collect();
            fields.push(label.to_string());
            wtr.write_record(&fields).map_err(to_err)?;
        }
        wtr.flush().map_err(|e| Error::Parse(e.to_string()))?;
        Ok(())
    }
}
