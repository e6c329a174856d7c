//! CSV row types of the runners. Headers are the serde field names; optional
//! values are written as empty fields.

use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::classifier::Mode;
use crate::datagen::ScenarioId;
use crate::error::{Error, Result};

/// One (configuration, mode, trial) outcome. `rate` is empty and `error`
/// set when the trial failed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ResultRow {
    /// Position of the configuration in the plan.
    pub config: usize,
    pub scenario_id: ScenarioId,
    pub mu0: f64,
    pub a: f64,
    pub outliers: usize,
    pub mode: Mode,
    pub trial: usize,
    pub rate: Option<f64>,
    pub elapsed_millis: u64,
    pub seed: u64,
    pub error: Option<String>,
}

/// Per (configuration, mode) summary over successful trials.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct AggregateRow {
    pub config: usize,
    pub scenario_id: ScenarioId,
    pub mu0: f64,
    pub a: f64,
    pub outliers: usize,
    pub mode: Mode,
    pub mean_rate: Option<f64>,
    pub stderr: Option<f64>,
    /// Successful trials.
    pub trials: usize,
    pub failed: usize,
    /// Mean rate within 0.01 of the best mode of this configuration.
    pub best: bool,
}

/// Analytic rate of one grid point, with simulated rates when requested.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct AnalyticRow {
    pub config: usize,
    pub scenario_id: ScenarioId,
    pub mu0: f64,
    pub a: f64,
    pub analytic_rate: Option<f64>,
    pub samples: usize,
    pub seed: u64,
    pub simulated_rank_rate: Option<f64>,
    pub simulated_dist_rate: Option<f64>,
    pub error: Option<String>,
}

/// Distance-minus-rank mean rate of one contaminated configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct GapRow {
    pub config: usize,
    pub scenario_id: ScenarioId,
    pub mu0: f64,
    pub a: f64,
    pub outliers: usize,
    pub dist_rate: Option<f64>,
    pub rank_rate: Option<f64>,
    /// `dist_rate - rank_rate`; positive when the rank path does better.
    pub gap: Option<f64>,
}

pub fn write_rows<T: Serialize>(path: &Path, rows: &[T]) -> Result<()> {
    let csv_err = |source| Error::Csv {
        path: path.to_path_buf(),
        source,
    };
    let mut w = csv::Writer::from_path(path).map_err(csv_err)?;
    for r in rows {
        w.serialize(r).map_err(csv_err)?;
    }
    w.flush().map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn read_rows<T: DeserializeOwned>(path: &Path) -> Result<Vec<T>> {
    let csv_err = |source| Error::Csv {
        path: path.to_path_buf(),
        source,
    };
    let mut r = csv::Reader::from_path(path).map_err(csv_err)?;
    r.deserialize()
        .collect::<std::result::Result<Vec<T>, _>>()
        .map_err(csv_err)
}

/// Rows as CSV text, header included.
pub fn rows_to_string<T: Serialize>(rows: &[T]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(|e| Error::Parse(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Parse(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Parse(e.to_string()))
}

pub fn rows_from_str<T: DeserializeOwned>(text: &str) -> Result<Vec<T>> {
    csv::Reader::from_reader(text.as_bytes())
        .deserialize()
        .collect::<std::result::Result<Vec<T>, _>>()
        .map_err(|e| Error::Parse(e.to_string()))
}
