//! Experiment plans: a TOML file listing scenario configurations, the modes
//! to compare, trial count and seed.
//!
//! ```toml
//! schema = 1
//! seed = 1
//! trials = 20
//! modes = ["distance", "rank"]
//!
//! [analytic]            # only read by the analytic runner
//! samples = 100000
//! overlay = true        # also simulate every grid point
//!
//! [[config]]
//! scenario = "S2"
//! mu0 = 4.0
//! a = 1.0
//! # optional overrides of the scenario preset:
//! # d, n_train, m_train, n_test, m_test, rho, base_x, base_y,
//! # outliers, fixed_direction, simple_graphs
//! ```
//!
//! Every configuration uses the plan seed, so all points of a grid share
//! their random draws and differ only in the signal parameters.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::classifier::Mode;
use crate::datagen::{ScenarioConfig, ScenarioId};
use crate::distributions::BaseDist;
use crate::error::{Error, Result};

pub const PLAN_SCHEMA: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentPlan {
    pub schema: u32,
    pub seed: u64,
    pub trials: usize,
    pub modes: Vec<Mode>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_dir: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub analytic: Option<AnalyticOptions>,
    #[serde(rename = "config")]
    pub configs: Vec<PlanEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnalyticOptions {
    pub samples: usize,
    #[serde(default)]
    pub overlay: bool,
}

/// One scenario configuration: a preset plus optional overrides.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlanEntry {
    pub scenario: ScenarioId,
    pub mu0: f64,
    pub a: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub outliers: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_train: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m_train: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_test: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m_test: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base_x: Option<BaseDist>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base_y: Option<BaseDist>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fixed_direction: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub simple_graphs: Option<bool>,
}

impl PlanEntry {
    pub fn new(scenario: ScenarioId, mu0: f64, a: f64) -> Self {
        PlanEntry {
            scenario,
            mu0,
            a,
            outliers: None,
            d: None,
            n_train: None,
            m_train: None,
            n_test: None,
            m_test: None,
            rho: None,
            base_x: None,
            base_y: None,
            fixed_direction: None,
            simple_graphs: None,
        }
    }

    /// The preset with this entry's overrides, `trials` and `seed` applied.
    pub fn to_config(&self, trials: usize, seed: u64) -> Result<ScenarioConfig> {
        let mut cfg = ScenarioConfig::preset(self.scenario, self.mu0, self.a);
        cfg.trials = trials;
        cfg.seed = seed;
        cfg.outliers = self.outliers;
        cfg.d = self.d.unwrap_or(cfg.d);
        cfg.n_train = self.n_train.unwrap_or(cfg.n_train);
        cfg.m_train = self.m_train.unwrap_or(cfg.m_train);
        cfg.n_test = self.n_test.unwrap_or(cfg.n_test);
        cfg.m_test = self.m_test.unwrap_or(cfg.m_test);
        cfg.rho = self.rho.unwrap_or(cfg.rho);
        cfg.base_x = self.base_x.unwrap_or(cfg.base_x);
        cfg.base_y = self.base_y.unwrap_or(cfg.base_y);
        cfg.fixed_direction = self.fixed_direction.unwrap_or(cfg.fixed_direction);
        cfg.simple_graphs = self.simple_graphs.unwrap_or(cfg.simple_graphs);
        cfg.validate()?;
        Ok(cfg)
    }
}

impl ExperimentPlan {
    pub fn new(seed: u64, trials: usize, modes: Vec<Mode>, configs: Vec<PlanEntry>) -> Self {
        ExperimentPlan {
            schema: PLAN_SCHEMA,
            seed,
            trials,
            modes,
            output_dir: None,
            analytic: None,
            configs,
        }
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let plan: ExperimentPlan = toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        plan.validate()?;
        Ok(plan)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_toml(&text).map_err(|e| e.context(format!("plan {}", path.display())))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("plan serializes")
    }

    pub fn validate(&self) -> Result<()> {
        if self.schema != PLAN_SCHEMA {
            return Err(Error::InvalidConfig(format!(
                "unsupported plan schema {} (expected {PLAN_SCHEMA})",
                self.schema
            )));
        }
        if self.trials < 1 {
            return Err(Error::InvalidConfig("trials must be at least 1".into()));
        }
        if self.modes.is_empty() {
            return Err(Error::InvalidConfig("at least one mode is required".into()));
        }
        let mut seen = Vec::new();
        for m in &self.modes {
            if seen.contains(m) {
                return Err(Error::InvalidConfig(format!("mode {m} listed twice")));
            }
            seen.push(*m);
        }
        if self.configs.is_empty() {
            return Err(Error::InvalidConfig(
                "plan has no [[config]] entries".into(),
            ));
        }
        if let Some(an) = &self.analytic {
            if an.samples < 10_000 {
                return Err(Error::InvalidConfig(format!(
                    "analytic samples {} below 10000",
                    an.samples
                )));
            }
        }
        self.scenario_configs().map(|_| ())
    }

    /// Expanded scenario configurations, in plan order.
    pub fn scenario_configs(&self) -> Result<Vec<ScenarioConfig>> {
        self.configs
            .iter()
            .enumerate()
            .map(|(i, e)| {
                e.to_config(self.trials, self.seed)
                    .map_err(|err| err.context(format!("config {i}")))
            })
            .collect()
    }

    /// Applies command-line overrides.
    pub fn with_overrides(mut self, seed: Option<u64>, trials: Option<usize>) -> Result<Self> {
        if let Some(s) = seed {
            self.seed = s;
        }
        if let Some(t) = trials {
            self.trials = t;
        }
        self.validate()?;
        Ok(self)
    }
}
