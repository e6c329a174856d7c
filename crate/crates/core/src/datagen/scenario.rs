//! Synthetic vector-valued scenarios.
//!
//! Class X rows are `A x` and class Y rows `a A y + mu`, where `A` is the
//! AR(1) factor, `x`, `y` have i.i.d. coordinates from the base laws and
//! `mu = mu0 * u` for a random unit direction `u`. The four-class family
//! crosses two scales with two means.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::ar::ar_apply;
use crate::dataset::LabeledDataset;
use crate::distributions::BaseDist;
use crate::error::{Error, Result};
use crate::rng::{derive_seed, stream, StreamRng};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum ScenarioId {
    S1,
    S2,
    S3,
    S4,
    S5,
    S6,
    S7,
    S8,
    S9,
    S10,
    S11,
    S12,
    S13,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    TwoClass,
    FourClass,
    Network,
}

impl ScenarioId {
    pub const ALL: [ScenarioId; 13] = [
        ScenarioId::S1,
        ScenarioId::S2,
        ScenarioId::S3,
        ScenarioId::S4,
        ScenarioId::S5,
        ScenarioId::S6,
        ScenarioId::S7,
        ScenarioId::S8,
        ScenarioId::S9,
        ScenarioId::S10,
        ScenarioId::S11,
        ScenarioId::S12,
        ScenarioId::S13,
    ];

    pub fn index(self) -> usize {
        ScenarioId::ALL
            .iter()
            .position(|&s| s == self)
            .expect("listed")
            + 1
    }

    pub fn family(self) -> Family {
        use ScenarioId::*;
        match self {
            S5 | S6 | S7 => Family::FourClass,
            S8 | S9 => Family::Network,
            _ => Family::TwoClass,
        }
    }
}

impl fmt::Display for ScenarioId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "S{}", self.index())
    }
}

impl FromStr for ScenarioId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let idx: usize = t
            .strip_prefix(['S', 's'])
            .and_then(|r| r.parse().ok())
            .ok_or_else(|| Error::Parse(format!("unknown scenario {s:?}")))?;
        ScenarioId::ALL
            .get(idx.wrapping_sub(1))
            .copied()
            .ok_or_else(|| Error::Parse(format!("unknown scenario {s:?}")))
    }
}

impl TryFrom<String> for ScenarioId {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<ScenarioId> for String {
    fn from(s: ScenarioId) -> String {
        s.to_string()
    }
}

/// Fully resolved settings for one scenario configuration.
///
/// For the four-class family `n_train`/`n_test` are per-class counts and the
/// `m_*` fields are ignored. For networks `a` is the integer degree-shift
/// parameter and `d` is ignored (it is `v^2`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioConfig {
    pub scenario: ScenarioId,
    pub d: usize,
    pub n_train: usize,
    pub m_train: usize,
    pub n_test: usize,
    pub m_test: usize,
    pub mu0: f64,
    pub a: f64,
    pub base_x: BaseDist,
    pub base_y: BaseDist,
    pub rho: f64,
    pub trials: usize,
    pub seed: u64,
    pub outliers: Option<usize>,
    /// Reuse one mean direction for every trial instead of redrawing it.
    pub fixed_direction: bool,
    /// Network scenarios: erase self-loops and multi-edges instead of
    /// keeping the configuration-model multigraph.
    #[serde(default)]
    pub simple_graphs: bool,
}

impl ScenarioConfig {
    /// Defaults for a scenario at signal `(mu0, a)`.
    pub fn preset(scenario: ScenarioId, mu0: f64, a: f64) -> Self {
        use ScenarioId::*;
        let normal = BaseDist::StandardNormal;
        let t5 = BaseDist::StudentT(5);
        let chi5 = BaseDist::CenteredChiSquare(5);
        let t10 = BaseDist::StudentT(10);
        let (base_x, base_y) = match scenario {
            S1 | S5 | S8 | S9 | S10 | S11 => (normal, normal),
            S2 | S6 => (t5, t5),
            S3 | S7 => (chi5, chi5),
            S4 => (normal, t5),
            S12 | S13 => (t10, t10),
        };
        let d = match scenario {
            S10 | S11 | S12 | S13 => 2000,
            S8 | S9 => super::graph::NETWORK_VERTICES * super::graph::NETWORK_VERTICES,
            _ => 1000,
        };
        let (n_train, n_test) = match scenario {
            S8 | S9 => (30, 20),
            _ => (50, 50),
        };
        ScenarioConfig {
            scenario,
            d,
            n_train,
            m_train: n_train,
            n_test,
            m_test: n_test,
            mu0,
            a,
            base_x,
            base_y,
            rho: 0.1,
            trials: 20,
            seed: 0,
            outliers: None,
            fixed_direction: false,
            simple_graphs: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidConfig(format!("{}: {m}", self.scenario)));
        if self.d < 1 {
            return bad("d must be at least 1".into());
        }
        let min_count = self.n_train.min(self.n_test);
        let min_count = match self.scenario.family() {
            Family::FourClass => min_count,
            _ => min_count.min(self.m_train).min(self.m_test),
        };
        if min_count < 2 {
            return bad("class counts must be at least 2".into());
        }
        if self.trials < 1 {
            return bad("trials must be at least 1".into());
        }
        if !(self.a.is_finite() && self.a > 0.0) {
            return bad(format!("a = {} must be positive", self.a));
        }
        if !(self.mu0.is_finite() && self.mu0 >= 0.0) {
            return bad(format!("mu0 = {} must be non-negative", self.mu0));
        }
        if self.rho.is_nan() || self.rho.abs() >= 1.0 {
            return bad(format!("rho = {} must satisfy |rho| < 1", self.rho));
        }
        if let Some(no) = self.outliers {
            if no > self.n_train {
                return bad(format!(
                    "{no} outliers exceed the {} class-X rows",
                    self.n_train
                ));
            }
        }
        self.base_x.validate()?;
        self.base_y.validate()?;
        if self.scenario.family() == Family::Network {
            super::graph::check_network_a(self.scenario, self.a)?;
        }
        Ok(())
    }

    /// Seed of the per-trial substream.
    pub fn trial_seed(&self, trial: usize) -> u64 {
        derive_seed(self.seed, &[trial as u64])
    }

    fn trial_stream(&self, trial: usize, tag: u64) -> StreamRng {
        stream(self.trial_seed(trial), &[tag])
    }

    /// The mean shift `mu0 * u` used in `trial`.
    pub fn mean_shift(&self, trial: usize) -> Vec<f64> {
        let seed = if self.fixed_direction {
            derive_seed(self.seed, &[u64::MAX])
        } else {
            derive_seed(self.trial_seed(trial), &[TAG_DIRECTION])
        };
        let mut u = random_unit_direction(self.d, seed);
        for v in &mut u {
            *v *= self.mu0;
        }
        u
    }
}

const TAG_DIRECTION: u64 = 0;
const TAG_TRAIN: u64 = 1;
const TAG_TEST: u64 = 2;
const TAG_OUTLIER: u64 = 3;

/// Unit vector along a standard normal draw.
pub fn random_unit_direction(d: usize, seed: u64) -> Vec<f64> {
    let mut rng = stream(seed, &[]);
    let mut v = vec![0.0; d];
    loop {
        BaseDist::StandardNormal.fill(&mut rng, &mut v);
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 0.0 {
            v.iter_mut().for_each(|x| *x /= norm);
            return v;
        }
    }
}

/// One row `scale * A z + shift` with `z` i.i.d. from `base`.
fn draw_row(
    rng: &mut StreamRng,
    base: BaseDist,
    rho: f64,
    scale: f64,
    shift: Option<&[f64]>,
    d: usize,
) -> Vec<f64> {
    let mut z = vec![0.0; d];
    base.fill(rng, &mut z);
    ar_apply(rho, &mut z);
    for (i, v) in z.iter_mut().enumerate() {
        *v = *v * scale + shift.map_or(0.0, |s| s[i]);
    }
    z
}

fn draw_two_class(
    cfg: &ScenarioConfig,
    rng: &mut StreamRng,
    mu: &[f64],
    n: usize,
    m: usize,
) -> Result<LabeledDataset> {
    let mut obs = Vec::with_capacity(n + m);
    for _ in 0..n {
        obs.push(draw_row(rng, cfg.base_x, cfg.rho, 1.0, None, cfg.d));
    }
    for _ in 0..m {
        obs.push(draw_row(rng, cfg.base_y, cfg.rho, cfg.a, Some(mu), cfg.d));
    }
    let labels = std::iter::repeat_n(1, n)
        .chain(std::iter::repeat_n(2, m))
        .collect();
    LabeledDataset::new(obs, labels)
}

/// Training and test sets for a two-class scenario. Training rows are class
/// X first, then class Y. When `cfg.outliers` is set the training set is
/// contaminated (test data stays clean).
pub fn gen_two_class(
    cfg: &ScenarioConfig,
    trial: usize,
) -> Result<(LabeledDataset, LabeledDataset)> {
    cfg.validate()?;
    if cfg.scenario.family() != Family::TwoClass {
        return Err(Error::InvalidConfig(format!(
            "{} is not a two-class scenario",
            cfg.scenario
        )));
    }
    if trial >= cfg.trials {
        return Err(Error::InvalidConfig(format!(
            "trial {trial} >= {}",
            cfg.trials
        )));
    }
    let mu = cfg.mean_shift(trial);
    let train = draw_two_class(
        cfg,
        &mut cfg.trial_stream(trial, TAG_TRAIN),
        &mu,
        cfg.n_train,
        cfg.m_train,
    )?;
    let test = draw_two_class(
        cfg,
        &mut cfg.trial_stream(trial, TAG_TEST),
        &mu,
        cfg.n_test,
        cfg.m_test,
    )?;
    let train = match cfg.outliers {
        Some(no) if no > 0 => contaminate_outliers(&train, cfg, trial, no)?,
        _ => train,
    };
    Ok((train, test))
}

/// Four classes with scales `(1, a, 1, a)` and means `(0, 0, mu, mu)`.
pub fn gen_multi_class(
    cfg: &ScenarioConfig,
    trial: usize,
) -> Result<(LabeledDataset, LabeledDataset)> {
    cfg.validate()?;
    if cfg.scenario.family() != Family::FourClass {
        return Err(Error::InvalidConfig(format!(
            "{} is not a four-class scenario",
            cfg.scenario
        )));
    }
    if trial >= cfg.trials {
        return Err(Error::InvalidConfig(format!(
            "trial {trial} >= {}",
            cfg.trials
        )));
    }
    let mu = cfg.mean_shift(trial);
    let draw = |rng: &mut StreamRng, per_class: usize| {
        let mut obs = Vec::with_capacity(4 * per_class);
        let mut labels = Vec::with_capacity(4 * per_class);
        for class in 1..=4usize {
            let scale = if class % 2 == 0 { cfg.a } else { 1.0 };
            let shift = (class >= 3).then_some(mu.as_slice());
            for _ in 0..per_class {
                obs.push(draw_row(rng, cfg.base_x, cfg.rho, scale, shift, cfg.d));
                labels.push(class);
            }
        }
        LabeledDataset::new(obs, labels)
    };
    let train = draw(&mut cfg.trial_stream(trial, TAG_TRAIN), cfg.n_train)?;
    let test = draw(&mut cfg.trial_stream(trial, TAG_TEST), cfg.n_test)?;
    Ok((train, test))
}

/// Replaces the first `n_outliers` class-1 rows with draws from
/// `(5(a - 1) + 1) A x + 5 mu`, using the trial's own mean shift.
pub fn contaminate_outliers(
    train: &LabeledDataset,
    cfg: &ScenarioConfig,
    trial: usize,
    n_outliers: usize,
) -> Result<LabeledDataset> {
    let class_x = train.class_counts().first().copied().unwrap_or(0);
    if n_outliers > class_x {
        return Err(Error::InvalidConfig(format!(
            "{n_outliers} outliers exceed the {class_x} class-X rows"
        )));
    }
    if n_outliers == 0 {
        return Ok(train.clone());
    }
    let mu: Vec<f64> = cfg.mean_shift(trial).iter().map(|v| 5.0 * v).collect();
    let scale = 5.0 * (cfg.a - 1.0) + 1.0;
    let mut rng = cfg.trial_stream(trial, TAG_OUTLIER);
    let (mut obs, labels) = train.clone().into_parts();
    let mut replaced = 0;
    for (row, &label) in obs.iter_mut().zip(&labels) {
        if replaced == n_outliers {
            break;
        }
        if label == 1 {
            *row = draw_row(&mut rng, cfg.base_x, cfg.rho, scale, Some(&mu), row.len());
            replaced += 1;
        }
    }
    LabeledDataset::new(obs, labels)
}
