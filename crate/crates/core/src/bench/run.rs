use std::collections::HashMap;
use std::path::Path;
use std::time::Instant;

use nalgebra::DVector;
use rayon::prelude::*;

use super::plan::ExperimentPlan;
use super::rows::{read_rows, write_rows, AggregateRow, AnalyticRow, GapRow, ResultRow};
use crate::classifier::{fit_vectors, FittedClassifier, Mode};
use crate::datagen::{
    ar_factor, gen_multi_class, gen_network, gen_two_class, vectorize_adjacency, Family,
    FrobeniusGraph, ScenarioConfig,
};
use crate::error::{Error, Result};
use crate::rng::derive_seed;
use crate::theory::{analytic_misclassification, ScaledFactorFamily};

pub const RESULTS_FILE: &str = "results.csv";
pub const AGGREGATE_FILE: &str = "aggregate.csv";
pub const ANALYTIC_FILE: &str = "analytic.csv";
pub const GAP_FILE: &str = "gap.csv";

/// Seed path tag of the analytic mixture sampler.
const ANALYTIC_TAG: u64 = 0xA7A1;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunOptions {
    /// Worker threads; 0 uses the rayon default.
    pub jobs: usize,
    /// Reuse successful rows of an existing `results.csv` in the output
    /// directory and only run the missing trials.
    pub resume: bool,
    /// Record wall-clock time per row. Without it `elapsedMillis` is 0 and
    /// every output file is byte-identical across reruns.
    pub timing: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            jobs: 0,
            resume: false,
            timing: true,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunOutput {
    pub results: Vec<ResultRow>,
    pub aggregate: Vec<AggregateRow>,
    pub analytic: Vec<AnalyticRow>,
    pub gaps: Vec<GapRow>,
    /// Plan positions of configurations without a single successful row.
    pub failed_configs: Vec<usize>,
}

impl RunOutput {
    pub fn success(&self) -> bool {
        self.failed_configs.is_empty()
    }

    /// Mean rate of `(config, mode)`, if any trial succeeded.
    pub fn mean_rate(&self, config: usize, mode: Mode) -> Option<f64> {
        self.aggregate
            .iter()
            .find(|r| r.config == config && r.mode == mode)
            .and_then(|r| r.mean_rate)
    }

    /// Successful per-trial rates of `(config, mode)` in trial order.
    pub fn trial_rates(&self, config: usize, mode: Mode) -> Vec<f64> {
        self.results
            .iter()
            .filter(|r| r.config == config && r.mode == mode)
            .filter_map(|r| r.rate)
            .collect()
    }
}

/// Runs every (configuration, mode, trial) of the plan. Any scenario family
/// is accepted.
pub fn run_simulation(
    plan: &ExperimentPlan,
    out: Option<&Path>,
    opts: &RunOptions,
) -> Result<RunOutput> {
    let cfgs = plan.scenario_configs()?;
    let out = resolve_out(plan, out)?;
    let mut output = simulate(plan, &cfgs, out.as_deref(), opts)?;
    output.failed_configs = failed_configs(&output.results, cfgs.len());
    write_outputs(out.as_deref(), &output)?;
    Ok(output)
}

/// Like [`run_simulation`] for contaminated two-class configurations; also
/// reports the distance-minus-rank gap per configuration.
pub fn run_robustness(
    plan: &ExperimentPlan,
    out: Option<&Path>,
    opts: &RunOptions,
) -> Result<RunOutput> {
    let cfgs = plan.scenario_configs()?;
    for (i, c) in cfgs.iter().enumerate() {
        if c.scenario.family() != Family::TwoClass || c.outliers.is_none() {
            return Err(Error::InvalidConfig(format!(
                "config {i}: robustness runs need two-class scenarios with `outliers` set"
            )));
        }
    }
    if !(plan.modes.contains(&Mode::Distance) && plan.modes.contains(&Mode::Rank)) {
        return Err(Error::InvalidConfig(
            "robustness runs compare both modes".into(),
        ));
    }
    let out = resolve_out(plan, out)?;
    let mut output = simulate(plan, &cfgs, out.as_deref(), opts)?;
    output.failed_configs = failed_configs(&output.results, cfgs.len());
    output.gaps = cfgs
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let dist = output.mean_rate(i, Mode::Distance);
            let rank = output.mean_rate(i, Mode::Rank);
            GapRow {
                config: i,
                scenario_id: c.scenario,
                mu0: c.mu0,
                a: c.a,
                outliers: c.outliers.unwrap_or(0),
                dist_rate: dist,
                rank_rate: rank,
                gap: dist.zip(rank).map(|(d, r)| d - r),
            }
        })
        .collect();
    write_outputs(out.as_deref(), &output)?;
    Ok(output)
}

/// Runs S8/S9 configurations. Every trial classifies the test graphs twice,
/// with the Frobenius graph metric and with vectorized adjacencies, and
/// fails if the two disagree on any graph.
pub fn run_network(
    plan: &ExperimentPlan,
    out: Option<&Path>,
    opts: &RunOptions,
) -> Result<RunOutput> {
    let cfgs = plan.scenario_configs()?;
    if let Some((i, c)) = cfgs
        .iter()
        .enumerate()
        .find(|(_, c)| c.scenario.family() != Family::Network)
    {
        return Err(Error::InvalidConfig(format!(
            "config {i}: {} is not a network scenario",
            c.scenario
        )));
    }
    run_simulation(plan, out, opts)
}

/// Analytic misclassification rate per grid point (two-class
/// configurations without outliers), with simulated rates alongside when
/// `overlay` is set.
pub fn run_analytic(
    plan: &ExperimentPlan,
    out: Option<&Path>,
    opts: &RunOptions,
) -> Result<RunOutput> {
    let options = plan
        .analytic
        .clone()
        .ok_or_else(|| Error::InvalidConfig("analytic runs need an [analytic] table".into()))?;
    let cfgs = plan.scenario_configs()?;
    let out = resolve_out(plan, out)?;
    let seed = derive_seed(plan.seed, &[ANALYTIC_TAG]);
    let mut families: HashMap<(usize, u64), ScaledFactorFamily> = HashMap::new();

    let workers = pool(opts.jobs)?;
    let mut analytic = Vec::with_capacity(cfgs.len());
    for (i, cfg) in cfgs.iter().enumerate() {
        let rate = analytic_point(cfg, &mut families, options.samples, seed, &workers);
        analytic.push(AnalyticRow {
            config: i,
            scenario_id: cfg.scenario,
            mu0: cfg.mu0,
            a: cfg.a,
            analytic_rate: rate.as_ref().ok().copied(),
            samples: options.samples,
            seed,
            simulated_rank_rate: None,
            simulated_dist_rate: None,
            error: rate.err().map(|e| e.to_string()),
        });
    }

    let mut output = if options.overlay {
        let sim = simulate(plan, &cfgs, out.as_deref(), opts)?;
        for row in &mut analytic {
            row.simulated_rank_rate = sim.mean_rate(row.config, Mode::Rank);
            row.simulated_dist_rate = sim.mean_rate(row.config, Mode::Distance);
        }
        sim
    } else {
        RunOutput::default()
    };
    let mut failed: Vec<usize> = analytic
        .iter()
        .filter(|r| r.error.is_some())
        .map(|r| r.config)
        .collect();
    if options.overlay {
        failed.extend(failed_configs(&output.results, cfgs.len()));
        failed.sort_unstable();
        failed.dedup();
    }
    output.failed_configs = failed;
    output.analytic = analytic;
    write_outputs(out.as_deref(), &output)?;
    Ok(output)
}

fn analytic_point(
    cfg: &ScenarioConfig,
    families: &mut HashMap<(usize, u64), ScaledFactorFamily>,
    samples: usize,
    seed: u64,
    pool: &rayon::ThreadPool,
) -> Result<f64> {
    if cfg.scenario.family() != Family::TwoClass || cfg.outliers.unwrap_or(0) > 0 {
        return Err(Error::InvalidConfig(format!(
            "{}: the analytic rate covers uncontaminated two-class scenarios only",
            cfg.scenario
        )));
    }
    let key = (cfg.d, cfg.rho.to_bits());
    if let std::collections::hash_map::Entry::Vacant(slot) = families.entry(key) {
        let factor = ar_factor(cfg.d, cfg.rho)?;
        slot.insert(pool.install(|| ScaledFactorFamily::new(factor))?);
    }
    let family = &families[&key];
    let mu = DVector::from_vec(cfg.mean_shift(0));
    let spec = family.spec(
        cfg.a,
        mu,
        cfg.base_x.moments()?,
        cfg.base_y.moments()?,
        cfg.n_train,
        cfg.m_train,
    )?;
    let sm = family.summary_moments(&spec, cfg.a)?;
    pool.install(|| analytic_misclassification(&sm, samples, seed))
}

fn resolve_out(plan: &ExperimentPlan, out: Option<&Path>) -> Result<Option<std::path::PathBuf>> {
    let dir = out
        .map(Path::to_path_buf)
        .or_else(|| plan.output_dir.clone());
    if let Some(d) = &dir {
        std::fs::create_dir_all(d).map_err(|source| Error::Io {
            path: d.clone(),
            source,
        })?;
    }
    Ok(dir)
}

fn pool(jobs: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::InvalidConfig(format!("cannot start {jobs} worker threads: {e}")))
}

fn row_key(r: &ResultRow, plan: &ExperimentPlan) -> (usize, usize, usize) {
    let mode_pos = plan
        .modes
        .iter()
        .position(|m| *m == r.mode)
        .unwrap_or(usize::MAX);
    (r.config, mode_pos, r.trial)
}

/// Successful rows of a previous run of the same plan.
fn resumable_rows(
    plan: &ExperimentPlan,
    cfgs: &[ScenarioConfig],
    out: Option<&Path>,
) -> Result<Vec<ResultRow>> {
    let Some(path) = out.map(|d| d.join(RESULTS_FILE)).filter(|p| p.exists()) else {
        return Ok(Vec::new());
    };
    let rows: Vec<ResultRow> = read_rows(&path)?;
    Ok(rows
        .into_iter()
        .filter(|r| {
            r.error.is_none()
                && r.trial < plan.trials
                && plan.modes.contains(&r.mode)
                && cfgs.get(r.config).is_some_and(|c| {
                    c.scenario == r.scenario_id
                        && c.mu0 == r.mu0
                        && c.a == r.a
                        && c.outliers.unwrap_or(0) == r.outliers
                        && c.trial_seed(r.trial) == r.seed
                })
        })
        .collect())
}

fn simulate(
    plan: &ExperimentPlan,
    cfgs: &[ScenarioConfig],
    out: Option<&Path>,
    opts: &RunOptions,
) -> Result<RunOutput> {
    let mut done = if opts.resume {
        resumable_rows(plan, cfgs, out)?
    } else {
        Vec::new()
    };
    done.sort_by_key(|r| row_key(r, plan));
    done.dedup_by_key(|r| row_key(r, plan));
    let have: std::collections::HashSet<_> = done.iter().map(|r| row_key(r, plan)).collect();

    let units: Vec<(usize, usize, Vec<Mode>)> = cfgs
        .iter()
        .enumerate()
        .flat_map(|(i, _)| (0..plan.trials).map(move |t| (i, t)))
        .filter_map(|(i, t)| {
            let modes: Vec<Mode> = plan
                .modes
                .iter()
                .enumerate()
                .filter(|(mi, _)| !have.contains(&(i, *mi, t)))
                .map(|(_, m)| *m)
                .collect();
            (!modes.is_empty()).then_some((i, t, modes))
        })
        .collect();

    let fresh: Vec<ResultRow> = pool(opts.jobs)?.install(|| {
        units
            .par_iter()
            .flat_map_iter(|(i, t, modes)| run_unit(*i, &cfgs[*i], *t, modes, opts.timing))
            .collect()
    });
    let mut results = done;
    results.extend(fresh);
    results.sort_by_key(|r| row_key(r, plan));
    let aggregate = aggregate(plan, cfgs, &results);
    Ok(RunOutput {
        results,
        aggregate,
        ..RunOutput::default()
    })
}

fn timed<T>(timing: bool, f: impl FnOnce() -> Result<T>) -> (Result<T>, u64) {
    let start = Instant::now();
    let r = f();
    let ms = if timing {
        start.elapsed().as_millis() as u64
    } else {
        0
    };
    (r, ms)
}

/// All requested modes of one trial, on one shared draw of the data.
fn run_unit(
    config: usize,
    cfg: &ScenarioConfig,
    trial: usize,
    modes: &[Mode],
    timing: bool,
) -> Vec<ResultRow> {
    let row = |mode: Mode, outcome: Result<f64>, elapsed_millis: u64| ResultRow {
        config,
        scenario_id: cfg.scenario,
        mu0: cfg.mu0,
        a: cfg.a,
        outliers: cfg.outliers.unwrap_or(0),
        mode,
        trial,
        rate: outcome.as_ref().ok().copied(),
        elapsed_millis,
        seed: cfg.trial_seed(trial),
        error: outcome.err().map(|e| e.to_string()),
    };
    let fail_all = |e: Error| {
        let msg = e.to_string();
        modes
            .iter()
            .map(|&m| {
                row(
                    m,
                    Err(Error::invalid(msg.clone()).context("data generation")),
                    0,
                )
            })
            .collect()
    };
    match cfg.scenario.family() {
        Family::TwoClass | Family::FourClass => {
            let data = match cfg.scenario.family() {
                Family::TwoClass => gen_two_class(cfg, trial),
                _ => gen_multi_class(cfg, trial),
            };
            let (train, test) = match data {
                Ok(d) => d,
                Err(e) => return fail_all(e),
            };
            modes
                .iter()
                .map(|&mode| {
                    let (outcome, ms) = timed(timing, || {
                        fit_vectors(train.clone(), mode)?.misclassification_rate(&test)
                    });
                    row(mode, outcome, ms)
                })
                .collect()
        }
        Family::Network => {
            let (train, test) = match gen_network(cfg, trial) {
                Ok(d) => d,
                Err(e) => return fail_all(e),
            };
            modes
                .iter()
                .map(|&mode| {
                    let (outcome, ms) = timed(timing, || {
                        let metric = FrobeniusGraph {
                            squared: mode == Mode::Distance,
                        };
                        let direct = FittedClassifier::fit(train.clone(), mode, metric)?;
                        let predicted = direct.predict_batch(test.observations())?;
                        let vectorized = fit_vectors(train.map(vectorize_adjacency)?, mode)?;
                        let test_vectors: Vec<Vec<f64>> = test
                            .observations()
                            .iter()
                            .map(vectorize_adjacency)
                            .collect();
                        if vectorized.predict_batch(&test_vectors)? != predicted {
                            return Err(Error::invalid(
                                "graph-metric and vectorized predictions differ",
                            ));
                        }
                        let wrong = predicted
                            .iter()
                            .zip(test.labels())
                            .filter(|(p, l)| p != l)
                            .count();
                        Ok(wrong as f64 / test.len() as f64)
                    });
                    row(mode, outcome, ms)
                })
                .collect()
        }
    }
}

fn aggregate(
    plan: &ExperimentPlan,
    cfgs: &[ScenarioConfig],
    results: &[ResultRow],
) -> Vec<AggregateRow> {
    let mut rows = Vec::new();
    for (i, cfg) in cfgs.iter().enumerate() {
        let start = rows.len();
        for &mode in &plan.modes {
            let of_mode: Vec<&ResultRow> = results
                .iter()
                .filter(|r| r.config == i && r.mode == mode)
                .collect();
            let rates: Vec<f64> = of_mode.iter().filter_map(|r| r.rate).collect();
            let k = rates.len();
            let mean = (k > 0).then(|| rates.iter().sum::<f64>() / k as f64);
            let stderr = mean.filter(|_| k > 1).map(|m| {
                let var = rates.iter().map(|r| (r - m).powi(2)).sum::<f64>() / (k - 1) as f64;
                (var / k as f64).sqrt()
            });
            rows.push(AggregateRow {
                config: i,
                scenario_id: cfg.scenario,
                mu0: cfg.mu0,
                a: cfg.a,
                outliers: cfg.outliers.unwrap_or(0),
                mode,
                mean_rate: mean,
                stderr,
                trials: k,
                failed: of_mode.len() - k,
                best: false,
            });
        }
        let best = rows[start..]
            .iter()
            .filter_map(|r| r.mean_rate)
            .fold(f64::INFINITY, f64::min);
        for r in &mut rows[start..] {
            r.best = r.mean_rate.is_some_and(|m| m <= best + 0.01 + 1e-12);
        }
    }
    rows
}

fn failed_configs(results: &[ResultRow], n_configs: usize) -> Vec<usize> {
    (0..n_configs)
        .filter(|&i| !results.iter().any(|r| r.config == i && r.rate.is_some()))
        .collect()
}

fn write_outputs(out: Option<&Path>, output: &RunOutput) -> Result<()> {
    let Some(dir) = out else { return Ok(()) };
    if !output.results.is_empty() {
        write_rows(&dir.join(RESULTS_FILE), &output.results)?;
        write_rows(&dir.join(AGGREGATE_FILE), &output.aggregate)?;
    }
    if !output.analytic.is_empty() {
        write_rows(&dir.join(ANALYTIC_FILE), &output.analytic)?;
    }
    if !output.gaps.is_empty() {
        write_rows(&dir.join(GAP_FILE), &output.gaps)?;
    }
    Ok(())
}
