//! Seeded experiment runner: plans in, CSV files out.
//!
//! Output files (in the output directory, when one is given):
//! * `results.csv`: `config, scenarioId, mu0, a, outliers, mode, trial, rate,
//!   elapsedMillis, seed, error`, ordered by (configuration, mode, trial);
//! * `aggregate.csv`: `config, scenarioId, mu0, a, outliers, mode, meanRate,
//!   stderr, trials, failed, best`;
//! * `analytic.csv`: `config, scenarioId, mu0, a, analyticRate, samples, seed,
//!   simulatedRankRate, simulatedDistRate, error`;
//! * `gap.csv` (robustness runs): `config, scenarioId, mu0, a, outliers,
//!   distRate, rankRate, gap`.
//!
//! A failed trial becomes a row with an empty rate and an `error` message.

mod plan;
mod rows;
mod run;

pub use plan::{AnalyticOptions, ExperimentPlan, PlanEntry, PLAN_SCHEMA};
pub use rows::{
    read_rows, rows_from_str, rows_to_string, write_rows, AggregateRow, AnalyticRow, GapRow,
    ResultRow,
};
pub use run::{
    run_analytic, run_network, run_robustness, run_simulation, RunOptions, RunOutput,
    AGGREGATE_FILE, ANALYTIC_FILE, GAP_FILE, RESULTS_FILE,
};
