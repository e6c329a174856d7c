//! Builds an experiment plan in code, saves it as TOML, runs it and reads
//! back the aggregate CSV. The `distrank` binary runs the same plans.
//!
//! Run with `cargo run --release --example experiment_plan`.

use distrank::bench::{run_simulation, ExperimentPlan, PlanEntry, RunOptions, AGGREGATE_FILE};
use distrank::datagen::ScenarioId;
use distrank::Mode;

fn main() -> distrank::Result<()> {
    let small = |scenario, mu0, a| PlanEntry {
        d: Some(200),
        ..PlanEntry::new(scenario, mu0, a)
    };
    let plan = ExperimentPlan::new(
        1,
        5,
        Mode::ALL.to_vec(),
        vec![
            small(ScenarioId::S1, 3.0, 1.0),
            small(ScenarioId::S1, 0.0, 1.1),
            small(ScenarioId::S3, 3.0, 1.0),
        ],
    );
    let dir = std::env::temp_dir().join("distrank-experiment-plan");
    std::fs::create_dir_all(&dir).map_err(|source| distrank::Error::Io {
        path: dir.clone(),
        source,
    })?;
    let plan_path = dir.join("plan.toml");
    std::fs::write(&plan_path, plan.to_toml()).map_err(|source| distrank::Error::Io {
        path: plan_path.clone(),
        source,
    })?;
    println!("plan written to {}", plan_path.display());

    let reloaded = ExperimentPlan::load(&plan_path)?;
    let opts = RunOptions {
        timing: false,
        ..RunOptions::default()
    };
    let out = run_simulation(&reloaded, Some(&dir), &opts)?;
    println!(
        "{} result rows; failed configurations: {:?}",
        out.results.len(),
        out.failed_configs
    );
    let csv = std::fs::read_to_string(dir.join(AGGREGATE_FILE)).map_err(|source| {
        distrank::Error::Io {
            path: dir.clone(),
            source,
        }
    })?;
    print!("{csv}");
    Ok(())
}
