use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use distrank::bench::{
    run_analytic, run_network, run_robustness, run_simulation, ExperimentPlan, RunOptions,
    RunOutput,
};

#[derive(Parser)]
#[command(
    name = "distrank",
    version,
    about = "Run distance/rank classifier experiments from a TOML plan"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Two-class and four-class simulations (results.csv, aggregate.csv)
    Simulate(RunArgs),
    /// Analytic misclassification curves (analytic.csv)
    Analytic(RunArgs),
    /// Outlier-contaminated runs (adds gap.csv)
    Robustness(RunArgs),
    /// Configuration-model graph runs
    Network(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Experiment plan (TOML)
    #[arg(long)]
    config: PathBuf,
    /// Output directory; defaults to the plan's output_dir
    #[arg(long)]
    out: Option<PathBuf>,
    /// Override the plan seed
    #[arg(long)]
    seed: Option<u64>,
    /// Override the plan trial count
    #[arg(long)]
    trials: Option<usize>,
    /// Worker threads (0 = one per core)
    #[arg(long, default_value_t = 0)]
    jobs: usize,
    /// Keep successful rows of an existing results.csv and run the rest
    #[arg(long)]
    resume: bool,
    /// Write elapsedMillis = 0 so reruns are byte-identical
    #[arg(long)]
    no_timing: bool,
}

type Runner =
    fn(&ExperimentPlan, Option<&std::path::Path>, &RunOptions) -> distrank::Result<RunOutput>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (runner, args): (Runner, RunArgs) = match cli.command {
        Command::Simulate(a) => (run_simulation, a),
        Command::Analytic(a) => (run_analytic, a),
        Command::Robustness(a) => (run_robustness, a),
        Command::Network(a) => (run_network, a),
    };
    let plan = match ExperimentPlan::load(&args.config)
        .and_then(|p| p.with_overrides(args.seed, args.trials))
    {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    if args.out.is_none() && plan.output_dir.is_none() {
        eprintln!("error: no output directory (pass --out or set output_dir in the plan)");
        return ExitCode::from(2);
    }
    let opts = RunOptions {
        jobs: args.jobs,
        resume: args.resume,
        timing: !args.no_timing,
    };
    match runner(&plan, args.out.as_deref(), &opts) {
        Ok(out) => {
            for row in &out.aggregate {
                eprintln!(
                    "{} mu0={} a={} outliers={} {}: {}",
                    row.scenario_id,
                    row.mu0,
                    row.a,
                    row.outliers,
                    row.mode,
                    row.mean_rate
                        .map_or("failed".to_string(), |m| format!("{m:.4}"))
                );
            }
            for row in &out.analytic {
                eprintln!(
                    "{} mu0={} a={} analytic: {}",
                    row.scenario_id,
                    row.mu0,
                    row.a,
                    row.analytic_rate.map_or_else(
                        || row.error.clone().unwrap_or_default(),
                        |r| format!("{r:.4}")
                    )
                );
            }
            if out.success() {
                ExitCode::SUCCESS
            } else {
                eprintln!(
                    "error: configurations {:?} failed in every trial",
                    out.failed_configs
                );
                ExitCode::FAILURE
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
