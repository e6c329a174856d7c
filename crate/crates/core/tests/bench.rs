use std::fs;
use std::path::Path;
use std::process::Command;

use distrank::bench::{
    read_rows, rows_from_str, rows_to_string, run_robustness, run_simulation, write_rows,
    AggregateRow, ExperimentPlan, PlanEntry, ResultRow, RunOptions, AGGREGATE_FILE, RESULTS_FILE,
};
use distrank::datagen::ScenarioId;
use distrank::Mode;

fn small_entry(scenario: ScenarioId, mu0: f64, a: f64) -> PlanEntry {
    PlanEntry {
        d: Some(40),
        n_train: Some(12),
        m_train: Some(12),
        n_test: Some(10),
        m_test: Some(10),
        ..PlanEntry::new(scenario, mu0, a)
    }
}

fn small_plan() -> ExperimentPlan {
    ExperimentPlan::new(
        7,
        4,
        Mode::ALL.to_vec(),
        vec![
            small_entry(ScenarioId::S1, 4.0, 1.0),
            small_entry(ScenarioId::S2, 0.0, 1.2),
        ],
    )
}

fn no_timing(jobs: usize) -> RunOptions {
    RunOptions {
        jobs,
        resume: false,
        timing: false,
    }
}

fn read(dir: &Path, file: &str) -> String {
    fs::read_to_string(dir.join(file)).unwrap()
}

#[test]
fn result_csv_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_simulation(&small_plan(), Some(dir.path()), &no_timing(0)).unwrap();
    let results: Vec<ResultRow> = read_rows(&dir.path().join(RESULTS_FILE)).unwrap();
    assert_eq!(results, out.results);
    let aggregate: Vec<AggregateRow> = read_rows(&dir.path().join(AGGREGATE_FILE)).unwrap();
    assert_eq!(aggregate, out.aggregate);
    let text = rows_to_string(&results).unwrap();
    assert_eq!(rows_from_str::<ResultRow>(&text).unwrap(), results);
    assert!(text
        .starts_with("config,scenarioId,mu0,a,outliers,mode,trial,rate,elapsedMillis,seed,error"));

    let copy = dir.path().join("copy.csv");
    write_rows(&copy, &aggregate).unwrap();
    assert_eq!(
        fs::read_to_string(&copy).unwrap(),
        read(dir.path(), AGGREGATE_FILE)
    );
}

#[test]
fn outputs_are_byte_identical_across_reruns_and_thread_counts() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    run_simulation(&small_plan(), Some(a.path()), &no_timing(1)).unwrap();
    run_simulation(&small_plan(), Some(b.path()), &no_timing(3)).unwrap();
    for file in [RESULTS_FILE, AGGREGATE_FILE] {
        assert_eq!(read(a.path(), file), read(b.path(), file), "{file}");
    }
}

#[test]
fn seed_changes_results() {
    let a = run_simulation(&small_plan(), None, &no_timing(0)).unwrap();
    let mut plan = small_plan();
    plan.seed += 1;
    let b = run_simulation(&plan, None, &no_timing(0)).unwrap();
    assert_ne!(a.results, b.results);
}

#[test]
fn identical_classes_are_classified_at_chance() {
    let mut entry = PlanEntry::new(ScenarioId::S1, 0.0, 1.0);
    entry.d = Some(50);
    let plan = ExperimentPlan::new(3, 20, Mode::ALL.to_vec(), vec![entry]);
    let out = run_simulation(&plan, None, &no_timing(0)).unwrap();
    for mode in Mode::ALL {
        let rate = out.mean_rate(0, mode).unwrap();
        assert!((rate - 0.5).abs() < 0.06, "{mode}: {rate}");
    }
}

#[test]
fn resume_fills_in_missing_rows_only() {
    let dir = tempfile::tempdir().unwrap();
    let full = run_simulation(&small_plan(), Some(dir.path()), &no_timing(0)).unwrap();
    let expected = read(dir.path(), RESULTS_FILE);

    let mut partial = full.results.clone();
    partial.retain(|r| r.trial % 2 == 0);
    partial[0].rate = Some(0.123_456);
    write_rows(&dir.path().join(RESULTS_FILE), &partial).unwrap();
    let resumed = run_simulation(
        &small_plan(),
        Some(dir.path()),
        &RunOptions {
            resume: true,
            ..no_timing(0)
        },
    )
    .unwrap();
    assert_eq!(resumed.results.len(), full.results.len());
    assert_eq!(
        resumed.results[0].rate,
        Some(0.123_456),
        "kept rows are not recomputed"
    );

    write_rows(&dir.path().join(RESULTS_FILE), &full.results[..3]).unwrap();
    run_simulation(
        &small_plan(),
        Some(dir.path()),
        &RunOptions {
            resume: true,
            ..no_timing(0)
        },
    )
    .unwrap();
    assert_eq!(read(dir.path(), RESULTS_FILE), expected);
}

#[test]
fn robustness_reports_gaps_for_contaminated_configs() {
    let mut entry = small_entry(ScenarioId::S1, 6.0, 1.0);
    entry.outliers = Some(2);
    let plan = ExperimentPlan::new(5, 3, Mode::ALL.to_vec(), vec![entry]);
    let out = run_robustness(&plan, None, &no_timing(0)).unwrap();
    assert_eq!(out.gaps.len(), 1);
    let g = &out.gaps[0];
    assert_eq!(g.outliers, 2);
    assert_eq!(g.gap, Some(g.dist_rate.unwrap() - g.rank_rate.unwrap()));

    let clean = ExperimentPlan::new(
        5,
        3,
        Mode::ALL.to_vec(),
        vec![small_entry(ScenarioId::S1, 6.0, 1.0)],
    );
    assert!(run_robustness(&clean, None, &no_timing(0)).is_err());
}

fn cli() -> Command {
    Command::new(env!("CARGO_BIN_EXE_distrank"))
}

#[test]
fn cli_runs_are_reproducible_without_timing() {
    let dir = tempfile::tempdir().unwrap();
    let plan_path = dir.path().join("plan.toml");
    fs::write(&plan_path, small_plan().to_toml()).unwrap();
    for (name, jobs) in [("a", "1"), ("b", "2")] {
        let status = cli()
            .args(["simulate", "--config"])
            .arg(&plan_path)
            .arg("--out")
            .arg(dir.path().join(name))
            .args([
                "--trials",
                "3",
                "--seed",
                "11",
                "--jobs",
                jobs,
                "--no-timing",
            ])
            .status()
            .unwrap();
        assert!(status.success());
    }
    for file in [RESULTS_FILE, AGGREGATE_FILE] {
        assert_eq!(
            read(&dir.path().join("a"), file),
            read(&dir.path().join("b"), file)
        );
    }
    let rows: Vec<ResultRow> = read_rows(&dir.path().join("a").join(RESULTS_FILE)).unwrap();
    assert_eq!(rows.len(), 2 * 2 * 3);
    assert!(rows.iter().all(|r| r.elapsed_millis == 0));
}

#[test]
fn cli_rejects_bad_plans_with_usage_status() {
    let dir = tempfile::tempdir().unwrap();
    let plan_path = dir.path().join("plan.toml");
    fs::write(
        &plan_path,
        "schema = 1\nseed = 1\ntrials = 0\nmodes = [\"rank\"]\n",
    )
    .unwrap();
    let status = cli()
        .args(["simulate", "--config"])
        .arg(&plan_path)
        .arg("--out")
        .arg(dir.path())
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(2));

    let status = cli()
        .args(["network", "--config"])
        .arg(dir.path().join("missing.toml"))
        .arg("--out")
        .arg(dir.path())
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(2));
}

#[test]
fn committed_plans_parse() {
    let configs = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs");
    let mut count = 0;
    for entry in fs::read_dir(configs).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().is_some_and(|e| e == "toml") {
            let plan = ExperimentPlan::load(&path).unwrap();
            plan.validate().unwrap();
            plan.scenario_configs().unwrap();
            count += 1;
        }
    }
    assert_eq!(count, 6);
}
