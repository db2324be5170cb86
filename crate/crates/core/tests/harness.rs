use std::fs;

use midsearch::game::{GameMatrix, InstanceFile, NoiseModel};
use midsearch::harness::{
    aggregate, read_csv, render_svg, run_experiment_with_threads, wilson_ci, write_csv,
    AlgorithmSpec, BudgetSpec, ExperimentConfig, HarnessError, InstanceSpec, OutputSpec,
    PreparedExperiment, CSV_HEADER,
};
use midsearch::instances::AHardParams;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn all_algorithms() -> Vec<AlgorithmSpec> {
    vec![
        AlgorithmSpec::Midsearch,
        AlgorithmSpec::Exp3ix,
        AlgorithmSpec::Tsallis,
        AlgorithmSpec::LucbG { delta: 0.1 },
        AlgorithmSpec::Uniform,
    ]
}

fn small_config(trials: u64) -> ExperimentConfig {
    ExperimentConfig {
        instance: InstanceSpec::AHard(AHardParams::new(6, 0.1, 0.2)),
        algorithms: all_algorithms(),
        budget: BudgetSpec::H1Multiple(3.0),
        trials,
        checkpoints: 7,
        base_seed: 42,
        output: OutputSpec::default(),
    }
}

#[test]
fn wilson_matches_hand_arithmetic() {
    // Wilson score interval with z = 1.95996, evaluated independently.
    let (s, n, z) = (50.0f64, 100.0f64, 1.95996f64);
    let p = s / n;
    let centre = (p + z * z / (2.0 * n)) / (1.0 + z * z / n);
    let half = z / (1.0 + z * z / n) * (p * (1.0 - p) / n + z * z / (4.0 * n * n)).sqrt();
    let (lo, hi) = wilson_ci(50, 100, 0.95).unwrap();
    assert!((lo - (centre - half)).abs() < 1e-5);
    assert!((hi - (centre + half)).abs() < 1e-5);
    assert!((lo - 0.4038).abs() <= 5e-4 && (hi - 0.5962).abs() <= 5e-4);
    assert_eq!(wilson_ci(0, 10, 0.95).unwrap().0, 0.0);
    assert_eq!(wilson_ci(10, 10, 0.95).unwrap().1, 1.0);
}

#[test]
fn wilson_rejects_bad_counts() {
    assert!(matches!(
        wilson_ci(3, 2, 0.95),
        Err(HarnessError::InvalidCounts {
            successes: 3,
            trials: 2
        })
    ));
    assert!(wilson_ci(0, 0, 0.95).is_err());
    assert!(wilson_ci(1, 2, 1.5).is_err());
}

proptest! {
    #[test]
    fn wilson_contains_the_rate(trials in 1u64..5000, frac in 0.0f64..=1.0, c in 0.5f64..0.999) {
        let successes = (frac * trials as f64).floor() as u64;
        let (lo, hi) = wilson_ci(successes, trials, c).unwrap();
        let p = successes as f64 / trials as f64;
        prop_assert!(0.0 <= lo && lo <= p && p <= hi && hi <= 1.0);
    }
}

#[test]
fn noiseless_instance_is_always_solved() {
    let a = GameMatrix::new(
        vec![
            vec![0.5, 0.9, 0.8],
            vec![0.1, -0.5, 0.0],
            vec![0.0, 0.2, -0.9],
        ],
        NoiseModel::Zero,
    )
    .unwrap();
    let config = ExperimentConfig {
        instance: InstanceSpec::Inline(InstanceFile::from(&a)),
        algorithms: all_algorithms(),
        budget: BudgetSpec::Samples(5000),
        trials: 10,
        checkpoints: 4,
        base_seed: 0,
        output: OutputSpec::default(),
    };
    let result = run_experiment_with_threads(config, 1).unwrap();
    for alg in all_algorithms() {
        let row = result.final_row(alg.name()).unwrap();
        assert_eq!((row.successes, row.trials), (10, 10), "{}", alg.name());
        assert_eq!(row.rate, 1.0);
    }
}

#[test]
fn trial_order_does_not_matter() {
    let prepared = PreparedExperiment::new(small_config(12)).unwrap();
    let records: Vec<_> = (0..12).map(|t| prepared.run_trial(t)).collect();
    let mut shuffled: Vec<_> = (0..12).rev().map(|t| prepared.run_trial(t)).collect();
    shuffled.shuffle(&mut ChaCha8Rng::seed_from_u64(1));
    let x = aggregate(&prepared, records, 0.0).unwrap();
    let y = aggregate(&prepared, shuffled, 0.0).unwrap();
    assert_eq!(x.rows, y.rows);
}

#[test]
fn thread_count_does_not_matter() {
    let x = run_experiment_with_threads(small_config(6), 1).unwrap();
    let y = run_experiment_with_threads(small_config(6), 3).unwrap();
    assert_eq!(x.rows, y.rows);
}

#[test]
fn rows_cover_every_checkpoint() {
    let result = run_experiment_with_threads(small_config(5), 1).unwrap();
    let prepared = PreparedExperiment::new(small_config(5)).unwrap();
    assert_eq!(result.rows.len(), 5 * prepared.grid.len());
    for alg in all_algorithms() {
        let points: Vec<u64> = result
            .rows_for(alg.name())
            .map(|r| r.checkpoint_samples)
            .collect();
        assert_eq!(points, prepared.grid);
        for row in result.rows_for(alg.name()) {
            assert!(row.successes <= row.trials && row.trials <= 5);
            assert!(row.mean_samples_used <= result.budget as f64);
            assert!(row.mean_samples_used <= row.checkpoint_samples as f64);
            assert!(row.wilson_lo <= row.rate && row.rate <= row.wilson_hi);
        }
    }
}

#[test]
fn reruns_write_identical_csv() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.csv"), dir.path().join("nested/b.csv"));
    write_csv(
        &run_experiment_with_threads(small_config(4), 1)
            .unwrap()
            .rows,
        &a,
    )
    .unwrap();
    write_csv(
        &run_experiment_with_threads(small_config(4), 2)
            .unwrap()
            .rows,
        &b,
    )
    .unwrap();
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
}

#[test]
fn csv_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.csv");
    let rows = run_experiment_with_threads(small_config(3), 1)
        .unwrap()
        .rows;
    write_csv(&rows, &path).unwrap();
    let text = fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().next().unwrap(), CSV_HEADER.join(","));
    let back = read_csv(&path).unwrap();
    assert_eq!(back.len(), rows.len());
    for (x, y) in rows.iter().zip(&back) {
        assert_eq!(
            (&x.algorithm, x.checkpoint_samples),
            (&y.algorithm, y.checkpoint_samples)
        );
        assert_eq!((x.successes, x.trials), (y.successes, y.trials));
        for (u, v) in [
            (x.rate, y.rate),
            (x.wilson_lo, y.wilson_lo),
            (x.wilson_hi, y.wilson_hi),
            (x.mean_samples_used, y.mean_samples_used),
        ] {
            assert!((u - v).abs() <= 1e-9);
        }
    }
}

#[test]
fn empty_results_give_a_header_only_csv() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("empty.csv");
    write_csv(&[], &path).unwrap();
    assert_eq!(
        fs::read_to_string(&path).unwrap().trim_end(),
        CSV_HEADER.join(",")
    );
    assert!(read_csv(&path).unwrap().is_empty());
    assert!(render_svg(&[]).starts_with("<svg"));
}

#[test]
fn errored_trials_are_recorded_not_fatal() {
    // 40 samples is below the fixed-budget search's minimum on 6x6.
    let mut config = small_config(3);
    config.budget = BudgetSpec::Samples(40);
    config.algorithms = vec![AlgorithmSpec::Midsearch, AlgorithmSpec::Uniform];
    let result = run_experiment_with_threads(config, 1).unwrap();
    assert_eq!(result.errors.len(), 3);
    assert!(result.errors.iter().all(|e| e.algorithm == "midsearch"));
    assert_eq!(result.algorithms[0].errors, 3);
    let row = result.final_row("midsearch").unwrap();
    assert_eq!((row.successes, row.trials, row.rate), (0, 0, 0.0));
    assert_eq!(result.final_row("uniform").unwrap().trials, 3);
}

#[test]
fn outputs_are_written_where_asked() {
    let dir = tempfile::tempdir().unwrap();
    let output = OutputSpec {
        csv: Some(dir.path().join("x/out.csv")),
        json: Some(dir.path().join("x/out.json")),
        svg: Some(dir.path().join("x/out.svg")),
    };
    let result = run_experiment_with_threads(small_config(2), 1).unwrap();
    midsearch::harness::emit_results(&result, &output).unwrap();
    let json: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("x/out.json")).unwrap()).unwrap();
    assert_eq!(json["trials"], 2);
    let svg = fs::read_to_string(dir.path().join("x/out.svg")).unwrap();
    for alg in all_algorithms() {
        assert!(svg.contains(alg.name()));
    }
}
