//! End-to-end checks of the binary: file round trips, exit codes, and
//! agreement with the library on the same inputs.

use std::path::{Path, PathBuf};
use std::process::Command;

use num_rational::Rational64;
use serde_json::Value;
use transference_core::boundedness::{certify_boundedness, prune_check_many, QGrid};
use transference_core::generators::{progressions, ConfigSpec, Family};
use transference_core::harness::{ExperimentManifest, QSchedule};
use transference_core::matrix::threshold_exponent;
use transference_core::solver::{alpha_exact, arrow_decide, ArrowOutcome, DEFAULT_BUDGET};
use transference_core::subset::VertexSubset;

const BIN: &str = env!("CARGO_BIN_EXE_transference-lab");

fn scratch(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("tlab-behavior-{tag}-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn run(args: &[&str]) -> (Option<i32>, String, String) {
    let out = Command::new(BIN).args(args).output().expect("binary runs");
    (
        out.status.code(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn run_ok(args: &[&str]) {
    let (code, _, stderr) = run(args);
    assert_eq!(code, Some(0), "{args:?} failed: {stderr}");
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn alpha_cli_matches_library() {
    let dir = scratch("alpha");
    let graph = dir.join("ap30.txt");
    run_ok(&["gen", "--family", "ap", "--k", "3", "--n", "30", "--out", graph.to_str().unwrap()]);

    let report = dir.join("alpha.json");
    run_ok(&["alpha", "--hypergraph", graph.to_str().unwrap(), "--out", report.to_str().unwrap()]);
    let h = progressions(30, 3).unwrap();
    let want = alpha_exact(&h, DEFAULT_BUDGET);
    let doc = read_json(&report);
    assert_eq!(doc["alpha"]["alpha"].as_u64().unwrap() as usize, want.alpha);
    assert_eq!(doc["alpha"]["exact"].as_bool(), Some(true));
    assert_eq!(doc["alpha"]["witness"].as_array().unwrap().len(), want.alpha);

    // Restricting to a subset reports the witness in original numbering.
    let picks: Vec<usize> = (0..30).step_by(2).collect();
    let subset = dir.join("evens.txt");
    std::fs::write(
        &subset,
        picks.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("\n"),
    )
    .unwrap();
    let report = dir.join("alpha_sub.json");
    run_ok(&[
        "alpha",
        "--hypergraph",
        graph.to_str().unwrap(),
        "--subset",
        subset.to_str().unwrap(),
        "--out",
        report.to_str().unwrap(),
    ]);
    let x = VertexSubset::from_indices(30, picks.clone()).unwrap();
    let induced = h.induced(&x).unwrap();
    let want = alpha_exact(&induced.hypergraph, DEFAULT_BUDGET);
    let doc = read_json(&report);
    assert_eq!(doc["alpha"]["alpha"].as_u64().unwrap() as usize, want.alpha);
    let witness: Vec<usize> = doc["alpha"]["witness"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_u64().unwrap() as usize)
        .collect();
    assert_eq!(witness.len(), want.alpha);
    assert!(witness.iter().all(|v| picks.contains(v)));
    let back = VertexSubset::from_indices(30, witness).unwrap();
    assert_eq!(h.induced(&back).unwrap().hypergraph.edge_count(), 0);

    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn arrow_cli_decides_and_flags_truncation() {
    let dir = scratch("arrow");
    let graph = dir.join("ap30.txt");
    run_ok(&["gen", "--family", "ap", "--k", "3", "--n", "30", "--out", graph.to_str().unwrap()]);
    let subset = dir.join("all.txt");
    std::fs::write(
        &subset,
        (0..30).map(|v| v.to_string()).collect::<Vec<_>>().join(" "),
    )
    .unwrap();

    let report = dir.join("arrow.json");
    run_ok(&[
        "arrow",
        "--hypergraph",
        graph.to_str().unwrap(),
        "--subset",
        subset.to_str().unwrap(),
        "--epsilon",
        "1/2",
        "--out",
        report.to_str().unwrap(),
    ]);
    let doc = read_json(&report);
    let h = progressions(30, 3).unwrap();
    let want = arrow_decide(&h, &VertexSubset::full(30), Rational64::new(1, 2), DEFAULT_BUDGET)
        .unwrap();
    assert_eq!(want, ArrowOutcome::Holds);
    assert_eq!(doc["arrow"]["outcome"].as_str(), Some("holds"));
    assert_eq!(doc["arrow"]["target"].as_u64(), Some(15));

    // ap(60) at epsilon 1/2 needs more than one node to refute, so a
    // one-node budget must come back undecided with exit code 1.
    let graph = dir.join("ap60.txt");
    run_ok(&["gen", "--family", "ap", "--k", "3", "--n", "60", "--out", graph.to_str().unwrap()]);
    let subset = dir.join("all60.txt");
    std::fs::write(
        &subset,
        (0..60).map(|v| v.to_string()).collect::<Vec<_>>().join(" "),
    )
    .unwrap();
    let report = dir.join("arrow_trunc.json");
    let (code, _, _) = run(&[
        "arrow",
        "--hypergraph",
        graph.to_str().unwrap(),
        "--subset",
        subset.to_str().unwrap(),
        "--epsilon",
        "1/2",
        "--budget",
        "1",
        "--out",
        report.to_str().unwrap(),
    ]);
    assert_eq!(code, Some(1));
    let doc = read_json(&report);
    assert_eq!(doc["arrow"]["outcome"].as_str(), Some("undecided"));

    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn missing_input_exits_two() {
    let dir = scratch("missing");
    let absent = dir.join("absent.txt");
    let (code, _, stderr) = run(&["alpha", "--hypergraph", absent.to_str().unwrap()]);
    assert_eq!(code, Some(2));
    assert!(stderr.contains("absent.txt"), "stderr should name the file: {stderr}");
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn prune_cli_agrees_with_library() {
    let dir = scratch("prune");
    let graph = dir.join("ap200.txt");
    run_ok(&["gen", "--family", "ap", "--k", "3", "--n", "200", "--out", graph.to_str().unwrap()]);

    let family = Family::Progressions { k: 3 };
    let cap = certify_boundedness(&family, &[200], 1, &QGrid::Geometric { points: 20 })
        .unwrap()
        .overall_k_min;
    let q = 3.0 / (200.0f64).sqrt();
    let report = dir.join("prune.json");
    run_ok(&[
        "--seed",
        "99",
        "prune",
        "--hypergraph",
        graph.to_str().unwrap(),
        "--q",
        &q.to_string(),
        "--i",
        "1",
        "--eta",
        "0.1",
        "--cap",
        &cap.to_string(),
        "--trials",
        "100",
        "--out",
        report.to_str().unwrap(),
    ]);
    let doc = read_json(&report);
    let certified = doc["prune"]["certified_trials"].as_u64().unwrap() as usize;
    assert!(certified >= 95, "only {certified} of 100 trials certified");

    let h = progressions(200, 3).unwrap();
    let outcomes = prune_check_many(&h, q, 1, 0.1, cap, 99, 100).unwrap();
    assert_eq!(certified, outcomes.iter().filter(|o| o.certified).count());

    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn sweep_then_crossing_round_trip() {
    let dir = scratch("sweep");
    let manifest = ExperimentManifest {
        config: ConfigSpec::new(Family::Progressions { k: 3 }, 60).unwrap(),
        epsilon: Rational64::new(1, 2),
        schedule: QSchedule::CGrid {
            factors: vec![0.6, 1.6, 3.2, 6.0],
        },
        trials: 30,
        seed: 11,
        budget: 300_000,
        pi_override: None,
        output: None,
    };
    let manifest_path = dir.join("manifest.json");
    std::fs::write(&manifest_path, serde_json::to_string_pretty(&manifest).unwrap()).unwrap();

    let curve_csv = dir.join("curve.csv");
    let curve_json = dir.join("curve.json");
    run_ok(&[
        "sweep",
        "--manifest",
        manifest_path.to_str().unwrap(),
        "--out",
        curve_csv.to_str().unwrap(),
        "--json",
        curve_json.to_str().unwrap(),
    ]);

    let cross_json = dir.join("crossing.json");
    run_ok(&[
        "crossing",
        "--curve",
        curve_csv.to_str().unwrap(),
        "--out",
        cross_json.to_str().unwrap(),
    ]);

    // The CSV keeps floats lossless, so refitting the written curve must
    // reproduce the sweep's own crossing exactly.
    let from_sweep = &read_json(&curve_json)["curve"]["crossing"];
    let refit = &read_json(&cross_json)["crossing"];
    assert_eq!(from_sweep, refit);
    assert_eq!(refit["status"].as_str(), Some("found"));
    let q_star = refit["q_star"].as_f64().unwrap();
    let theta = threshold_exponent(&manifest.config).unwrap();
    let qs: Vec<f64> = manifest.schedule.resolve(60, theta).unwrap();
    assert!(q_star >= qs[0] && q_star <= qs[3], "q_star {q_star} outside the grid");

    std::fs::remove_dir_all(&dir).ok();
}
