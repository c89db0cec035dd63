use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

const SPEC: &str = r#"{
  "num_qubits": 27,
  "topology": "heavy-hex",
  "readout_median": 0.02,
  "readout_dispersion": 0.7,
  "cnot_median": 0.009,
  "cnot_dispersion": 0.7,
  "faulty_fraction": 0.05
}"#;

fn qprune(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qprune"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

/// A temp dir holding `spec.json`, `cal.json` and `cpl.json`.
fn device() -> TempDir {
    let dir = TempDir::new().unwrap();
    fs::write(dir.path().join("spec.json"), SPEC).unwrap();
    let out = qprune(
        dir.path(),
        &[
            "synth",
            "--synth-spec-file",
            "spec.json",
            "--seed",
            "11",
            "--calibration-out",
            "cal.json",
            "--coupling-out",
            "cpl.json",
        ],
    );
    assert!(out.status.success(), "{}", stderr(&out));
    dir
}

fn path(dir: &TempDir, name: &str) -> PathBuf {
    dir.path().join(name)
}

#[test]
fn permissive_prune_keeps_every_healthy_qubit() {
    let dir = device();
    let out = qprune(
        dir.path(),
        &[
            "prune",
            "cal.json",
            "cpl.json",
            "--readout-max",
            "1",
            "--cnot-max",
            "100%",
        ],
    );
    assert_eq!(out.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let cal: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(path(&dir, "cal.json")).unwrap()).unwrap();
    let faulty = cal["faulty_qubits"].as_array().unwrap().len();
    // With faulty qubits removed the heavy-hex remnant may split; the sum over
    // all partitions is what must equal the healthy count.
    let all = qprune(
        dir.path(),
        &[
            "prune",
            "cal.json",
            "cpl.json",
            "--readout-max",
            "1",
            "--cnot-max",
            "1",
            "--all-partitions",
        ],
    );
    let parts: Vec<serde_json::Value> = serde_json::from_str(&stdout(&all)).unwrap();
    let total: usize = parts
        .iter()
        .map(|p| p["qubits"].as_array().unwrap().len())
        .sum();
    assert_eq!(total, 27 - faulty);
    assert_eq!(parts[0], doc);
    assert!(stderr(&out).is_empty());
}

#[test]
fn zero_thresholds_are_an_empty_result() {
    let dir = device();
    let out = qprune(
        dir.path(),
        &[
            "prune",
            "cal.json",
            "cpl.json",
            "--readout-max",
            "0",
            "--cnot-max",
            "0",
        ],
    );
    assert_eq!(out.status.code(), Some(3));
    assert!(stdout(&out).is_empty());
    assert!(stderr(&out).contains("empty partition"));
}

#[test]
fn all_partitions_are_sorted_largest_first() {
    let dir = device();
    let out = qprune(
        dir.path(),
        &[
            "prune",
            "cal.json",
            "cpl.json",
            "--readout-max",
            "3%",
            "--cnot-max",
            "1.2%",
            "--all-partitions",
        ],
    );
    assert_eq!(out.status.code(), Some(0));
    let parts: Vec<serde_json::Value> = serde_json::from_str(&stdout(&out)).unwrap();
    let sizes: Vec<usize> = parts
        .iter()
        .map(|p| p["qubits"].as_array().unwrap().len())
        .collect();
    assert!(sizes.windows(2).all(|w| w[0] >= w[1]), "{sizes:?}");
}

#[test]
fn relabelled_partition_uses_dense_indices() {
    let dir = device();
    let out = qprune(
        dir.path(),
        &[
            "prune",
            "cal.json",
            "cpl.json",
            "--readout-max",
            "0.03",
            "--cnot-max",
            "0.015",
            "--relabel",
        ],
    );
    assert_eq!(out.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let qubits: Vec<u64> = doc["qubits"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_u64().unwrap())
        .collect();
    assert_eq!(qubits, (0..qubits.len() as u64).collect::<Vec<_>>());
    assert_eq!(doc["relabel_map"].as_object().unwrap().len(), qubits.len());
}

#[test]
fn percent_and_fraction_flags_agree() {
    let dir = device();
    let a = qprune(
        dir.path(),
        &[
            "prune",
            "cal.json",
            "cpl.json",
            "--readout-max",
            "2.5%",
            "--cnot-max",
            "1.5%",
        ],
    );
    let b = qprune(
        dir.path(),
        &[
            "prune",
            "cal.json",
            "cpl.json",
            "--readout-max",
            "0.025",
            "--cnot-max",
            "0.015",
        ],
    );
    assert_eq!(stdout(&a), stdout(&b));
}

#[test]
fn bad_inputs_exit_with_two() {
    let dir = device();
    fs::write(path(&dir, "broken.json"), "{ not json").unwrap();
    let cases: [&[&str]; 5] = [
        &[
            "prune",
            "cal.json",
            "missing.json",
            "--readout-max",
            "1",
            "--cnot-max",
            "1",
        ],
        &[
            "prune",
            "broken.json",
            "cpl.json",
            "--readout-max",
            "1",
            "--cnot-max",
            "1",
        ],
        &[
            "prune",
            "cal.json",
            "cpl.json",
            "--readout-max",
            "150%",
            "--cnot-max",
            "1",
        ],
        &[
            "sweep",
            "cal.json",
            "cpl.json",
            "--readout-grid",
            "0.1,x",
            "--cnot-grid",
            "0.1",
        ],
        &[
            "bench",
            "cal.json",
            "cpl.json",
            "--baseline",
            "--lengths",
            "4",
            "--samples",
            "2",
        ],
    ];
    for args in cases {
        let out = qprune(dir.path(), args);
        assert_eq!(out.status.code(), Some(2), "{args:?}: {}", stderr(&out));
        assert!(stdout(&out).is_empty());
    }
}

#[test]
fn single_point_sweep_has_one_row() {
    let dir = device();
    let out = qprune(
        dir.path(),
        &[
            "sweep",
            "cal.json",
            "cpl.json",
            "--readout-grid",
            "0.05",
            "--cnot-grid",
            "0.02",
        ],
    );
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(
        lines[0],
        "readout_threshold,cnot_threshold,largest_partition_size,partition_count"
    );
    assert_eq!(lines.len(), 2);
}

#[test]
fn descending_cnot_grid_gives_non_increasing_sizes() {
    let dir = device();
    let out = qprune(
        dir.path(),
        &[
            "sweep",
            "cal.json",
            "cpl.json",
            "--readout-grid",
            "1",
            "--cnot-grid",
            "0.05,0.02,1.2%,0.01,0.008,0.005",
            "--csv-out",
            "s.csv",
        ],
    );
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).is_empty());
    let csv = fs::read_to_string(path(&dir, "s.csv")).unwrap();
    let sizes: Vec<usize> = csv
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(2).unwrap().parse().unwrap())
        .collect();
    assert_eq!(sizes.len(), 6);
    assert!(sizes.windows(2).all(|w| w[1] <= w[0]), "{sizes:?}");
}

#[test]
fn baseline_bench_bookkeeping_and_determinism() {
    let dir = device();
    let args = [
        "bench",
        "cal.json",
        "cpl.json",
        "--baseline",
        "--lengths",
        "10",
        "--samples",
        "5",
        "--trials",
        "2000",
        "--seed",
        "4",
        "--raw-out",
    ];
    let first = qprune(dir.path(), &[&args[..], &["raw1.csv"]].concat());
    let second = qprune(dir.path(), &[&args[..], &["raw2.csv"]].concat());
    assert_eq!(first.status.code(), Some(0), "{}", stderr(&first));
    let raw = fs::read_to_string(path(&dir, "raw1.csv")).unwrap();
    assert_eq!(raw.lines().count(), 1 + 5);
    assert_eq!(stdout(&first).lines().count(), 1 + 1);
    assert!(stdout(&first)
        .lines()
        .nth(1)
        .unwrap()
        .starts_with("10,baseline,"));
    assert_eq!(raw, fs::read_to_string(path(&dir, "raw2.csv")).unwrap());
    assert_eq!(stdout(&first), stdout(&second));
}

#[test]
fn infeasible_length_exits_with_three() {
    let dir = device();
    let out = qprune(
        dir.path(),
        &[
            "bench",
            "cal.json",
            "cpl.json",
            "--readout-max",
            "1%",
            "--cnot-max",
            "0.5%",
            "--lengths",
            "20",
            "--samples",
            "3",
            "--seed",
            "1",
        ],
    );
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr(&out).contains("too small"));
}

#[test]
fn delta_report_matches_the_formula() {
    let dir = device();
    let common = [
        "cal.json",
        "cpl.json",
        "--lengths",
        "4,8",
        "--samples",
        "6",
        "--trials",
        "2000",
        "--seed",
        "9",
    ];
    let base = qprune(
        dir.path(),
        &[
            &["bench"][..],
            &common,
            &["--baseline", "--summary-out", "base.csv"],
        ]
        .concat(),
    );
    let pruned = qprune(
        dir.path(),
        &[
            &["bench"][..],
            &common,
            &[
                "--readout-max",
                "5%",
                "--cnot-max",
                "2%",
                "--summary-out",
                "pruned.csv",
            ],
        ]
        .concat(),
    );
    assert!(base.status.success() && pruned.status.success());
    let out = qprune(dir.path(), &["delta", "base.csv", "pruned.csv"]);
    assert_eq!(out.status.code(), Some(0));
    let field = |line: &str, i: usize| line.split(',').nth(i).unwrap().to_string();
    let base_csv = fs::read_to_string(path(&dir, "base.csv")).unwrap();
    let mut checked = 0;
    for (b, m) in base_csv.lines().skip(1).zip(stdout(&out).lines().skip(1)) {
        assert_eq!(field(m, 1), "pruned");
        if field(m, 2).is_empty() {
            // No chain of this length fits the partition: no mean, no delta.
            assert_eq!(field(m, 4), "0");
            assert!(field(m, 5).is_empty());
            continue;
        }
        let (bm, mm): (f64, f64) = (field(b, 2).parse().unwrap(), field(m, 2).parse().unwrap());
        let delta: f64 = field(m, 5).parse().unwrap();
        assert!((delta - 100.0 * (mm - bm) / mm).abs() < 1e-9);
        checked += 1;
    }
    assert!(checked > 0);
}

#[test]
fn drift_output_shapes() {
    let dir = device();
    let run = |rate: &str, jitter: &str, window: &str| {
        let out = qprune(
            dir.path(),
            &[
                "drift",
                "--synth-spec-file",
                "spec.json",
                "--days",
                "10",
                "--drift-rate",
                rate,
                "--jitter",
                jitter,
                "--seed",
                "2",
                "--window",
                window,
            ],
        );
        assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
        stdout(&out)
            .lines()
            .skip(1)
            .map(|l| l.split(',').nth(1).unwrap().parse::<f64>().unwrap())
            .collect::<Vec<_>>()
    };
    let flat = run("0", "0", "3");
    assert_eq!(flat.len(), 11);
    assert!(flat.iter().all(|v| (v - flat[0]).abs() < 1e-15));
    let rising = run("1e-4", "0", "1");
    assert!(rising.windows(2).all(|w| w[1] > w[0]));
    let bad = qprune(
        dir.path(),
        &[
            "drift",
            "--synth-spec-file",
            "cal.json",
            "--days",
            "3",
            "--drift-rate",
            "0",
            "--seed",
            "1",
            "--window",
            "1",
        ],
    );
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn synth_is_seeded() {
    let dir = device();
    let again = qprune(
        dir.path(),
        &[
            "synth",
            "--synth-spec-file",
            "spec.json",
            "--seed",
            "11",
            "--calibration-out",
            "cal2.json",
            "--coupling-out",
            "cpl2.json",
        ],
    );
    assert!(again.status.success());
    for (a, b) in [("cal.json", "cal2.json"), ("cpl.json", "cpl2.json")] {
        assert_eq!(
            fs::read(path(&dir, a)).unwrap(),
            fs::read(path(&dir, b)).unwrap()
        );
    }
}
