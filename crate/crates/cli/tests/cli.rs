//! End-to-end checks of the `ramsey` binary: exit-status conventions,
//! output formats, report files, and config loading.

use std::path::PathBuf;
use std::process::{Command, Output};

fn ramsey(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ramsey"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn verified_sweep_exits_zero() {
    let out = ramsey(&["verify", "mod5", "--n", "1", "--max-arity", "3"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert!(stdout(&out).contains("status: verified"));
}

#[test]
fn refuted_probe_exits_one() {
    // The constant sequence over addition has homogeneous reductions for
    // the even coloring, so the probe refutes badness.
    let out = ramsey(&[
        "verify",
        "probe",
        "--seq",
        "list:2,4,6",
        "--ops",
        "add",
        "--coloring",
        "evens",
    ]);
    assert_eq!(out.status.code(), Some(1), "{}", stdout(&out));
    assert!(stdout(&out).contains("status: refuted"));
}

#[test]
fn absent_witness_exits_two() {
    let out = ramsey(&[
        "check-reduction",
        "--seq",
        "list:1,2",
        "--target",
        "list:7",
        "--ops",
        "add",
        "--max-arity",
        "2",
    ]);
    assert_eq!(out.status.code(), Some(2), "{}", stdout(&out));
    assert!(stdout(&out).contains("no witness within bounds"));
}

#[test]
fn schema_errors_exit_three() {
    let out = ramsey(&["fr-set", "--seq", "walk:1,2"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("seq"));

    let out = ramsey(&["fr-set"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn enumerate_terms_counts_binary_trees() {
    let out = ramsey(&["enumerate-terms", "--ops", "mul", "--arity", "4", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let parsed: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(parsed["counts"]["terms"], 5);
    assert_eq!(parsed["items"].as_array().unwrap().len(), 5);
}

#[test]
fn json_and_csv_formats() {
    let out = ramsey(&[
        "fr-set",
        "--seq",
        "list:1,2",
        "--ops",
        "add",
        "--format",
        "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let parsed: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(parsed["command"], "fr-set");
    assert_eq!(parsed["status"], "computed");
    assert!(parsed.get("elapsed_ms").is_none());

    let out = ramsey(&[
        "fr-set",
        "--seq",
        "list:1,2",
        "--ops",
        "add",
        "--format",
        "csv",
    ]);
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("label,value,in_coloring,term,block"));
    assert!(text.lines().count() >= 4);
}

#[test]
fn report_file_reruns_identically() {
    let dir = std::env::temp_dir().join(format!("ramsey-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let report_path: PathBuf = dir.join("mod5.json");

    let out = ramsey(&[
        "verify",
        "mod5",
        "--max-arity",
        "3",
        "--report",
        report_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let first = std::fs::read_to_string(&report_path).unwrap();
    let parsed: serde_json::Value = serde_json::from_str(&first).unwrap();

    // Re-run from the echoed config alone.
    let config_path = dir.join("echo.json");
    std::fs::write(&config_path, parsed["config"].to_string()).unwrap();
    let report2_path = dir.join("mod5-again.json");
    let out = ramsey(&[
        "verify",
        "mod5",
        "--config",
        config_path.to_str().unwrap(),
        "--report",
        report2_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let second = std::fs::read_to_string(&report2_path).unwrap();
    assert_eq!(first, second);

    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn shipped_example_configs_all_verify() {
    let configs = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../configs");
    let mut entries: Vec<PathBuf> = std::fs::read_dir(&configs)
        .expect("configs directory exists")
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    entries.sort();
    assert_eq!(entries.len(), 10, "one example per theorem id plus final n=1");
    for path in entries {
        let text = std::fs::read_to_string(&path).unwrap();
        let theorem: serde_json::Value = serde_json::from_str(&text).unwrap();
        let theorem = theorem["theorem"].as_str().unwrap().to_string();
        let out = ramsey(&[
            "verify",
            &theorem,
            "--config",
            path.to_str().unwrap(),
        ]);
        assert_eq!(
            out.status.code(),
            Some(0),
            "{}: {}",
            path.display(),
            stdout(&out)
        );
    }
}

#[test]
fn magnitude_cap_env_variable_bounds_d_indices() {
    // With a 16-bit magnitude cap the largest allowed index is 4.
    let out = Command::new(env!("CARGO_BIN_EXE_ramsey"))
        .args(["fr-set", "--seq", "d:5", "--n", "1", "--max-arity", "2"])
        .env("RAMSEY_MAX_BITS", "16")
        .output()
        .expect("binary runs");
    assert_eq!(out.status.code(), Some(3), "{}", stdout(&out));

    let out = Command::new(env!("CARGO_BIN_EXE_ramsey"))
        .args(["fr-set", "--seq", "d:4", "--n", "1", "--max-arity", "2"])
        .env("RAMSEY_MAX_BITS", "16")
        .output()
        .expect("binary runs");
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
}

#[test]
fn search_homogeneous_round_trip() {
    let out = ramsey(&[
        "search-homogeneous",
        "--seq",
        "list:2,4,6",
        "--ops",
        "add",
        "--coloring",
        "evens",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert!(stdout(&out).contains("homogeneous reduction found"));

    // Odd coloring over even values: every FR member is even, so the
    // first candidate is already disjoint.
    let out = ramsey(&[
        "search-homogeneous",
        "--seq",
        "list:2,4,6",
        "--ops",
        "add",
        "--coloring",
        "residue:2,1",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
}
