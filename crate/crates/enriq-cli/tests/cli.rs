//! End-to-end tests for the `enriq` binary: exit codes, report bytes
//! against committed golden files, and determinism across parallelism
//! settings.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

fn golden(name: &str) -> String {
    let path = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(name);
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("missing golden {name}: {e}"))
}

/// Runs the binary with the given arguments and extra environment.
fn run(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_enriq"));
    cmd.args(args);
    cmd.env_remove("ENRIQ_CAP");
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn stdout_of(out: &Output) -> &str {
    std::str::from_utf8(&out.stdout).expect("utf-8 stdout")
}

fn stderr_of(out: &Output) -> &str {
    std::str::from_utf8(&out.stderr).expect("utf-8 stderr")
}

#[track_caller]
fn assert_golden(args: &[&str], want_code: i32, golden_name: &str) {
    let out = run(args, &[]);
    assert_eq!(
        out.status.code(),
        Some(want_code),
        "stderr: {}",
        stderr_of(&out)
    );
    assert_eq!(stdout_of(&out), golden(golden_name), "for {args:?}");
}

// ---------------------------------------------------------------------
// golden reports

#[test]
fn validate_report_matches_golden() {
    let f = fixture("antichain2_bool.json");
    assert_golden(
        &["validate", f.to_str().unwrap()],
        0,
        "antichain2_validate.json",
    );
}

#[test]
fn check_report_matches_golden_and_fails_properly() {
    let f = fixture("antichain2_bool.json");
    // The antichain is skeletal but not complete, so the command reports
    // and exits 1.
    assert_golden(
        &[
            "check",
            f.to_str().unwrap(),
            "--skeletal",
            "--complete",
            "--injective",
        ],
        1,
        "antichain2_check.json",
    );
}

#[test]
fn macneille_reports_match_goldens() {
    let a = fixture("antichain2_bool.json");
    assert_golden(&["macneille", a.to_str().unwrap()], 0, "antichain2_mn.json");
    assert_golden(
        &["macneille", a.to_str().unwrap(), "--format", "dot"],
        0,
        "antichain2_mn.dot",
    );
    let m = fixture("metric3_chain4.json");
    assert_golden(&["macneille", m.to_str().unwrap()], 0, "metric3_mn.json");
    assert_golden(
        &["macneille", m.to_str().unwrap(), "--format", "dot"],
        0,
        "metric3_mn.dot",
    );
}

#[test]
fn closure_reports_match_goldens() {
    let p = fixture("pair_bool.json");
    assert_golden(&["closure", p.to_str().unwrap()], 0, "pair_closure.json");
    let b = fixture("midpoint_balls.json");
    assert_golden(&["closure", b.to_str().unwrap()], 0, "midpoint_hull.json");
}

#[test]
fn extend_report_matches_golden() {
    let f = fixture("extend_bool.json");
    assert_golden(&["extend", f.to_str().unwrap()], 0, "extend_sandwich.json");
}

#[test]
fn lawbook_report_matches_golden() {
    let f = fixture("lawvere_spec.json");
    assert_golden(&["lawbook", f.to_str().unwrap()], 0, "lawvere_lawbook.json");
}

// ---------------------------------------------------------------------
// determinism

#[test]
fn reports_are_identical_across_thread_counts() {
    let m = fixture("metric3_chain4.json");
    let want = golden("metric3_mn.json");
    for threads in ["1", "4"] {
        let out = run(
            &["macneille", m.to_str().unwrap()],
            &[("RAYON_NUM_THREADS", threads)],
        );
        assert_eq!(out.status.code(), Some(0));
        assert_eq!(stdout_of(&out), want, "with RAYON_NUM_THREADS={threads}");
    }
}

#[test]
fn repeated_runs_are_byte_identical() {
    let f = fixture("midpoint_balls.json");
    let first = run(&["closure", f.to_str().unwrap()], &[]);
    let second = run(&["closure", f.to_str().unwrap()], &[]);
    assert_eq!(first.stdout, second.stdout);
}

// ---------------------------------------------------------------------
// exit codes

#[test]
fn axiom_violation_exits_2_with_witness() {
    let f = fixture("bad_triangle.json");
    let out = run(&["validate", f.to_str().unwrap()], &[]);
    assert_eq!(out.status.code(), Some(2));
    assert!(
        stderr_of(&out).contains("composition law fails"),
        "stderr: {}",
        stderr_of(&out)
    );
}

#[test]
fn malformed_json_exits_3_with_location() {
    let f = fixture("malformed.json");
    let out = run(&["validate", f.to_str().unwrap()], &[]);
    assert_eq!(out.status.code(), Some(3));
    assert!(
        stderr_of(&out).contains("line"),
        "stderr: {}",
        stderr_of(&out)
    );
}

#[test]
fn missing_file_exits_3() {
    let out = run(&["validate", "/no/such/file.json"], &[]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn unsupported_combination_exits_4() {
    // Retraction search needs an enumerable carrier; the rational
    // quantale has none.
    let mut doc = std::env::temp_dir();
    doc.push("enriq_cli_lawvere_point.json");
    std::fs::write(
        &doc,
        r#"{"quantale": {"kind": "lawvere_rat"},
            "category": {"objects": ["p"], "hom": [[0]]}}"#,
    )
    .unwrap();
    let out = run(&["check", doc.to_str().unwrap(), "--injective"], &[]);
    assert_eq!(out.status.code(), Some(4), "stderr: {}", stderr_of(&out));
}

#[test]
fn dot_format_is_macneille_only() {
    let f = fixture("antichain2_bool.json");
    let out = run(&["validate", f.to_str().unwrap(), "--format", "dot"], &[]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn tight_cap_exits_5() {
    let f = fixture("antichain2_bool.json");
    let out = run(&["macneille", f.to_str().unwrap(), "--cap", "2"], &[]);
    assert_eq!(out.status.code(), Some(5));
    assert!(
        stderr_of(&out).contains("cap"),
        "stderr: {}",
        stderr_of(&out)
    );
}

#[test]
fn env_cap_applies_and_flag_beats_it() {
    let f = fixture("antichain2_bool.json");
    let out = run(&["macneille", f.to_str().unwrap()], &[("ENRIQ_CAP", "2")]);
    assert_eq!(out.status.code(), Some(5));
    let out = run(
        &["macneille", f.to_str().unwrap(), "--cap", "100"],
        &[("ENRIQ_CAP", "2")],
    );
    assert_eq!(out.status.code(), Some(0));
    let out = run(
        &["macneille", f.to_str().unwrap()],
        &[("ENRIQ_CAP", "nope")],
    );
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn usage_errors_exit_3_and_help_exits_0() {
    let f = fixture("antichain2_bool.json");
    // `check` requires at least one property flag.
    let out = run(&["check", f.to_str().unwrap()], &[]);
    assert_eq!(out.status.code(), Some(3));
    let out = run(&["--help"], &[]);
    assert_eq!(out.status.code(), Some(0));
}

// ---------------------------------------------------------------------
// file output

#[test]
fn out_flag_writes_the_report_file() {
    let f = fixture("antichain2_bool.json");
    let mut target = std::env::temp_dir();
    target.push("enriq_cli_out_test.json");
    let _ = std::fs::remove_file(&target);
    let out = run(
        &[
            "validate",
            f.to_str().unwrap(),
            "--out",
            target.to_str().unwrap(),
        ],
        &[],
    );
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout_of(&out).is_empty());
    assert_eq!(
        std::fs::read_to_string(&target).unwrap(),
        golden("antichain2_validate.json")
    );
    let _ = std::fs::remove_file(&target);
}
