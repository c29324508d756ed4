//! Black-box tests of the binary: exit codes, output files, messages.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_roomloc")
}

fn fixture() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../scenarios/room_4x6.scn")
}

fn run(args: &[&str]) -> Output {
    Command::new(bin()).args(args).output().expect("binary runs")
}

fn small_scenario(dir: &Path, beams: &str) -> PathBuf {
    let path = dir.join("small.scn");
    let text = format!(
        "[map]\nrectangle 4 6\n[pose]\nx1 2\nx2 3\nheading 20\n[beams]\n{beams}\n\
         [grid]\nn1 40\nn2 60\n[seed]\nseed 7\nnoise_free false\n"
    );
    std::fs::write(&path, text).unwrap();
    path
}

#[test]
fn estimate_writes_requested_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&[
        "estimate",
        "--scenario",
        fixture().to_str().unwrap(),
        "--subset",
        "1,2,3",
        "--out",
        dir.path().to_str().unwrap(),
        "--heatmap",
        "--export-grid",
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let report = std::fs::read_to_string(dir.path().join("report.txt")).unwrap();
    assert!(report.contains("measurements_used\t3"));
    assert!(report.contains("mean_x1_m\t"));
    assert_eq!(String::from_utf8_lossy(&out.stdout), report);
    let grid = std::fs::read_to_string(dir.path().join("posterior_grid.txt")).unwrap();
    assert!(grid.starts_with("200 300 1 0 4 0 6\n"));
    let pgm = std::fs::read(dir.path().join("posterior.pgm")).unwrap();
    assert!(pgm.starts_with(b"P5\n200 300\n255\n"));
}

#[test]
fn missing_scenario_is_usage_error() {
    let out = run(&["estimate", "--scenario", "/nonexistent/nowhere.scn"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("nowhere.scn"));
}

#[test]
fn out_of_range_subset_is_usage_error() {
    let out = run(&["estimate", "--scenario", fixture().to_str().unwrap(), "--subset", "9"]);
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("beam 9"), "{stderr}");

    let out = run(&["estimate", "--scenario", fixture().to_str().unwrap(), "--subset", "1,x"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn scenario_parse_errors_name_the_line() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("broken.scn");
    std::fs::write(&path, "[map]\nrectangle 4 six\n").unwrap();
    let out = run(&["estimate", "--scenario", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("line 2"), "{stderr}");
}

#[test]
fn montecarlo_runs_and_rejects_zero_trials() {
    let dir = tempfile::tempdir().unwrap();
    let scn = small_scenario(dir.path(), "beam 0 0.05\nbeam 90 0.05");
    let out = run(&[
        "montecarlo",
        "--scenario",
        scn.to_str().unwrap(),
        "--trials",
        "4",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(dir.path().join("montecarlo.txt")).unwrap();
    assert!(text.contains("trials\t4"));
    assert!(text.contains("err_cov_x1x1_m2\t"));
    let tsv = std::fs::read_to_string(dir.path().join("montecarlo.tsv")).unwrap();
    assert_eq!(tsv.lines().count(), 2);

    let out = run(&["montecarlo", "--scenario", scn.to_str().unwrap(), "--trials", "0"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn table_command_needs_three_beams() {
    let dir = tempfile::tempdir().unwrap();
    let scn = small_scenario(dir.path(), "beam 0 0.05\nbeam 90 0.05");
    let out = run(&["table1", "--scenario", scn.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("beams 1-3"));
}

#[test]
fn table_command_writes_both_layouts() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&[
        "table1",
        "--scenario",
        fixture().to_str().unwrap(),
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(dir.path().join("table1.txt")).unwrap();
    assert!(text.starts_with("measurements\t1\t2\t3\t1+2\t2+3\t1+3\t1+2+3\n"));
    let tsv = std::fs::read_to_string(dir.path().join("table1.tsv")).unwrap();
    assert_eq!(tsv.lines().count(), 8); // header + seven subsets
}

#[test]
fn unknown_flags_exit_with_usage_code() {
    let out = run(&["estimate", "--no-such-flag"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(2));
}
