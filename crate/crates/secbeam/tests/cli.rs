//! Black-box tests of the command-line interface: exit codes, output
//! consistency between subcommands, and the shape of generated files.

use std::process::{Command, Output};

fn secbeam(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_secbeam"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("stdout is UTF-8")
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("stderr is UTF-8")
}

#[test]
fn solve_on_the_bundled_scenario_exits_zero() {
    let out = secbeam(&["solve"]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("status: solved"));
    assert!(text.contains("secrecy rate Rs:"));
}

#[test]
fn missing_config_file_exits_one() {
    let out = secbeam(&["solve", "--config", "/no/such/file.json"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("cannot read"));
}

#[test]
fn malformed_config_exits_one() {
    let dir = tempfile::tempdir().expect("tempdir");
    let path = dir.path().join("bad.json");
    std::fs::write(&path, "{\"scenario\": 3}").unwrap();
    let out = secbeam(&["solve", "--config", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).starts_with("error:"));
}

#[test]
fn statistical_csi_with_eve_decode_exits_one() {
    let out = secbeam(&["solve", "--statistical-csi", "--eve-decode-public"]);
    assert_eq!(out.status.code(), Some(1), "stdout: {}", stdout(&out));
    assert!(stderr(&out).contains("eve_must_decode_public"));
}

#[test]
fn starved_budget_exits_two() {
    let out = secbeam(&["solve", "--total-power-db", "-100"]);
    assert_eq!(out.status.code(), Some(2), "stdout: {}", stdout(&out));
    assert!(stdout(&out).contains("status: infeasible"));
}

#[test]
fn single_point_sweep_matches_solve() {
    let solve_text = stdout(&secbeam(&["solve"]));
    let rs_line = solve_text
        .lines()
        .find(|l| l.starts_with("secrecy rate Rs:"))
        .expect("solve prints Rs");
    let rs: f64 = rs_line
        .split_whitespace()
        .nth(3)
        .unwrap()
        .parse()
        .expect("Rs parses");
    let power = |name: &str| -> f64 {
        solve_text
            .lines()
            .find(|l| l.trim_start().starts_with(name))
            .and_then(|l| l.split_whitespace().nth(1))
            .expect("power line")
            .parse()
            .expect("power parses")
    };

    let sweep_text = stdout(&secbeam(&[
        "sweep", "--axis", "power_db", "--from", "6", "--to", "6", "--points", "1",
    ]));
    let row = sweep_text.lines().nth(1).expect("one data row");
    let fields: Vec<&str> = row.split(',').collect();
    assert_eq!(fields[0], "power_db");
    assert_eq!(fields[1], "6.000000");
    assert_eq!(fields[2], format!("{rs:.6}"));
    assert_eq!(fields[4], "true");
    assert_eq!(fields[5], format!("{:.6}", power("Ps0")));
    assert_eq!(fields[6], format!("{:.6}", power("Ps1")));
    assert_eq!(fields[7], format!("{:.6}", power("P_R0")));
    assert_eq!(fields[8], format!("{:.6}", power("|psi|^2")));
}

#[test]
fn trace_file_has_one_row_per_tried_split() {
    let dir = tempfile::tempdir().expect("tempdir");
    let path = dir.path().join("trace.csv");
    let out = secbeam(&["solve", "--trace", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&path).expect("trace written");
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("m,P_m,Rs,public_total,public_feasible")
    );
    let rows: Vec<&str> = lines.collect();
    assert!(!rows.is_empty());
    // descent stops at the winning split, which is the only feasible row
    for row in &rows[..rows.len() - 1] {
        assert!(row.ends_with(",false"), "unexpected feasible row: {row}");
    }
    assert!(rows.last().unwrap().ends_with(",true"));
}

#[test]
fn oracle_check_zero_trials_passes_vacuously() {
    let out = secbeam(&["oracle-check", "--trials", "0"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stderr(&out).contains("warning"));
    assert!(stdout(&out).contains("vacuously"));
}

#[test]
fn public_rate_sweep_goes_infeasible_exactly_once() {
    let text = stdout(&secbeam(&[
        "sweep",
        "--axis",
        "public_rate",
        "--from",
        "0",
        "--to",
        "3",
        "--points",
        "7",
        "--total-power-db",
        "3",
    ]));
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 7);
    let flags: Vec<bool> = rows
        .iter()
        .map(|r| r.split(',').nth(4) == Some("true"))
        .collect();
    assert!(flags[0], "R0 = 0 must be feasible");
    assert!(!flags[6], "R0 = 3 at 3 dB must be infeasible");
    let transitions = flags.windows(2).filter(|w| w[0] != w[1]).count();
    assert_eq!(
        transitions, 1,
        "feasibility should flip exactly once along the R0 axis: {flags:?}"
    );
    for (row, &ok) in rows.iter().zip(&flags) {
        let fields: Vec<&str> = row.split(',').collect();
        if ok {
            assert!(!fields[3].is_empty(), "feasible row lacks m*: {row}");
        } else {
            assert!(fields[3].is_empty(), "infeasible row carries m*: {row}");
            assert_eq!(fields[2], "0.000000", "infeasible row carries Rs: {row}");
        }
    }
}
