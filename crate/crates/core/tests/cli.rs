use std::process::{Command, Output};

use twin_descent::cli::Report;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_twin-descent"))
        .args(args)
        .env_remove("TWIN_DESCENT_JOBS")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn analyze_reports_rank_one_for_three() {
    let out = run(&["analyze", "3"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("conductor = 480"), "{text}");
    assert!(text.contains("RankOne"), "{text}");
    assert!(text.contains("(-4, -2)"), "{text}");
}

#[test]
fn analyze_json_round_trips() {
    for args in [["analyze", "3", "--json"], ["analyze", "5", "--json"]] {
        let out = run(&args);
        assert!(out.status.success());
        let text = stdout(&out);
        let report: Report = serde_json::from_str(text.trim()).unwrap();
        assert!(report.conformant);
        assert_eq!(serde_json::to_string(&report).unwrap(), text.trim());
    }
    let out = run(&["analyze", "5", "--sigma", "-1", "--json"]);
    let report: Report = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(report.rank_sha_bound, 0);
    assert_eq!(report.certificate_label(), "RankZero");
}

#[test]
fn bad_inputs_exit_with_two() {
    for args in [
        &["analyze", "9"][..],
        &["analyze", "7"],
        &["rank1", "1"],
        &["local", "--family", "C", "--d1", "3", "--p", "3", "--place", "2"],
        &["local", "--family", "C", "--d1", "2", "--p", "3", "--place", "4"],
        &["analyze", "3", "--sigma", "2"],
    ] {
        let out = run(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
    }
    let err = String::from_utf8(run(&["analyze", "9"]).stderr).unwrap();
    assert!(err.contains("9 is not prime"), "{err}");
}

#[test]
fn scan_is_conformant_and_independent_of_jobs() {
    let one = run(&["scan", "2000", "--json", "--jobs", "1"]);
    let four = run(&["scan", "2000", "--json", "--jobs", "4"]);
    assert!(one.status.success() && four.status.success());
    assert_eq!(one.stdout, four.stdout);
    let env = Command::new(env!("CARGO_BIN_EXE_twin-descent"))
        .args(["scan", "2000", "--json"])
        .env("TWIN_DESCENT_JOBS", "3")
        .output()
        .unwrap();
    assert_eq!(env.stdout, one.stdout);
    let text = stdout(&one);
    let reports: Vec<Report> = text
        .lines()
        .filter(|l| l.starts_with("{\"p\":"))
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(reports.len(), 61);
    assert!(reports.iter().all(|r| r.conformant));
    let ranked: Vec<u64> = reports
        .iter()
        .filter(|r| r.certificate_label() == "RankOne")
        .map(|r| r.p)
        .collect();
    assert_eq!(ranked, [3, 11, 659, 1619]);
}

#[test]
fn scan_minus_sign_is_conformant() {
    let out = run(&["scan", "1000", "--sigma", "-1"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("35/35 conformant"), "{text}");
}

#[test]
fn local_verdicts() {
    let out = run(&["local", "--family", "C", "--d1", "2", "--p", "3", "--place", "2"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("at 2: unsolvable"));
    let out = run(&["local", "--family", "Cprime", "--d1", "-1", "--p", "3", "--place", "inf"]);
    assert!(stdout(&out).contains("at inf: solvable"));
    let out = run(&["local", "--family", "C", "--d1", "-1", "--p", "5", "--sigma", "-1", "--place", "5", "--json"]);
    let v: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(v["solvable"], serde_json::Value::Bool(true));
    assert_eq!(v["place"], "5");
}

#[test]
fn rank1_constructs_the_point_for_eleven() {
    let out = run(&["rank1", "11", "--bound", "20"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("-324/25"), "{text}");
    let out = run(&["rank1", "3", "--json"]);
    let v: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(v["certificate"]["point"]["x"], "-4/1");
    assert_eq!(v["applicable"], true);
}
