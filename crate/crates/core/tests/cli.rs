use std::process::{Command, Output};

use serde_json::Value;

fn almost(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_almost")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

#[test]
fn passing_suite_exits_zero_with_json_report() {
    let out = almost(&["run", "tower", "--p", "2", "--depth", "2"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["suite"], "tower");
    assert_eq!(report["overall"], true);
    assert!(report["checks"].as_array().unwrap().iter().all(|c| c["verdict"] == true && c["elapsed_ms"].is_null()));
    assert!(String::from_utf8_lossy(&out.stderr).lines().all(|l| l.starts_with("PASS ")));
}

#[test]
fn failing_check_exits_one() {
    let out = almost(&["run", "algebra", "--p", "2"]);
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("FAIL algebra.syntomic_ladder"));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(code(&almost(&["run", "nonsense"])), 2);
    assert_eq!(code(&almost(&["run", "k0", "--p", "4"])), 2);
    assert_eq!(code(&almost(&["run", "k0", "--mode", "bogus"])), 2);
    assert_eq!(code(&almost(&["run", "k0", "--depth", "0"])), 2);
    assert_eq!(code(&almost(&["compute", "snf", "{not json"])), 2);
    assert_eq!(code(&almost(&["compute", "no_such_op", "{}"])), 2);
    assert_eq!(code(&almost(&["--no-such-flag"])), 2);
}

#[test]
fn report_file_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let paths: Vec<_> = (0..2).map(|i| dir.path().join(format!("r{i}.json"))).collect();
    for path in &paths {
        let out = almost(&["run", "k0", "--p", "3", "--seed", "7", "--report", path.to_str().unwrap()]);
        assert_eq!(code(&out), 0);
        assert!(out.stdout.is_empty());
    }
    let (a, b) = (std::fs::read(&paths[0]).unwrap(), std::fs::read(&paths[1]).unwrap());
    assert_eq!(a, b);
    let report: Value = serde_json::from_slice(&a).unwrap();
    assert_eq!(report["config"]["seed"], 7);
    assert_eq!(report["config"]["p"], 3);
}

#[test]
fn timings_are_opt_in() {
    let out = almost(&["run", "tower", "--depth", "1", "--timings"]);
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(report["checks"].as_array().unwrap().iter().all(|c| c["elapsed_ms"].is_number()));
}

#[test]
fn compute_firmify_and_file_input() {
    let out = almost(&["compute", "firmify", "\"V\""]);
    assert_eq!(code(&out), 0);
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["op"], "firmify");
    assert!(v["result"].to_string().contains("IDEAL_M"), "{v}");

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("in.json");
    std::fs::write(&path, "\"V\"").unwrap();
    let from_file = almost(&["compute", "firmify", &format!("@{}", path.display())]);
    assert_eq!(from_file.stdout, out.stdout);
    assert_eq!(code(&almost(&["compute", "firmify", "@/nonexistent/file.json"])), 2);
}
