use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn kz(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kz")).args(args).env_remove("KZ_PADIC_WORKERS").output().expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn read(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn gen_writes_tagged_passing_artifact() {
    let out = kz(&["gen", "--p", "5", "--s", "1", "--n", "3", "--l", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["schema"], "kz-padic/1");
    assert_eq!(v["pass"], true);
    assert_eq!(v["result"]["record"]["delta"], 1);
    assert_eq!(v["result"]["verification"]["first_failure"], Value::Null);
}

#[test]
fn round_trip_and_tamper() {
    let dir = tempfile::tempdir().unwrap();
    let art = dir.path().join("sol.json");
    let out = kz(&["gen", "--p", "5", "--s", "2", "--n", "3", "--l", "1", "-o", art.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));

    let out = kz(&["verify", "--input", art.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json_of(&out);
    assert_eq!(v["result"]["verification"], read(&art)["result"]["verification"]);

    // A bare record is accepted too.
    let bare = dir.path().join("bare.json");
    std::fs::write(&bare, read(&art)["result"]["record"].to_string()).unwrap();
    assert_eq!(kz(&["verify", "--input", bare.to_str().unwrap()]).status.code(), Some(0));

    let mut doc = read(&art);
    let term = &mut doc["result"]["record"]["vector"]["entries"][0][0];
    let c: i64 = term["c"].as_str().unwrap().parse().unwrap();
    term["c"] = Value::String((c + 1).to_string());
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, doc.to_string()).unwrap();
    let out = kz(&["verify", "--input", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let v = json_of(&out);
    assert_eq!(v["pass"], false);
    assert!(v["result"]["verification"]["first_failure"].is_object());
}

#[test]
fn cartier_verify_passes() {
    for n in ["3", "5"] {
        let out = kz(&["cartier", "--p", "5", "--n", n, "--verify"]);
        assert_eq!(out.status.code(), Some(0));
        let v = json_of(&out);
        assert_eq!(v["result"]["grading"]["pass"], true);
        assert_eq!(v["result"]["iterated"]["pass"], true);
    }
}

#[test]
fn asympt_both_modes() {
    let out = kz(&["asympt", "--p", "5", "--s", "2", "--n", "5", "--l", "2"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_of(&out)["result"]["factorization"]["pass"], true);
    let out = kz(&["asympt", "--p", "5", "--s", "2", "--n", "3", "--l", "1", "--series", "--cutoff", "4", "--prec", "9"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["result"]["correspondence"]["pass"], true);
    assert_eq!(v["params"]["prec"], 9);
}

#[test]
fn converge_is_deterministic_across_workers() {
    let args = ["converge", "--p", "5", "--n", "3", "--smax", "2", "--samples", "10", "--seed", "4"];
    let one = kz(&[&args[..], &["--workers", "1"]].concat());
    let four = kz(&[&args[..], &["--workers", "4"]].concat());
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(one.stdout, four.stdout);
}

#[test]
fn run_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "# demo\np = 7\ns = 1\nn = 3\nl = 1\n").unwrap();
    let v = json_of(&kz(&["gen", "--config", cfg.to_str().unwrap()]));
    assert_eq!(v["params"]["p"], 7);
    let v = json_of(&kz(&["gen", "--config", cfg.to_str().unwrap(), "--p", "5"]));
    assert_eq!(v["params"]["p"], 5);
}

#[test]
fn classic_reports_coefficient_failure() {
    let out = kz(&["classic", "--p", "5", "--smax", "2"]);
    assert_eq!(out.status.code(), Some(1));
    let v = json_of(&out);
    assert_eq!(v["result"]["levels"][1]["failing"], serde_json::json!([5, 6, 7, 10, 11, 12]));
    assert_eq!(v["result"]["levels"][1]["congruent_on_disc"], true);
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["gen", "--p", "4", "--s", "1", "--n", "3", "--l", "1"][..],
        &["gen", "--p", "5", "--s", "1", "--n", "4", "--l", "1"],
        &["gen", "--p", "3", "--s", "1", "--n", "5", "--l", "1"],
        &["gen", "--p", "5", "--s", "0", "--n", "3", "--l", "1"],
        &["gen", "--p", "5", "--s", "1", "--n", "3"],
        &["verify", "--input", "/nonexistent/file.json"],
        &["frobnicate"],
    ] {
        let out = kz(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
    }
    let out = Command::new(env!("CARGO_BIN_EXE_kz"))
        .args(["classic", "--p", "5"])
        .env("KZ_PADIC_WORKERS", "many")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}
