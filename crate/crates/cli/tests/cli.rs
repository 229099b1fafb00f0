use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_maslov-iter"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.display().to_string()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not JSON ({e}): {}\nstderr: {}",
            String::from_utf8_lossy(&out.stdout),
            String::from_utf8_lossy(&out.stderr)
        )
    })
}

const MODEL_LOOP: &str = r#"{"space": "canonical:1",
  "path": {"type": "exp", "generator": [[[0, 1], [0, 0]], [[0, 0], [0, -1]]], "domain": [0, 6.283185307179586]},
  "lagrangian": {"type": "identity"}, "method": "both"}"#;

#[test]
fn index_of_the_model_loop() {
    let dir = TempDir::new().unwrap();
    let cfg = write(dir.path(), "c.json", MODEL_LOOP);
    let csv = dir.path().join("traces.csv");
    let out = run(&["index", "--config", &cfg, "--csv-traces", csv.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    assert_eq!(v["index"], 2);
    assert_eq!(v["winding"]["index"], 2);
    assert_eq!(v["crossing_form"]["index"], 2);
    assert_eq!(v["end_nullity"][0], 2);
    let traces = std::fs::read_to_string(csv).unwrap();
    assert!(traces.starts_with("t,angle_0,angle_1\n"));
    assert!(traces.lines().count() > 10);
}

#[test]
fn index_of_a_constant_path() {
    let dir = TempDir::new().unwrap();
    let cfg = write(
        dir.path(),
        "c.json",
        r#"{"path": {"type": "constant", "matrix": [[[1, 0], [0, 0]], [[0, 0], [1, 0]]], "domain": [0, 1]},
            "lagrangian": {"type": "circle", "angle": 1.0}}"#,
    );
    let out = run(&["index", "--config", &cfg]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["index"], 0);
}

#[test]
fn malformed_config_exits_2() {
    let dir = TempDir::new().unwrap();
    let bad = write(dir.path(), "bad.json", "{\"space\": ");
    let out = run(&["index", "--config", &bad]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("config"));
    let unknown = write(dir.path(), "u.json", r#"{"trails": 5}"#);
    assert_eq!(run(&["verify", "--config", &unknown]).status.code(), Some(2));
    assert_eq!(run(&["index", "--config", "/nonexistent/x.json"]).status.code(), Some(2));
    assert_eq!(run(&["index"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn zero_trials_exit_2() {
    assert_eq!(run(&["verify", "--trials", "0"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "--suite", "nope", "--trials", "1"]).status.code(), Some(2));
}

#[test]
fn decompose_examples() {
    let dir = TempDir::new().unwrap();
    let cfg = write(dir.path(), "i.json", r#"{"matrix": [[[1, 0], [0, 0]], [[0, 0], [1, 0]]]}"#);
    let v = json(&run(&["decompose", "--config", &cfg]));
    assert_eq!(v["unitary"], serde_json::json!([[[1.0, 0.0], [0.0, 0.0]], [[0.0, 0.0], [1.0, 0.0]]]));
    assert!(v["product_residual"].as_f64().unwrap() < 1e-12);

    let (ch, sh) = (1f64.cosh(), 1f64.sinh());
    let text = format!(r#"{{"matrix": [[[{ch}, 0], [{sh}, 0]], [[{sh}, 0], [{ch}, 0]]]}}"#);
    let cfg = write(dir.path(), "cs.json", &text);
    let v = json(&run(&["decompose", "--config", &cfg]));
    for (i, row) in v["unitary"].as_array().unwrap().iter().enumerate() {
        for (j, z) in row.as_array().unwrap().iter().enumerate() {
            let want = if i == j { 1.0 } else { 0.0 };
            assert!((z[0].as_f64().unwrap() - want).abs() < 1e-10);
            assert!(z[1].as_f64().unwrap().abs() < 1e-10);
        }
    }

    let cfg = write(
        dir.path(),
        "loop.json",
        r#"{"path": {"type": "exp", "generator": [[[0, 6.283185307179586], [0, 0]], [[0, 0], [0, 0]]], "domain": [0, 1]}}"#,
    );
    let v = json(&run(&["decompose", "--config", &cfg]));
    assert_eq!(v["winding_pair"], serde_json::json!([1, 0]));
}

#[test]
fn decompose_rejects_non_symplectic_with_3() {
    let dir = TempDir::new().unwrap();
    let cfg = write(dir.path(), "m.json", r#"{"matrix": [[[2, 0], [0, 0]], [[0, 0], [2, 0]]]}"#);
    assert_eq!(run(&["decompose", "--config", &cfg]).status.code(), Some(3));
}

#[test]
fn selftest_passes_and_loose_tolerance_is_numerical() {
    let out = run(&["selftest"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let table = String::from_utf8_lossy(&out.stdout);
    assert!(table.contains("convention-sign") && table.contains("pass"));
    assert_eq!(run(&["selftest", "--tol", "1e-1"]).status.code(), Some(3));
}

fn verify_report(dir: &Path, name: &str, extra: &[&str], threads: &str) -> (i32, Value) {
    let out_path = dir.join(name);
    let mut args = vec!["verify", "--out", out_path.to_str().unwrap()];
    args.extend_from_slice(extra);
    let out = bin().args(&args).env("MASLOV_ITER_THREADS", threads).output().unwrap();
    let text = std::fs::read_to_string(&out_path).unwrap();
    let mut v: Value = serde_json::from_str(&text).unwrap();
    let obj = v.as_object_mut().unwrap();
    obj.remove("elapsed_seconds");
    obj.remove("environment");
    (out.status.code().unwrap(), v)
}

#[test]
fn campaigns_are_deterministic_across_thread_counts() {
    let dir = TempDir::new().unwrap();
    let args = ["--suite", "all", "--trials", "3", "--seed", "99"];
    let (c1, a) = verify_report(dir.path(), "a.json", &args, "1");
    let (c2, b) = verify_report(dir.path(), "b.json", &args, "4");
    assert_eq!(c1, 0);
    assert_eq!(c1, c2);
    assert_eq!(a, b);
    assert_eq!(a["totals"]["passed"], 3 * 17);
    assert_eq!(a["master_seed"], 99);
}

#[test]
fn bad_thread_count_is_a_usage_error() {
    let out = bin()
        .args(["verify", "--trials", "1", "--suite", "sign"])
        .env("MASLOV_ITER_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn replay_reproduces_a_trial() {
    let dir = TempDir::new().unwrap();
    let (_, full) = verify_report(dir.path(), "full.json", &["--suite", "bott", "--trials", "4"], "2");
    let rec = &full["records"][2];
    let seed = rec["seed"].as_u64().unwrap().to_string();
    let (code, one) = verify_report(dir.path(), "one.json", &["--suite", "bott", "--replay", &seed], "1");
    assert_eq!(code, 0);
    let again: Vec<&Value> = one["records"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|r| r["check"] == rec["check"])
        .collect();
    assert_eq!(again.len(), 1);
    assert_eq!(again[0]["verdicts"], rec["verdicts"]);
}

#[test]
fn tolerance_flag_overrides_rank_threshold() {
    let dir = TempDir::new().unwrap();
    let (_, v) = verify_report(dir.path(), "t.json", &["--suite", "sign", "--trials", "1", "--tol", "1e-9"], "1");
    assert_eq!(v["tolerances"]["rank"], 1e-9);
}
