use std::path::Path;
use std::process::Command;

fn kcdr() -> Command {
    Command::new(env!("CARGO_BIN_EXE_kcdr"))
}

fn write(dir: &Path, name: &str, body: &str) -> std::path::PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p
}

#[test]
fn missing_config_is_usage_error() {
    let out = kcdr().arg("solver-bench").output().unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn unknown_experiment_is_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "c.json", r#"{"experiment":"solver-bench","dataset":{"kind":"line","dim":1}}"#);
    let out = kcdr().args(["bogus", "--config"]).arg(&cfg).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn invalid_config_is_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "c.json",
        r#"{"experiment":"dimred-sweep","dataset":{"kind":"line","dim":1},"repetitions":2}"#,
    );
    let out = kcdr().args(["dimred-sweep", "--config"]).arg(&cfg).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn help_exits_zero() {
    let out = kcdr().arg("--help").output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("--config"));
}

#[test]
fn solver_bench_writes_csv_and_json() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "c.json",
        r#"{"experiment":"solver-bench","dataset":{"kind":"line","dim":1},"instances":20}"#,
    );
    let base = dir.path().join("bench");
    let out = kcdr()
        .args(["solver-bench", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(&base)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = std::fs::read_to_string(dir.path().join("bench.csv")).unwrap();
    assert!(csv.starts_with("check,passed,failed,ms"));
    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("bench.json")).unwrap()).unwrap();
    assert_eq!(json["violations"], 0);
    assert_eq!(json["config"]["instances"], 20);
}

#[test]
fn overrides_reach_the_report() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "c.json",
        r#"{"experiment":"streaming-demo","dataset":{"kind":"grid-uniform","dim":3,"n":40,"delta":64},"stream_t":2}"#,
    );
    let out = kcdr()
        .args(["streaming-demo", "--config"])
        .arg(&cfg)
        .args(["--mode", "sketch", "--eps", "0.25", "--alpha", "3", "--seed", "9"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let json: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(json["stream_config"]["mode"], "sketch");
    assert_eq!(json["stream_config"]["eps"], 0.25);
    assert_eq!(json["stream_config"]["alpha"], 3.0);
    assert_eq!(json["config"]["seed"], 9);
    assert_eq!(json["centers_genuine"], true);
}

#[test]
fn exact_flag_turns_fallback_into_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "c.json",
        r#"{"experiment":"dimred-sweep","dataset":{"kind":"gaussian-clusters","dim":4,"n":300,"k":4},"repetitions":1}"#,
    );
    let ok = kcdr().args(["dimred-sweep", "--config"]).arg(&cfg).output().unwrap();
    assert_eq!(ok.status.code(), Some(0));
    let err = kcdr().args(["dimred-sweep", "--exact", "--config"]).arg(&cfg).output().unwrap();
    assert_eq!(err.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&err.stderr).contains("oracle budget exceeded"));
}

#[test]
fn lowerbound_prints_json() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "c.json",
        r#"{"experiment":"lowerbound-demo","dataset":{"kind":"orthonormal-plus-origin","dim":16,"k":16},"t_values":[16,2],"demo_seeds":3}"#,
    );
    let out = kcdr().args(["lowerbound-demo", "--config"]).arg(&cfg).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let json: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(json["rows"].as_array().unwrap().len(), 2);
}
