use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn rosa(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rosa"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn scratch_dir(name: &str) -> PathBuf {
    let d = std::env::temp_dir().join(format!("rosa-cli-{}-{name}", std::process::id()));
    fs::create_dir_all(&d).unwrap();
    d
}

#[test]
fn edgeword_and_spectrum() {
    let o = rosa(&["edgeword", "--n", "4", "--kind", "subrosa"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "020020");

    let o = rosa(&["spectrum", "--n", "4", "--edgeword", "020020"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let l: Vec<f64> = v["lambdas"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_f64().unwrap())
        .collect();
    assert!((l[0] - 6.828).abs() < 1e-3 && (l[1] - 1.172).abs() < 1e-3);
    assert_eq!(v["classification"], "NonPlanar");
    assert_eq!(v["firstColumn"], serde_json::json!([4, 2, 0, -2]));
}

#[test]
fn select_passes_all_checks() {
    let o = rosa(&["select", "--n", "6", "--max-i", "500"]);
    assert!(o.status.success());
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["i"], 14);
    for (_, ok) in v["checks"].as_object().unwrap() {
        assert_eq!(ok, &Value::Bool(true));
    }
}

#[test]
fn output_is_deterministic() {
    let args = [
        "generate",
        "--n",
        "4",
        "--kind",
        "subrosa",
        "--iterations",
        "2",
    ];
    let a = rosa(&args);
    let b = rosa(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let args = [
        "planarity",
        "--n",
        "6",
        "--kind",
        "subrosa",
        "--iterations",
        "4",
    ];
    assert_eq!(rosa(&args).stdout, rosa(&args).stdout);
}

#[test]
fn generate_then_render() {
    let d = scratch_dir("render");
    let patch = d.join("patch.json");
    let svg = d.join("patch.svg");
    let o = rosa(&[
        "generate",
        "--n",
        "4",
        "--kind",
        "subrosa",
        "--iterations",
        "1",
        "--out",
        patch.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let file: Value = serde_json::from_str(&fs::read_to_string(&patch).unwrap()).unwrap();
    let tiles = file["tiles"].as_array().unwrap().len();
    assert_eq!(file["n"], 4);

    let o = rosa(&[
        "render",
        "--in",
        patch.to_str().unwrap(),
        "--out",
        svg.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let text = fs::read_to_string(&svg).unwrap();
    assert_eq!(text.matches("<polygon").count(), tiles);
    fs::remove_dir_all(d).unwrap();
}

#[test]
fn exit_codes() {
    let o = rosa(&["edgeword", "--n", "5", "--kind", "subrosa"]);
    assert_eq!(o.status.code(), Some(2));
    let o = rosa(&["frobnicate"]);
    assert_eq!(o.status.code(), Some(2));
    let o = rosa(&["render", "--in", "/nonexistent/patch.json"]);
    assert_eq!(o.status.code(), Some(1));
    let err: Value = serde_json::from_slice(&o.stderr).unwrap();
    assert!(err["error"].is_string() && err["message"].is_string());
    let o = rosa(&["tileability", "--n", "4", "--edgeword", "0230"]);
    assert_ne!(o.status.code(), Some(0));
    assert!(rosa(&["--help"]).status.success());
}

#[test]
fn config_file_supplies_defaults() {
    let d = scratch_dir("config");
    let cfg = d.join("run.conf");
    fs::write(&cfg, "# defaults\nn = 6\n").unwrap();
    let o = rosa(&[
        "--config",
        cfg.to_str().unwrap(),
        "edgeword",
        "--kind",
        "subrosa",
    ]);
    assert_eq!(stdout(&o).trim(), "024020020420");
    fs::remove_dir_all(d).unwrap();
}
