use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_consensus"))
}

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

fn write_input(dir: &tempfile::TempDir, text: &str) -> String {
    let path = dir.path().join("input.json");
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

fn floats(v: &serde_json::Value) -> Vec<f64> {
    v.as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect()
}

#[test]
fn analyze_reports_alpha() {
    let out = run(&["analyze", fixture("seven_agent.json").to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    let alpha = floats(&v["alpha"]);
    for (a, e) in alpha.iter().zip([26.0, 26.0, 13.0, 18.0, 27.0, 0.0, 0.0]) {
        assert!((a - e / 110.0).abs() < 1e-11);
    }
    assert_eq!(v["nu"], 2);
    assert_eq!(v["b"], 5);
    assert_eq!(v["spectral_class"], "proper, not regular");
    // every row of the regularized limit equals alpha at the printed precision
    for row in v["regularized_limit"].as_array().unwrap() {
        assert_eq!(floats(row), alpha);
    }
}

#[test]
fn analyze_is_deterministic() {
    let path = fixture("seven_agent.json");
    let a = run(&["analyze", path.to_str().unwrap(), "--tau", "10"]);
    let b = run(&["analyze", path.to_str().unwrap(), "--tau", "10"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let v = json(&a);
    assert_eq!(v["resolvent_probe"]["tau"], 10.0);
    assert!(v["resolvent_probe"]["max_deviation_from_limit"].as_f64().unwrap() > 1e-3);
}

#[test]
fn simulate_reaches_consensus_and_lists_ignored_agents() {
    for mode in ["orthogonal", "tilde"] {
        let out = run(&[
            "simulate",
            fixture("seven_agent.json").to_str().unwrap(),
            "--mode",
            mode,
        ]);
        assert!(out.status.success());
        let t = &json(&out)["trajectory"];
        assert!((t["consensus"].as_f64().unwrap() - 324.0 / 110.0).abs() < 1e-9);
        let ignored: Vec<u64> = t["ignored_by_alpha"]
            .as_array()
            .unwrap()
            .iter()
            .map(|x| x["agent"].as_u64().unwrap())
            .collect();
        assert_eq!(ignored, vec![6, 7]);
        assert_eq!(t["mode"], mode);
    }
}

#[test]
fn simulate_without_opinions_fails() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_input(&dir, r#"{"matrix": [[1.0]]}"#);
    let out = run(&["simulate", &path]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("initial_opinions"));
}

#[test]
fn improper_matrix_exits_with_two() {
    let out = run(&["analyze", fixture("swap.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("{1, 2}") && err.contains("period 2"), "{err}");
    assert!(out.stdout.is_empty());
}

#[test]
fn parse_and_validation_errors_exit_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_input(&dir, "{\n  \"matrix\": [[1.0, 0.0]\n");
    let out = run(&["analyze", &path]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line"));

    let path = write_input(&dir, r#"{"matrix": [[1.0, 0.0]]}"#);
    let out = run(&["analyze", &path]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("not square"));

    let path = write_input(&dir, r#"{"matrix": [[0.5, 0.6], [0.5, 0.5]]}"#);
    let out = run(&["analyze", &path]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("row 1 sums to 1.1"));

    let out = run(&["analyze", "/nonexistent/input.json"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn usage_errors_exit_with_one() {
    assert_eq!(run(&[]).status.code(), Some(1));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(run(&["verify"]).status.code(), Some(1));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn verify_builtin_passes() {
    let out = run(&["verify", "--builtin"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let v = json(&out);
    assert_eq!(v["passed"], true);
    let systems: Vec<&str> = v["systems"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| s["system"].as_str().unwrap())
        .collect();
    assert_eq!(systems, vec!["seven-agent", "five-agent", "inverse row sums"]);
}

#[test]
fn verify_input_file() {
    let out = run(&["verify", fixture("five_agent.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let out = run(&["verify", fixture("seven_agent.json").to_str().unwrap(), "--oracle-cap", "3"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn verification_failure_exits_with_three() {
    // one iteration is enough for the analysis but starves the resolvent,
    // squaring and simulation routes that verify compares against
    let out = run(&["verify", fixture("seven_agent.json").to_str().unwrap(), "--max-iter", "1"]);
    assert_eq!(out.status.code(), Some(3));
    let v = json(&out);
    assert_eq!(v["passed"], false);
    assert!(v["failed"].as_u64().unwrap() >= 3);
}

#[test]
fn export_dot_and_output_file() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("graph.dot");
    let out = run(&[
        "export-dot",
        fixture("seven_agent.json").to_str().unwrap(),
        "--output",
        target.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let dot = std::fs::read_to_string(target).unwrap();
    assert!(dot.starts_with("digraph influence {"));
    assert!(dot.contains("label=\"a6\""));
    assert!(dot.contains("class 3 (nonbasic)"));

    // the digraph is available even for improper matrices
    let out = run(&["export-dot", fixture("swap.json").to_str().unwrap()]);
    assert!(out.status.success());
}
