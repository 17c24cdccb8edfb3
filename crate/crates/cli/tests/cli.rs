use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

const ARNOLD: &str = r#"{"type":"arnold","c":0.3,"a":0.1}"#;

fn rotlab(args: &[&str], threads: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rotlab"))
        .args(args)
        .env("ROTLAB_THREADS", threads)
        .output()
        .expect("run rotlab")
}

fn schema(name: &str) -> Value {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("schemas").join(format!("{name}.json"));
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn assert_valid(name: &str, doc: &Value) {
    let validator = jsonschema::validator_for(&schema(name)).unwrap();
    let errors: Vec<String> = validator.iter_errors(doc).map(|e| format!("{e} at {}", e.instance_path())).collect();
    assert!(errors.is_empty(), "{name}: {errors:?}");
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("{e}: {}", String::from_utf8_lossy(&out.stderr))
    })
}

/// One small run per command.
fn cases() -> Vec<(&'static str, Vec<&'static str>)> {
    vec![
        ("rotnum", vec!["rotnum", "--map", ARNOLD, "--n", "20000"]),
        ("rotnum", vec!["rotnum", "--map", r#"{"type":"torus","v":[0.3,0.5]}"#, "--n", "1000"]),
        ("rotset", vec!["rotset", "--map", r#"{"type":"torus","v":[0.3,0.5]}"#, "--n", "2000", "--grid", "3"]),
        ("rotset", vec!["rotset", "--map", ARNOLD, "--n", "2000"]),
        (
            "solrot",
            vec!["solrot", "--map", r#"{"type":"solenoid","c":0.3,"levels":{"2":0.05}}"#, "--n", "5000", "--levels", "2,4"],
        ),
        ("translate-diagnose", vec!["translate-diagnose", "--group", "profinite", "--alpha", "1"]),
        (
            "translate-diagnose",
            vec!["translate-diagnose", "--group", "circle", "--alpha", "0.7548776662", "--test", "equidistribution", "--n", "5000"],
        ),
        (
            "translate-diagnose",
            vec!["translate-diagnose", "--group", "solenoid", "--alpha", "0.3;1", "--test", "birkhoff", "--n", "2000"],
        ),
        (
            "translate-diagnose",
            vec!["translate-diagnose", "--group", "torus", "--test", "fourier", "--samples", "2000", "--seed", "7"],
        ),
        ("translate-diagnose", vec!["translate-diagnose", "--test", "halmos", "--multiplier", "2", "--cap", "6"]),
        ("semiconj", vec!["semiconj", "--map", ARNOLD, "--n", "20000", "--m", "32"]),
        ("bmv", vec!["bmv", "--map", ARNOLD, "--n", "4000", "--seed", "3"]),
        ("bmv", vec!["bmv", "--map", r#"{"type":"solenoid","c":0.25}"#, "--n", "1000"]),
        ("suspension-check", vec!["suspension-check", "--map", ARNOLD, "--n", "1000", "--samples", "20"]),
        ("entropy", vec!["entropy", "--map", r#"{"type":"doubling"}"#, "--grid", "4097", "--n", "4"]),
        (
            "entropy-scan",
            vec!["entropy-scan", "--c-values", "0,0.5", "--a-values", "0.1", "--n", "2000", "--grid", "1025", "--n-values", "4,8,16"],
        ),
        ("orbit", vec!["orbit", "--map", r#"{"type":"solenoid","c":0.3}"#, "--n", "5"]),
    ]
}

#[test]
fn runs_are_byte_identical_and_schema_valid() {
    for (name, args) in cases() {
        let a = rotlab(&args, "1");
        let b = rotlab(&args, "4");
        assert_eq!(a.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&a.stderr));
        assert_eq!(a.stdout, b.stdout, "{args:?} differs across runs");
        let doc = json_of(&a);
        assert_eq!(doc["command"], name);
        assert_valid(name, &doc);
    }
}

#[test]
fn csv_output_is_deterministic() {
    for (_, mut args) in cases() {
        args.extend(["--format", "csv"]);
        let a = rotlab(&args, "2");
        let b = rotlab(&args, "3");
        assert_eq!(a.status.code(), Some(0), "{args:?}");
        assert!(!a.stdout.is_empty(), "{args:?}");
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn rotnum_arnold_matches_oracle() {
    let doc = json_of(&rotlab(&["rotnum", "--map", ARNOLD, "--n", "1000000"], "2"));
    let est = doc["estimate"].as_f64().unwrap();
    assert!((est - 0.28852216).abs() < 1e-5, "{est}");
    assert_eq!(doc["config"]["n"], 1_000_000);
}

#[test]
fn rotnum_rigid_third() {
    let doc = json_of(&rotlab(&["rotnum", "--map", r#"{"type":"rigid","alpha":"1/3"}"#], "1"));
    assert_eq!(doc["rational_detection"], "1/3");
    assert_eq!(doc["exact"], "1/3");
}

#[test]
fn rotset_rigid_torus_single_vertex() {
    let doc = json_of(&rotlab(&["rotset", "--map", r#"{"type":"torus","v":[0.25,0.6]}"#, "--n", "5000"], "1"));
    assert_eq!(doc["hull"]["vertices"].as_array().unwrap().len(), 1);
    assert_eq!(doc["degenerate"], true);
}

#[test]
fn profinite_one_is_monothetic() {
    let doc = json_of(&rotlab(&["translate-diagnose", "--group", "profinite", "--alpha", "1"], "1"));
    assert_eq!(doc["verdict"], "positive");
}

#[test]
fn suspension_arnold_residuals() {
    let out = rotlab(&["suspension-check", "--map", ARNOLD, "--samples", "100"], "1");
    assert_eq!(out.status.code(), Some(0));
    let doc = json_of(&out);
    assert!(doc["max_residual"].as_f64().unwrap() < 1e-9);
    assert!(doc["telescoping_max"].as_f64().unwrap() < 1e-6);
}

#[test]
fn entropy_doubling_range() {
    let doc = json_of(&rotlab(&["entropy", "--map", r#"{"type":"doubling"}"#], "2"));
    let h = doc["estimate"].as_f64().unwrap();
    assert!((0.55..=0.80).contains(&h), "{h}");
}

#[test]
fn warnings_exit_two() {
    let out = rotlab(&["rotnum", "--map", r#"{"type":"arnold","c":0.3,"a":0.15}"#, "--n", "50"], "1");
    assert_eq!(out.status.code(), Some(2));
    let doc = json_of(&out);
    assert!(!doc["warnings"].as_array().unwrap().is_empty());
    assert_valid("rotnum", &doc);
}

#[test]
fn errors_exit_one_with_json() {
    let bad = [
        vec!["rotnum", "--map", r#"{"type":"arnold","c":0.3,"a":0.5}"#],
        vec!["rotnum", "--map", r#"{"type":"nope"}"#],
        vec!["rotnum"],
        vec!["semiconj", "--map", r#"{"type":"torus","v":[0.1,0.2]}"#],
        vec!["translate-diagnose", "--group", "circle"],
        vec!["no-such-command"],
        vec!["entropy", "--map", r#"{"type":"doubling"}"#, "--grid", "9", "--n-values", "1,2,3,4,5,6"],
    ];
    for args in bad {
        let out = rotlab(&args, "1");
        assert_eq!(out.status.code(), Some(1), "{args:?}");
        assert!(out.stdout.is_empty(), "{args:?}");
        let err: Value = serde_json::from_slice(&out.stderr).expect("error json");
        assert_valid("error", &err);
    }
}

#[test]
fn budget_errors_carry_partial_counts() {
    let out = rotlab(&["entropy", "--map", r#"{"type":"doubling"}"#, "--grid", "9", "--n-values", "1,2,3,4,5,6"], "1");
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"]["kind"], "budget-exceeded");
    assert!(err["error"]["partial"]["raw_counts"].is_array());
}

#[test]
fn out_file_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let args = ["rotnum", "--map", ARNOLD, "--n", "10000"];
    let stdout = rotlab(&args, "1").stdout;
    let mut with_out = args.to_vec();
    let p = path.to_str().unwrap();
    with_out.extend(["--out", p]);
    let out = rotlab(&with_out, "1");
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    assert_eq!(std::fs::read(&path).unwrap(), stdout);
    let leftovers = std::fs::read_dir(dir.path()).unwrap().count();
    assert_eq!(leftovers, 1);
}

#[test]
fn map_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("map.json");
    std::fs::write(&path, ARNOLD).unwrap();
    let from_file = json_of(&rotlab(&["rotnum", "--map", path.to_str().unwrap(), "--n", "1000"], "1"));
    let inline = json_of(&rotlab(&["rotnum", "--map", ARNOLD, "--n", "1000"], "1"));
    assert_eq!(from_file, inline);
}

#[test]
fn schema_command_prints_published_schema() {
    for name in ["rotnum", "entropy", "error"] {
        let doc = json_of(&rotlab(&["schema", name], "1"));
        assert_eq!(doc, schema(name));
    }
    assert_eq!(rotlab(&["schema", "nope"], "1").status.code(), Some(1));
}

#[test]
fn help_exits_zero() {
    assert_eq!(rotlab(&["--help"], "1").status.code(), Some(0));
    assert_eq!(rotlab(&["rotnum", "--help"], "1").status.code(), Some(0));
}

#[test]
fn bad_thread_count_is_an_error() {
    assert_eq!(rotlab(&["schema", "rotnum"], "zero").status.code(), Some(1));
}
