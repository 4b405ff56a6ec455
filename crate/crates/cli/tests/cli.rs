use std::path::{Path, PathBuf};
use std::process::Command;

use jsonschema::JSONSchema;
use serde_json::Value;

struct Output {
    code: i32,
    stdout: String,
    stderr: String,
}

fn run(args: &[&str]) -> Output {
    let out = Command::new(env!("CARGO_BIN_EXE_intermod")).args(args).output().expect("binary runs");
    Output {
        code: out.status.code().expect("exit code"),
        stdout: String::from_utf8(out.stdout).expect("utf-8"),
        stderr: String::from_utf8(out.stderr).expect("utf-8"),
    }
}

fn manifest_dir() -> &'static Path {
    Path::new(env!("CARGO_MANIFEST_DIR"))
}

fn core_dir() -> PathBuf {
    manifest_dir().join("../core")
}

fn json_ok(args: &[&str], schema: &str) -> Value {
    let mut full = vec!["--format", "json"];
    full.extend_from_slice(args);
    let out = run(&full);
    assert_eq!(out.code, 0, "{args:?}: {}", out.stderr);
    let value: Value = serde_json::from_str(&out.stdout).expect("valid json");
    let path = manifest_dir().join("schema").join(format!("{schema}.schema.json"));
    let schema: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let compiled = JSONSchema::compile(&schema).expect("schema compiles");
    if let Err(errors) = compiled.validate(&value) {
        let msgs: Vec<String> = errors.map(|e| format!("{} at {}", e, e.instance_path)).collect();
        panic!("{args:?} does not match {schema}: {msgs:#?}");
    }
    value
}

fn scratch_dir(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("intermod-cli-{}-{name}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn subgroups() {
    let out = run(&["subgroups", "14"]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.contains("no proper nontrivial Δ"));
    let v = json_ok(&["subgroups", "37"], "subgroups");
    let genera: Vec<u64> = v.as_array().unwrap().iter().map(|r| r["genus"].as_u64().unwrap()).collect();
    assert_eq!(genera, vec![16, 10, 4, 4]);
    assert_eq!(json_ok(&["subgroups", "12"], "subgroups"), Value::Array(vec![]));
}

#[test]
fn invariants() {
    let v = json_ok(&["invariants", "26", "--delta", "5"], "invariants");
    assert_eq!(v[0]["invariants"]["genus"], 4);
    assert_eq!(v[0]["covering"]["deg_x1_to_delta"], 2);
    json_ok(&["invariants", "37"], "invariants");
    assert_eq!(run(&["invariants", "26", "--delta", "2"]).code, 1);
}

#[test]
fn decide_worked_cases() {
    let v = json_ok(&["decide", "37", "--delta", "1,10,11,26,27,36"], "decision");
    assert_eq!((v["verdict"].as_str(), v["reason"].as_str()), (Some("Finite"), Some("RamificationObstruction")));
    let v = json_ok(&["decide", "50", "--delta", "9,11"], "decision");
    assert_eq!((v["verdict"].as_str(), v["reason_detail"].as_str()), (Some("Infinite"), Some("RuledOverQ")));
    assert_eq!(v["rigor"], "verified");
    let v = json_ok(&["--no-fixtures", "decide", "50", "--delta", "9,11"], "decision");
    assert_eq!(v["rigor"], "cited");
    let out = run(&["decide", "37", "--delta", "6"]);
    assert!(out.stdout.contains("SquareDegreeObstruction"), "{}", out.stdout);
}

#[test]
fn survey_markdown_matches_golden() {
    let out = run(&["survey", "--format", "md"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let golden = std::fs::read_to_string(core_dir().join("tests/golden/survey81.md")).unwrap();
    assert_eq!(out.stdout, golden);
}

#[test]
fn survey_output_is_deterministic() {
    let a = json_ok(&["survey", "--max-n", "40"], "survey");
    let b = run(&["--format", "json", "survey", "--max-n", "40"]);
    assert_eq!(serde_json::to_string_pretty(&a).unwrap() + "\n", b.stdout);
    assert_eq!(run(&["survey", "--max-n", "12"]).stdout, "");
    assert_eq!(run(&["survey", "--max-n", "2"]).code, 1);
}

#[test]
fn number_theory_commands() {
    assert_eq!(run(&["classnumber", "-172"]).stdout, "3\n");
    let v = json_ok(&["classnumber", "-148"], "classnumber");
    assert_eq!(v["class_number"], 2);
    assert_eq!(run(&["classnumber", "-5"]).code, 1);
    assert_eq!(run(&["fixedpoints", "37"]).stdout, "2\n");
    let v = json_ok(&["fixedpoints", "43"], "fixedpoints");
    assert_eq!((v["fixed_points"].as_u64(), v["genus_x0_plus"].as_u64()), (Some(4), Some(1)));
    assert_eq!(run(&["fixedpoints", "2"]).code, 1);
    assert_eq!(run(&["fixedpoints", "39"]).code, 1);
}

#[test]
fn classify_quadric() {
    let v = json_ok(&["classify-quadric", "1,0,0,0;0,1,0,0;0,0,-1,0;0,0,0,-5"], "classify-quadric");
    assert_eq!(v["verdict"], "RuledOverField(5)");
    let v = json_ok(&["classify-quadric", "--poly", "3*x^2 - 3*y^2 - z^2"], "classify-quadric");
    assert_eq!(v["verdict"], "ConeOverQ");
    assert_eq!(run(&["classify-quadric", "1,2;3,4"]).code, 1);
    assert_eq!(run(&["classify-quadric", "--poly", "x^3"]).code, 1);
}

#[test]
fn model_from_fixture() {
    let path = core_dir().join("fixtures/N26_delta1-5-21-25q64.txt");
    let v = json_ok(&["model", "--fixture", path.to_str().unwrap()], "model");
    assert_eq!(v["rigor"], "verified");
    assert_eq!(v["classification"]["verdict"], "RuledOverQ");
    let text = run(&["model", "--fixture", path.to_str().unwrap()]).stdout;
    assert!(text.contains("x*w - y*z + z^2"), "{text}");
    let genus3 = core_dir().join("fixtures/N49_delta1-6-8-13-15-20-22-27-29-34-36-41-43-48q113.txt");
    let v = json_ok(&["model", "--fixture", genus3.to_str().unwrap()], "model");
    assert_eq!(v["genus"], 3);
    assert_eq!(run(&["model", "--fixture", "/nonexistent/fixture.txt"]).code, 2);
}

#[test]
fn obstruct() {
    let v = json_ok(&["obstruct", "37", "--delta", "6"], "obstruct");
    assert_eq!(v["square_degree"]["numerics"]["beta_degree"], 6);
    assert!(v["ramification"].is_null());
    let v = json_ok(&["obstruct", "37", "--delta", "10"], "obstruct");
    assert_eq!(v["ramification"]["result"]["status"], "Obstructed");
    let v = json_ok(&["obstruct", "43", "--delta", "2"], "obstruct");
    assert_eq!(v["square_degree"]["numerics"]["beta_degree"], 2);
    assert_eq!(run(&["obstruct", "29", "--delta", "12"]).code, 1);
}

#[test]
fn facts_validate() {
    let v = json_ok(&["facts", "validate"], "facts-validate");
    assert_eq!(v["report"]["gonality_rows"], 50);
    let data = core_dir().join("data");
    assert_eq!(run(&["--data-dir", data.to_str().unwrap(), "facts", "validate"]).code, 0);
}

#[test]
fn exit_codes_for_bad_data() {
    let out = run(&["--data-dir", "/nonexistent/data", "facts", "validate"]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("missing"), "{}", out.stderr);

    let dir = scratch_dir("tampered");
    for entry in std::fs::read_dir(core_dir().join("data")).unwrap() {
        let path = entry.unwrap().path();
        std::fs::copy(&path, dir.join(path.file_name().unwrap())).unwrap();
    }
    let t2 = dir.join("table2.tsv");
    let text = std::fs::read_to_string(&t2).unwrap().replace("26\t1\t1,5\t4\t", "26\t1\t1,5\t5\t");
    std::fs::write(&t2, text).unwrap();
    let out = run(&["--data-dir", dir.to_str().unwrap(), "decide", "26", "--delta", "5"]);
    assert_eq!(out.code, 3);
    assert!(out.stderr.contains("printed 5, computed 4"), "{}", out.stderr);

    std::fs::write(dir.join("table2.tsv"), "26\tx\n").unwrap();
    assert_eq!(run(&["--data-dir", dir.to_str().unwrap(), "facts", "validate"]).code, 2);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn fixtures_dir_and_usage_errors() {
    let dir = scratch_dir("fixtures");
    std::fs::write(dir.join("broken.txt"), "qexp-fixture v1\nlevel 26\n").unwrap();
    let out = run(&["--fixtures-dir", dir.to_str().unwrap(), "decide", "26", "--delta", "5"]);
    assert_eq!(out.code, 2, "{}", out.stderr);
    std::fs::remove_dir_all(&dir).unwrap();

    assert_eq!(run(&["frobnicate"]).code, 1);
    assert_eq!(run(&["decide", "26"]).code, 1);
    assert_eq!(run(&["decide", "26", "--delta", "25"]).code, 1);
    assert_eq!(run(&["--format", "yaml", "survey"]).code, 1);
    assert_eq!(run(&["--help"]).code, 0);
}
