use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn oklab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_oklab")).args(args).env_remove("OKLAB_CATALOG").output().expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn vertices(report: &Value) -> Vec<Value> {
    let mut v = report["checks"][0]["data"]["body"]["vertices"].as_array().unwrap().clone();
    v.sort_by_key(|x| x.to_string());
    v
}

#[test]
fn body_of_degree_three_on_p1_is_a_segment() {
    let out = oklab(&["body", "--testbed", "p1", "--class", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json_of(&out);
    assert_eq!(vertices(&r), vec![serde_json::json!([[0, 1]]), serde_json::json!([[3, 1]])]);
    assert_eq!(r["checks"][0]["data"]["body"]["exact"], true);
}

#[test]
fn body_of_hyperplane_on_p2_is_the_unit_simplex() {
    let out = oklab(&["body", "--testbed", "p2", "--class", "1,0,0", "--flag", "cone:1,2"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json_of(&out);
    assert_eq!(r["checks"][0]["data"]["volume"], serde_json::json!([1, 2]));
    assert_eq!(vertices(&r).len(), 3);
}

#[test]
fn configuration_errors_exit_two() {
    assert_eq!(oklab(&["body", "--testbed", "p1xp1", "--class", "0,0,0,0"]).status.code(), Some(2));
    assert_eq!(oklab(&["body", "--testbed", "nowhere", "--class", "1"]).status.code(), Some(2));
    assert_eq!(oklab(&["body", "--testbed", "p2", "--class", "1", "--flag", "cone:0,0"]).status.code(), Some(2));
    assert_eq!(oklab(&["verify", "--suite", "everything"]).status.code(), Some(2));
    assert_eq!(oklab(&["verify", "--suite", "base", "--grid-den", "0"]).status.code(), Some(2));
    let out = oklab(&["verify", "--suite", "additivity", "--testbed", "p1xp1", "--flag", "cone:2,0"]);
    assert_eq!(out.status.code(), Some(2), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn additivity_on_the_quadric_is_all_equal() {
    let out = oklab(&["verify", "--suite", "additivity", "--testbed", "p1xp1"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json_of(&out);
    let checks = r["checks"].as_array().unwrap();
    assert!(checks.len() >= 100);
    assert!(checks.iter().all(|c| c["data"]["verdict"]["status"] == "equal"));
    assert_eq!(r["all_pass"], true);
}

#[test]
fn reports_are_byte_deterministic() {
    let args = ["verify", "--suite", "cor15", "--testbed", "f1", "--seed", "7", "--samples", "40"];
    let a = oklab(&args);
    let b = oklab(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let r = json_of(&a);
    assert_eq!(r["config"]["seed"], 7);
    assert!(r["checks"].as_array().unwrap().iter().all(|c| c["data"]["seed"] == 7));
    let other = oklab(&["verify", "--suite", "cor15", "--testbed", "f1", "--seed", "8", "--samples", "40"]);
    assert_ne!(a.stdout, other.stdout);
}

#[test]
fn reports_carry_no_floating_point() {
    let out = oklab(&["verify", "--suite", "lemma61", "--testbed", "p2"]);
    let text = String::from_utf8(out.stdout).unwrap();
    fn walk(v: &Value) {
        match v {
            Value::Number(n) => assert!(n.is_i64() || n.is_u64(), "float {n}"),
            Value::Array(a) => a.iter().for_each(walk),
            Value::Object(o) => o.values().for_each(walk),
            _ => {}
        }
    }
    walk(&serde_json::from_str(&text).unwrap());
}

#[test]
fn verify_all_on_p1_is_the_degree_case() {
    let out = oklab(&["verify", "--suite", "all", "--testbed", "p1"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let r = json_of(&out);
    assert_eq!(r["summary"]["base"]["failed"], 0);
    assert!(r["summary"]["base"]["total"].as_u64().unwrap() >= 4);
}

#[test]
fn search_strict_finds_none_on_p2() {
    let out = oklab(&["search-strict", "--testbed", "p2"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json_of(&out);
    assert_eq!(r["checks"][0]["data"]["outcome"], "none_found");
    assert_eq!(r["notes"].as_array().unwrap().len(), 1);
}

#[test]
fn csv_rows_use_fractions() {
    let out = oklab(&["mu", "--testbed", "f1", "--class", "2,1", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("suite,key,pass,data,witness"));
    let row = lines.next().unwrap();
    assert!(row.starts_with("mu,"));
    assert!(row.contains("mu="));
}

#[test]
fn intersect_and_mixedvol_agree() {
    let i = json_of(&oklab(&["intersect", "--testbed", "p1xp1", "--classes", "2,1;1,2"]));
    assert_eq!(i["checks"][0]["data"]["intersection"], serde_json::json!([5, 1]));
    let m = json_of(&oklab(&["mixedvol", "--testbed", "p1xp1", "--classes", "2,1;1,2"]));
    assert_eq!(m["checks"][0]["data"]["mixed_volume"], serde_json::json!([5, 2]));
}

fn write(dir: &Path, name: &str, text: &str) {
    std::fs::write(dir.join(name), text).unwrap();
}

#[test]
fn mixedvol_reads_polytope_files() {
    let dir = tempfile::tempdir().unwrap();
    write(
        dir.path(),
        "p.json",
        r#"[{"dim": 2, "vertices": [[0,0],[1,0],[0,1],[1,1]]}, {"dim": 2, "vertices": [[0,0],[[1,2],1],[0,1]]}]"#,
    );
    let out = oklab(&["mixedvol", "--polytopes", dir.path().join("p.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    // V(unit square, L) is half the sum of the widths of L: (1/2 + 1)/2
    assert_eq!(json_of(&out)["checks"][0]["data"]["mixed_volume"], serde_json::json!([3, 4]));
}

#[test]
fn catalog_directory_extends_builtins() {
    let dir = tempfile::tempdir().unwrap();
    write(
        dir.path(),
        "quadric.json",
        r#"{"name": "quadric", "rays": [[1,0],[-1,0],[0,1],[0,-1]], "max_cones": [[0,2],[2,1],[1,3],[3,0]],
            "flag": {"cone": [1, 2]}, "l": {"coeffs": [1, 0]}, "m": {"coeffs": [0, 1]}}"#,
    );
    let out = Command::new(env!("CARGO_BIN_EXE_oklab"))
        .args(["verify", "--suite", "additivity", "--testbed", "quadric"])
        .env("OKLAB_CATALOG", dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(json_of(&out)["checks"].as_array().unwrap().len() >= 100);

    write(dir.path(), "broken.json", r#"{"name": "broken"}"#);
    let out = oklab(&["body", "--testbed", "p1", "--class", "1", "--catalog", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn out_flag_writes_the_report() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    let out = oklab(&["body", "--testbed", "p1", "--class", "2", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let r: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    assert_eq!(r["tool"], "oklab");
}
