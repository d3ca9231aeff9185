use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn qha(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qha")).args(args).env_remove("QHA_CACHE_DIR").output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn json(o: &Output) -> Value {
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

const DUAL: &str = "field Q quiver { vertex v; arrow x: v -> v; } relations { x x; }";

#[test]
fn point_quiver_all_degrees() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "point.qha", "field Q quiver { vertex v; }");
    let v = json(&qha(&["--json", "--degree", "all", "compute", &f]));
    assert_eq!(v["hh"]["hh0"], 1);
    assert_eq!(v["hh"]["hh1"], 0);
    assert_eq!(v["hh"]["hh2"], 0);
}

#[test]
fn report_keys() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "dual.qha", DUAL);
    let v = json(&qha(&["--json", "compute", &f]));
    for key in [
        "field", "dim_algebra", "f2_count", "f3_count", "hom_dims", "rank_d1", "rank_d2", "dim_ker_d3", "hh",
        "hh2_basis",
    ] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    assert_eq!(v["field"], "Q");
    assert_eq!(v["hh2_basis"].as_array().unwrap().len(), 1);
}

#[test]
fn field_override() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "dual.qha", DUAL);
    let o = qha(&["--json", "--field", "F2", "compute", &f]);
    let v = json(&o);
    assert_eq!(v["field"], "F2");
    assert_eq!(v["hh"]["hh1"], 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("characteristic 2"));
}

#[test]
fn lambda_example() {
    let v = json(&qha(&["--json", "family", "lambda", "--p", "1", "--q", "1", "--k", "4", "--s", "1"]));
    assert_eq!(v["hh"]["hh2"], 1);
    assert_eq!(v["dim_algebra"], 72);
}

#[test]
fn gamma_example() {
    let v = json(&qha(&["--json", "family", "gamma-star", "--n", "4"]));
    assert_eq!(v["hh"]["hh2"], 2);
    assert_eq!(v["hh2_basis"].as_array().unwrap().len(), 2);
}

#[test]
fn emit_dsl_roundtrip() {
    let o = qha(&["family", "gamma-star", "--n", "3", "--emit-dsl"]);
    assert!(o.status.success());
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "g3.qha", &String::from_utf8(o.stdout).unwrap());
    let a = json(&qha(&["--json", "compute", &f]));
    let b = json(&qha(&["--json", "family", "gamma-star", "--n", "3"]));
    assert_eq!(a, b);
}

#[test]
fn arrow_order_keeps_dimensions() {
    let args = ["--json", "family", "gamma-star", "--n", "3"];
    let a = json(&qha(&args));
    let b = json(&qha(&[&["--order", "c2,b3,a1,b1,c1,a2,b2"], &args[..]].concat()));
    for key in ["dim_algebra", "f2_count", "f3_count", "hom_dims", "rank_d1", "rank_d2", "dim_ker_d3", "hh"] {
        assert_eq!(a[key], b[key], "{key}");
    }
    assert_eq!(code(&qha(&["--order", "a1,b1", "family", "gamma-star", "--n", "3"])), 3);
}

#[test]
fn warm_cache_is_identical() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache");
    let cache = cache.to_str().unwrap();
    let args = ["--json", "--cache-dir", cache, "family", "lambda", "--p", "1", "--q", "1", "--k", "2", "--s", "1"];
    let cold = qha(&args);
    let warm = qha(&args);
    assert!(cold.status.success() && warm.status.success());
    assert_eq!(cold.stdout, warm.stdout);
    let entries = fs::read_dir(cache).unwrap().filter(|e| e.as_ref().unwrap().path().extension().is_some_and(|x| x == "json"));
    assert_eq!(entries.count(), 1);
}

#[test]
fn dims_and_deform() {
    let v = json(&qha(&["--json", "dims", "gamma-star", "--n", "3"]));
    assert_eq!(v["total"], 29);
    assert_eq!(v["admissible"], true);
    let v = json(&qha(&["--json", "deform", "lambda-eta", "--p", "1", "--q", "1", "--k", "2", "--s", "1", "--t", "1"]));
    assert_eq!(v["equal_per_vertex"], true);
    let v = json(&qha(&["--json", "deform", "gamma-eta2", "--n", "4", "--t", "1"]));
    assert_eq!(v["equal_total"], false);
    assert_eq!(v["deformed"]["admissible"], false);
}

#[test]
fn oracle_agrees() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "dual.qha", DUAL);
    let v = json(&qha(&["--json", "oracle", &f]));
    assert_eq!(v["match"], true);
    assert_eq!(v["oracle"]["hh2"], 1);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let syntax = write(dir.path(), "a.qha", "field Q quiver { vertex v; arrow x: v -> v; } relations { x x }");
    assert_eq!(code(&qha(&["compute", &syntax])), 2);
    let unknown = write(dir.path(), "b.qha", "field Q quiver { vertex v; arrow x: v -> v; } relations { x y; }");
    assert_eq!(code(&qha(&["compute", &unknown])), 2);
    assert_eq!(code(&qha(&["compute", dir.path().join("missing.qha").to_str().unwrap()])), 2);
    let short = write(dir.path(), "c.qha", "field Q quiver { vertex v; arrow x: v -> v; } relations { x; }");
    assert_eq!(code(&qha(&["compute", &short])), 3);
    assert_eq!(code(&qha(&["family", "lambda", "--p", "1", "--q", "1", "--k", "3", "--s", "1"])), 3);
    let infinite =
        write(dir.path(), "d.qha", "field Q quiver { vertex v; arrow x: v -> v; arrow y: v -> v; } relations { x x - y y; }");
    assert_eq!(code(&qha(&["compute", &infinite])), 4);
    assert_eq!(code(&qha(&["oracle", "gamma-star", "--n", "3"])), 5);
    assert_eq!(code(&qha(&["--oracle-bound", "40", "oracle", "gamma-star", "--n", "3"])), 0);
}
