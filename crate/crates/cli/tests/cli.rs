use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn flagsum(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_flagsum")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn make(dir: &Path, name: &str, what: &[&str]) -> String {
    let path = dir.join(name);
    let mut args = vec!["make"];
    args.extend_from_slice(what);
    args.extend(["-o", path.to_str().unwrap()]);
    let o = flagsum(&args);
    assert!(o.status.success(), "{}", stderr(&o));
    path.to_str().unwrap().to_string()
}

struct Inputs {
    _dir: TempDir,
    dir: PathBuf,
    t: String,
    z2: String,
    z3: String,
    a3: String,
}

fn inputs() -> Inputs {
    let dir = TempDir::new().unwrap();
    let path = dir.path().to_path_buf();
    Inputs {
        t: make(&path, "t.json", &["s3-join"]),
        z2: make(&path, "z2.json", &["parcel", "zn", "2", "full"]),
        z3: make(&path, "z3.json", &["parcel", "zn", "3", "full"]),
        a3: make(&path, "a3.json", &["cocycle", "zn", "3", "1"]),
        dir: path,
        _dir: dir,
    }
}

fn corrupted(i: &Inputs, entry: usize) -> String {
    let text = std::fs::read_to_string(&i.a3).unwrap();
    let mut doc: serde_json::Value = serde_json::from_str(&text).unwrap();
    let e = &mut doc["entries"][entry]["exponent"];
    *e = ((e.as_u64().unwrap() + 1) % 3).into();
    let path = i.dir.join(format!("bad{entry}.json"));
    std::fs::write(&path, doc.to_string()).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn generated_documents_validate() {
    let i = inputs();
    let o = flagsum(&["validate", &i.t, &i.z3, &i.a3]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(stdout(&o).lines().filter(|l| l.ends_with(": ok")).count(), 3);
}

#[test]
fn invariants_of_the_fixture() {
    let i = inputs();
    let o = flagsum(&["invariant", &i.t, &i.z2]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "1/2");
    let o = flagsum(&["invariant", &i.t, &i.z3, &i.a3, "--format", "both"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "(3; 1,0,0)/3 ≈ 0.333333333333");
    let o = flagsum(&["invariant", &i.t, &i.z3, "--format", "decimal", "--parallel"]);
    assert_eq!(stdout(&o).trim(), "0.333333333333");
}

#[test]
fn trivial_group_gives_one() {
    let i = inputs();
    let z1 = make(&i.dir, "z1.json", &["parcel", "zn", "1", "full"]);
    let o = flagsum(&["invariant", &i.t, &z1]);
    assert_eq!(stdout(&o).trim(), "1/1");
}

#[test]
fn fuzz_without_steps_prints_the_start() {
    let i = inputs();
    let o = flagsum(&["fuzz", &i.t, &i.z2, "--steps", "0"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "START -> 1/2\n");
}

#[test]
fn fuzz_keeps_the_value() {
    let i = inputs();
    let o = flagsum(&["fuzz", &i.t, &i.z3, &i.a3, "--steps", "200", "--seed", "7"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let out = stdout(&o);
    assert_eq!(out.lines().count(), 201);
    assert!(out.lines().all(|l| l.ends_with("-> (3; 1,0,0)/3")));
    let again = flagsum(&["fuzz", &i.t, &i.z3, &i.a3, "--steps", "200", "--seed", "7"]);
    assert_eq!(stdout(&again), out);
}

#[test]
fn fuzz_catches_a_broken_cocycle() {
    let i = inputs();
    let bad = corrupted(&i, 40);
    let o = flagsum(&["fuzz", &i.t, &i.z3, &bad, "--steps", "40", "--seed", "7"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("invariant changed at step"), "{}", stderr(&o));
    let o = flagsum(&["validate", &i.z3, &bad]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn empty_input_is_an_input_error() {
    let i = inputs();
    let empty = i.dir.join("empty.json");
    std::fs::write(&empty, "").unwrap();
    let o = flagsum(&["invariant", empty.to_str().unwrap(), &i.z2]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("error"));
    let o = flagsum(&["invariant", &i.t, i.dir.join("missing.json").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn missing_cocycle_entries_warn() {
    let i = inputs();
    let text = std::fs::read_to_string(&i.a3).unwrap();
    let mut doc: serde_json::Value = serde_json::from_str(&text).unwrap();
    doc["entries"].as_array_mut().unwrap().retain(|e| e["exponent"] != 0 || e["args"][0] != 1);
    let path = i.dir.join("partial.json");
    std::fs::write(&path, doc.to_string()).unwrap();
    let o = flagsum(&["invariant", &i.t, &i.z3, path.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stderr(&o).contains("warning"), "{}", stderr(&o));
    assert_eq!(stdout(&o).trim(), "(3; 1,0,0)/3");
}

#[test]
fn invalid_triangulation_is_rejected() {
    let i = inputs();
    let text = std::fs::read_to_string(&i.t).unwrap();
    let mut doc: serde_json::Value = serde_json::from_str(&text).unwrap();
    doc["tetrahedra"].as_array_mut().unwrap().pop();
    let path = i.dir.join("broken.json");
    std::fs::write(&path, doc.to_string()).unwrap();
    let o = flagsum(&["validate", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let o = flagsum(&["invariant", path.to_str().unwrap(), &i.z2]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn symmetric_parcels() {
    let i = inputs();
    let s3 = make(&i.dir, "s3.json", &["parcel", "sn", "3", "full"]);
    let o = flagsum(&["invariant", &i.t, &s3]);
    assert!(o.status.success(), "{}", stderr(&o));
    let o = flagsum(&["make", "parcel", "sn", "6", "full"]);
    assert_eq!(o.status.code(), Some(2));
}
