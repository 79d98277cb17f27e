use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> String {
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name);
    root.to_string_lossy().into_owned()
}

fn fixture(name: &str) -> String {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name);
    std::fs::read_to_string(p).unwrap()
}

fn bnl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bnl")).args(args).output().unwrap()
}

fn json_ok(args: &[&str]) -> Value {
    let out = bnl(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stdout));
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn unknot_homology() {
    let v = json_ok(&["homology", &data("unknot.pd")]);
    let rows = v.as_array().unwrap();
    assert_eq!(rows.len(), 2);
    let qs: Vec<i64> = rows.iter().map(|r| r["q"].as_i64().unwrap()).collect();
    assert_eq!(qs, vec![-1, 1]);
    assert!(rows.iter().all(|r| r["h"] == 0 && r["free"] == 1));
}

#[test]
fn equal_movies_give_the_zero_class() {
    let m = data("stabilization.movie");
    let v = json_ok(&["delta", &m, &m, "--input", &data("unknot-gen0.json")]);
    assert_eq!(v["zero"], true);
    assert_eq!(v["order"], 0);
}

#[test]
fn frozen_fixtures() {
    let cases: [(&[&str], &str); 3] = [
        (&["torsion", &data("trefoil.pd"), "--class", &data("trefoil-gen0.json")], "trefoil-gen0-torsion.json"),
        (&["homology", &data("trefoil.pd")], "trefoil-homology.json"),
        (&["lasagna-stage", &data("zero-framed-unknot.pd"), "--r-max", "2"], "zero-framed-unknot-r2.json"),
    ];
    for (args, name) in cases {
        let out = bnl(args);
        assert!(out.status.success());
        assert_eq!(String::from_utf8(out.stdout).unwrap(), fixture(name), "{name}");
    }
}

#[test]
fn every_verb_round_trips_and_is_deterministic() {
    let runs: Vec<Vec<String>> = vec![
        vec!["homology".into(), data("hopf.pd")],
        vec!["homology".into(), data("trefoil.pd"), "--theory".into(), "sigma:0,H".into()],
        vec!["reduced".into(), data("figure-eight.pd")],
        vec!["splitting".into(), data("trefoil-right.pd")],
        vec!["movie-map".into(), data("dotted-torus.movie")],
        vec!["torsion".into(), data("figure-eight.pd")],
        vec!["delta".into(), data("tube.movie"), data("stabilization.movie")],
        vec!["primitive".into(), data("unknot.pd"), "--class".into(), data("unknot-gen0.json")],
        vec!["localize".into(), data("hopf.pd")],
        vec!["canonical".into(), data("trefoil.pd")],
        vec!["canonical".into(), data("hopf-saddle.movie")],
        vec!["kunneth".into(), data("trefoil.pd"), data("trefoil.pd")],
        vec!["lasagna-stage".into(), data("minus-one-framed-unknot.pd"), "--alpha".into(), "1".into(), "--r-max".into(), "1".into()],
    ];
    for args in runs {
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        let a = bnl(&args);
        let b = bnl(&args);
        assert!(a.status.success(), "{args:?}: {}", String::from_utf8_lossy(&a.stdout));
        assert_eq!(a.stdout, b.stdout, "{args:?} is not deterministic");
        let v: Value = serde_json::from_slice(&a.stdout).unwrap();
        let again: Value = serde_json::from_str(&serde_json::to_string(&v).unwrap()).unwrap();
        assert_eq!(v, again);
    }
}

#[test]
fn typed_outputs_reparse() {
    let text = bnl(&["homology", &data("figure-eight.pd")]).stdout;
    let m: bnl_core::GradedModule = serde_json::from_slice(&text).unwrap();
    let v: Value = serde_json::from_slice(&text).unwrap();
    assert_eq!(serde_json::to_value(&m).unwrap(), v);
    let text = bnl(&["kunneth", &data("unknot.pd"), &data("trefoil.pd")]).stdout;
    let r: bnl_core::lasagna::KunnethReport = serde_json::from_slice(&text).unwrap();
    assert!(r.iso && r.balanced);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.pd");
    std::fs::write(&bad, "X(1,2,3)").unwrap();
    let out = bnl(&["homology", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(err["error"], "parse");

    let out = bnl(&["homology", &data("trefoil.pd"), "--max-crossings", "2"]);
    assert_eq!(out.status.code(), Some(3));

    let out = bnl(&["delta", &data("tube.movie"), &data("dotted-torus.movie")]);
    assert_eq!(out.status.code(), Some(5));

    let out = bnl(&["homology", &data("unknot.pd"), "--theory", "nonsense"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn output_flag_writes_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.json");
    let out = bnl(&["homology", &data("unknot.pd"), "--output", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 2);
}
