use std::process::{Command, Output};

use serde_json::Value;

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_divisor-maxcut")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn exit_statuses() {
    assert_eq!(bin(&["certify", "--abc", "2,3,3"]).status.code(), Some(0));
    let bad = bin(&["bounds", "--abc", "2,4,4"]);
    assert_eq!(bad.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad.stderr).starts_with("error:"));
    let literal = bin(&["--check-paper-literal"]);
    assert_eq!(literal.status.code(), Some(3));
    let record: Value = serde_json::from_str(&stdout(&literal)).unwrap();
    assert!(record["refuted"].as_u64().unwrap() > 0);
    assert_ne!(bin(&["bounds", "--abc", "2,4"]).status.code(), Some(0));
}

#[test]
fn certify_values() {
    let v: Value = serde_json::from_str(&stdout(&bin(&["certify", "--abc", "2,3,3"]))).unwrap();
    assert_eq!(v["sd_primal"], "405/4");
    assert_eq!(v["sd_dual"], "405/4");
    assert_eq!(v["ell_ceil"], 90);
    let v: Value = serde_json::from_str(&stdout(&bin(&["certify", "--family", "e7"]))).unwrap();
    assert_eq!(v["u"], "560");
}

#[test]
fn oracle_prints_the_value() {
    let o = bin(&["oracle", "--abc", "2,1,3"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("maxcut = 12"));
}

#[test]
fn construct_graphs() {
    let v: Value = serde_json::from_str(&stdout(&bin(&["construct", "--abc", "2,1,3"]))).unwrap();
    assert_eq!(v["n"], 10);
    assert_eq!(v["edges"].as_array().unwrap().len(), 15);
    let v: Value = serde_json::from_str(&stdout(&bin(&["construct", "--family", "e7"]))).unwrap();
    assert_eq!(v["n"], 56);
    let edges = v["edges"].as_array().unwrap();
    assert_eq!(edges.len(), 784);
    assert!(edges.iter().any(|e| e[2] == "2"));
}

#[test]
fn out_files_are_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let path = |name: &str| dir.path().join("nested").join(name);
    for name in ["a.csv", "b.csv"] {
        let p = path(name);
        let o = bin(&["simulate", "--abc", "2,2,3", "--samples", "3000", "--seed", "7", "--format", "csv", "--out", p.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0));
        assert!(stdout(&o).contains("wrote"));
    }
    let a = std::fs::read(path("a.csv")).unwrap();
    assert_eq!(a, std::fs::read(path("b.csv")).unwrap());
    let text = String::from_utf8(a).unwrap();
    let header = text.lines().next().unwrap();
    assert!(header.starts_with("family,params,n,samples,seed,mean,cv,max,u_floor,ell_ceil"));
    assert_eq!(text.lines().count(), 2);
}

#[test]
fn full_report_rows() {
    let o = bin(&["full-report", "--family", "typeA:4,1", "--family", "e6", "--samples", "500", "--restarts", "5"]);
    assert_eq!(o.status.code(), Some(0));
    let rows: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let rows = rows.as_array().unwrap();
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[0]["oracle"], "12");
    assert_eq!(rows[1]["oracle"], "90");
    assert_eq!(rows[1]["degenerate"], true);
}
