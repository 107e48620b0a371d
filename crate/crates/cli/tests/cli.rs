use std::process::{Command, Output};

use serde_json::Value;

fn km3(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_km3")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = km3(args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid json")
}

#[test]
fn pell_reports() {
    let v = json(&["pell", "120"]);
    assert_eq!((v["D"].as_u64(), v["x0"].as_str(), v["y0"].as_str()), (Some(120), Some("11"), Some("1")));
    assert_eq!(v["tool_version"], env!("CARGO_PKG_VERSION"));
    let v = json(&["pell", "12"]);
    assert_eq!((v["x0"].as_str(), v["y0"].as_str()), (Some("7"), Some("2")));
}

#[test]
fn exit_codes() {
    let out = km3(&["pell", "4"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("perfect square"));
    assert_eq!(km3(&["decide", "6"]).status.code(), Some(2));
    assert_eq!(km3(&["decide", "4"]).status.code(), Some(1));
    assert_eq!(km3(&["scan", "10", "2"]).status.code(), Some(1));
    assert_eq!(km3(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(km3(&["search", "20", "--format", "csv"]).status.code(), Some(1));
    assert_eq!(km3(&["--jobs", "0", "pell", "5"]).status.code(), Some(1));
    assert_eq!(km3(&["fm", "2", "2", "0", "0"]).status.code(), Some(1));
}

#[test]
fn scan_csv_marks_published_values() {
    let out = km3(&["scan", "8", "198", "--format", "csv"]);
    assert!(out.status.success());
    let mut r = csv::Reader::from_reader(out.stdout.as_slice());
    let header: Vec<String> = r.headers().unwrap().iter().map(String::from).collect();
    assert_eq!(
        &header[..8],
        ["L2", "case", "x0", "y0", "modulus", "residue", "two_structures", "search_agrees"]
    );
    let mut marked = Vec::new();
    let mut last = 0;
    for rec in r.records() {
        let rec = rec.unwrap();
        let l2: u64 = rec[0].parse().unwrap();
        assert!(l2 > last);
        last = l2;
        if &rec[6] == "true" {
            marked.push(l2);
        }
    }
    assert_eq!(marked, [20, 44, 68, 84, 92, 104, 110, 116, 120, 126, 132, 140, 164, 168, 176, 188]);
}

#[test]
fn output_is_independent_of_jobs() {
    let a = km3(&["--jobs", "1", "scan", "8", "80", "--search"]);
    let b = km3(&["--jobs", "4", "scan", "8", "80", "--search"]);
    assert!(a.status.success() && b.status.success());
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    for row in v["rows"].as_array().unwrap() {
        if let Some(s) = row["search"].as_object() {
            assert_eq!(s["agrees"], true, "L2 = {}", row["L2"]);
        }
    }
}

#[test]
fn search_20() {
    let v = json(&["search", "20"]);
    assert_eq!(v["prune_count"], 432);
    assert_eq!(v["accepted"].as_array().unwrap().len(), 0);
    assert_eq!(v["case"], "TWO_MOD6");
}

#[test]
fn search_8_reports_orders() {
    let v = json(&["search", "8"]);
    let acc = v["accepted"].as_array().unwrap();
    assert!(!acc.is_empty());
    assert!(acc.iter().any(|c| c["order"] == 2));
    assert_eq!(acc[0]["sigma"].as_array().unwrap().len(), 9);
    assert_eq!(acc[0]["swaps"].as_str().unwrap().len(), 9);
}

#[test]
fn aut20() {
    let v = json(&["aut20"]);
    assert_eq!(v["order"], 36);
    assert_eq!(v["structure"], "Z2 x (Z3 : S3)");
}

#[test]
fn decide_and_ns() {
    let v = json(&["decide", "20"]);
    assert_eq!(v["two_structures"], true);
    assert_eq!(v["residue"], "11");
    assert_eq!(v["b1prime"], serde_json::json!(["9", "-18", "-33", "0", "0", "0", "0", "0", "0", "0", "0", "0", "0", "0", "0", "0", "0", "0", "0"]));
    let v = json(&["ns", "36"]);
    assert_eq!(v["case"], "ZERO_MOD18");
    assert_eq!(v["min_ample_u"], 1);
}

#[test]
fn fm_and_out_file() {
    let path = std::env::temp_dir().join(format!("km3-fm-{}.json", std::process::id()));
    let out = km3(&["fm", "1", "1", "1", "1", "--out", path.to_str().unwrap()]);
    assert!(out.status.success() && out.stdout.is_empty());
    let v: Value = serde_json::from_slice(&std::fs::read(&path).unwrap()).unwrap();
    std::fs::remove_file(&path).ok();
    assert_eq!((v["lx_square"].as_i64(), v["transcendental_index"].as_u64()), (Some(20), Some(1)));
    let v = json(&["fm", "1", "2", "0", "0"]);
    assert_eq!(v["transcendental_index"], 3);
}
