use std::process::{Command, Output};

use k3lab::format::{samples_from_jsonl, weierstrass_from_str, FibreReportJson};
use serde_json::Value;

fn k3lab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_k3lab")).args(args).env_remove("K3LAB_SEED").output().unwrap()
}

fn stdout(o: &Output) -> String {
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn error_of(o: &Output, code: i32) -> Value {
    assert_eq!(o.status.code(), Some(code), "{}", String::from_utf8_lossy(&o.stdout));
    let v: Value = serde_json::from_slice(&o.stderr).unwrap();
    v["error"].clone()
}

#[test]
fn count_table() {
    let out = stdout(&k3lab(&["count", "--gmax", "3"]));
    assert_eq!(out, "g,n_g\n0,1\n1,24\n2,324\n3,3200\n");
    let json: Value = serde_json::from_str(&stdout(&k3lab(&["count", "--gmax", "5", "--format", "json"]))).unwrap();
    assert_eq!(json[5]["n_g"], "176256");
}

#[test]
fn quartic_severi() {
    let v: Value = serde_json::from_str(&stdout(&k3lab(&["severi", "--quartic", "--l", "1"]))).unwrap();
    assert_eq!((v["dim_w_s"].as_u64(), v["kernel_dim"].as_u64(), v["fibre_dim"].as_u64()), (Some(11), Some(21), Some(31)));
    let v: Value = serde_json::from_str(&stdout(&k3lab(&["severi", "--quartic", "--l", "2"]))).unwrap();
    assert_eq!((v["dim_w_s"].as_u64(), v["kernel_dim"].as_u64(), v["fibre_dim"].as_u64()), (Some(15), Some(11), Some(25)));
    let e = error_of(&k3lab(&["severi", "--quartic", "--l", "3"]), 1);
    assert_eq!(e["operation"], "curves::quartic_severi_numbers");
}

#[test]
fn severi_dimensions_and_bound() {
    let v: Value = serde_json::from_str(&stdout(&k3lab(&["severi", "--g", "7", "--k", "1", "--h", "6"]))).unwrap();
    assert_eq!(v["severi"]["node_count"], 1);
    assert_eq!(v["very_ample"]["h_min_irreducible"], 6);
    let e = error_of(&k3lab(&["severi", "--g", "7", "--h", "9"]), 1);
    assert_eq!(e["kind"], "InvalidGenus");
}

#[test]
fn analyze_cuspidal_family() {
    let r: FibreReportJson = serde_json::from_str(&stdout(&k3lab(&["analyze", "--family", "cuspidal"]))).unwrap();
    assert_eq!(r.fibres.len(), 12);
    assert!(r.fibres.iter().all(|f| f.kodaira == "II" && f.a_order == "inf" && f.b_order == 1 && f.d_order == 2));
    assert!(r.fibres.iter().all(|f| f.probe_smooth == Some(true)));
    assert_eq!(r.total_euler, 24);
    assert!(r.surface_smooth && r.minimal);
}

#[test]
fn analyze_nodal_family() {
    let r: FibreReportJson = serde_json::from_str(&stdout(&k3lab(&["analyze", "--family", "nodal", "--K", "0.25"]))).unwrap();
    assert_eq!(r.fibres.len(), 24);
    assert!(r.fibres.iter().all(|f| f.kodaira == "I1"));
    assert_eq!(r.total_euler, 24);
}

#[test]
fn family_file_feeds_analyze() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("nodal.json");
    let p = path.to_str().unwrap();
    stdout(&k3lab(&["family", "--family", "nodal", "--K", "0.1", "--output", p]));
    let text = std::fs::read_to_string(&path).unwrap();
    let w = weierstrass_from_str(&text).unwrap();
    assert_eq!(format!("{}\n", k3lab::format::weierstrass_to_string(&w)), text);
    let r: FibreReportJson = serde_json::from_str(&stdout(&k3lab(&["analyze", "--input", p]))).unwrap();
    assert_eq!(r.fibres.len(), 24);
}

#[test]
fn analyze_exact_input() {
    // A = 0, B = x0¹² - x1¹²
    let zero = || serde_json::json!(["0", "0"]);
    let mut b = vec![zero(); 13];
    b[0] = serde_json::json!(["1", "0"]);
    b[12] = serde_json::json!(["-1", "0"]);
    let input = serde_json::json!({ "A": { "degree": 8, "coeffs": vec![zero(); 9] }, "B": { "degree": 12, "coeffs": b } });
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("exact.json");
    std::fs::write(&path, input.to_string()).unwrap();
    let r: FibreReportJson = serde_json::from_str(&stdout(&k3lab(&["analyze", "--input", path.to_str().unwrap()]))).unwrap();
    assert_eq!(r.fibres.len(), 12);
    assert!(r.fibres.iter().all(|f| f.kodaira == "II" && f.probe_smooth == Some(true)));
    assert_eq!(r.total_euler, 24);
}

#[test]
fn bad_inputs_exit_one_with_json() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, r#"{"A": {"degree": 7, "coeffs": [["1","0"]]}, "B": {"degree": 12, "coeffs": []}}"#).unwrap();
    let e = error_of(&k3lab(&["analyze", "--input", path.to_str().unwrap()]), 1);
    assert_eq!(e["operation"], "format::weierstrass_from_str");
    let e = error_of(&k3lab(&["analyze", "--input", "/nonexistent/file.json"]), 1);
    assert_eq!(e["operation"], "cli::read_input");
    let e = error_of(&k3lab(&["analyze", "--family", "nodal", "--tol", "0"]), 1);
    assert_eq!(e["kind"], "InvalidConfig");
    let e = error_of(&k3lab(&["trace", "--m", "1,1", "--steps", "1"]), 1);
    assert_eq!(e["kind"], "InvalidConfig");
    let e = error_of(&k3lab(&["count", "--gmax", "3", "--format", "svg"]), 1);
    assert_eq!(e["kind"], "UnsupportedFormat");
    let e = error_of(&k3lab(&["frobnicate"]), 1);
    assert_eq!(e["operation"], "cli::parse");
    let e = error_of(&k3lab(&["trace", "--m", "1,1", "--K", "0.5"]), 1);
    assert_eq!(e["operation"], "modulipath::connect_to_canonical");
    let e = error_of(&k3lab(&["trace", "--m", "1,1", "--g", "3"]), 1);
    assert_eq!(e["kind"], "WrongSum");
}

#[test]
fn collision_is_a_numeric_failure() {
    let e = error_of(&k3lab(&["trace", "--sigma", "(1 2)", "--m", "1", "--sep", "1"]), 2);
    assert_eq!(e["operation"], "modulipath::permutation_path");
    assert_eq!(e["kind"], "Collision");
}

#[test]
fn enumerate_streams_and_counts() {
    let out = stdout(&k3lab(&["enumerate", "--g", "3", "--s", "12"]));
    let lines: Vec<Value> = out.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len(), 365);
    assert_eq!(lines.last().unwrap()["count"], 364);
    assert!(lines[..364].iter().all(|c| c["multiplicities"].as_array().unwrap().iter().map(|x| x.as_u64().unwrap()).sum::<u64>() == 3));
}

#[test]
fn trace_writes_path_and_plot() {
    let dir = tempfile::tempdir().unwrap();
    let (jsonl, svg) = (dir.path().join("path.jsonl"), dir.path().join("path.svg"));
    stdout(&k3lab(&["trace", "--m", "2,1", "--steps", "32", "--output", jsonl.to_str().unwrap(), "--svg", svg.to_str().unwrap()]));
    let samples = samples_from_jsonl(&std::fs::read_to_string(&jsonl).unwrap()).unwrap();
    let last = samples.last().unwrap();
    assert_eq!(last.m[0], 3);
    assert!(last.m[1..].iter().all(|&m| m == 0));
    assert!(samples.iter().all(|s| s.genus() == 3));
    let plot = std::fs::read_to_string(&svg).unwrap();
    assert!(plot.starts_with("<svg") && plot.contains("<polyline"));
}

#[test]
fn trace_kinds() {
    let out = stdout(&k3lab(&["trace", "--path", "cusp", "--m", "3", "--steps", "32"]));
    let samples = samples_from_jsonl(&out).unwrap();
    assert!(samples.last().unwrap().is_cuspidal());
    let out = stdout(&k3lab(&["trace", "--path", "transfer", "--m", "2,1", "--steps", "64", "--format", "svg"]));
    assert!(out.starts_with("<svg"));
    let out = stdout(&k3lab(&["trace", "--sigma", "(1 2)", "--m", "1", "--steps", "32"]));
    let samples = samples_from_jsonl(&out).unwrap();
    let (first, last) = (&samples[0], samples.last().unwrap());
    assert_eq!(last.m, first.m);
    assert!((last.a[0] - first.a[1]).norm() < 1e-12 && (last.a[1] - first.a[0]).norm() < 1e-12);
}
