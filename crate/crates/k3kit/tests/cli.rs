use std::io::Write;
use std::process::Command;

use k3kit::cli::run_with;
use serde_json::Value;

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("k3kit").chain(args.iter().copied());
    let code = run_with(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn run_json(args: &[&str]) -> Value {
    let (code, out, err) = run(args);
    assert_eq!(code, 0, "{:?} failed: {}", args, err);
    serde_json::from_str(&out).unwrap()
}

fn temp_json(content: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(content.as_bytes()).unwrap();
    f
}

#[test]
fn autnum_table_rows() {
    let v = run_json(&["autnum", "table"]);
    let rows: Vec<(u64, u64, u64)> = v
        .as_array()
        .unwrap()
        .iter()
        .map(|r| (r["p"].as_u64().unwrap(), r["fixed_points"].as_u64().unwrap(), r["moduli_dim"].as_u64().unwrap()))
        .collect();
    assert_eq!(rows, [(2, 8, 11), (3, 6, 7), (5, 4, 3), (7, 3, 1)]);
}

#[test]
fn lambda_tilde_odd_is_usage_error() {
    let (code, out, err) = run(&["lattice", "lambda-tilde", "--d", "3"]);
    assert_eq!(code, 2);
    assert!(out.is_empty());
    assert!(err.contains("d must be even"), "{}", err);
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_k3kit");
    let status = Command::new(bin).args(["lattice", "lambda-tilde", "--d", "3"]).output().unwrap();
    assert_eq!(status.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&status.stderr).contains("d must be even"));
    let status = Command::new(bin).args(["lattice", "lambda-tilde", "--d", "4"]).output().unwrap();
    assert_eq!(status.status.code(), Some(0));
    let status = Command::new(bin).arg("no-such-command").output().unwrap();
    assert_eq!(status.status.code(), Some(2));
}

#[test]
fn lambda_tilde_even() {
    let v = run_json(&["lattice", "lambda-tilde", "--d", "4"]);
    assert_eq!(v["rank"], 9);
    assert_eq!(v["name"], "LambdaTilde_4");
    let f = temp_json(&v.to_string());
    let inv = run_json(&["lattice", "invariants", "--input", f.path().to_str().unwrap()]);
    assert_eq!(inv["even"], true);
    assert_eq!(inv["signature"], serde_json::json!([1, 8]));
}

#[test]
fn lattice_build_and_twist() {
    let v = run_json(&["lattice", "build", "--name", "E8", "--twist", "-2"]);
    assert_eq!(v["name"], "E8(-2)");
    assert_eq!(v["gram"][0][0], -4);
    let (code, _, err) = run(&["lattice", "build", "--name", "D4"]);
    assert_eq!(code, 2);
    assert!(!err.is_empty());
    let (code, _, _) = run(&["lattice", "build"]);
    assert_eq!(code, 2);
}

#[test]
fn discriminant_and_overlattice_of_u2() {
    let f = temp_json(r#"{"rank": 2, "gram": [[0, 2], [2, 0]]}"#);
    let path = f.path().to_str().unwrap();
    let d = run_json(&["lattice", "disc", "--input", path]);
    assert_eq!(d["order"], 4);
    assert_eq!(d["elementary_divisors"], serde_json::json!([2, 2]));

    let o = run_json(&["lattice", "overlattice", "--input", path, "--glue", "1/2,0"]);
    assert_eq!(o["index"], 2);
    assert_eq!(o["invariants"]["det"], -1);
    assert_eq!(o["invariants"]["even"], true);

    let (code, _, err) = run(&["lattice", "overlattice", "--input", path, "--glue", "1/2,1/2"]);
    assert_eq!(code, 2);
    assert!(err.contains("isotropic"), "{}", err);
}

#[test]
fn complement_in_u_plus_u() {
    let f = temp_json(r#"{"rank": 4, "gram": [[0,1,0,0],[1,0,0,0],[0,0,0,1],[0,0,1,0]]}"#);
    let v = run_json(&["lattice", "complement", "--input", f.path().to_str().unwrap(), "--vectors", "1,1,0,0"]);
    assert_eq!(v["invariants"]["rank"], 3);
    assert_eq!(v["invariants"]["det"], 2);
}

#[test]
fn short_vectors_respect_env_limit() {
    let v = run_json(&["lattice", "short-vectors", "--name", "E8", "--norm", "2"]);
    assert_eq!(v["count"], 240);
    let bin = env!("CARGO_BIN_EXE_k3kit");
    let out = Command::new(bin)
        .args(["lattice", "short-vectors", "--name", "E8", "--norm", "4"])
        .env("K3KIT_SEARCH_LIMIT", "10,2")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = Command::new(bin)
        .args(["lattice", "short-vectors", "--name", "E8", "--norm", "2"])
        .env("K3KIT_SEARCH_LIMIT", "garbage")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("K3KIT_SEARCH_LIMIT"));
}

#[test]
fn fibration_analyze_from_file_and_seed() {
    let f = temp_json(r#"{"a": [], "b": ["-1", 0, 0, 0, 0, 0, 0, 0, "1"]}"#);
    let v = run_json(&["fibration", "analyze", "--input", f.path().to_str().unwrap()]);
    assert_eq!(v["generic"], false);
    assert_eq!(v["euler_sum"], 24);
    let kinds: Vec<&str> = v["fibers"].as_array().unwrap().iter().map(|r| r["kodaira"].as_str().unwrap()).collect();
    assert_eq!(kinds, ["III"; 4]);

    let v = run_json(&["fibration", "analyze", "--seed", "7"]);
    assert_eq!(v["generic"], true);
    assert_eq!(v["shioda_tate_rank"], 10);
    assert!(v["fibers"].as_array().unwrap().iter().all(|r| r["place"].is_array()));
}

#[test]
fn fibration_ns_classes_split() {
    let ns = run_json(&["fibration", "ns"]);
    assert_eq!(ns["invariants"]["det"], -64);
    assert_eq!(ns["classes"].as_array().unwrap().len(), 12);
    let c = run_json(&["fibration", "classes", "--e", "5"]);
    assert_eq!(c["square"], "20");
    assert_eq!(c["all_positive"], true);
    let (code, _, err) = run(&["fibration", "classes", "--e", "1"]);
    assert_eq!(code, 2);
    assert!(err.contains("e >= 2"));
    let s = run_json(&["fibration", "split"]);
    assert_eq!(s["anti_invariant"]["rank"], 8);
    assert_eq!(s["anti_invariant_norm_minus_4"], 240);
}

#[test]
fn stablemap_commands() {
    let cfg = run_json(&["stablemap", "paper-config", "--e", "2"]);
    assert_eq!(cfg["components"].as_array().unwrap().len(), 4);
    assert_eq!(cfg["components"][0]["kind"], "FIBER");
    let f = temp_json(&cfg.to_string());
    let path = f.path().to_str().unwrap();
    assert_eq!(run_json(&["stablemap", "genus", "--input", path])["arithmetic_genus"], 1);
    assert_eq!(run_json(&["stablemap", "validate", "--input", path])["holds"], true);
    let h = run_json(&["stablemap", "cohomology", "--paper-config", "6"]);
    assert_eq!((h["h0"].as_u64(), h["h1"].as_u64()), (Some(1), Some(0)));

    let bad = temp_json(
        r#"{"components": [{"genus":1,"kind":"FIBER","ndeg":0},{"genus":1,"kind":"SECTION","ndeg":-1}],
            "edges": [[0,1]]}"#,
    );
    let (code, out, _) = run(&["stablemap", "validate", "--input", bad.path().to_str().unwrap()]);
    assert_eq!(code, 1);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["conditions"][0]["passed"], false);

    let disconnected =
        temp_json(r#"{"components": [{"genus":0,"kind":"SECTION","ndeg":-1},{"genus":0,"kind":"SECTION","ndeg":-1}]}"#);
    let (code, _, err) = run(&["stablemap", "genus", "--input", disconnected.path().to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.contains("disconnected"));
}

#[test]
fn verify_report_json_is_deterministic() {
    let args = ["verify-paper", "--seed", "3", "--samples", "4", "--json"];
    let (code, first, _) = run(&args);
    assert_eq!(code, 0);
    let (_, second, _) = run(&args);
    assert_eq!(first, second);
    let v: Value = serde_json::from_str(&first).unwrap();
    assert_eq!(v["seed"], 3);
    let checks = v["checks"].as_array().unwrap();
    let ids: Vec<&str> = checks.iter().map(|c| c["id"].as_str().unwrap()).collect();
    let mut sorted = ids.clone();
    sorted.sort();
    sorted.dedup();
    assert_eq!(ids, sorted);
    for n in 1..=8 {
        assert!(ids.iter().any(|id| id.starts_with(&format!("c{}.", n))));
    }
    let documented: Vec<&str> =
        checks.iter().filter(|c| c["status"] == "DISCREPANCY_DOCUMENTED").map(|c| c["id"].as_str().unwrap()).collect();
    assert_eq!(documented, ["c2.fibers.placement"]);
    assert!(checks.iter().all(|c| c["status"] != "FAIL"));
}

#[test]
fn verify_report_table() {
    let (code, out, _) = run(&["verify-paper", "--samples", "2"]);
    assert_eq!(code, 0);
    assert!(out.contains("c4.split.anti-norm-minus-4"));
    assert!(out.contains("0 FAIL, 1 DISCREPANCY_DOCUMENTED"));
    assert!(!out.contains('\u{1b}'));
}
