use std::path::PathBuf;
use std::process::Command;

use serde_json::{json, Value};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_multideg"))
}

fn run_ok(args: &[&str]) -> Value {
    let out = bin().args(args).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn run_err(args: &[&str]) -> (Value, String) {
    let mut all = args.to_vec();
    all.push("--json");
    let out = bin().args(&all).output().unwrap();
    assert!(!out.status.success());
    (
        serde_json::from_slice(&out.stdout).unwrap(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

fn temp_file(name: &str, body: &Value) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("multideg-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, serde_json::to_string(body).unwrap()).unwrap();
    path
}

#[test]
fn count_exact_k4() {
    let v = run_ok(&["count", "exact", "--degrees", "3,3,3,3", "--J", "0,1", "--Jstar", "0"]);
    assert_eq!(v["count"], "1");
    assert_eq!(v["mode"], "exact");
    let v = run_ok(&["count", "exact", "--degrees", "3,3,3,3,3,3", "--strategy", "backtracking"]);
    assert_eq!(v["count"], "70");
}

#[test]
fn count_region_and_class() {
    let v = run_ok(&["count", "region", "--degrees", "2,2,2,2", "--J", "0,1,2", "--region", "G0_minus_Y"]);
    assert_eq!(v["count"], "6");
    assert_eq!(v["region"], "G0_minus_Y");
    assert!(v["thresholds"]["n1"].is_u64());
    let v = run_ok(&["count", "class", "--degrees", "2,2", "--d", "1"]);
    assert_eq!(v["count"], "1");
    assert_eq!(v["w"], "4");
}

#[test]
fn corollary_reports_q() {
    let v = run_ok(&["estimate", "corollary", "--k", "3", "--n", "10", "--J", "0,1", "--Jstar", "0"]);
    assert!((v["Q"].as_f64().unwrap() - 2.225).abs() < 1e-12);
    assert_eq!(v["Q_exact"], "89/40");
    let est = &v["estimate"];
    let sum: f64 = est["exponent_terms"].as_array().unwrap().iter().map(|t| t["value"].as_f64().unwrap()).sum();
    assert!((est["log_leading"].as_f64().unwrap() + sum - est["log_value"].as_f64().unwrap()).abs() < 1e-12);
}

#[test]
fn estimators_run() {
    for which in ["theorem1", "pairing", "naive", "theorem5"] {
        let v = run_ok(&["estimate", which, "--degrees", "3,3,3,3,3,3,3,3,3,3"]);
        assert_eq!(v["mode"], "estimate");
        assert!(v["estimate"]["log_value"].is_f64());
    }
    let v = run_ok(&["estimate", "naive", "--degrees", "1,1,0", "--p", "0.5"]);
    assert!((v["value"].as_f64().unwrap() - 16.0 / 27.0).abs() < 1e-12);
    assert_eq!(v["params"]["p_mode"], "fixed");
    let v = run_ok(&["estimate", "naive", "--degrees", "3,3,3,3,3,3,3,3,3,3", "--p-mode", "pdef"]);
    assert!((v["params"]["p"].as_f64().unwrap() - 0.39).abs() < 1e-12);
}

#[test]
fn compare_ratios_are_consistent() {
    let v = run_ok(&["compare", "--degrees", "3,3,3,3,3,3,3,3"]);
    assert_eq!(v["exact"]["count"], "19355");
    let rows = v["estimates"].as_array().unwrap();
    assert!(rows.iter().any(|r| r["estimator"] == "corollary"));
    for r in rows {
        let d = r["log_difference"].as_f64().unwrap();
        let ratio = r["ratio_exact_over_estimate"].as_f64().unwrap();
        assert!((ratio - d.exp()).abs() <= 1e-12 * ratio);
    }
}

#[test]
fn samples_are_seeded() {
    let a = run_ok(&["sample", "pairing", "--degrees", "3,2,2,1", "--seed", "4", "--reps", "3"]);
    let b = run_ok(&["sample", "pairing", "--degrees", "3,2,2,1", "--seed", "4", "--reps", "3"]);
    assert_eq!(a, b);
    assert_eq!(a["samples"].as_array().unwrap().len(), 3);
    let m = run_ok(&["sample", "matrix", "--n", "4", "--p", "0.3", "--seed", "1", "--reps", "2"]);
    assert_eq!(m["samples"][0]["n"], 4);
}

#[test]
fn switch_subcommands() {
    let g = temp_file(
        "hub.json",
        &json!({"n": 5, "mult": [[2,0,0,0,0],[0,0,1,0,0],[0,1,0,0,0],[0,0,0,0,1],[0,0,0,1,0]]}),
    );
    let g = g.to_str().unwrap();
    let stats = run_ok(&["switch", "stats", "--graph", g]);
    assert_eq!(stats["in_g0"], true);
    assert_eq!(run_ok(&["switch", "active", "--graph", g])["active"], 9);
    let moves = run_ok(&["switch", "moves", "--graph", g, "--colour", "9"]);
    assert_eq!(moves["count"], 8);
    let applied = run_ok(&["switch", "apply", "--graph", g, "--colour", "9", "--seq", "1,2,3,4,5"]);
    assert_eq!(applied["graph"]["mult"][0], json!([0, 1, 1, 1, 1]));
    let r = temp_file("star.json", &applied["graph"]);
    let back = run_ok(&["switch", "reverse", "--graph", r.to_str().unwrap(), "--colour", "9"]);
    assert!(back["count"].as_str().unwrap().parse::<u64>().unwrap() >= 1);
    let v = run_ok(&["verify", "switchings", "--graph", g]);
    assert_eq!(v["sound"], true);

    let (err, stderr) = run_err(&["switch", "moves", "--graph", g, "--colour", "13"]);
    assert_eq!(err["error"], "WrongColour");
    assert!(stderr.contains("WrongColour"));
}

#[test]
fn verify_theorem2_single_edge() {
    let net = temp_file(
        "net.json",
        &json!({
            "vertices": [{"id": "y", "n": 2.0}, {"id": "z", "n": 4.0}],
            "edges": [{"from": "y", "to": "z", "colour": 1, "alpha": 0.5, "s": 4.0}],
            "Y": ["y"],
            "Z": ["z"]
        }),
    );
    let v = run_ok(&["verify", "theorem2", "--network", net.to_str().unwrap()]);
    assert_eq!(v["holds"], true);
    assert!((v["lhs"].as_f64().unwrap() - 2.0).abs() < 1e-12);
    assert!((v["rhs"].as_f64().unwrap() - 2.0).abs() < 1e-12);
}

#[test]
fn verify_summation() {
    let spec = temp_file("s42.json", &json!({"n": 2, "a": [0.1, 0.1], "c": [0.0, 0.0], "c_hat": 0.1}));
    let v = run_ok(&["verify", "summation", "--spec", spec.to_str().unwrap(), "--form", "42"]);
    assert_eq!(v["holds"], true);
    assert!((v["sum"].as_f64().unwrap() - 1.105).abs() < 1e-12);
}

#[test]
fn errors_carry_module_names() {
    let (v, _) = run_err(&["count", "exact", "--degrees", "3,3,3"]);
    assert_eq!(v["error"], "OddTotalDegree");
    let (v, _) = run_err(&["count", "exact", "--degrees", "3,x"]);
    assert_eq!(v["error"], "ParseError");
    let (v, _) = run_err(&["estimate", "theorem1", "--degrees", "2,2", "--J", "1"]);
    assert_eq!(v["error"], "MissingSupport");
}

#[test]
fn json_report_round_trips() {
    let out = bin()
        .args(["count", "exact", "--degrees", "2,2,2", "--json"])
        .output()
        .unwrap();
    let text = String::from_utf8(out.stdout).unwrap();
    let v: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["command"], "count exact");
    assert_eq!(v["result"]["count"], "1");
    assert!(v["timings"]["compute_seconds"].is_f64());
    let again: Value = serde_json::from_str(&serde_json::to_string(&v).unwrap()).unwrap();
    assert_eq!(v, again);
}
