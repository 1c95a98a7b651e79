use std::path::Path;
use std::process::{Command, Output};

fn tridist(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tridist")).args(args).output().expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stderr)))
}

#[test]
fn analyze_curves_incidence_recover() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "c.json", r#"{"p3": ["1/3", "3/2"], "points": [[0, 0], [2, 1], [1, 2]]}"#);
    let out = tridist(&["analyze", &cfg]);
    assert!(out.status.success());
    let doc = json(&out);
    assert_eq!(doc["n"], 3);
    assert!(doc["lower_bound_holds"].as_bool().unwrap());

    let out = tridist(&["curves", &cfg, "--guard-cap", "3"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stdout));
    assert_eq!(json(&out)["curve_count"], json(&tridist(&["analyze", &cfg]))["kappa"].as_u64().unwrap().pow(2));

    let out = tridist(&["incidence", &cfg, "--max-kappa", "2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("cap"));
    let report = dir.path().join("inc.json");
    let out = tridist(&["incidence", &cfg, "--out", report.to_str().unwrap()]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(report).unwrap()).unwrap();
    assert!(doc["I"].as_u64().unwrap() >= 2 * doc["Q"].as_u64().unwrap() / 4);

    let out = tridist(&["recover", &cfg, "--curve", "2,3", "--point", "3,5"]);
    assert!(out.status.success());
    let doc = json(&out);
    assert!(doc["counts"]["max_candidates"].as_u64().unwrap() <= 4);
    assert!(doc["from_point"]["verbatim"].is_object());
}

#[test]
fn collinear_needs_flag() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "c.json", r#"{"p3": [0, 0], "points": [[0, 1], [0, 2]]}"#);
    let out = tridist(&["analyze", &cfg]);
    assert_eq!(out.status.code(), Some(2));
    let out = tridist(&["curves", &cfg, "--collinear-diagnostics"]);
    assert!(out.status.code().is_some());
    let doc = json(&out);
    assert!(doc["collinear_diagnostics"].as_array().unwrap().iter().all(|r| r["multiplicity_four"] == true));
}

#[test]
fn zf_scan_search() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(
        dir.path(),
        "f.json",
        r#"{"monomials": [[1,0,0,1],[0,1,0,1],[0,0,1,-1]], "A": [1,2], "B": [1,2], "C": [2,3,4]}"#,
    );
    let out = tridist(&["zf", &f]);
    assert!(out.status.success());
    let doc = json(&out);
    assert_eq!((doc["M"].as_u64(), doc["I"].as_u64()), (Some(4), Some(6)));

    let spec = write(dir.path(), "s.json", r#"{"family": "grid", "sizes": [4, 9, 16]}"#);
    let csv = dir.path().join("scan.csv");
    let out = tridist(&["scan", &spec, "--csv", csv.to_str().unwrap()]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(text, json(&out)["csv"].as_str().unwrap());
    assert_eq!(text.lines().count(), 4);
    let again = tridist(&["scan", &spec]);
    assert_eq!(json(&again)["csv"], json(&out)["csv"]);

    let spec = write(dir.path(), "a.json", r#"{"n": 5, "m": 3, "seed": 1, "steps": 200}"#);
    let out = tridist(&["search", &spec]);
    assert!(out.status.success());
    assert!(json(&out)["kappa_best"].as_u64().unwrap() >= 2);
    let bad = write(dir.path(), "b.json", r#"{"n": 50, "m": 2}"#);
    assert_eq!(tridist(&["search", &bad]).status.code(), Some(2));
}

#[test]
fn selftest_detects_perturbed_golden() {
    let dir = tempfile::tempdir().unwrap();
    let out = tridist(&["selftest", "--bless", dir.path().to_str().unwrap()]);
    assert!(out.status.success());
    let out = tridist(&["selftest", "--golden-dir", dir.path().to_str().unwrap(), "--threads", "2"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stdout));
    let csv = dir.path().join("scan_grid.csv");
    let text = std::fs::read_to_string(&csv).unwrap().replacen("16,18,", "16,19,", 1);
    std::fs::write(&csv, text).unwrap();
    let out = tridist(&["selftest", "--golden-dir", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let doc = json(&out);
    let failed: Vec<&serde_json::Value> = doc["checks"].as_array().unwrap().iter().filter(|c| c["ok"] == false).collect();
    assert_eq!(failed.len(), 1);
    assert!(failed[0]["detail"].as_str().unwrap().contains("-16,19,"));
}
