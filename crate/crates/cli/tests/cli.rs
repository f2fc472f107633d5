use std::process::{Command, Output};

use serde_json::Value;

fn igusa(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_igusa")).args(args).env_remove("IGUSA_BUDGET").output().unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

fn statuses(report: &Value, entry: &str) -> Vec<(String, String)> {
    let e = report["entries"].as_array().unwrap().iter().find(|e| e["name"] == entry).unwrap();
    e["checks"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| (c["check"].as_str().unwrap().to_string(), c["status"].as_str().unwrap().to_string()))
        .collect()
}

#[test]
fn verify_squares_passes() {
    let o = igusa(&["verify", "xsq", "-p", "3,5,7", "-m", "2,3,4,5,6"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let r = json(&o);
    assert_eq!(r["status"], "pass");
    assert!(statuses(&r, "xsq").iter().all(|(_, s)| s == "pass"));
}

#[test]
fn corrupted_nu_fails_at_coefficient_two() {
    let dir = tempfile::tempdir().unwrap();
    let mut catalog: Vec<Value> = serde_json::from_str(include_str!("../data/catalog.json")).unwrap();
    let mut entry = catalog.remove(catalog.iter().position(|e| e["name"] == "xsq").unwrap());
    let mut res: Value = serde_json::from_str(include_str!("../data/resolutions/x2.json")).unwrap();
    res["divisors"][0]["nu"] = 2.into();
    std::fs::write(dir.path().join("bad.json"), res.to_string()).unwrap();
    entry["resolution"] = "bad.json".into();
    let path = dir.path().join("entry.json");
    std::fs::write(&path, entry.to_string()).unwrap();

    let o = igusa(&["verify", path.to_str().unwrap(), "--checks", "denef"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("xsq/denef"));
    let r = json(&o);
    let rows = r["entries"][0]["checks"][0]["details"]["rows"].as_array().unwrap();
    assert!(rows.iter().all(|row| row["mismatch"]["index"] == 2), "{rows:?}");
}

#[test]
fn over_budget_level_exits_two() {
    let o = igusa(&["verify", "xy", "-p", "7", "-m", "9"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("budget: 7^18 points"));
}

#[test]
fn environment_budget_applies() {
    let o = Command::new(env!("CARGO_BIN_EXE_igusa"))
        .args(["expsum", "--poly", "x*y", "-p", "5", "-m", "3"])
        .env("IGUSA_BUDGET", "1000")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("budget: 5^6 points"));
}

#[test]
fn list_shows_the_catalog() {
    let o = igusa(&["list"]);
    assert_eq!(o.status.code(), Some(0));
    let text = String::from_utf8(o.stdout).unwrap();
    let mut lines = text.lines();
    let header: Vec<_> = lines.next().unwrap().split_whitespace().collect();
    assert_eq!(&header[..4], ["name", "n", "sigma", "lct"]);
    let rows: Vec<_> = lines.collect();
    assert!(rows.len() >= 8);
    assert!(rows.iter().any(|r| r.starts_with("cusp") && r.contains("5/6")));
}

#[test]
fn small_primes_only_are_vacuous_not_failing() {
    let o = igusa(&["run-all", "-p", "3"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let r = json(&o);
    for entry in ["cusp", "cubic", "mixed", "xcube"] {
        let s = statuses(&r, entry);
        assert!(s.iter().any(|(c, st)| c == "decay" && st == "vacuous"), "{entry}: {s:?}");
    }
    assert!(statuses(&r, "xsq").iter().all(|(_, s)| s == "pass"));
}

#[test]
fn subcommands_emit_json() {
    let o = igusa(&["expsum", "--poly", "x^2", "-p", "3", "-m", "2"]);
    let r = json(&o);
    assert!((r["rows"][0]["re"].as_f64().unwrap() - 1.0 / 3.0).abs() < 1e-15);

    let o = igusa(&["zeta-emp", "--poly", "x^2", "-p", "5", "-K", "4"]);
    let r = json(&o);
    assert_eq!(r["rows"][0]["coefficients"], serde_json::json!(["4/5", "0", "4/25", "0", "4/125"]));

    let o = igusa(&["zeta-denef", "xsq", "-p", "5", "-K", "4"]);
    let r = json(&o);
    assert_eq!(r["rows"][0]["coefficients"], serde_json::json!(["4/5", "0", "4/25", "0", "4/125"]));

    let o = igusa(&["bridge", "--poly", "x^2 + y^3", "-p", "7", "-m", "3"]);
    assert!(json(&o)["rows"][0]["deviation"].as_f64().unwrap() < 1e-20);

    for args in [&["bound", "xsq"][..], &["audit-poles", "xy"], &["decay", "xcube"], &["charsum"], &["langweil"]] {
        let o = igusa(args);
        assert_eq!(o.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    }
    let o = igusa(&["charsum", "--poly", "x^2 + x", "-p", "5"]);
    assert_eq!(json(&o)["rows"][0]["exact"].as_str().unwrap().trim(), "-1");
}

#[test]
fn out_file_and_timings() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    let o = igusa(&["verify", "x", "--checks", "decay,gauss", "--out", path.to_str().unwrap(), "--timings"]);
    assert_eq!(o.status.code(), Some(0));
    let r: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert!(r["entries"][0]["checks"][0]["seconds"].is_f64());
    assert_eq!(r["global"][0]["check"], "gauss");
}
