use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::Value;
use tempfile::TempDir;
use uaext_cli::run;

fn uaext(args: &[&str]) -> i32 {
    run(std::iter::once("uaext").chain(args.iter().copied()))
}

fn path(dir: &TempDir, name: &str) -> PathBuf {
    dir.path().join(name)
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn read(p: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap()
}

fn small_basener(dir: &TempDir) -> PathBuf {
    let out = path(dir, "basener.json");
    let code = uaext(&[
        "gallery", "build", "basener", "--nr", "3", "--ntheta", "8", "--M", "8", "--cap", "3", "--out", s(&out),
    ]);
    assert_eq!(code, 0);
    out
}

fn disk_cole(dir: &TempDir) -> PathBuf {
    let spec = path(dir, "spec.json");
    std::fs::write(
        &spec,
        r#"{"base": {"disk": {"boundary": 16, "lattice": 5, "spacing": 0.3}, "cap": 4}, "coefficients": ["-z", "0"]}"#,
    )
    .unwrap();
    let out = path(dir, "cole.json");
    assert_eq!(uaext(&["cole", "extend", "--spec", s(&spec), "--out", s(&out)]), 0);
    out
}

#[test]
fn unknown_flag_is_a_usage_error() {
    assert_eq!(uaext(&["verify", "gce", "--bundel", "x.json"]), 2);
    assert_eq!(uaext(&["frobnicate"]), 2);
    let out = Command::new(env!("CARGO_BIN_EXE_uaext")).arg("--no-such-flag").output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("Usage"));
}

#[test]
fn help_shows_defaults() {
    let out = Command::new(env!("CARGO_BIN_EXE_uaext"))
        .args(["gallery", "build", "basener", "--help"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    for want in ["--r0", "[default: 0.4]", "--M", "[default: 64]", "--ntheta"] {
        assert!(text.contains(want), "{want}");
    }
}

#[test]
fn missing_input_file_is_a_usage_error() {
    let dir = TempDir::new().unwrap();
    assert_eq!(uaext(&["verify", "gce", "--bundle", s(&path(&dir, "absent.json"))]), 2);
}

#[test]
fn verify_gce_on_basener_passes_and_embeds_manifest() {
    let dir = TempDir::new().unwrap();
    let bundle = small_basener(&dir);
    let cert = path(&dir, "cert.json");
    assert_eq!(uaext(&["verify", "gce", "--bundle", s(&bundle), "--out", s(&cert)]), 0);
    let v = read(&cert);
    assert_eq!(v["manifest"]["command"], "verify gce");
    assert_eq!(v["manifest"]["seed"], 0);
    assert!(v["manifest"]["tolerances"]["unital"].is_number());
    let clauses = v["clauses"].as_array().unwrap();
    assert!(!clauses.is_empty());
    assert!(clauses.iter().all(|c| c["tolerance"].is_number() && c["pass"] == true));
}

#[test]
fn corrupted_row_sum_fails_with_the_clause_named() {
    let dir = TempDir::new().unwrap();
    let bundle = small_basener(&dir);
    let mut doc = read(&bundle);
    let w = &mut doc["bundle"]["t"]["rows"][3][0][1][0];
    *w = Value::from(w.as_f64().unwrap() + 0.25);
    let bad = path(&dir, "bad.json");
    std::fs::write(&bad, serde_json::to_string(&doc).unwrap()).unwrap();
    let cert = path(&dir, "cert.json");
    assert_eq!(uaext(&["verify", "gce", "--bundle", s(&bad), "--out", s(&cert)]), 1);
    let v = read(&cert);
    let failing: Vec<&str> = v["clauses"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["pass"] == false)
        .map(|c| c["clause"].as_str().unwrap())
        .collect();
    assert!(failing.contains(&"unital"), "{failing:?}");
}

#[test]
fn tightened_tolerances_turn_a_pass_into_a_failure() {
    let dir = TempDir::new().unwrap();
    let bundle = small_basener(&dir);
    let cert = path(&dir, "cert.json");
    assert_eq!(uaext(&["verify", "gce", "--bundle", s(&bundle), "--tol-cert", "1e-20", "--out", s(&cert)]), 1);
    assert_eq!(uaext(&["verify", "gce", "--bundle", s(&bundle), "--tol-cert", "-1"]), 2);
}

#[test]
fn equal_manifests_give_identical_bytes() {
    let dir = TempDir::new().unwrap();
    let bundle = small_basener(&dir);
    let again = path(&dir, "again.json");
    assert_eq!(
        uaext(&["gallery", "build", "basener", "--nr", "3", "--ntheta", "8", "--M", "8", "--cap", "3", "--out", s(&again)]),
        0
    );
    assert_eq!(std::fs::read(&bundle).unwrap(), std::fs::read(&again).unwrap());
    let (c1, c2) = (path(&dir, "c1.csv"), path(&dir, "c2.csv"));
    for (c, threads) in [(&c1, "1"), (&c2, "2")] {
        let code = uaext(&["report", "--bundle", s(&bundle), "--format", "csv", "--threads", threads, "--out", s(c)]);
        assert_eq!(code, 0);
    }
    let text = std::fs::read_to_string(&c1).unwrap();
    assert_eq!(text, std::fs::read_to_string(&c2).unwrap());
    assert!(text.starts_with("# manifest {"));
    assert!(!text.contains('\r'));
}

#[test]
fn implemented_and_averaging_on_basener() {
    let dir = TempDir::new().unwrap();
    let bundle = small_basener(&dir);
    assert_eq!(uaext(&["verify", "implemented", "--bundle", s(&bundle), "--out", s(&path(&dir, "i.json"))]), 0);
    assert_eq!(uaext(&["verify", "averaging", "--bundle", s(&bundle), "--out", s(&path(&dir, "a.json"))]), 0);
}

#[test]
fn cole_extend_report_and_reconstruct() {
    let dir = TempDir::new().unwrap();
    let bundle = disk_cole(&dir);
    let doc = read(&bundle);
    assert_eq!(doc["manifest"]["command"], "cole extend");
    assert!(doc["bundle"]["cole"]["root_slots"].is_array());

    let csv = path(&dir, "cole.csv");
    assert_eq!(uaext(&["cole", "report", "--bundle", s(&bundle), "--format", "csv", "--out", s(&csv)]), 0);
    let text = std::fs::read_to_string(&csv).unwrap();
    assert!(text.lines().nth(1).unwrap().starts_with("certificate,clause,status"));
    assert!(text.contains("vieta_sum,pass"));

    let proj = path(&dir, "proj.json");
    assert_eq!(uaext(&["group", "analyze-projection", "--bundle", s(&bundle), "--out", s(&proj)]), 0);
    assert_eq!(read(&proj)["is_bicontractive"], true);

    let h0 = path(&dir, "h0.json");
    std::fs::write(&h0, r#"{"expression": "z1"}"#).unwrap();
    let rec = path(&dir, "rec.json");
    let code = uaext(&["group", "reconstruct", "--bundle", s(&bundle), "--h0", s(&h0), "--generated-by-h0", "--out", s(&rec)]);
    assert_eq!(code, 0);
    let v = read(&rec);
    assert_eq!(v["matched"], true);
    assert!(v["psi"]["assignment"].is_array());
}

#[test]
fn reconstruct_rejects_h0_with_nonzero_average() {
    let dir = TempDir::new().unwrap();
    let bundle = disk_cole(&dir);
    let h0 = path(&dir, "h0.json");
    std::fs::write(&h0, r#"{"expression": "z1 + 1"}"#).unwrap();
    assert_eq!(uaext(&["group", "reconstruct", "--bundle", s(&bundle), "--h0", s(&h0)]), 2);
}

#[test]
fn basener_projection_is_not_bicontractive() {
    let dir = TempDir::new().unwrap();
    let bundle = small_basener(&dir);
    let out = path(&dir, "p.json");
    assert_eq!(uaext(&["group", "analyze-projection", "--bundle", s(&bundle), "--out", s(&out)]), 1);
    assert_eq!(read(&out)["is_bicontractive"], false);
}

#[test]
fn cole_report_needs_cole_data() {
    let dir = TempDir::new().unwrap();
    let bundle = small_basener(&dir);
    assert_eq!(uaext(&["cole", "report", "--bundle", s(&bundle)]), 2);
}

#[test]
fn malformed_cole_spec_is_a_usage_error() {
    let dir = TempDir::new().unwrap();
    let spec = path(&dir, "spec.json");
    std::fs::write(&spec, r#"{"base": {"disk": {}, "cap": 3}, "coefficients": ["z +"]}"#).unwrap();
    assert_eq!(uaext(&["cole", "extend", "--spec", s(&spec)]), 2);
    std::fs::write(&spec, r#"{"base": {"disk": {}, "cap": 3}, "coefficients": ["z7"]}"#).unwrap();
    assert_eq!(uaext(&["cole", "extend", "--spec", s(&spec)]), 2);
}

#[test]
fn choquet_csv_finds_the_boundary_circle() {
    let dir = TempDir::new().unwrap();
    let disk = path(&dir, "disk.json");
    let args = ["gallery", "build", "disk", "--boundary", "16", "--lattice", "5", "--spacing", "0.3", "--cap", "4"];
    assert_eq!(uaext(&[&args[..], &["--out", s(&disk)]].concat()), 0);
    let csv = path(&dir, "choquet.csv");
    assert_eq!(uaext(&["boundary", "choquet", "--system", s(&disk), "--out", s(&csv)]), 0);
    let text = std::fs::read_to_string(&csv).unwrap();
    let rows: Vec<&str> = text.lines().skip(2).collect();
    assert_eq!(rows.len(), 16 + 25);
    let choquet: Vec<&str> = rows.iter().filter(|r| r.ends_with(",true")).copied().collect();
    assert_eq!(choquet.len(), 16);
    let on_circle: Vec<String> = read(&disk)["space"]["points"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|p| {
            let c = &p["coords"][0];
            (c[0].as_f64().unwrap().hypot(c[1].as_f64().unwrap()) - 1.0).abs() < 1e-12
        })
        .map(|p| p["label"].as_str().unwrap().to_string())
        .collect();
    assert_eq!(on_circle.len(), 16);
    assert!(choquet.iter().all(|r| on_circle.iter().any(|l| r.starts_with(&format!("{l},")))));

    let json = path(&dir, "choquet.json");
    let code = uaext(&["boundary", "choquet", "--system", s(&disk), "--format", "json", "--witnesses", "--out", s(&json)]);
    assert_eq!(code, 0);
    let v = read(&json);
    assert_eq!(v["points"].as_array().unwrap().len(), 41);
    assert!(v["points"][20]["witness"]["weights"].is_array());
}

#[test]
fn peakset_exit_codes() {
    let dir = TempDir::new().unwrap();
    let disk = path(&dir, "disk.json");
    let code = uaext(&["gallery", "build", "disk", "--boundary", "16", "--lattice", "5", "--spacing", "0.3", "--cap", "4", "--out", s(&disk)]);
    assert_eq!(code, 0);
    let out = path(&dir, "peak.json");
    assert_eq!(uaext(&["boundary", "peakset", "--system", s(&disk), "--set", "p0", "--out", s(&out)]), 0);
    let v = read(&out);
    assert_eq!(v["peak"]["feasible"], true);
    assert!(v["peak"]["off_set"].as_f64().unwrap() < 1.0);
    // the lattice centre is interior, so nothing peaks there
    let centre = read(&disk)["space"]["points"]
        .as_array()
        .unwrap()
        .iter()
        .find(|p| p["coords"][0] == serde_json::json!([0.0, 0.0]))
        .map(|p| p["label"].as_str().unwrap().to_string())
        .unwrap();
    assert_eq!(uaext(&["boundary", "peakset", "--system", s(&disk), "--set", &centre, "--out", s(&out)]), 1);
    assert_eq!(read(&out)["peak"]["feasible"], false);
    assert_eq!(uaext(&["boundary", "peakset", "--system", s(&disk), "--set", "nowhere"]), 2);
}

#[test]
fn contraction_peak_pulls_back() {
    let dir = TempDir::new().unwrap();
    let b = path(&dir, "c.json");
    assert_eq!(uaext(&["gallery", "build", "contraction", "--out", s(&b)]), 0);
    let out = path(&dir, "peak.json");
    let code = uaext(&["boundary", "peakset", "--bundle", s(&b), "--side", "a", "--set", "x0", "--out", s(&out)]);
    assert_eq!(code, 0);
    let v = read(&out);
    assert_eq!(v["pullback"]["feasible"], true);
    assert_eq!(v["pullback"]["set"].as_array().unwrap().len(), 3);
    // no operator on a contraction bundle
    assert_eq!(uaext(&["verify", "gce", "--bundle", s(&b)]), 2);
}

#[test]
fn remaining_gallery_builds_verify() {
    let dir = TempDir::new().unwrap();
    let t = path(&dir, "t.json");
    assert_eq!(uaext(&["gallery", "build", "tensor-disk", "--diameter", "7", "--M", "8", "--cap", "3", "--out", s(&t)]), 0);
    assert_eq!(uaext(&["verify", "gce", "--bundle", s(&t), "--out", s(&path(&dir, "tc.json"))]), 0);
    let d = path(&dir, "d.json");
    let code = uaext(&[
        "gallery", "build", "dfp", "--boundary", "16", "--lattice", "5", "--spacing", "0.3", "--n", "4", "--M", "8", "--out", s(&d),
    ]);
    assert_eq!(code, 0);
    assert_eq!(uaext(&["report", "--bundle", s(&d), "--out", s(&path(&dir, "dr.json"))]), 0);
    assert_eq!(uaext(&["gallery", "build", "basener", "--r0", "0.8", "--r1", "0.2"]), 2);
}

#[test]
fn csv_is_refused_for_json_artifacts() {
    let dir = TempDir::new().unwrap();
    assert_eq!(uaext(&["gallery", "build", "contraction", "--format", "csv", "--out", s(&path(&dir, "x"))]), 2);
}

#[test]
fn thread_count_from_environment_is_validated() {
    let out = Command::new(env!("CARGO_BIN_EXE_uaext"))
        .args(["gallery", "build", "contraction"])
        .env("UAEXT_THREADS", "0")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let ok = Command::new(env!("CARGO_BIN_EXE_uaext"))
        .args(["gallery", "build", "contraction"])
        .env("UAEXT_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(ok.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&ok.stdout).unwrap();
    assert_eq!(v["manifest"]["command"], "gallery build contraction");
}
