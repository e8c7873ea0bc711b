use std::path::Path;
use std::process::{Command, Output};

use crouzeix_lab::io::write_matrix;
use crouzeix_lab::linalg::{c, diag};
use crouzeix_lab::matrix_functions::{crabb_matrix, li_matrix};
use serde_json::Value;

fn crx(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_crx")).args(args).output().expect("crx runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn mtheta_writes_all_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let zeros = dir.path().join("zeros.json");
    std::fs::write(&zeros, r#"[{"re": 0.3, "im": 0.1}, [-0.2, 0.5]]"#).unwrap();
    let out = dir.path().join("out");
    let o = crx(&["mtheta", "--zeros", p(&zeros), "--out", p(&out)]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    for f in ["m_theta.json", "x.json", "xinv.json"] {
        assert_eq!(json(&out.join(f))["n"], 2);
    }
    let rep = json(&out.join("condition_report.json"));
    for k in ["holds_n_over_delta", "holds_gramian", "holds_rasmith_adjusted"] {
        assert_eq!(rep[k], true, "{k}");
    }
}

#[test]
fn mtheta_input_errors() {
    let dir = tempfile::tempdir().unwrap();
    let dup = dir.path().join("dup.json");
    std::fs::write(&dup, "[[0.3, 0.1], [0.3, 0.1]]").unwrap();
    let o = crx(&["mtheta", "--zeros", p(&dup), "--out", p(dir.path())]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("duplicate"));

    let close = dir.path().join("close.json");
    std::fs::write(&close, "[[0.3, 0.1], [0.3, 0.1000001]]").unwrap();
    assert_eq!(code(&crx(&["mtheta", "--zeros", p(&close), "--out", p(dir.path())])), 2);

    let missing = dir.path().join("missing.json");
    assert_eq!(code(&crx(&["mtheta", "--zeros", p(&missing), "--out", p(dir.path())])), 3);
}

#[test]
fn extremal_crabb_and_li() {
    let dir = tempfile::tempdir().unwrap();
    let crabb = dir.path().join("crabb.json");
    write_matrix(&crabb, &crabb_matrix(3)).unwrap();
    let out = dir.path().join("crabb_result.json");
    let o = crx(&["extremal", "--matrix", p(&crabb), "--seed", "42", "--map", "identity", "--out", p(&out)]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let r = json(&out);
    assert!((r["attained"].as_f64().unwrap() - 2.0).abs() < 1e-6);
    assert_eq!(r["meta"]["map_kind"]["kind"], "identity");

    let li = dir.path().join("li.json");
    write_matrix(&li, &li_matrix(0.6)).unwrap();
    let out = dir.path().join("li_result.json");
    let o = crx(&["extremal", "--matrix", p(&li), "--seed", "42", "--degree", "2", "--out", p(&out)]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(json(&out)["effective_degree"], 1);
}

#[test]
fn extremal_measures_in_radius_mode() {
    let dir = tempfile::tempdir().unwrap();
    let crabb = dir.path().join("crabb.json");
    write_matrix(&crabb, &crabb_matrix(3)).unwrap();
    let out = dir.path().join("r.json");
    let o = crx(&[
        "extremal", "--matrix", p(&crabb), "--seed", "1", "--map", "identity", "--mode", "radius", "--starts", "8",
        "--measures", "--out", p(&out),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let r = json(&out);
    assert!((r["measures"]["total_mass"].as_f64().unwrap() - 1.0).abs() < 1e-8);
    assert!(r["measures"]["w_measure"]["mass_error"].as_f64().unwrap() < 1e-6);
    let csv = std::fs::read_to_string(dir.path().join("r.density.csv")).unwrap();
    assert!(csv.starts_with("theta,rho,weight"));
    assert_eq!(csv.lines().count(), 257);
}

#[test]
fn extremal_rejects_normal_matrix_and_missing_seed() {
    let dir = tempfile::tempdir().unwrap();
    let m = dir.path().join("normal.json");
    write_matrix(&m, &diag(&[c(0.5, 0.0), c(-0.3, 0.4), c(0.0, -0.6)])).unwrap();
    let out = dir.path().join("o.json");
    let o = crx(&["extremal", "--matrix", p(&m), "--seed", "1", "--out", p(&out)]);
    assert!([4, 5].contains(&code(&o)), "{}", code(&o));
    assert!(!out.exists());
    assert_eq!(code(&crx(&["extremal", "--matrix", p(&m), "--out", p(&out)])), 2);
    assert_eq!(code(&crx(&["extremal", "--matrix", p(&m), "--seed", "1", "--out", p(&out), "--bogus"])), 2);
}

#[test]
fn census_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.csv"), dir.path().join("b.csv"));
    for f in [&a, &b] {
        let o = crx(&["census", "--dim", "3", "--samples", "10", "--seed", "1", "--csv", p(f)]);
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    }
    let (x, y) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(x, y);
    assert_eq!(String::from_utf8(x).unwrap().lines().count(), 11);
    assert_eq!(code(&crx(&["census", "--dim", "1", "--samples", "1", "--seed", "1"])), 2);
}

#[test]
fn verify_suite_and_injected_failure() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("report.json");
    let o = crx(&["verify", "--suite", "hyp_geometry", "--out", p(&report)]);
    assert_eq!(code(&o), 0);
    let r = json(&report);
    assert_eq!(r["all_passed"], true);
    assert_eq!(r["criteria"].as_array().unwrap().len(), 1);

    let o = crx(&["verify", "--suite", "model_space", "--inject-failure", "3"]);
    assert_eq!(code(&o), 1);
    let stdout = String::from_utf8_lossy(&o.stdout);
    assert!(stdout.lines().any(|l| l.starts_with("[FAIL] criterion  3")), "{stdout}");
    assert_eq!(stdout.lines().filter(|l| l.starts_with("[PASS]")).count(), 3);

    assert_eq!(code(&crx(&["verify", "--suite", "nope"])), 2);
}

#[test]
fn help_documents_flags() {
    let o = crx(&["extremal", "--help"]);
    assert_eq!(code(&o), 0);
    let h = String::from_utf8_lossy(&o.stdout);
    for flag in ["--matrix", "--degree", "--starts", "--seed", "--map", "--nodes", "--mode", "--measures", "--out"] {
        assert!(h.contains(flag), "{flag}");
    }
}
