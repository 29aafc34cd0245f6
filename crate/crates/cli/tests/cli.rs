use std::path::Path;
use std::process::{Command, Output};

use fewroots_certify::AlphaCertificate;
use fewroots_core::rational::rat;
use fewroots_haas::{HaasSystem, FIVE_POINTS};
use serde_json::Value;

fn fewroots(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fewroots")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.display().to_string()
}

fn haas_system_file(dir: &Path) -> String {
    let h = HaasSystem::new(rat(44, 31), rat(44, 31), 3).unwrap();
    write(dir, "system.json", &h.sparse().to_json())
}

#[test]
fn reports_are_byte_identical_across_runs() {
    for args in [&["haas"][..], &["chambers", "--haas", "2"], &["hk-param", "--haas", "3"], &["bound", "--n", "2"]] {
        let a = fewroots(args);
        let b = fewroots(args);
        assert!(a.status.success(), "{args:?}: {}", String::from_utf8_lossy(&a.stderr));
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        json(&a);
    }
}

#[test]
fn out_file_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("odd.json");
    let to_file = fewroots(&["odd-cell", "--haas", "3", "--out", path.to_str().unwrap()]);
    assert!(to_file.status.success());
    assert!(to_file.stdout.is_empty());
    let printed = fewroots(&["odd-cell", "--haas", "3"]);
    assert_eq!(std::fs::read(&path).unwrap(), printed.stdout);
}

#[test]
fn certificates_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let system = haas_system_file(dir.path());
    let points = write(dir.path(), "points.json", &serde_json::to_string(&FIVE_POINTS).unwrap());
    let out = fewroots(&["certify", "--system", &system, "--points", &points]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let report = json(&out);
    assert_eq!(report["all_certified"], true);
    assert_eq!(report["distinct"], true);
    let certs: Vec<AlphaCertificate> = serde_json::from_value(report["certificates"].clone()).unwrap();
    assert_eq!(certs.len(), 5);
    assert!(certs.iter().all(|c| c.certified && c.alpha_ub < 0.03));
    assert_eq!(serde_json::to_value(&certs).unwrap(), report["certificates"]);
}

#[test]
fn uncertified_points_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let system = haas_system_file(dir.path());
    let points = write(dir.path(), "points.json", r#"{"points": [["0.5", "0.5"], [0.740238978217, 0.740238978217]]}"#);
    let out = fewroots(&["certify", "--system", &system, "--points", &points]);
    assert_eq!(out.status.code(), Some(2));
    let report = json(&out);
    assert_eq!(report["certificates"][0]["certified"], false);
    assert_eq!(report["certificates"][1]["certified"], true);
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("incomplete"));
}

#[test]
fn bad_input_exits_one() {
    let missing = fewroots(&["odd-cell", "--config", "/nonexistent/config.json"]);
    assert_eq!(missing.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&missing.stderr).contains("/nonexistent/config.json"));
    assert_eq!(fewroots(&["chambers", "--haas", "3", "--precision", "2"]).status.code(), Some(1));
    assert_eq!(fewroots(&["haas", "--a", "x"]).status.code(), Some(1));
    assert_eq!(fewroots(&["hk-param", "--haas", "1"]).status.code(), Some(1));
}

#[test]
fn haas_shortcut_matches_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let [p, q] = HaasSystem::supports(3);
    let system: Vec<Value> =
        [p, q].into_iter().map(|s| serde_json::json!({ "exponents": s, "coefficients": vec!["1"; s.len()] })).collect();
    let config = write(dir.path(), "haas.json", &serde_json::json!({ "system": system }).to_string());
    let from_file = fewroots(&["hk-param", "--config", &config, "--origin", "0", "--cell", "2,3,5"]);
    assert!(from_file.status.success(), "{}", String::from_utf8_lossy(&from_file.stderr));
    let shortcut = fewroots(&["hk-param", "--haas", "3"]);
    assert_eq!(json(&from_file)["integer_exponents"], json(&shortcut)["integer_exponents"]);
}

#[test]
fn svg_is_written_and_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let render = |name: &str, extra: &[&str]| {
        let path = dir.path().join(name);
        let mut args = vec!["chambers", "--haas", "2", "--svg", path.to_str().unwrap()];
        args.extend_from_slice(extra);
        let out = fewroots(&args);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        std::fs::read_to_string(path).unwrap()
    };
    let a = render("a.svg", &[]);
    assert!(a.starts_with("<svg") && a.trim_end().ends_with("</svg>"));
    assert!(a.contains("<polyline") && a.contains("fill-opacity"));
    assert_eq!(a, render("b.svg", &[]));
    let log = render("log.svg", &["--log", "--window", "-2,2,-2,2"]);
    assert_ne!(a, log);
    assert_eq!(
        fewroots(&["chambers", "--haas", "2", "--svg", "/tmp/x.svg", "--window", "1,0,0,1"]).status.code(),
        Some(1)
    );
}
