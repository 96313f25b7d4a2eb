//! End-to-end subcommand tests against the built binary.

use std::path::Path;
use std::process::{Command, Output};

fn tanlab(out: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tanlab"))
        .arg("--out")
        .arg(out)
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    let text = String::from_utf8_lossy(&out.stdout);
    serde_json::from_str(text.lines().last().expect("stdout line")).expect("stdout is JSON")
}

#[test]
fn eval_pi_over_4() {
    let dir = tempfile::tempdir().unwrap();
    let out = tanlab(dir.path(), &["eval", "--lambda", "1+0i", "--z", "0.7853981633974483"]);
    assert!(out.status.success());
    assert!(out.stderr.is_empty());
    let doc = stdout_json(&out);
    assert!((doc["value"]["re"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    assert!(doc["value"]["im"].as_f64().unwrap().abs() < 1e-12);
}

#[test]
fn eval_rejects_zero_lambda() {
    let dir = tempfile::tempdir().unwrap();
    let out = tanlab(dir.path(), &["eval", "--lambda", "0", "--z", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("lambda must be nonzero"));
}

#[test]
fn eval_rejects_garbage_literal() {
    let dir = tempfile::tempdir().unwrap();
    let out = tanlab(dir.path(), &["eval", "--lambda", "xyz", "--z", "1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn siegel_golden_run_and_reproducibility() {
    let d1 = tempfile::tempdir().unwrap();
    let d2 = tempfile::tempdir().unwrap();
    let args = ["siegel", "--quadratic", "golden", "--coeffs", "200"];
    let o1 = tanlab(d1.path(), &args);
    assert!(o1.status.success(), "stderr: {}", String::from_utf8_lossy(&o1.stderr));
    assert!(o1.stderr.is_empty());
    let doc = stdout_json(&o1);
    assert_eq!(doc["verdict"], "UnboundedLikely");

    let report = d1.path().join("siegel.json");
    let traces = d1.path().join("traces.csv");
    let manifest = d1.path().join("siegel.json.manifest.json");
    assert!(report.exists() && traces.exists() && manifest.exists());
    let m: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&manifest).unwrap()).unwrap();
    assert_eq!(m["subcommand"], "siegel");
    assert!(m["output_sha256"].as_str().unwrap().len() == 64);

    let o2 = tanlab(d2.path(), &args);
    assert!(o2.status.success());
    assert_eq!(
        std::fs::read(&report).unwrap(),
        std::fs::read(d2.path().join("siegel.json")).unwrap()
    );
    assert_eq!(
        std::fs::read(&traces).unwrap(),
        std::fs::read(d2.path().join("traces.csv")).unwrap()
    );
}

#[test]
fn siegel_rational_theta_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let out = tanlab(dir.path(), &["siegel", "--theta", "0.5"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn siegel_too_few_coeffs_exits_4() {
    let dir = tempfile::tempdir().unwrap();
    let out = tanlab(dir.path(), &["siegel", "--quadratic", "golden", "--coeffs", "10"]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn scan_writes_image_and_histogram() {
    let dir = tempfile::tempdir().unwrap();
    let out = tanlab(
        dir.path(),
        &["--threads", "2", "scan", "--lambda", "0.5+0i", "--rect", "-1.2,-1.2,1.2,1.2", "--res", "32"],
    );
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("attracted_p1"));
    assert!(dir.path().join("scan.ppm").exists());
    assert!(dir.path().join("scan.legend.json").exists());
    assert!(dir.path().join("scan.ppm.manifest.json").exists());
}

#[test]
fn scan_unwritable_out_exits_5() {
    let dir = tempfile::tempdir().unwrap();
    let blocker = dir.path().join("blocked");
    std::fs::write(&blocker, b"file, not a directory").unwrap();
    let out = tanlab(
        &blocker,
        &["scan", "--lambda", "0.5+0i", "--rect", "-1,-1,1,1", "--res", "4"],
    );
    assert_eq!(out.status.code(), Some(5));
}

#[test]
fn param_scan_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = tanlab(
        dir.path(),
        &["param-scan", "--range", "0.1,0.2", "--samples", "4"],
    );
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let csv = std::fs::read_to_string(dir.path().join("param_scan.csv")).unwrap();
    assert!(csv.starts_with("theta,period,multiplier_abs,siegel_flag\n"));
    assert_eq!(csv.lines().count(), 5);
}

#[test]
fn cf_golden_and_rational() {
    let dir = tempfile::tempdir().unwrap();
    let out = tanlab(dir.path(), &["cf", "--quadratic", "golden", "--depth", "30"]);
    assert!(out.status.success());
    let doc = stdout_json(&out);
    let quotients = doc["quotients"].as_array().unwrap();
    assert_eq!(quotients.len(), 30);
    assert!(quotients.iter().all(|q| q == 1));
    assert_eq!(doc["rational"], false);

    let out = tanlab(dir.path(), &["cf", "--x", "0.25"]);
    assert!(out.status.success());
    assert_eq!(stdout_json(&out)["rational"], true);
}

#[test]
fn lift_segment_and_translate() {
    let dir = tempfile::tempdir().unwrap();
    let curve = dir.path().join("curve.csv");
    let mut csv = String::from("re,im\n");
    for j in 0..=64 {
        csv.push_str(&format!("{},0\n", 1.0 + j as f64 / 64.0));
    }
    std::fs::write(&curve, csv).unwrap();

    let base = std::f64::consts::FRAC_PI_4;
    let out = tanlab(
        dir.path(),
        &["lift", "--curve", curve.to_str().unwrap(), "--base", &base.to_string(), "--lambda", "1+0i"],
    );
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let doc = stdout_json(&out);
    assert!(doc["max_roundtrip_deviation"].as_f64().unwrap() < 1e-9);
    let lifted = std::fs::read_to_string(dir.path().join("lift.csv")).unwrap();
    let last = lifted.lines().last().unwrap();
    let end: f64 = last.split(',').next().unwrap().parse().unwrap();
    assert!((end - 2.0f64.atan()).abs() < 1e-9, "endpoint {end}");

    // same curve lifted a sheet up
    let base_up = base + std::f64::consts::PI;
    let out = tanlab(
        dir.path(),
        &["lift", "--curve", curve.to_str().unwrap(), "--base", &base_up.to_string(), "--lambda", "1+0i"],
    );
    assert!(out.status.success());
    let lifted = std::fs::read_to_string(dir.path().join("lift.csv")).unwrap();
    let end: f64 = lifted.lines().last().unwrap().split(',').next().unwrap().parse().unwrap();
    assert!((end - (2.0f64.atan() + std::f64::consts::PI)).abs() < 1e-9);
}

#[test]
fn lift_through_omitted_value_exits_6() {
    let dir = tempfile::tempdir().unwrap();
    let curve = dir.path().join("curve.csv");
    let mut csv = String::from("re,im\n");
    for j in 0..=64 {
        let t = -1.0 + 2.0 * j as f64 / 64.0;
        csv.push_str(&format!("{t},1\n")); // passes through i at t = 0
    }
    std::fs::write(&curve, csv).unwrap();
    let out = tanlab(
        dir.path(),
        &["lift", "--curve", curve.to_str().unwrap(), "--base", "0.5i", "--lambda", "1+0i"],
    );
    assert_eq!(out.status.code(), Some(6));
    assert!(String::from_utf8_lossy(&out.stderr).contains("nearest approach"));
}

#[test]
fn bounded_scan_reports_heuristic() {
    let dir = tempfile::tempdir().unwrap();
    let out = tanlab(
        dir.path(),
        &["bounded-scan", "--candidates", "golden,sqrt2m1", "--coeffs", "200"],
    );
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("bounded_scan.json")).unwrap())
            .unwrap();
    assert_eq!(doc["heuristic"], true);
    let cands = doc["candidates"].as_array().unwrap();
    assert_eq!(cands.len(), 2);
    for c in cands {
        assert_ne!(c["verdict"], "BoundedLikely");
    }
}
