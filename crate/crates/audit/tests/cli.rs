use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn stein_audit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_stein-audit"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

/// CSV contents without the leading metadata line.
fn body(path: &Path) -> String {
    let text = fs::read_to_string(path).unwrap();
    assert!(text.starts_with("# stein-audit "));
    text.split_once('\n').unwrap().1.to_string()
}

#[test]
fn uniform_point_at_center() {
    let dir = tempfile::tempdir().unwrap();
    let sample = write(dir.path(), "s.csv", "x1\n0.5\n");
    let target = write(dir.path(), "u.json", r#"{"name": "uniform01"}"#);
    let out = stein_audit(&["discrepancy", "--sample", &sample, "--target", &target]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(stdout(&out).starts_with("total 0.25\n"), "{}", stdout(&out));

    let out = stein_audit(&["discrepancy", "--sample", &sample, "--target", &target, "--univariate"]);
    assert!(stdout(&out).starts_with("total 0.25\n"));
}

#[test]
fn factors_scale_the_result() {
    let dir = tempfile::tempdir().unwrap();
    let sample = write(dir.path(), "s.csv", "x1\n0.5\n");
    let target = write(dir.path(), "u.json", r#"{"name": "uniform01"}"#);
    let out_dir = dir.path().join("out");
    let out = stein_audit(&[
        "discrepancy",
        "--sample",
        &sample,
        "--target",
        &target,
        "--factors",
        "2,2,2",
        "--certificates",
        "--out-dir",
        out_dir.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let json: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out_dir.join("discrepancy.json")).unwrap()).unwrap();
    assert!((json["total"].as_f64().unwrap() - 0.5).abs() < 1e-9);
    assert_eq!(json["n"], 1);
    assert_eq!(json["schema_version"], 1);
    let certs = fs::read_to_string(out_dir.join("certificates.csv")).unwrap();
    assert!(certs.starts_with("coordinate,vertex,x1,gamma,Gamma1\n"));
}

#[test]
fn malformed_sample_exits_with_input_code() {
    let dir = tempfile::tempdir().unwrap();
    let sample = write(dir.path(), "bad.csv", "x1\n0.5\nabc\n");
    let target = write(dir.path(), "u.json", r#"{"name": "uniform01"}"#);
    let out = stein_audit(&["discrepancy", "--sample", &sample, "--target", &target]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("line 3"), "{}", stderr(&out));
}

#[test]
fn point_outside_support_exits_with_domain_code() {
    let dir = tempfile::tempdir().unwrap();
    let sample = write(dir.path(), "s.csv", "x1\n-0.5\n");
    let target = write(dir.path(), "u.json", r#"{"name": "uniform01"}"#);
    let out = stein_audit(&["discrepancy", "--sample", &sample, "--target", &target]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn unknown_target_exits_with_input_code() {
    let dir = tempfile::tempdir().unwrap();
    let sample = write(dir.path(), "s.csv", "x1\n0.5\n");
    let target = write(dir.path(), "t.json", r#"{"name": "cauchy"}"#);
    let out = stein_audit(&["discrepancy", "--sample", &sample, "--target", &target]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn experiment_bodies_are_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let runs: Vec<_> = ["a", "b"]
        .iter()
        .map(|name| {
            let out_dir = dir.path().join(name);
            let out = stein_audit(&[
                "rates",
                "--seeds",
                "3",
                "--n-schedule",
                "10,20,40",
                "--out-dir",
                out_dir.to_str().unwrap(),
            ]);
            assert!(out.status.success(), "{}", stderr(&out));
            out_dir
        })
        .collect();
    let first = body(&runs[0].join("rates.csv"));
    assert_eq!(first, body(&runs[1].join("rates.csv")));
    assert!(first.starts_with("schema_version,"));
    assert_eq!(
        fs::read_to_string(runs[0].join("rates_summary.json")).unwrap(),
        fs::read_to_string(runs[1].join("rates_summary.json")).unwrap()
    );
}

#[test]
fn density_grid_has_requested_size() {
    let dir = tempfile::tempdir().unwrap();
    let out = stein_audit(&["density-grid", "--resolution", "7", "--out-dir", dir.path().to_str().unwrap()]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = body(&dir.path().join("density_grid.csv"));
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("schema_version,theta1,theta2,log_density"));
    assert_eq!(lines.count(), 49);
}

#[test]
fn bad_schedule_is_rejected() {
    let out = stein_audit(&["rates", "--n-schedule", "20,10"]);
    assert_eq!(out.status.code(), Some(2));
}
