//! End-to-end checks of the command-line surface: row counts, exit codes,
//! manifest pairing, and error reporting.

use std::path::PathBuf;
use std::process::Command;

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_rhlab")
}

fn tmpdir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("rhlab-cli-{tag}-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn airy_smoke_writes_table_and_manifest() {
    let dir = tmpdir("airy");
    let status = Command::new(bin())
        .args(["airy", "--xmin", "-10", "--xmax", "10", "--n", "81", "--out"])
        .arg(&dir)
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));
    let csv = std::fs::read_to_string(dir.join("airy.csv")).unwrap();
    assert_eq!(csv.lines().count(), 82, "header plus 81 rows");
    assert!(csv.starts_with("x,quadrature,series,abs_diff"));
    let manifest = std::fs::read_to_string(dir.join("airy.manifest.json")).unwrap();
    let parsed: serde_json::Value = serde_json::from_str(&manifest).unwrap();
    assert_eq!(parsed["subcommand"], "airy");
    assert!(parsed["tolerances"]["quadrature_vs_oracle"].as_f64().unwrap() > 0.0);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn szego_reaches_the_limit_value() {
    let dir = tmpdir("szego");
    let status = Command::new(bin())
        .args(["szego", "--logcoeffs", "1:0.3", "--nmax", "30", "--out"])
        .arg(&dir)
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));
    let csv = std::fs::read_to_string(dir.join("szego.csv")).unwrap();
    let last = csv.lines().last().unwrap();
    let logd: f64 = last.split(',').nth(1).unwrap().parse().unwrap();
    assert!((logd - 0.09).abs() <= 1e-6, "final row log D = {logd}");
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn overlapping_arcs_exit_with_config_error() {
    let dir = tmpdir("solve");
    std::fs::write(
        dir.join("bad.json"),
        r#"[ { "kind": "segment", "from": [-1.0,-1.0], "to": [1.0,1.0] },
             { "kind": "segment", "from": [-1.0,1.0], "to": [1.0,-1.0] } ]"#,
    )
    .unwrap();
    std::fs::write(dir.join("jump.json"), r#"{ "builtin": "identity" }"#).unwrap();
    let out = Command::new(bin())
        .args(["solve", "--contour"])
        .arg(dir.join("bad.json"))
        .arg("--jump")
        .arg(dir.join("jump.json"))
        .arg("--out")
        .arg(&dir)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("intersect at an interior point"), "stderr: {stderr}");
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn solve_circle_diag_jump_reports_residue() {
    let dir = tmpdir("solve-ok");
    std::fs::write(
        dir.join("contour.json"),
        r#"[ { "kind": "circle", "center": [0.0, 0.0], "radius": 1.0, "orientation": "ccw" } ]"#,
    )
    .unwrap();
    std::fs::write(dir.join("jump.json"), r#"{ "builtin": "diag", "c": 2.0 }"#).unwrap();
    let status = Command::new(bin())
        .args(["solve", "--contour"])
        .arg(dir.join("contour.json"))
        .arg("--jump")
        .arg(dir.join("jump.json"))
        .arg("--n")
        .arg("16")
        .arg("--out")
        .arg(&dir)
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));
    let manifest: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.join("solve.manifest.json")).unwrap()).unwrap();
    assert!(manifest["residuals"]["jump_residual"].as_f64().unwrap() < 1e-10);
    // the constant diagonal jump has zero residue
    assert!(manifest["residuals"]["m1_12_re"].as_f64().unwrap().abs() < 1e-12);
    let csv = std::fs::read_to_string(dir.join("solve.csv")).unwrap();
    assert_eq!(csv.lines().count(), 17, "header plus 16 node rows");
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn environment_variable_sets_threads() {
    let dir = tmpdir("env");
    let status = Command::new(bin())
        .env("RHLAB_THREADS", "2")
        .args(["airy", "--xmin", "-2", "--xmax", "2", "--n", "9", "--out"])
        .arg(&dir)
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));
    std::fs::remove_dir_all(&dir).ok();
}
