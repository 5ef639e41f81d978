use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_egf-lab");

fn configs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("configs")
}

fn egf(args: &[&str], env_out: Option<&Path>) -> Output {
    let mut cmd = Command::new(BIN);
    cmd.args(args).env_remove("EGF_LAB_OUT");
    if let Some(dir) = env_out {
        cmd.env("EGF_LAB_OUT", dir);
    }
    cmd.output().expect("binary runs")
}

fn write_config(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn missing_grid_exits_2_with_field_path() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(
        tmp.path(),
        "bad.json",
        r#"{"scenario": "umbilical-flow", "functional": {"name": "b1", "n": 1},
            "initial": {"lambda": {"kind": "sine", "amplitude": 1.0}}, "numerics": {"t_end": 1.0}}"#,
    );
    let out = egf(&["run", &cfg, "--out", tmp.path().join("o").to_str().unwrap()], None);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("numerics.grid"));
}

#[test]
fn unknown_functional_is_a_validation_error() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(
        tmp.path(),
        "bad.json",
        r#"{"scenario": "soliton-check", "functional": {"name": "cubic", "n": 1}}"#,
    );
    let out = egf(&["run", &cfg], None);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("functional"));
}

#[test]
fn resonance_exits_4_naming_the_mode() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = configs().join("cohomology_resonant.json");
    let out = egf(
        &[
            "cohomology",
            cfg.to_str().unwrap(),
            "--out",
            tmp.path().to_str().unwrap(),
        ],
        None,
    );
    assert_eq!(out.status.code(), Some(4));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("[-2, 1]") || err.contains("[2, -1]"), "{err}");
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(tmp.path().join("report.json")).unwrap()).unwrap();
    assert_eq!(report["exit_status"], 4);
}

#[test]
fn env_var_sets_output_dir_and_flag_wins() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = configs().join("warping_constant.json");
    let env_dir = tmp.path().join("env");
    let out = egf(&["run", cfg.to_str().unwrap(), "--quiet"], Some(&env_dir));
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    assert!(env_dir.join("snapshots.csv").exists());

    let flag_dir = tmp.path().join("flag");
    let out = egf(
        &[
            "run",
            cfg.to_str().unwrap(),
            "--quiet",
            "--out",
            flag_dir.to_str().unwrap(),
        ],
        Some(&env_dir.join("x")),
    );
    assert_eq!(out.status.code(), Some(0));
    assert!(flag_dir.join("report.json").exists());
    assert!(!env_dir.join("x").exists());
}

#[test]
fn classify_prints_balanced_pair() {
    let out = egf(&["classify", "--n", "4", "--tau1", "0", "--r", "1"], None);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["roots"], serde_json::json!([1.0, -1.0]));
    assert_eq!(v["multiplicities"], serde_json::json!([2, 2]));
    let out = egf(&["classify", "--n", "5", "--tau1", "0", "--r", "-1"], None);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["refused"], true);
}

#[test]
fn single_point_sweep_has_no_fit() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = configs().join("cone.json");
    let out = egf(
        &[
            "sweep",
            cfg.to_str().unwrap(),
            "--axis",
            "ds",
            "--points",
            "1",
            "--out",
            tmp.path().to_str().unwrap(),
        ],
        None,
    );
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(v["order"].is_null());
    let csv = fs::read_to_string(tmp.path().join("sweep.csv")).unwrap();
    assert_eq!(csv.lines().count(), 2);
}

#[test]
fn sweep_rejects_static_scenarios() {
    let cfg = configs().join("revolution.json");
    let out = egf(&["sweep", cfg.to_str().unwrap(), "--axis", "ds"], None);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn csv_dialect() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = configs().join("cone.json");
    let out = egf(
        &[
            "run",
            cfg.to_str().unwrap(),
            "--quiet",
            "--out",
            tmp.path().to_str().unwrap(),
        ],
        None,
    );
    assert_eq!(out.status.code(), Some(0));
    let bytes = fs::read(tmp.path().join("cone.csv")).unwrap();
    assert!(!bytes.contains(&b'\r'));
    let text = String::from_utf8(bytes).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("x0,lambda,lambda_exact,phi"));
    let first: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(first.len(), 4);
    for cell in first {
        let digits = cell.split('e').next().unwrap().trim_start_matches('-').replace('.', "");
        assert_eq!(digits.len(), 17, "{cell}");
    }
}

#[test]
fn report_echo_reruns_identically() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = configs().join("tau_flow.json");
    let a = tmp.path().join("a");
    assert_eq!(
        egf(
            &["run", cfg.to_str().unwrap(), "--quiet", "--out", a.to_str().unwrap()],
            None
        )
        .status
        .code(),
        Some(0)
    );
    let report: serde_json::Value = serde_json::from_str(&fs::read_to_string(a.join("report.json")).unwrap()).unwrap();
    let echo = write_config(tmp.path(), "echo.json", &report["config"].to_string());
    let b = tmp.path().join("b");
    assert_eq!(
        egf(&["run", &echo, "--quiet", "--out", b.to_str().unwrap()], None)
            .status
            .code(),
        Some(0)
    );
    assert_eq!(
        fs::read(a.join("snapshots.csv")).unwrap(),
        fs::read(b.join("snapshots.csv")).unwrap()
    );
}
