//! Scenario runner for the extrinsic geometric flow kernels: JSON configs in,
//! CSV tables and a JSON report out.

pub mod config;
pub mod error;
pub mod output;
pub mod scenarios;
pub mod sweep;

use std::path::{Path, PathBuf};
use std::time::Instant;

use serde_json::{json, Value};

pub use config::{load, parse, Scenario, ScenarioConfig};
pub use error::CliError;
pub use output::{Outcome, Table};

/// Overrides the output directory unless `--out` is given.
pub const OUT_ENV: &str = "EGF_LAB_OUT";
pub const DEFAULT_OUT: &str = "egf-out";

/// `--out`, then `EGF_LAB_OUT`, then `output.dir`, then [`DEFAULT_OUT`].
pub fn resolve_out_dir(cli: Option<&Path>, cfg: &ScenarioConfig) -> PathBuf {
    if let Some(p) = cli {
        return p.to_path_buf();
    }
    if let Some(p) = std::env::var_os(OUT_ENV).filter(|p| !p.is_empty()) {
        return PathBuf::from(p);
    }
    cfg.output.dir.clone().unwrap_or_else(|| PathBuf::from(DEFAULT_OUT))
}

pub fn versions() -> Value {
    json!({ "egf-lab": env!("CARGO_PKG_VERSION") })
}

/// Report for a finished or failed run. Wall time is the only
/// nondeterministic field.
pub fn run_report(cfg: &ScenarioConfig, result: Result<&Value, &CliError>, wall: f64, files: &[PathBuf]) -> Value {
    let (status, results, error) = match result {
        Ok(v) => (error::EXIT_OK, v.clone(), Value::Null),
        Err(e) => (e.exit_code(), Value::Null, json!(e.to_string())),
    };
    json!({
        "scenario": cfg.scenario.name(),
        "config": cfg,
        "versions": versions(),
        "wall_time_s": wall,
        "results": results,
        "outputs": files
            .iter()
            .filter_map(|p| p.file_name().map(|n| n.to_string_lossy().into_owned()))
            .collect::<Vec<_>>(),
        "exit_status": status,
        "error": error,
    })
}

#[derive(Debug)]
pub struct RunOutput {
    pub outcome: Outcome,
    pub report: Value,
    pub files: Vec<PathBuf>,
}

/// Runs a validated config and writes its tables and report into `out_dir`.
/// On failure the report (with the error) is still written when possible.
pub fn run_to_dir(cfg: &ScenarioConfig, out_dir: &Path) -> Result<RunOutput, CliError> {
    let start = Instant::now();
    match scenarios::execute(cfg) {
        Ok(outcome) => {
            let names: Vec<PathBuf> = outcome
                .tables
                .iter()
                .map(|t| PathBuf::from(format!("{}.csv", t.name)))
                .chain(std::iter::once(PathBuf::from("report.json")))
                .collect();
            let report = run_report(cfg, Ok(&outcome.summary), start.elapsed().as_secs_f64(), &names);
            let files = output::write_outputs(out_dir, &outcome, &report, cfg.output.gnuplot)?;
            Ok(RunOutput { outcome, report, files })
        }
        Err(e) => {
            let report = run_report(cfg, Err(&e), start.elapsed().as_secs_f64(), &[]);
            // The scenario error is the one worth reporting.
            let _ = output::write_outputs(out_dir, &Outcome::new(Value::Null), &report, false);
            Err(e)
        }
    }
}

/// Runs a sweep and writes `sweep.csv` and `report.json` into `out_dir`.
pub fn sweep_to_dir(
    cfg: &ScenarioConfig,
    axis: sweep::SweepAxis,
    points: usize,
    out_dir: &Path,
) -> Result<(sweep::SweepResult, Value), CliError> {
    let start = Instant::now();
    let res = sweep::sweep(cfg, axis, points)?;
    let mut outcome = Outcome::new(res.summary());
    outcome.tables.push(res.table());
    let names = [PathBuf::from("sweep.csv"), PathBuf::from("report.json")];
    let report = run_report(cfg, Ok(&outcome.summary), start.elapsed().as_secs_f64(), &names);
    output::write_outputs(out_dir, &outcome, &report, false)?;
    Ok((res, report))
}
