//! Refinement and stability sweeps over one numerics axis.

use std::thread;

use serde_json::{json, Value};

use crate::config::ScenarioConfig;
use crate::error::CliError;
use crate::output::{Cell, Table};
use crate::scenarios::{execute, nominal_spacing, sweep_metric};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum SweepAxis {
    /// Halve the grid spacing at each point.
    Ds,
    /// Scan the CFL number over `[CFL_SCAN_MIN, CFL_SCAN_MAX]`.
    Cfl,
}

pub const CFL_SCAN_MIN: f64 = 0.25;
pub const CFL_SCAN_MAX: f64 = 2.0;

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub grid: usize,
    pub spacing: f64,
    pub cfl: f64,
    pub metric: Option<f64>,
    pub steps: Option<u64>,
    pub stable: bool,
    pub status: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub axis: SweepAxis,
    pub metric: &'static str,
    pub rows: Vec<SweepRow>,
    /// Least-squares slope of `log metric` against `log Δs`.
    pub order: Option<f64>,
    /// Largest scanned cfl below which every point was stable.
    pub largest_stable_cfl: Option<f64>,
}

/// Slope of the least-squares line through `(log x, log y)`; `None` with
/// fewer than two usable points.
pub fn fit_order(points: &[(f64, f64)]) -> Option<f64> {
    let logs: Vec<(f64, f64)> = points
        .iter()
        .filter(|(x, y)| *x > 0.0 && *y > 0.0)
        .map(|(x, y)| (x.ln(), y.ln()))
        .collect();
    if logs.len() < 2 {
        return None;
    }
    let n = logs.len() as f64;
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / n;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = logs.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

fn point_configs(cfg: &ScenarioConfig, axis: SweepAxis, points: usize) -> Result<Vec<ScenarioConfig>, CliError> {
    let grid = cfg
        .numerics
        .grid
        .ok_or_else(|| CliError::validation("numerics.grid", "required for a sweep"))?;
    (0..points)
        .map(|k| {
            let mut c = cfg.clone();
            match axis {
                SweepAxis::Ds => {
                    let g = grid
                        .checked_mul(1usize.checked_shl(k as u32).unwrap_or(0))
                        .filter(|g| *g <= 1 << 22)
                        .ok_or_else(|| CliError::validation("points", "grid refinement overflows"))?;
                    c.numerics.grid = Some(g);
                }
                SweepAxis::Cfl => {
                    c.allow_supercritical = true;
                    if points > 1 {
                        c.numerics.cfl = CFL_SCAN_MIN + (CFL_SCAN_MAX - CFL_SCAN_MIN) * k as f64 / (points - 1) as f64;
                    }
                }
            }
            c.validate()?;
            Ok(c)
        })
        .collect()
}

fn stable_summary(s: &Value) -> bool {
    match (
        s["total_variation_initial"].as_f64(),
        s["total_variation_final"].as_f64(),
    ) {
        (Some(a), Some(b)) => b <= a * (1.0 + 1e-9) + 1e-12,
        _ => true,
    }
}

/// Runs the points concurrently; rows come back in point order.
pub fn sweep(cfg: &ScenarioConfig, axis: SweepAxis, points: usize) -> Result<SweepResult, CliError> {
    if points == 0 {
        return Err(CliError::validation("points", "must be at least 1"));
    }
    let metric = sweep_metric(cfg.scenario).ok_or_else(|| {
        CliError::validation(
            "scenario",
            format!("{} has no sweepable error metric", cfg.scenario.name()),
        )
    })?;
    let configs = point_configs(cfg, axis, points)?;
    let results: Vec<_> = thread::scope(|scope| {
        let handles: Vec<_> = configs.iter().map(|c| scope.spawn(move || execute(c))).collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("scenario thread panicked"))
            .collect()
    });
    let mut rows = Vec::with_capacity(points);
    for (c, r) in configs.iter().zip(results) {
        let grid = c.numerics.grid.expect("checked");
        let row = match r {
            Ok(out) => {
                let s = &out.summary;
                let value = s[metric].as_f64();
                if axis == SweepAxis::Ds && value.is_none() {
                    return Err(CliError::validation(
                        metric,
                        format!("no reference error at grid {grid}"),
                    ));
                }
                SweepRow {
                    grid,
                    spacing: nominal_spacing(c).unwrap_or(f64::NAN),
                    cfl: c.numerics.cfl,
                    metric: value,
                    steps: s["steps"].as_u64(),
                    stable: stable_summary(s) && value.is_none_or(f64::is_finite),
                    status: "ok".into(),
                }
            }
            Err(e) if axis == SweepAxis::Cfl && e.exit_code() == crate::error::EXIT_BLOWUP => SweepRow {
                grid,
                spacing: nominal_spacing(c).unwrap_or(f64::NAN),
                cfl: c.numerics.cfl,
                metric: None,
                steps: None,
                stable: false,
                status: e.to_string(),
            },
            Err(e) => return Err(e),
        };
        rows.push(row);
    }
    let order = match axis {
        SweepAxis::Ds => fit_order(
            &rows
                .iter()
                .filter_map(|r| Some((r.spacing, r.metric?)))
                .collect::<Vec<_>>(),
        ),
        SweepAxis::Cfl => None,
    };
    let largest_stable_cfl = match axis {
        SweepAxis::Cfl => rows.iter().take_while(|r| r.stable).map(|r| r.cfl).last(),
        SweepAxis::Ds => None,
    };
    Ok(SweepResult {
        axis,
        metric,
        rows,
        order,
        largest_stable_cfl,
    })
}

impl SweepResult {
    pub fn table(&self) -> Table {
        let mut t = Table::new(
            "sweep",
            &[
                "point",
                "grid",
                "spacing",
                "cfl",
                self.metric,
                "steps",
                "stable",
                "status",
            ],
        );
        for (k, r) in self.rows.iter().enumerate() {
            t.push(vec![
                k.into(),
                r.grid.into(),
                r.spacing.into(),
                r.cfl.into(),
                r.metric.map_or(Cell::Text(String::new()), Cell::Num),
                r.steps.map_or(Cell::Text(String::new()), |s| Cell::Int(s as i64)),
                i64::from(r.stable).into(),
                r.status.as_str().into(),
            ]);
        }
        t
    }

    pub fn summary(&self) -> Value {
        json!({
            "axis": match self.axis { SweepAxis::Ds => "ds", SweepAxis::Cfl => "cfl" },
            "metric": self.metric,
            "points": self.rows.len(),
            "order": self.order,
            "largest_stable_cfl": self.largest_stable_cfl,
        })
    }
}
