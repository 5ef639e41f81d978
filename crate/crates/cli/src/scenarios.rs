//! Scenario dispatch. Each scenario returns an [`Outcome`]; nothing here
//! touches the filesystem except reading a grid right-hand side.

use std::path::Path;

use egf_core::cohomology_solver::{
    amplification_report, solve_linear_flow, FourierTable, GridSample, RightHandSide, TorusCohomologyProblem,
};
use egf_core::flow_engine::{
    characteristics_oracle, normalized_ricci_step, run_tau_system, run_umbilical, total_variation, FlowError, Grid,
    NormalizationSign, RunOptions, StepControl, TauField, UmbilicalProfile,
};
use egf_core::revolution_geometry::{
    closed_form_gamma, cone_flow_check, curvature_table, integrate_constant_lambda, sectional_curvature_profile,
    ConeFlowSetup,
};
use egf_core::soliton_lab::{
    analytic_tolerance, check_biregular_surface, check_normal_soliton, classify_ricci_soliton,
    conformal_killing_factor, fd_tolerance, mu_continuity_gap, mu_of_lambda, BiregularGrid, EpsChoice, RootStructure,
    SolitonReport, Verdict,
};
use egf_core::sym_curvature::{
    classify_extrinsic_ricci_flat, elementary_from_power, power_sums, psi_of_lambda, PrincipalCurvatureSpectrum,
    RicciFlatVerdict,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::config::{
    CohomologyConfig, EpsConfig, NormalizationConfig, ProfileConfig, RicciConfig, Scenario, ScenarioConfig,
    SpectraAuditConfig,
};
use crate::error::CliError;
use crate::output::{Cell, Outcome, Table};

/// Seed salts so λ and φ draw independent coefficients from one seed.
const LAMBDA_SALT: u64 = 0x6c61_6d62;
const PHI_SALT: u64 = 0x7068_6900;

pub fn execute(cfg: &ScenarioConfig) -> Result<Outcome, CliError> {
    match cfg.scenario {
        Scenario::UmbilicalFlow => umbilical_flow(cfg),
        Scenario::TauFlow => tau_flow(cfg),
        Scenario::SolitonCheck => soliton_check(cfg),
        Scenario::BiregularCheck => biregular_check(cfg),
        Scenario::RicciClassify => ricci_classify(cfg.ricci.as_ref().expect("validated"), cfg.numerics.seed),
        Scenario::Cohomology => cohomology(cfg.cohomology.as_ref().expect("validated"), cfg.base_dir.as_deref()),
        Scenario::Revolution => revolution(cfg),
        Scenario::ConeCheck => cone_check(cfg),
    }
}

/// Name of the summary field a sweep fits against the step size.
pub fn sweep_metric(scenario: Scenario) -> Option<&'static str> {
    match scenario {
        Scenario::UmbilicalFlow | Scenario::ConeCheck => Some("lambda_error"),
        Scenario::TauFlow => Some("umbilicity_defect"),
        _ => None,
    }
}

/// Grid spacing a flow scenario will use, without running it.
pub fn nominal_spacing(cfg: &ScenarioConfig) -> Option<f64> {
    match cfg.scenario {
        Scenario::ConeCheck => {
            let c = cfg.cone.as_ref()?;
            Some(Grid::interval(c.a, c.b, cfg.numerics.grid?).ok()?.spacing())
        }
        Scenario::UmbilicalFlow | Scenario::TauFlow | Scenario::SolitonCheck => Some(grid(cfg).ok()?.spacing()),
        _ => None,
    }
}

type Profile1d = Box<dyn Fn(f64) -> f64 + Send + Sync>;

fn profile_fn(p: &ProfileConfig, origin: f64, length: f64, seed: u64) -> Profile1d {
    let tau = std::f64::consts::TAU;
    match *p {
        ProfileConfig::Constant { value } => Box::new(move |_| value),
        ProfileConfig::Sine {
            amplitude,
            wavenumber,
            offset,
            phase,
        } => {
            let k = f64::from(wavenumber);
            Box::new(move |s| offset + amplitude * (tau * k * (s - origin) / length + phase).sin())
        }
        ProfileConfig::Random {
            modes,
            amplitude,
            offset,
        } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let coeffs: Vec<(f64, f64)> = (1..=modes)
                .map(|k| {
                    let scale = amplitude / f64::from(k);
                    (scale * rng.gen_range(-1.0..=1.0), scale * rng.gen_range(-1.0..=1.0))
                })
                .collect();
            Box::new(move |s| {
                let x = tau * (s - origin) / length;
                offset
                    + coeffs
                        .iter()
                        .enumerate()
                        .map(|(k, (a, b))| {
                            let kx = (k + 1) as f64 * x;
                            a * kx.sin() + b * kx.cos()
                        })
                        .sum::<f64>()
            })
        }
    }
}

fn grid(cfg: &ScenarioConfig) -> Result<Grid<f64>, CliError> {
    let n = &cfg.numerics;
    Ok(Grid::new(
        n.origin,
        cfg.length(),
        n.grid.expect("validated"),
        n.boundary.into(),
    )?)
}

fn control(cfg: &ScenarioConfig) -> StepControl<f64> {
    let n = &cfg.numerics;
    let mut ctl = StepControl::new(n.cfl, n.scheme.into(), n.t_end.unwrap_or(0.0)).with_integrator(n.integrator.into());
    if let Some(m) = n.max_steps {
        ctl = ctl.with_max_steps(m);
    }
    ctl.allow_supercritical = cfg.allow_supercritical;
    ctl
}

fn initial_profile(cfg: &ScenarioConfig, grid: Grid<f64>) -> Result<(UmbilicalProfile<f64>, Profile1d), CliError> {
    let init = cfg.initial.as_ref().expect("validated");
    let (o, l, seed) = (cfg.numerics.origin, cfg.length(), cfg.numerics.seed);
    let lam = profile_fn(&init.lambda, o, l, seed ^ LAMBDA_SALT);
    let phi = profile_fn(&init.phi, o, l, seed ^ PHI_SALT);
    let p = UmbilicalProfile::from_fn(grid, &lam, &phi)?;
    Ok((p, lam))
}

fn sup_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0, |m, (x, y)| m.max((x - y).abs()))
}

fn snapshot_rows(table: &mut Table, p: &UmbilicalProfile<f64>) {
    for (i, s) in p.grid.coordinates().into_iter().enumerate() {
        table.push(vec![p.t.into(), s.into(), p.lambda[i].into(), p.phi[i].into()]);
    }
}

fn constant_value(values: &[f64]) -> Option<f64> {
    let first = *values.first()?;
    values.iter().all(|&v| v == first).then_some(first)
}

fn umbilical_flow(cfg: &ScenarioConfig) -> Result<Outcome, CliError> {
    let f = cfg.functional.as_ref().expect("validated").build()?;
    let grid = grid(cfg)?;
    let (p0, lam0) = initial_profile(cfg, grid.clone())?;
    let ctl = control(cfg);
    if let Some(norm) = cfg.flow.as_ref().and_then(|fl| fl.normalized_ricci) {
        return normalized_flow(cfg, &p0, &ctl, norm);
    }
    let stride = cfg.output.snapshot_stride;
    let mut snaps = Table::new("snapshots", &["t", "s", "lambda", "phi"]);
    let opts = RunOptions {
        snapshot_stride: stride,
        record_history: false,
    };
    let run = run_umbilical(&p0, &f, &ctl, opts, |p| snapshot_rows(&mut snaps, p))?;
    let p = &run.profile;
    if stride == 0 {
        snapshot_rows(&mut snaps, &p0);
        snapshot_rows(&mut snaps, p);
    }

    let mut notes = Vec::new();
    let lambda_error = match characteristics_oracle(&*lam0, &grid, p.t, &f) {
        Ok(exact) => Some(sup_diff(&p.lambda, &exact)),
        Err(FlowError::ShockFormed { t }) => {
            notes.push(format!("characteristics cross before t = {t}; no reference solution"));
            None
        }
        Err(e) => return Err(e.into()),
    };
    let warping_error = constant_value(&p0.lambda).map(|c| {
        let g = (0.5 * p.t * psi_of_lambda(&f, c)).exp();
        let exact: Vec<f64> = p0.phi.iter().map(|phi| phi * g).collect();
        sup_diff(&p.phi, &exact)
    });
    let boundary = grid.boundary();
    let summary = json!({
        "functional": f.name(),
        "steps": run.steps,
        "t_final": p.t,
        "spacing": grid.spacing(),
        "lambda_error": lambda_error,
        "warping_error": warping_error,
        "total_variation_initial": total_variation(&p0.lambda, boundary),
        "total_variation_final": total_variation(&p.lambda, boundary),
        "notes": notes,
    });
    let mut out = Outcome::new(summary);
    out.tables.push(snaps);
    out.plots.push(("snapshots".into(), 1, 2));
    Ok(out)
}

fn normalized_flow(
    cfg: &ScenarioConfig,
    p0: &UmbilicalProfile<f64>,
    ctl: &StepControl<f64>,
    norm: NormalizationConfig,
) -> Result<Outcome, CliError> {
    let sign = match norm {
        NormalizationConfig::FixedPoint => NormalizationSign::FixedPointPreserving,
        NormalizationConfig::AsPrinted => NormalizationSign::AsPrinted,
    };
    let stride = cfg.output.snapshot_stride;
    let mut snaps = Table::new("snapshots", &["t", "s", "lambda", "phi"]);
    let mut steps_table = Table::new(
        "steps",
        &["step", "t", "dt", "rho", "normalization_integral", "phi_drift"],
    );
    snapshot_rows(&mut snaps, p0);
    let mut p = p0.clone();
    let (mut steps, mut max_integral, mut max_drift) = (0usize, 0.0f64, 0.0f64);
    while p.t < ctl.t_end {
        if steps >= ctl.max_steps {
            return Err(FlowError::NoProgress {
                t: p.t,
                t_end: ctl.t_end,
                steps,
            }
            .into());
        }
        let (next, rep) = normalized_ricci_step(&p, ctl, sign)?;
        if next.lambda.iter().chain(&next.phi).any(|v| !v.is_finite()) {
            return Err(FlowError::BlowUp {
                last_valid_t: p.t,
                reason: "non-finite normalized step".into(),
            }
            .into());
        }
        steps += 1;
        let drift = next
            .phi
            .iter()
            .zip(&p.phi)
            .fold(0.0f64, |m, (a, b)| m.max((a / b - 1.0).abs()));
        max_drift = max_drift.max(drift);
        max_integral = max_integral.max(rep.normalization_integral.abs());
        steps_table.push(vec![
            steps.into(),
            next.t.into(),
            rep.dt.into(),
            rep.rho.into(),
            rep.normalization_integral.into(),
            drift.into(),
        ]);
        p = next;
        if stride > 0 && steps % stride == 0 && p.t < ctl.t_end {
            snapshot_rows(&mut snaps, &p);
        }
    }
    if steps > 0 {
        snapshot_rows(&mut snaps, &p);
    }
    let summary = json!({
        "functional": "ext_ricci",
        "normalization": match norm {
            NormalizationConfig::FixedPoint => "fixed-point",
            NormalizationConfig::AsPrinted => "as-printed",
        },
        "steps": steps,
        "t_final": p.t,
        "max_phi_drift_per_step": max_drift,
        "max_normalization_integral": max_integral,
    });
    let mut out = Outcome::new(summary);
    out.tables.push(snaps);
    out.tables.push(steps_table);
    Ok(out)
}

fn tau_flow(cfg: &ScenarioConfig) -> Result<Outcome, CliError> {
    let f = cfg.functional.as_ref().expect("validated").build()?;
    let n = f.n();
    let grid = grid(cfg)?;
    let (p0, lam0) = initial_profile(cfg, grid.clone())?;
    let ctl = control(cfg);
    let field0 = TauField::from_umbilical(grid.clone(), n, &*lam0)?;
    let mut header = vec!["t".to_string(), "s".to_string()];
    header.extend((1..=n).map(|j| format!("tau{j}")));
    let mut snaps = Table::with_header("snapshots", header);
    let push = |table: &mut Table, field: &TauField<f64>| {
        for (i, s) in field.grid.coordinates().into_iter().enumerate() {
            let mut row: Vec<Cell> = vec![field.t.into(), s.into()];
            row.extend(field.tau[i].iter().map(|&v| Cell::Num(v)));
            table.push(row);
        }
    };
    let stride = cfg.output.snapshot_stride;
    let (field, steps) = run_tau_system(&field0, &f, &ctl, stride, |fl| push(&mut snaps, fl))?;
    if stride == 0 {
        push(&mut snaps, &field0);
        push(&mut snaps, &field);
    }
    let scalar = run_umbilical(&p0, &f, &ctl, RunOptions::default(), |_| {})?;
    let nf = n as f64;
    let tau1_over_n: Vec<f64> = field.component(0).iter().map(|t| t / nf).collect();
    let summary = json!({
        "functional": f.name(),
        "n": n,
        "steps": steps,
        "t_final": field.t,
        "spacing": grid.spacing(),
        "umbilicity_defect": field.umbilicity_defect(),
        "scalar_agreement": sup_diff(&tau1_over_n, &scalar.profile.lambda),
    });
    let mut out = Outcome::new(summary);
    out.tables.push(snaps);
    Ok(out)
}

fn eps_choice(e: &EpsConfig) -> EpsChoice<f64> {
    match *e {
        EpsConfig::Value(v) => EpsChoice::Value(v),
        EpsConfig::Named(_) => EpsChoice::Auto,
    }
}

fn verdict_name(v: Verdict) -> &'static str {
    match v {
        Verdict::Soliton => "soliton",
        Verdict::NotSoliton => "not-soliton",
        Verdict::Degenerate => "degenerate",
    }
}

fn report_json(r: &SolitonReport<f64>) -> Value {
    json!({
        "verdict": verdict_name(r.verdict),
        "eps_used": r.eps_used,
        "alternative_eps": r.alternative_eps,
        "n_lambda_norm": r.n_lambda_norm,
        "tolerance": r.tolerance,
        "max_residual": r.max_residual(),
        "residuals": r.residuals.iter().map(|x| json!({"equation": x.equation, "linf": x.linf, "l2": x.l2})).collect::<Vec<_>>(),
        "notes": r.notes,
    })
}

fn residual_table(r: &SolitonReport<f64>) -> Table {
    let mut t = Table::new("residuals", &["equation", "linf", "l2"]);
    for x in &r.residuals {
        t.push(vec![x.equation.as_str().into(), x.linf.into(), x.l2.into()]);
    }
    t
}

fn soliton_check(cfg: &ScenarioConfig) -> Result<Outcome, CliError> {
    let f = cfg.functional.as_ref().expect("validated").build()?;
    let (p, _) = initial_profile(cfg, grid(cfg)?)?;
    let sol = cfg.soliton.clone().unwrap_or(crate::config::SolitonConfig {
        eps: EpsConfig::default(),
        tol: None,
    });
    let tol = sol.tol.unwrap_or_else(analytic_tolerance);
    let report = check_normal_soliton(&p, &f, eps_choice(&sol.eps), tol);
    let ck = conformal_killing_factor(&p, &f, report.eps_used, tol);
    let mut profile = Table::new("profile", &["s", "lambda", "psi", "mu", "conformal_factor"]);
    for (i, s) in p.s().into_iter().enumerate() {
        let l = p.lambda[i];
        profile.push(vec![
            s.into(),
            l.into(),
            psi_of_lambda(&f, l).into(),
            mu_of_lambda(&f, l).into(),
            ck.mu[i].into(),
        ]);
    }
    let mut summary = report_json(&report);
    summary["functional"] = json!(f.name());
    summary["mu_continuity_gap"] = json!(mu_continuity_gap(&f));
    summary["conformal_killing"] = json!({"killing": ck.killing, "homothety": ck.homothety});
    let mut out = Outcome::new(summary);
    out.tables.push(profile);
    out.tables.push(residual_table(&report));
    Ok(out)
}

fn biregular_check(cfg: &ScenarioConfig) -> Result<Outcome, CliError> {
    let f = cfg.functional.as_ref().expect("validated").build()?;
    let b = cfg.biregular.as_ref().expect("validated");
    let mut g = BiregularGrid::from_fn(
        b.lengths,
        b.nodes,
        b.periodic,
        |x, y| b.g00.eval(x, y),
        |x, y| b.g11.eval(x, y),
    )?;
    if let (Some(x0), Some(x1)) = (&b.x0, &b.x1) {
        g = g.with_field_fn(|x, y| x0.eval(x, y), |x, y| x1.eval(x, y))?;
    }
    let tol = b.tol.unwrap_or_else(|| fd_tolerance(g.spacing(0).max(g.spacing(1))));
    let report = check_biregular_surface(&g, &f, eps_choice(&b.eps), tol)?;
    let mut summary = report_json(&report);
    summary["functional"] = json!(f.name());
    summary["spacing"] = json!([g.spacing(0), g.spacing(1)]);
    let mut out = Outcome::new(summary);
    out.tables.push(residual_table(&report));
    Ok(out)
}

fn roots_json(r: &RootStructure<f64>) -> Value {
    match *r {
        RootStructure::None => json!([]),
        RootStructure::Single(k) => json!([k]),
        RootStructure::Pair(a, b) => json!([a, b]),
    }
}

pub fn classify_json(n: usize, tau1: f64, r: f64) -> Result<(Value, Table), CliError> {
    let c = classify_ricci_soliton(n, tau1, r)?;
    let mut t = Table::new("spectra", &["k1", "n1", "k2", "n2"]);
    for s in &c.spectra {
        t.push(vec![s.k1.into(), s.n1.into(), s.k2.into(), s.n2.into()]);
    }
    let v = json!({
        "n": c.n,
        "tau1": c.tau1,
        "r": c.r,
        "discriminant": c.discriminant,
        "roots": roots_json(&c.roots),
        "multiplicity_gap": c.multiplicity_gap,
        "multiplicities": c.multiplicities().map(|(a, b)| [a, b]),
        "spectra": c.spectra.iter().map(|s| json!({"k1": s.k1, "n1": s.n1, "k2": s.k2, "n2": s.n2})).collect::<Vec<_>>(),
        "cpc": c.cpc,
        "refused": c.discriminant < 0.0 && matches!(c.roots, RootStructure::None),
    });
    Ok((v, t))
}

/// `τ_j` from `σ_1..σ_n` by the second Newton recurrence,
/// `τ_j = Σ_{i=1}^{j-1} (-1)^{i-1} σ_i τ_{j-i} + (-1)^{j-1} j σ_j`.
fn power_from_elementary(sigma: &[f64]) -> Vec<f64> {
    let n = sigma.len();
    let mut tau = Vec::with_capacity(n);
    for j in 1..=n {
        let sign = |i: usize| if i % 2 == 1 { 1.0 } else { -1.0 };
        let mut acc = sign(j) * j as f64 * sigma[j - 1];
        for i in 1..j {
            acc += sign(i) * sigma[i - 1] * tau[j - i - 1];
        }
        tau.push(acc);
    }
    tau
}

/// Coefficients of `Π(1 + k_i x)` beyond the constant term.
fn expand_product(k: &[f64]) -> Vec<f64> {
    let mut c = vec![1.0];
    for &ki in k {
        c.push(0.0);
        for j in (1..c.len()).rev() {
            c[j] += ki * c[j - 1];
        }
    }
    c.remove(0);
    c
}

fn spectra_audit(a: &SpectraAuditConfig, seed: u64) -> Result<(Value, Table), CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut table = Table::new("audit", &["sample", "n", "roundtrip_rel", "expansion_rel", "flat"]);
    let (mut worst_round, mut worst_expand) = (0.0f64, 0.0f64);
    let (mut flat_nonzero, mut nonzero) = (0usize, 0usize);
    let flat_tol = 1e-9 * a.max_abs.max(1.0).powi(2);
    for sample in 0..a.samples {
        let n = rng.gen_range(a.min_n..=a.max_n);
        let k: Vec<f64> = (0..n).map(|_| rng.gen_range(-a.max_abs..=a.max_abs)).collect();
        let spec = PrincipalCurvatureSpectrum::new(k.clone())?;
        let tau = power_sums(&spec, n)?;
        let sigma = elementary_from_power(&tau, n)?;
        let back = power_from_elementary(&sigma);
        let abs_k: Vec<f64> = k.iter().map(|x| x.abs()).collect();
        let round = (0..n)
            .map(|j| {
                (back[j] - tau[j]).abs()
                    / abs_k
                        .iter()
                        .map(|x| x.powi(j as i32 + 1))
                        .sum::<f64>()
                        .max(f64::MIN_POSITIVE)
            })
            .fold(0.0, f64::max);
        let expansion = expand_product(&k);
        let scale = expand_product(&abs_k);
        let expand = (0..n)
            .map(|j| (sigma[j] - expansion[j]).abs() / scale[j].max(f64::MIN_POSITIVE))
            .fold(0.0, f64::max);
        worst_round = worst_round.max(round);
        worst_expand = worst_expand.max(expand);
        // Curves are always flat; only n >= 2 tests the flatness claim.
        let flat = classify_extrinsic_ricci_flat(&spec, flat_tol)?.is_flat();
        if n >= 2 && k.iter().any(|&x| x != 0.0) {
            nonzero += 1;
            flat_nonzero += usize::from(flat);
        }
        table.push(vec![
            sample.into(),
            n.into(),
            round.into(),
            expand.into(),
            i64::from(flat).into(),
        ]);
    }
    let zero_flat = (1..=a.max_n).all(|n| {
        let spec = PrincipalCurvatureSpectrum::new(vec![0.0; n]).expect("nonempty");
        matches!(
            classify_extrinsic_ricci_flat(&spec, flat_tol),
            Ok(RicciFlatVerdict::Flat { totally_geodesic: true })
        )
    });
    let v = json!({
        "samples": a.samples,
        "max_roundtrip_rel": worst_round,
        "max_expansion_rel": worst_expand,
        "nonzero_spectra_tested": nonzero,
        "nonzero_spectra_flat": flat_nonzero,
        "zero_spectrum_flat": zero_flat,
    });
    Ok((v, table))
}

fn ricci_classify(r: &RicciConfig, seed: u64) -> Result<Outcome, CliError> {
    let (mut summary, spectra) = classify_json(r.n, r.tau1, r.r)?;
    let mut out = Outcome::new(Value::Null);
    out.tables.push(spectra);
    if let Some(a) = &r.audit {
        let (audit, table) = spectra_audit(a, seed)?;
        summary["audit"] = audit;
        out.tables.push(table);
    }
    out.summary = summary;
    Ok(out)
}

fn read_grid_csv(path: &Path) -> Result<GridSample<f64>, CliError> {
    let io = |e: csv::Error| CliError::validation("cohomology.grid_csv", format!("{}: {e}", path.display()));
    let mut rdr = csv::Reader::from_path(path).map_err(io)?;
    let mut rows = Vec::new();
    for (line, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(io)?;
        let parse = |i: usize| -> Result<f64, CliError> {
            rec.get(i).and_then(|s| s.trim().parse().ok()).ok_or_else(|| {
                CliError::validation(
                    "cohomology.grid_csv",
                    format!("row {}: column {} is not a number", line + 2, i + 1),
                )
            })
        };
        rows.push((parse(0)?, parse(1)?, parse(2)?));
    }
    let m = (rows.len() as f64).sqrt().round() as usize;
    if m * m != rows.len() || m == 0 {
        return Err(CliError::validation(
            "cohomology.grid_csv",
            format!("{} rows do not form a square grid", rows.len()),
        ));
    }
    let mut values = vec![f64::NAN; m * m];
    for (x, y, v) in rows {
        let (i, j) = ((x * m as f64).round(), (y * m as f64).round());
        if !(0.0..m as f64).contains(&i) || !(0.0..m as f64).contains(&j) {
            return Err(CliError::validation(
                "cohomology.grid_csv",
                format!("point ({x}, {y}) is off the grid"),
            ));
        }
        values[i as usize * m + j as usize] = v;
    }
    if values.iter().any(|v| v.is_nan()) {
        return Err(CliError::validation("cohomology.grid_csv", "grid has missing points"));
    }
    Ok(GridSample::new(2, m, values)?)
}

pub fn cohomology(c: &CohomologyConfig, base: Option<&Path>) -> Result<Outcome, CliError> {
    let dim = c.v.len();
    let h = match &c.grid_csv {
        Some(p) => {
            let path = match base {
                Some(b) if p.is_relative() => b.join(p),
                _ => p.clone(),
            };
            RightHandSide::Grid(read_grid_csv(&path)?)
        }
        None => {
            let mut t = FourierTable::new(dim, c.radius)?;
            t.add_real_mode(&vec![0; dim], c.mean, 0.0)?;
            for m in &c.modes {
                t.add_real_mode(&m.u, m.cos, m.sin)?;
            }
            RightHandSide::Coefficients(t)
        }
    };
    let mut problem = TorusCohomologyProblem::new(c.v.clone(), h, c.radius, c.s);
    if let Some(f) = c.floor {
        problem.resonance_floor = f;
    }
    let sol = solve_linear_flow(&problem)?;
    let mut header: Vec<String> = (0..dim).map(|i| format!("u{i}")).collect();
    header.extend(["h_re", "h_im", "f_re", "f_im", "divisor"].map(String::from));
    let mut coeffs = Table::with_header("coefficients", header);
    for (u, h) in sol.h_hat.iter() {
        let f = sol.f_hat.get(u);
        let div: f64 = u.iter().zip(&sol.v).map(|(&a, b)| a as f64 * b).sum();
        let mut row: Vec<Cell> = u.iter().map(|&x| Cell::Int(x)).collect();
        row.extend([h.re, h.im, f.re, f.im, div].map(Cell::Num));
        coeffs.push(row);
    }
    let mut amp = Table::new(
        "amplification",
        &["norm2", "modes", "max_amplification", "min_divisor", "bound"],
    );
    for r in amplification_report(&sol) {
        amp.push(vec![
            r.norm2.into(),
            r.modes.into(),
            r.max_amplification.into(),
            r.min_divisor.into(),
            r.bound.into(),
        ]);
    }
    let summary = json!({
        "dim": dim,
        "radius": c.radius,
        "eps": sol.eps,
        "potential_scale": sol.potential_scale,
        "margin": sol.margin.value,
        "margin_argmin": sol.margin.argmin,
        "residual": sol.residual,
        "max_imag": sol.max_imag,
        "verification_nodes": sol.verification_nodes,
        "truncation_error": sol.truncation_error,
        "modes_solved": sol.f_hat.len(),
    });
    let mut out = Outcome::new(summary);
    out.tables.push(coeffs);
    out.tables.push(amp);
    Ok(out)
}

fn revolution(cfg: &ScenarioConfig) -> Result<Outcome, CliError> {
    let r = cfg.revolution.as_ref().expect("validated");
    let p = integrate_constant_lambda(r.x1_start, r.x1_end, r.step, r.c)?;
    let mut profile = Table::new("profile", &["x1", "x0_ode", "x0_closed_form"]);
    let mut gamma_error = 0.0f64;
    for (&x1, &x0) in p.radius.iter().zip(&p.axial) {
        let exact = closed_form_gamma(x1, r.c)?;
        gamma_error = gamma_error.max((x0 - exact).abs());
        profile.push(vec![x1.into(), x0.into(), exact.into()]);
    }
    let rows = curvature_table(&p)?;
    let mut curv = Table::new(
        "curvature",
        &["x0", "x1", "g00", "g11", "lambda", "k_formula", "k_oracle"],
    );
    let (mut oracle_gap, mut lambda_gap) = (0.0f64, 0.0f64);
    let mut negative = true;
    for row in &rows {
        oracle_gap = oracle_gap.max((row.k_formula - row.k_oracle).abs());
        lambda_gap = lambda_gap.max((row.lambda - 1.0 / (2.0 * (row.x1 * row.x1 + 2.0)).sqrt()).abs());
        negative &= row.k_formula < 0.0 && row.k_oracle < 0.0;
        curv.push(
            [
                row.x0,
                row.x1,
                row.g00,
                row.g11,
                row.lambda,
                row.k_formula,
                row.k_oracle,
            ]
            .map(Cell::Num)
            .to_vec(),
        );
    }
    let summary = json!({
        "samples": p.len(),
        "gamma_error": gamma_error,
        "k_at_axis": sectional_curvature_profile(0.0f64),
        "k_negative": negative,
        "curvature_oracle_gap": oracle_gap,
        "lambda_formula_gap": lambda_gap,
    });
    let mut out = Outcome::new(summary);
    out.tables.push(profile);
    out.tables.push(curv);
    out.plots.push(("profile".into(), 1, 0));
    out.plots.push(("curvature".into(), 1, 5));
    Ok(out)
}

fn cone_check(cfg: &ScenarioConfig) -> Result<Outcome, CliError> {
    let c = cfg.cone.as_ref().expect("validated");
    let setup = ConeFlowSetup {
        beta: c.beta,
        a: c.a,
        b: c.b,
        nodes: cfg.numerics.grid.expect("validated"),
        t_end: cfg.numerics.t_end.expect("validated"),
        cfl: cfg.numerics.cfl,
        scheme: cfg.numerics.scheme.into(),
    };
    let rep = cone_flow_check(&setup)?;
    let t = setup.t_end;
    let mut table = Table::new("cone", &["x0", "lambda", "lambda_exact", "phi"]);
    for (i, x) in rep.grid.coordinates().into_iter().enumerate() {
        table.push(vec![
            x.into(),
            rep.lambda[i].into(),
            (-2.0 / (x - 0.5 * t)).into(),
            rep.phi[i].into(),
        ]);
    }
    let summary = json!({
        "steps": rep.steps,
        "spacing": rep.grid.spacing(),
        "lambda_error": rep.lambda_error,
        "warping_error_translated": rep.warping_error_translated,
        "warping_error_exp_law": rep.warping_error_exp_law,
    });
    let mut out = Outcome::new(summary);
    out.tables.push(table);
    out.plots.push(("cone".into(), 0, 1));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn second_newton_recurrence_inverts_the_first() {
        let k = [1.5, -0.25, 2.0, 0.5];
        let spec = PrincipalCurvatureSpectrum::new(k.to_vec()).unwrap();
        let tau = power_sums(&spec, 4).unwrap();
        let sigma = elementary_from_power(&tau, 4).unwrap();
        for (a, b) in power_from_elementary(&sigma).iter().zip(&tau) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn product_expansion() {
        // (1 + x)(1 + 2x)(1 - 3x) = 1 + 0x - 7x² - 6x³
        assert_eq!(expand_product(&[1.0, 2.0, -3.0]), vec![0.0, -7.0, -6.0]);
    }

    #[test]
    fn random_profile_depends_only_on_seed() {
        let p = ProfileConfig::Random {
            modes: 3,
            amplitude: 0.5,
            offset: 0.1,
        };
        let a = profile_fn(&p, 0.0, 1.0, 7);
        let b = profile_fn(&p, 0.0, 1.0, 7);
        let c = profile_fn(&p, 0.0, 1.0, 8);
        assert_eq!(a(0.3).to_bits(), b(0.3).to_bits());
        assert_ne!(a(0.3), c(0.3));
    }
}
