//! Scenario configuration: a single JSON document, parsed with field paths
//! in every error.

use std::path::{Path, PathBuf};

use egf_core::flow_engine::{Boundary, Scheme, TimeIntegrator};
use egf_core::sym_curvature::FlowFunctional;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scenario {
    UmbilicalFlow,
    TauFlow,
    SolitonCheck,
    BiregularCheck,
    RicciClassify,
    Cohomology,
    Revolution,
    ConeCheck,
}

impl Scenario {
    pub fn name(self) -> &'static str {
        match self {
            Self::UmbilicalFlow => "umbilical-flow",
            Self::TauFlow => "tau-flow",
            Self::SolitonCheck => "soliton-check",
            Self::BiregularCheck => "biregular-check",
            Self::RicciClassify => "ricci-classify",
            Self::Cohomology => "cohomology",
            Self::Revolution => "revolution",
            Self::ConeCheck => "cone-check",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case", deny_unknown_fields)]
pub enum FunctionalConfig {
    B1 { n: usize },
    Tau1MinusC { n: usize, c: f64 },
    ExtRicci { n: usize },
    UmbilicalSquare { n: usize },
    Affine { n: usize, a: f64, b: f64 },
}

impl FunctionalConfig {
    pub fn build(&self) -> Result<FlowFunctional<f64>, CliError> {
        let r = match *self {
            Self::B1 { n } => FlowFunctional::b1(n),
            Self::Tau1MinusC { n, c } => FlowFunctional::tau1_minus_c(n, c),
            Self::ExtRicci { n } => FlowFunctional::ext_ricci(n),
            Self::UmbilicalSquare { n } => FlowFunctional::umbilical_square(n),
            Self::Affine { n, a, b } => FlowFunctional::affine(n, a, b),
        };
        r.map_err(|e| CliError::validation("functional", e.to_string()))
    }

    pub fn n(&self) -> usize {
        match *self {
            Self::B1 { n }
            | Self::Tau1MinusC { n, .. }
            | Self::ExtRicci { n }
            | Self::UmbilicalSquare { n }
            | Self::Affine { n, .. } => n,
        }
    }
}

/// Closed catalog of initial profiles in the arclength `s`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ProfileConfig {
    Constant {
        value: f64,
    },
    /// `offset + amplitude · sin(2π k s / L + phase)`.
    Sine {
        amplitude: f64,
        #[serde(default = "one_u32")]
        wavenumber: u32,
        #[serde(default)]
        offset: f64,
        #[serde(default)]
        phase: f64,
    },
    /// `offset + Σ a_k sin(2π k s / L) + b_k cos(2π k s / L)` with
    /// coefficients drawn from the seed, scaled by `amplitude / k`.
    Random {
        modes: u32,
        amplitude: f64,
        #[serde(default)]
        offset: f64,
    },
}

fn one_u32() -> u32 {
    1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitialConfig {
    pub lambda: ProfileConfig,
    #[serde(default = "unit_phi")]
    pub phi: ProfileConfig,
}

fn unit_phi() -> ProfileConfig {
    ProfileConfig::Constant { value: 1.0 }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundaryConfig {
    Periodic,
    Transmissive,
}

impl From<BoundaryConfig> for Boundary {
    fn from(b: BoundaryConfig) -> Self {
        match b {
            BoundaryConfig::Periodic => Boundary::Periodic,
            BoundaryConfig::Transmissive => Boundary::Transmissive,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SchemeConfig {
    Upwind,
    LaxFriedrichs,
}

impl From<SchemeConfig> for Scheme {
    fn from(s: SchemeConfig) -> Self {
        match s {
            SchemeConfig::Upwind => Scheme::Upwind,
            SchemeConfig::LaxFriedrichs => Scheme::LaxFriedrichs,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IntegratorConfig {
    ForwardEuler,
    Heun,
}

impl From<IntegratorConfig> for TimeIntegrator {
    fn from(i: IntegratorConfig) -> Self {
        match i {
            IntegratorConfig::ForwardEuler => TimeIntegrator::ForwardEuler,
            IntegratorConfig::Heun => TimeIntegrator::Heun,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NumericsConfig {
    pub grid: Option<usize>,
    #[serde(default)]
    pub origin: f64,
    pub length: Option<f64>,
    #[serde(default = "periodic")]
    pub boundary: BoundaryConfig,
    #[serde(default = "default_cfl")]
    pub cfl: f64,
    #[serde(default = "upwind")]
    pub scheme: SchemeConfig,
    #[serde(default = "euler")]
    pub integrator: IntegratorConfig,
    pub t_end: Option<f64>,
    #[serde(default)]
    pub seed: u64,
    pub max_steps: Option<usize>,
}

fn periodic() -> BoundaryConfig {
    BoundaryConfig::Periodic
}
fn default_cfl() -> f64 {
    0.9
}
fn upwind() -> SchemeConfig {
    SchemeConfig::Upwind
}
fn euler() -> IntegratorConfig {
    IntegratorConfig::ForwardEuler
}

impl Default for NumericsConfig {
    fn default() -> Self {
        Self {
            grid: None,
            origin: 0.0,
            length: None,
            boundary: periodic(),
            cfl: default_cfl(),
            scheme: upwind(),
            integrator: euler(),
            t_end: None,
            seed: 0,
            max_steps: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    pub dir: Option<PathBuf>,
    /// Snapshot every k steps (plus first and last); 0 writes only those two.
    #[serde(default)]
    pub snapshot_stride: usize,
    /// Also write gnuplot-ready two-column `.dat` streams.
    #[serde(default)]
    pub gnuplot: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NormalizationConfig {
    FixedPoint,
    AsPrinted,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FlowConfig {
    /// Runs the normalized extrinsic Ricci flow (`ext_ricci`, `n = 2`).
    pub normalized_ricci: Option<NormalizationConfig>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum EpsConfig {
    Value(f64),
    Named(EpsKeyword),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EpsKeyword {
    Auto,
}

impl Default for EpsConfig {
    fn default() -> Self {
        Self::Named(EpsKeyword::Auto)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolitonConfig {
    #[serde(default)]
    pub eps: EpsConfig,
    pub tol: Option<f64>,
}

/// Closed catalog of metric and field components in `(x₀, x₁)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum FieldExpr {
    Constant {
        value: f64,
    },
    /// `scale · exp(rate · x_axis)`.
    Exp {
        axis: usize,
        rate: f64,
        #[serde(default = "one_f64")]
        scale: f64,
    },
    /// `intercept + slope · x_axis`.
    Linear {
        axis: usize,
        slope: f64,
        intercept: f64,
    },
}

fn one_f64() -> f64 {
    1.0
}

impl FieldExpr {
    pub fn eval(&self, x0: f64, x1: f64) -> f64 {
        let pick = |axis: usize| if axis == 0 { x0 } else { x1 };
        match *self {
            Self::Constant { value } => value,
            Self::Exp { axis, rate, scale } => scale * (rate * pick(axis)).exp(),
            Self::Linear { axis, slope, intercept } => intercept + slope * pick(axis),
        }
    }

    fn axis(&self) -> Option<usize> {
        match *self {
            Self::Constant { .. } => None,
            Self::Exp { axis, .. } | Self::Linear { axis, .. } => Some(axis),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BiregularConfig {
    pub nodes: [usize; 2],
    pub lengths: [f64; 2],
    pub periodic: [bool; 2],
    pub g00: FieldExpr,
    pub g11: FieldExpr,
    pub x0: Option<FieldExpr>,
    pub x1: Option<FieldExpr>,
    #[serde(default)]
    pub eps: EpsConfig,
    pub tol: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectraAuditConfig {
    pub samples: usize,
    #[serde(default = "one_usize")]
    pub min_n: usize,
    #[serde(default = "six")]
    pub max_n: usize,
    #[serde(default = "ten")]
    pub max_abs: f64,
}

fn one_usize() -> usize {
    1
}
fn six() -> usize {
    6
}
fn ten() -> f64 {
    10.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RicciConfig {
    pub n: usize,
    pub tau1: f64,
    pub r: f64,
    /// Random-spectrum audit of the power-sum algebra and the flatness test.
    pub audit: Option<SpectraAuditConfig>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModeConfig {
    pub u: Vec<i64>,
    #[serde(default)]
    pub cos: f64,
    #[serde(default)]
    pub sin: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CohomologyConfig {
    pub v: Vec<f64>,
    pub radius: usize,
    #[serde(default = "one_f64")]
    pub s: f64,
    #[serde(default)]
    pub mean: f64,
    #[serde(default)]
    pub modes: Vec<ModeConfig>,
    /// CSV with columns `x, y, value` on a uniform grid of `[0,1)²`;
    /// relative paths resolve against the config file.
    pub grid_csv: Option<PathBuf>,
    pub floor: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RevolutionConfig {
    pub x1_start: f64,
    pub x1_end: f64,
    pub step: f64,
    #[serde(default)]
    pub c: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConeConfig {
    pub beta: f64,
    pub a: f64,
    pub b: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub scenario: Scenario,
    pub functional: Option<FunctionalConfig>,
    pub initial: Option<InitialConfig>,
    #[serde(default)]
    pub numerics: NumericsConfig,
    #[serde(default)]
    pub output: OutputConfig,
    pub flow: Option<FlowConfig>,
    pub soliton: Option<SolitonConfig>,
    pub biregular: Option<BiregularConfig>,
    pub ricci: Option<RicciConfig>,
    pub cohomology: Option<CohomologyConfig>,
    pub revolution: Option<RevolutionConfig>,
    pub cone: Option<ConeConfig>,
    /// Directory of the config file, for resolving relative paths.
    #[serde(skip)]
    pub base_dir: Option<PathBuf>,
    /// Lets a cfl sweep step past the stability limit.
    #[serde(skip)]
    pub allow_supercritical: bool,
}

pub fn parse(text: &str) -> Result<ScenarioConfig, CliError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let cfg: ScenarioConfig = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        CliError::validation(
            if path == "." { "$".to_string() } else { path },
            e.into_inner().to_string(),
        )
    })?;
    cfg.validate()?;
    Ok(cfg)
}

pub fn load(path: &Path) -> Result<ScenarioConfig, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io {
        path: path.to_path_buf(),
        source: e,
    })?;
    let mut cfg = parse(&text)?;
    cfg.base_dir = path.parent().map(Path::to_path_buf);
    Ok(cfg)
}

fn need<'a, T>(v: &'a Option<T>, path: &str) -> Result<&'a T, CliError> {
    v.as_ref()
        .ok_or_else(|| CliError::validation(path, "required for this scenario"))
}

fn check(cond: bool, path: &str, msg: &str) -> Result<(), CliError> {
    if cond {
        Ok(())
    } else {
        Err(CliError::validation(path, msg))
    }
}

fn finite(x: f64, path: &str) -> Result<(), CliError> {
    check(x.is_finite(), path, "must be finite")
}

impl ScenarioConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        let num = &self.numerics;
        let cfl_max = if self.allow_supercritical { f64::INFINITY } else { 1.0 };
        check(
            num.cfl.is_finite() && num.cfl > 0.0 && num.cfl <= cfl_max,
            "numerics.cfl",
            "must lie in (0, 1]",
        )?;
        finite(num.origin, "numerics.origin")?;
        if let Some(m) = num.max_steps {
            check(m > 0, "numerics.max_steps", "must be positive")?;
        }
        match self.scenario {
            Scenario::UmbilicalFlow | Scenario::TauFlow | Scenario::SolitonCheck => {
                let f = need(&self.functional, "functional")?;
                self.validate_functional(f)?;
                let init = need(&self.initial, "initial")?;
                validate_profile(&init.lambda, "initial.lambda")?;
                validate_profile(&init.phi, "initial.phi")?;
                self.validate_grid(3)?;
                if self.scenario != Scenario::SolitonCheck {
                    self.validate_t_end()?;
                }
                if let Some(flow) = &self.flow {
                    check(
                        self.scenario == Scenario::UmbilicalFlow,
                        "flow",
                        "only umbilical-flow takes a flow block",
                    )?;
                    if flow.normalized_ricci.is_some() {
                        check(
                            matches!(f, FunctionalConfig::ExtRicci { n: 2 }),
                            "functional",
                            "normalized_ricci needs ext_ricci with n = 2",
                        )?;
                    }
                }
                if let Some(s) = &self.soliton {
                    validate_eps(&s.eps, "soliton.eps")?;
                    validate_tol(s.tol, "soliton.tol")?;
                }
            }
            Scenario::BiregularCheck => {
                let f = need(&self.functional, "functional")?;
                self.validate_functional(f)?;
                check(f.n() == 1, "functional.n", "biregular surfaces need n = 1")?;
                let b = need(&self.biregular, "biregular")?;
                check(
                    b.nodes[0] >= 8 && b.nodes[1] >= 8,
                    "biregular.nodes",
                    "need at least 8 nodes per axis",
                )?;
                for (i, l) in b.lengths.iter().enumerate() {
                    check(
                        l.is_finite() && *l > 0.0,
                        &format!("biregular.lengths[{i}]"),
                        "must be positive",
                    )?;
                }
                for (name, e) in [
                    ("g00", Some(&b.g00)),
                    ("g11", Some(&b.g11)),
                    ("x0", b.x0.as_ref()),
                    ("x1", b.x1.as_ref()),
                ] {
                    if let Some(e) = e {
                        validate_expr(e, &format!("biregular.{name}"))?;
                    }
                }
                check(
                    b.x0.is_some() == b.x1.is_some(),
                    "biregular.x1",
                    "give both field components or neither",
                )?;
                validate_eps(&b.eps, "biregular.eps")?;
                validate_tol(b.tol, "biregular.tol")?;
            }
            Scenario::RicciClassify => {
                let r = need(&self.ricci, "ricci")?;
                check(r.n >= 3, "ricci.n", "must be at least 3")?;
                finite(r.tau1, "ricci.tau1")?;
                finite(r.r, "ricci.r")?;
                if let Some(a) = &r.audit {
                    check(a.samples > 0, "ricci.audit.samples", "must be positive")?;
                    check((1..=12).contains(&a.max_n), "ricci.audit.max_n", "must lie in 1..=12")?;
                    check(
                        (1..=a.max_n).contains(&a.min_n),
                        "ricci.audit.min_n",
                        "must lie in 1..=max_n",
                    )?;
                    check(
                        a.max_abs.is_finite() && a.max_abs > 0.0,
                        "ricci.audit.max_abs",
                        "must be positive",
                    )?;
                }
            }
            Scenario::Cohomology => {
                let c = need(&self.cohomology, "cohomology")?;
                check(
                    (2..=3).contains(&c.v.len()),
                    "cohomology.v",
                    "torus dimension must be 2 or 3",
                )?;
                for (i, x) in c.v.iter().enumerate() {
                    finite(*x, &format!("cohomology.v[{i}]"))?;
                }
                check(c.radius >= 1, "cohomology.radius", "must be at least 1")?;
                check(c.s.is_finite() && c.s > 0.0, "cohomology.s", "must be positive")?;
                finite(c.mean, "cohomology.mean")?;
                for (i, m) in c.modes.iter().enumerate() {
                    let p = format!("cohomology.modes[{i}].u");
                    check(m.u.len() == c.v.len(), &p, "must match the dimension of v")?;
                    check(
                        m.u.iter().all(|x| x.unsigned_abs() as usize <= c.radius),
                        &p,
                        "exceeds the radius",
                    )?;
                    finite(m.cos, &format!("cohomology.modes[{i}].cos"))?;
                    finite(m.sin, &format!("cohomology.modes[{i}].sin"))?;
                }
                if c.grid_csv.is_some() {
                    check(c.v.len() == 2, "cohomology.grid_csv", "grid input is two-dimensional")?;
                    check(
                        c.modes.is_empty(),
                        "cohomology.modes",
                        "give modes or grid_csv, not both",
                    )?;
                }
                if let Some(f) = c.floor {
                    check(f.is_finite() && f > 0.0, "cohomology.floor", "must be positive")?;
                }
            }
            Scenario::Revolution => {
                let r = need(&self.revolution, "revolution")?;
                check(
                    r.x1_start.is_finite() && r.x1_start > 0.0,
                    "revolution.x1_start",
                    "must be positive",
                )?;
                check(
                    r.x1_end.is_finite() && r.x1_end > r.x1_start,
                    "revolution.x1_end",
                    "must exceed x1_start",
                )?;
                check(
                    r.step.is_finite() && r.step > 0.0,
                    "revolution.step",
                    "must be positive",
                )?;
                check(
                    (r.x1_end - r.x1_start) / r.step <= 1e7,
                    "revolution.step",
                    "too many steps",
                )?;
                finite(r.c, "revolution.c")?;
            }
            Scenario::ConeCheck => {
                let c = need(&self.cone, "cone")?;
                check(
                    c.beta.is_finite() && c.beta > 0.0 && c.beta < std::f64::consts::FRAC_PI_2,
                    "cone.beta",
                    "must lie in (0, pi/2)",
                )?;
                check(c.a.is_finite() && c.a > 0.0, "cone.a", "must be positive")?;
                check(c.b.is_finite() && c.b > c.a, "cone.b", "must exceed cone.a")?;
                self.validate_grid(3)?;
                self.validate_t_end()?;
                check(
                    c.a > 0.5 * num.t_end.unwrap_or(0.0),
                    "numerics.t_end",
                    "the cone apex t/2 reaches the domain",
                )?;
            }
        }
        Ok(())
    }

    fn validate_functional(&self, f: &FunctionalConfig) -> Result<(), CliError> {
        check((1..=8).contains(&f.n()), "functional.n", "must lie in 1..=8")?;
        f.build().map(|_| ())
    }

    fn validate_grid(&self, min: usize) -> Result<(), CliError> {
        let g = need(&self.numerics.grid, "numerics.grid")?;
        check(*g >= min, "numerics.grid", &format!("must be at least {min}"))?;
        check(*g <= 1 << 22, "numerics.grid", "is too large")?;
        if let Some(l) = self.numerics.length {
            check(l.is_finite() && l > 0.0, "numerics.length", "must be positive")?;
        }
        Ok(())
    }

    fn validate_t_end(&self) -> Result<(), CliError> {
        let t = need(&self.numerics.t_end, "numerics.t_end")?;
        check(t.is_finite() && *t >= 0.0, "numerics.t_end", "must be nonnegative")
    }

    /// Domain length, defaulting to 2π.
    pub fn length(&self) -> f64 {
        self.numerics.length.unwrap_or(std::f64::consts::TAU)
    }
}

fn validate_profile(p: &ProfileConfig, path: &str) -> Result<(), CliError> {
    match *p {
        ProfileConfig::Constant { value } => finite(value, &format!("{path}.value")),
        ProfileConfig::Sine {
            amplitude,
            offset,
            phase,
            ..
        } => {
            finite(amplitude, &format!("{path}.amplitude"))?;
            finite(offset, &format!("{path}.offset"))?;
            finite(phase, &format!("{path}.phase"))
        }
        ProfileConfig::Random {
            modes,
            amplitude,
            offset,
        } => {
            check(
                (1..=64).contains(&modes),
                &format!("{path}.modes"),
                "must lie in 1..=64",
            )?;
            finite(amplitude, &format!("{path}.amplitude"))?;
            finite(offset, &format!("{path}.offset"))
        }
    }
}

fn validate_expr(e: &FieldExpr, path: &str) -> Result<(), CliError> {
    if let Some(axis) = e.axis() {
        check(axis <= 1, &format!("{path}.axis"), "must be 0 or 1")?;
    }
    match *e {
        FieldExpr::Constant { value } => finite(value, &format!("{path}.value")),
        FieldExpr::Exp { rate, scale, .. } => {
            finite(rate, &format!("{path}.rate"))?;
            finite(scale, &format!("{path}.scale"))
        }
        FieldExpr::Linear { slope, intercept, .. } => {
            finite(slope, &format!("{path}.slope"))?;
            finite(intercept, &format!("{path}.intercept"))
        }
    }
}

fn validate_eps(e: &EpsConfig, path: &str) -> Result<(), CliError> {
    match e {
        EpsConfig::Value(v) => finite(*v, path),
        EpsConfig::Named(_) => Ok(()),
    }
}

fn validate_tol(t: Option<f64>, path: &str) -> Result<(), CliError> {
    match t {
        Some(t) => check(t.is_finite() && t > 0.0, path, "must be positive"),
        None => Ok(()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn missing_grid_names_the_field() {
        let text = r#"{"scenario": "umbilical-flow", "functional": {"name": "b1", "n": 1},
            "initial": {"lambda": {"kind": "sine", "amplitude": 1.0}}, "numerics": {"t_end": 1.0}}"#;
        let e = parse(text).unwrap_err();
        assert_eq!(e.exit_code(), 2);
        assert!(e.to_string().contains("numerics.grid"), "{e}");
    }

    #[test]
    fn type_errors_carry_paths() {
        let text = r#"{"scenario": "umbilical-flow", "numerics": {"grid": "many"}}"#;
        let e = parse(text).unwrap_err();
        assert!(e.to_string().contains("numerics.grid"), "{e}");
        let text = r#"{"scenario": "umbilical-flow", "numerics": {"grid": 8, "cfll": 1}}"#;
        assert!(parse(text).unwrap_err().to_string().contains("numerics"));
    }

    #[test]
    fn eps_accepts_auto_or_number() {
        let s: SolitonConfig = serde_json::from_str(r#"{"eps": "auto"}"#).unwrap();
        assert_eq!(s.eps, EpsConfig::Named(EpsKeyword::Auto));
        let s: SolitonConfig = serde_json::from_str(r#"{"eps": 0.5}"#).unwrap();
        assert_eq!(s.eps, EpsConfig::Value(0.5));
    }

    #[test]
    fn ricci_needs_three_dimensions() {
        let e = parse(r#"{"scenario": "ricci-classify", "ricci": {"n": 2, "tau1": 0, "r": 1}}"#).unwrap_err();
        assert!(e.to_string().contains("ricci.n"));
    }
}
