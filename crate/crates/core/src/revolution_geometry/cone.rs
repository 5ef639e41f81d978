use std::sync::Arc;

use super::RevolutionError;
use crate::flow_engine::{run_umbilical, Grid, RunOptions, Scheme, StepControl, UmbilicalProfile};
use crate::scalar::Scalar;
use crate::sym_curvature::FlowFunctional;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConeFlowSetup<T> {
    pub beta: T,
    /// Axial domain `[a, b]`.
    pub a: T,
    pub b: T,
    pub nodes: usize,
    pub t_end: T,
    pub cfl: T,
    pub scheme: Scheme,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConeFlowReport<T> {
    pub steps: usize,
    /// Sup error of λ_t against `-2/(x₀ - t/2)`.
    pub lambda_error: T,
    /// Sup error of φ_t against the translated cone `(x₀ - t/2) sin β`.
    pub warping_error_translated: T,
    /// Sup error of φ_t against `φ₀ exp(½∫λ dt) = sin β (x₀ - t/2)²/x₀`.
    pub warping_error_exp_law: T,
    pub grid: Grid<T>,
    pub lambda: Vec<T>,
    pub phi: Vec<T>,
}

/// Flows the cone data `λ₀ = -2/x₀`, `φ₀ = x₀ sin β` with `ψ(λ) = λ` on a
/// transmissive grid fed by the exact inflow.
pub fn cone_flow_check<T: Scalar + 'static>(setup: &ConeFlowSetup<T>) -> Result<ConeFlowReport<T>, RevolutionError> {
    let half = T::lit(0.5);
    if !(setup.beta > T::zero() && setup.beta < T::FRAC_PI_2()) {
        return Err(RevolutionError::InvalidAngle(setup.beta.to_f64_lossy()));
    }
    if !(setup.t_end >= T::zero()) {
        return Err(RevolutionError::InvalidRange(format!(
            "t_end must be nonnegative, got {}",
            setup.t_end
        )));
    }
    let apex = half * setup.t_end;
    // The inflow ghost node sits one spacing left of a.
    if !(setup.a > apex) {
        return Err(RevolutionError::ApexInDomain {
            apex: apex.to_f64_lossy(),
            start: setup.a.to_f64_lossy(),
        });
    }
    let grid = Grid::interval(setup.a, setup.b, setup.nodes)?;
    if !(setup.a - grid.spacing() > apex) {
        return Err(RevolutionError::ApexInDomain {
            apex: apex.to_f64_lossy(),
            start: (setup.a - grid.spacing()).to_f64_lossy(),
        });
    }
    let two = T::lit(2.0);
    let sin_b = setup.beta.sin();
    let p0 = UmbilicalProfile::from_fn(grid.clone(), |x| -two / x, |x| x * sin_b)?;
    let f = FlowFunctional::b1(1)?;
    let ctl = StepControl::new(setup.cfl, setup.scheme, setup.t_end)
        .with_inflow(Arc::new(move |t: T, s: T| -two / (s - half * t)));
    let run = run_umbilical(&p0, &f, &ctl, RunOptions::default(), |_| {})?;
    let t = run.profile.t;
    let mut report = ConeFlowReport {
        steps: run.steps,
        lambda_error: T::zero(),
        warping_error_translated: T::zero(),
        warping_error_exp_law: T::zero(),
        grid: grid.clone(),
        lambda: run.profile.lambda.clone(),
        phi: run.profile.phi.clone(),
    };
    for i in 0..grid.nodes() {
        let x = grid.coordinate(i);
        let shifted = x - half * t;
        report.lambda_error = report.lambda_error.max((run.profile.lambda[i] + two / shifted).abs());
        report.warping_error_translated = report
            .warping_error_translated
            .max((run.profile.phi[i] - shifted * sin_b).abs());
        report.warping_error_exp_law = report
            .warping_error_exp_law
            .max((run.profile.phi[i] - sin_b * shifted * shifted / x).abs());
    }
    Ok(report)
}
