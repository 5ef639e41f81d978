//! Scalar umbilical law `∂_t λ = -½ ∂_s ψ(λ)` with warping reconstruction.

use super::{
    advance, cfl_step, Boundary, FlowError, Grid, Inflow, LambdaHistory, Scheme, StepControl, UmbilicalProfile,
};
use crate::scalar::Scalar;
use crate::sym_curvature::{psi_of_lambda, psi_prime, FlowFunctional};

/// Node values padded with one ghost on each side.
fn extended<T: Scalar>(lambda: &[T], grid: &Grid<T>, t: T, inflow: Option<&Inflow<T>>) -> Vec<T> {
    let g = lambda.len();
    let ds = grid.spacing();
    let (left, right) = match grid.boundary() {
        Boundary::Periodic => (lambda[g - 1], lambda[0]),
        Boundary::Transmissive => match inflow {
            Some(f) => (f(t, grid.origin() - ds), f(t, grid.coordinate(g - 1) + ds)),
            None => (lambda[0], lambda[g - 1]),
        },
    };
    let mut e = Vec::with_capacity(g + 2);
    e.push(left);
    e.extend_from_slice(lambda);
    e.push(right);
    e
}

fn half_speed<T: Scalar>(functional: &FlowFunctional<T>, lambda: T) -> T {
    T::lit(0.5) * psi_prime(functional, lambda)
}

pub(crate) fn max_speed<T: Scalar>(functional: &FlowFunctional<T>, lambda: &[T]) -> T {
    lambda
        .iter()
        .fold(T::zero(), |m, &l| m.max(half_speed(functional, l).abs()))
}

fn rate<T: Scalar>(
    lambda: &[T],
    t: T,
    grid: &Grid<T>,
    functional: &FlowFunctional<T>,
    scheme: Scheme,
    inflow: Option<&Inflow<T>>,
) -> Vec<T> {
    let e = extended(lambda, grid, t, inflow);
    let g = lambda.len();
    let ds = grid.spacing();
    match scheme {
        Scheme::Upwind => (0..g)
            .map(|i| {
                let a = half_speed(functional, e[i + 1]);
                if a > T::zero() {
                    -a * (e[i + 1] - e[i]) / ds
                } else if a < T::zero() {
                    -a * (e[i + 2] - e[i + 1]) / ds
                } else {
                    T::zero()
                }
            })
            .collect(),
        Scheme::LaxFriedrichs => {
            let half = T::lit(0.5);
            let flux: Vec<T> = e.iter().map(|&l| half * psi_of_lambda(functional, l)).collect();
            let alpha = max_speed(functional, &e);
            let iface: Vec<T> = (0..=g)
                .map(|j| half * (flux[j] + flux[j + 1]) - half * alpha * (e[j + 1] - e[j]))
                .collect();
            (0..g).map(|i| -(iface[i + 1] - iface[i]) / ds).collect()
        }
    }
}

/// One explicit step of λ alone; returns the new node values and the step used.
pub(crate) fn advance_lambda<T: Scalar>(
    p: &UmbilicalProfile<T>,
    functional: &FlowFunctional<T>,
    ctl: &StepControl<T>,
) -> Result<(Vec<T>, T), FlowError> {
    ctl.validate()?;
    p.validate()?;
    let remaining = (ctl.t_end - p.t).max(T::zero());
    let speed = match ctl.scheme {
        Scheme::Upwind => max_speed(functional, &p.lambda),
        Scheme::LaxFriedrichs => max_speed(functional, &extended(&p.lambda, &p.grid, p.t, ctl.inflow.as_ref())),
    };
    let dt = cfl_step(ctl.cfl, p.grid.spacing(), speed, remaining);
    let next = advance(ctl.integrator, &p.lambda, p.t, dt, |u, t| {
        rate(u, t, &p.grid, functional, ctl.scheme, ctl.inflow.as_ref())
    });
    if let Some(i) = next.iter().position(|v| !v.is_finite()) {
        return Err(FlowError::BlowUp {
            last_valid_t: p.t.to_f64_lossy(),
            reason: format!("non-finite lambda at node {i}"),
        });
    }
    Ok((next, dt))
}

/// Advances λ by one CFL-limited step and the warping factor by the
/// trapezoidal increment of `φ_t = φ_0 exp(½∫ψ(λ) dt)`.
pub fn step_umbilical<T: Scalar>(
    p: &UmbilicalProfile<T>,
    functional: &FlowFunctional<T>,
    ctl: &StepControl<T>,
) -> Result<UmbilicalProfile<T>, FlowError> {
    let (lambda, dt) = advance_lambda(p, functional, ctl)?;
    let quarter = T::lit(0.25);
    let phi = p
        .phi
        .iter()
        .zip(p.lambda.iter().zip(&lambda))
        .map(|(&phi, (&l0, &l1))| {
            phi * (quarter * dt * (psi_of_lambda(functional, l0) + psi_of_lambda(functional, l1))).exp()
        })
        .collect();
    let t = if dt >= ctl.t_end - p.t {
        ctl.t_end.max(p.t)
    } else {
        p.t + dt
    };
    Ok(UmbilicalProfile {
        grid: p.grid.clone(),
        lambda,
        phi,
        t,
    })
}

/// Σ |λ_{i+1} - λ_i|, wrapping on periodic grids.
pub fn total_variation<T: Scalar>(values: &[T], boundary: Boundary) -> T {
    let mut tv: T = values.windows(2).map(|w| (w[1] - w[0]).abs()).sum();
    if boundary == Boundary::Periodic {
        if let (Some(&a), Some(&b)) = (values.first(), values.last()) {
            tv += (a - b).abs();
        }
    }
    tv
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct RunOptions {
    /// Emit a snapshot every `k` steps (plus the first and last); 0 disables.
    pub snapshot_stride: usize,
    pub record_history: bool,
}

#[derive(Debug, Clone)]
pub struct UmbilicalRun<T> {
    pub profile: UmbilicalProfile<T>,
    pub steps: usize,
    pub history: Option<LambdaHistory<T>>,
}

/// Steps until `ctl.t_end`, stopping on blow-up: non-finite values or a
/// total-variation increase beyond ten times the initial value.
pub fn run_umbilical<T: Scalar>(
    p0: &UmbilicalProfile<T>,
    functional: &FlowFunctional<T>,
    ctl: &StepControl<T>,
    opts: RunOptions,
    mut on_snapshot: impl FnMut(&UmbilicalProfile<T>),
) -> Result<UmbilicalRun<T>, FlowError> {
    ctl.validate()?;
    p0.validate()?;
    let boundary = p0.grid.boundary();
    let tv0 = total_variation(&p0.lambda, boundary);
    let tv_floor = T::lit(1e-12) * (T::one() + crate::scalar::sup_norm(&p0.lambda));
    let mut history = opts.record_history.then(|| {
        let mut h = LambdaHistory::new(p0.grid.clone());
        h.push(p0.t, p0.lambda.clone()).expect("grid matches");
        h
    });
    if opts.snapshot_stride > 0 {
        on_snapshot(p0);
    }
    let mut p = p0.clone();
    let mut steps = 0usize;
    while p.t < ctl.t_end {
        if steps >= ctl.max_steps {
            return Err(FlowError::NoProgress {
                t: p.t.to_f64_lossy(),
                t_end: ctl.t_end.to_f64_lossy(),
                steps,
            });
        }
        let next = step_umbilical(&p, functional, ctl)?;
        steps += 1;
        let tv = total_variation(&next.lambda, boundary);
        if tv > T::lit(10.0) * tv0 && tv > tv_floor {
            return Err(FlowError::BlowUp {
                last_valid_t: p.t.to_f64_lossy(),
                reason: format!("total variation grew from {tv0} to {tv}"),
            });
        }
        p = next;
        if let Some(h) = history.as_mut() {
            h.push(p.t, p.lambda.clone())?;
        }
        if opts.snapshot_stride > 0 && (steps.is_multiple_of(opts.snapshot_stride) || p.t >= ctl.t_end) {
            on_snapshot(&p);
        }
    }
    Ok(UmbilicalRun {
        profile: p,
        steps,
        history,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn b1() -> FlowFunctional<f64> {
        FlowFunctional::b1(2).unwrap()
    }

    #[test]
    fn constant_lambda_preserved_exactly() {
        for scheme in [Scheme::Upwind, Scheme::LaxFriedrichs] {
            for f in [b1(), FlowFunctional::umbilical_square(2).unwrap()] {
                let grid = Grid::periodic(1.0, 64).unwrap();
                let p0 = UmbilicalProfile::from_fn(grid, |_| 0.7, |_| 1.0).unwrap();
                let ctl = StepControl::new(0.9, scheme, 1.0);
                let run = run_umbilical(&p0, &f, &ctl, RunOptions::default(), |_| {}).unwrap();
                assert!(run.profile.lambda.iter().all(|&l| l == 0.7));
                assert_eq!(run.profile.t, 1.0);
            }
        }
    }

    #[test]
    fn sine_translates_at_half_speed() {
        let grid = Grid::periodic(1.0, 512).unwrap();
        let p0 = UmbilicalProfile::from_fn(grid, |s| (2.0 * PI * s).sin(), |_| 1.0).unwrap();
        let ctl = StepControl::new(0.9, Scheme::Upwind, 0.5);
        let run = run_umbilical(&p0, &b1(), &ctl, RunOptions::default(), |_| {}).unwrap();
        let err = run
            .profile
            .s()
            .iter()
            .zip(&run.profile.lambda)
            .map(|(s, l)| (l - (2.0 * PI * (s - 0.25)).sin()).abs())
            .fold(0.0, f64::max);
        assert!(err < 0.01, "err = {err}");
    }

    #[test]
    fn upwind_max_principle() {
        let grid = Grid::periodic(2.0, 128).unwrap();
        let p0 = UmbilicalProfile::from_fn(grid, |s| 1.0 + (PI * s).cos().powi(3), |_| 1.0).unwrap();
        let (lo, hi) = (0.0, 2.0);
        let f = FlowFunctional::umbilical_square(2).unwrap(); // ψ' = 2λ >= 0 on data
        let ctl = StepControl::new(1.0, Scheme::Upwind, 0.7);
        let run = run_umbilical(&p0, &f, &ctl, RunOptions::default(), |_| {}).unwrap();
        for &l in &run.profile.lambda {
            assert!(l >= lo - 1e-12 && l <= hi + 1e-12);
        }
    }

    #[test]
    fn snapshots_include_first_and_last() {
        let grid = Grid::periodic(1.0, 32).unwrap();
        let p0 = UmbilicalProfile::from_fn(grid, |s| (2.0 * PI * s).sin(), |_| 1.0).unwrap();
        let ctl = StepControl::new(0.5, Scheme::Upwind, 0.3);
        let mut times = vec![];
        let opts = RunOptions {
            snapshot_stride: 5,
            record_history: true,
        };
        let run = run_umbilical(&p0, &b1(), &ctl, opts, |p| times.push(p.t)).unwrap();
        assert_eq!(times.first(), Some(&0.0));
        assert_eq!(times.last(), Some(&0.3));
        assert_eq!(run.history.unwrap().len(), run.steps + 1);
    }

    #[test]
    fn max_steps_bound_reports_no_progress() {
        let grid = Grid::periodic(1.0, 32).unwrap();
        let p0 = UmbilicalProfile::from_fn(grid, |s| (2.0 * PI * s).sin(), |_| 1.0).unwrap();
        let ctl = StepControl::new(0.5, Scheme::Upwind, 10.0).with_max_steps(3);
        let err = run_umbilical(&p0, &b1(), &ctl, RunOptions::default(), |_| {}).unwrap_err();
        assert!(matches!(err, FlowError::NoProgress { steps: 3, .. }));
    }

    #[test]
    fn supercritical_cfl_blows_up() {
        let grid = Grid::periodic(1.0, 64).unwrap();
        let p0 = UmbilicalProfile::from_fn(grid, |s| (2.0 * PI * s).sin(), |_| 1.0).unwrap();
        let mut ctl = StepControl::new(3.0, Scheme::Upwind, 50.0);
        ctl.allow_supercritical = true;
        let err = run_umbilical(&p0, &b1(), &ctl, RunOptions::default(), |_| {}).unwrap_err();
        assert!(matches!(err, FlowError::BlowUp { .. }), "{err:?}");
    }
}
