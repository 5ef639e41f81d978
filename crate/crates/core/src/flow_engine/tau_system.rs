//! The quasilinear power-sum system
//!
//! `∂_t τ_i + (i/2){ τ_{i-1} N(f_0) + Σ_{j≥1} [ j f_j/(i+j-1) N(τ_{i+j-1}) + τ_{i+j-1} N(f_j) ] } = 0`
//!
//! with `τ_0 = n` and `τ_m`, `m > n`, closed through the Newton recurrence.

use super::{advance, cfl_step, Boundary, FlowError, Grid, Scheme, StepControl};
use crate::scalar::{fd_step, Scalar};
use crate::sym_curvature::{power_sums_closure, FlowFunctional};

/// Power sums `τ_1..τ_n` sampled on the grid, stored node-major.
#[derive(Debug, Clone, PartialEq)]
pub struct TauField<T> {
    pub grid: Grid<T>,
    pub n: usize,
    pub tau: Vec<Vec<T>>,
    pub t: T,
}

impl<T: Scalar> TauField<T> {
    pub fn new(grid: Grid<T>, n: usize, tau: Vec<Vec<T>>) -> Result<Self, FlowError> {
        let f = Self {
            grid,
            n,
            tau,
            t: T::zero(),
        };
        f.validate()?;
        Ok(f)
    }

    /// Umbilical data `τ_j = n λ_0(s)^j`.
    pub fn from_umbilical(grid: Grid<T>, n: usize, lambda0: impl Fn(T) -> T) -> Result<Self, FlowError> {
        let nf = T::from_usize_lossy(n);
        let tau = grid
            .coordinates()
            .into_iter()
            .map(|s| {
                let l = lambda0(s);
                let mut p = T::one();
                (0..n)
                    .map(|_| {
                        p *= l;
                        nf * p
                    })
                    .collect()
            })
            .collect();
        Self::new(grid, n, tau)
    }

    /// Power sums of a principal-curvature spectrum given per node.
    pub fn from_spectra(grid: Grid<T>, n: usize, spectrum: impl Fn(T) -> Vec<T>) -> Result<Self, FlowError> {
        let tau = grid
            .coordinates()
            .into_iter()
            .map(|s| {
                let k = spectrum(s);
                (1..=n).map(|j| k.iter().map(|&x| x.powi(j as i32)).sum()).collect()
            })
            .collect();
        Self::new(grid, n, tau)
    }

    pub fn validate(&self) -> Result<(), FlowError> {
        if self.n == 0 {
            return Err(FlowError::InvalidProfile("n must be >= 1".into()));
        }
        if self.tau.len() != self.grid.nodes() {
            return Err(FlowError::InvalidProfile(format!(
                "expected {} nodes, got {}",
                self.grid.nodes(),
                self.tau.len()
            )));
        }
        for (i, row) in self.tau.iter().enumerate() {
            if row.len() != self.n {
                return Err(FlowError::InvalidProfile(format!(
                    "node {i} has {} entries, want {}",
                    row.len(),
                    self.n
                )));
            }
            if row.iter().any(|v| !v.is_finite()) {
                return Err(FlowError::InvalidProfile(format!("node {i} has a non-finite entry")));
            }
        }
        Ok(())
    }

    /// Values of `τ_{index+1}` along the grid.
    pub fn component(&self, index: usize) -> Vec<T> {
        self.tau.iter().map(|row| row[index]).collect()
    }

    /// `max_s |τ_2 - τ_1²/n|`; zero for curves.
    pub fn umbilicity_defect(&self) -> T {
        if self.n < 2 {
            return T::zero();
        }
        let nf = T::from_usize_lossy(self.n);
        self.tau
            .iter()
            .fold(T::zero(), |m, row| m.max((row[1] - row[0] * row[0] / nf).abs()))
    }

    fn flatten(&self) -> Vec<T> {
        self.tau.iter().flatten().copied().collect()
    }
}

/// `τ_0..τ_E` (with `τ_0 = n`) and `f_0..f_{n-1}` at one node.
struct NodeData<T> {
    ext: Vec<T>,
    f: Vec<T>,
}

fn ext_len(n: usize) -> usize {
    (2 * n - 1).max(n + 1)
}

fn node_data<T: Scalar>(tau: &[T], n: usize, functional: &FlowFunctional<T>) -> NodeData<T> {
    let mut ext = Vec::with_capacity(ext_len(n));
    ext.push(T::from_usize_lossy(n));
    ext.extend(power_sums_closure(tau, n, ext_len(n) - 1));
    NodeData {
        ext,
        f: functional.eval_all(tau),
    }
}

/// Bracketed term of equation `i`, linear in the supplied derivatives of
/// the extended power sums and of the `f_j`.
#[allow(clippy::needless_range_loop)]
fn bracket<T: Scalar>(i: usize, n: usize, data: &NodeData<T>, d_ext: &[T], d_f: &[T]) -> T {
    let mut acc = data.ext[i - 1] * d_f[0];
    for j in 1..n {
        let m = i + j - 1;
        acc += T::from_usize_lossy(j) * data.f[j] / T::from_usize_lossy(m) * d_ext[m] + data.ext[m] * d_f[j];
    }
    T::from_usize_lossy(i) * T::lit(0.5) * acc
}

/// Row-sum norm and trace of the coefficient matrix `M` in
/// `∂_t τ + M(τ) ∂_s τ = 0`, by finite differences through the closure and
/// the `f_j`.
fn coefficient_bounds<T: Scalar>(tau: &[T], n: usize, functional: &FlowFunctional<T>, data: &NodeData<T>) -> (T, T) {
    let mut m = vec![vec![T::zero(); n]; n];
    let mut probe = tau.to_vec();
    for k in 0..n {
        let h = fd_step(tau[k]);
        probe[k] = tau[k] + h;
        let plus = node_data(&probe, n, functional);
        probe[k] = tau[k] - h;
        let minus = node_data(&probe, n, functional);
        probe[k] = tau[k];
        let inv = T::one() / (h + h);
        let d_ext: Vec<T> = plus.ext.iter().zip(&minus.ext).map(|(&a, &b)| (a - b) * inv).collect();
        let d_f: Vec<T> = plus.f.iter().zip(&minus.f).map(|(&a, &b)| (a - b) * inv).collect();
        for (i, row) in m.iter_mut().enumerate() {
            row[k] = bracket(i + 1, n, data, &d_ext, &d_f);
        }
    }
    let norm = m
        .iter()
        .map(|row| row.iter().map(|v| v.abs()).sum::<T>())
        .fold(T::zero(), T::max);
    let trace = (0..n).map(|i| m[i][i]).sum();
    (norm, trace)
}

fn rows<T: Scalar>(flat: &[T], n: usize) -> Vec<&[T]> {
    flat.chunks(n).collect()
}

fn neighbours(i: usize, g: usize, boundary: Boundary) -> (usize, usize) {
    match boundary {
        Boundary::Periodic => ((i + g - 1) % g, (i + 1) % g),
        Boundary::Transmissive => (i.saturating_sub(1), (i + 1).min(g - 1)),
    }
}

#[allow(clippy::needless_range_loop)]
fn rate<T: Scalar>(flat: &[T], grid: &Grid<T>, n: usize, functional: &FlowFunctional<T>, scheme: Scheme) -> Vec<T> {
    let g = grid.nodes();
    let ds = grid.spacing();
    let nodes = rows(flat, n);
    let data: Vec<NodeData<T>> = nodes.iter().map(|t| node_data(t, n, functional)).collect();
    let bounds: Vec<(T, T)> = nodes
        .iter()
        .zip(&data)
        .map(|(t, d)| coefficient_bounds(t, n, functional, d))
        .collect();
    let alpha = bounds.iter().fold(T::zero(), |m, b| m.max(b.0));
    let two = T::lit(2.0);
    let mut out = Vec::with_capacity(g * n);
    for i in 0..g {
        let (l, r) = neighbours(i, g, grid.boundary());
        // Constant extrapolation at transmissive ends: the missing neighbour is the node itself.
        let diff = |pick: &dyn Fn(&NodeData<T>) -> &[T], k: usize| -> T {
            let (a, b, c) = (pick(&data[l])[k], pick(&data[i])[k], pick(&data[r])[k]);
            match scheme {
                Scheme::Upwind => {
                    let tr = bounds[i].1;
                    if tr > T::zero() {
                        (b - a) / ds
                    } else if tr < T::zero() {
                        (c - b) / ds
                    } else {
                        (c - a) / (two * ds)
                    }
                }
                Scheme::LaxFriedrichs => (c - a) / (two * ds),
            }
        };
        let d_ext: Vec<T> = (0..data[i].ext.len()).map(|k| diff(&|d| &d.ext, k)).collect();
        let d_f: Vec<T> = (0..n).map(|k| diff(&|d| &d.f, k)).collect();
        for q in 0..n {
            let mut v = -bracket(q + 1, n, &data[i], &d_ext, &d_f);
            if scheme == Scheme::LaxFriedrichs {
                v += alpha / (two * ds) * (nodes[r][q] - two * nodes[i][q] + nodes[l][q]);
            }
            out.push(v);
        }
    }
    out
}

fn max_coefficient<T: Scalar>(field: &TauField<T>, functional: &FlowFunctional<T>) -> T {
    field
        .tau
        .iter()
        .map(|t| coefficient_bounds(t, field.n, functional, &node_data(t, field.n, functional)).0)
        .fold(T::zero(), T::max)
}

/// One explicit step of the power-sum system.
pub fn step_tau_system<T: Scalar>(
    field: &TauField<T>,
    functional: &FlowFunctional<T>,
    ctl: &StepControl<T>,
) -> Result<TauField<T>, FlowError> {
    ctl.validate()?;
    field.validate()?;
    if functional.n() != field.n {
        return Err(FlowError::InvalidProfile(format!(
            "functional has n = {}, field has n = {}",
            functional.n(),
            field.n
        )));
    }
    let remaining = (ctl.t_end - field.t).max(T::zero());
    let dt = cfl_step(
        ctl.cfl,
        field.grid.spacing(),
        max_coefficient(field, functional),
        remaining,
    );
    let next = advance(ctl.integrator, &field.flatten(), field.t, dt, |u, _| {
        rate(u, &field.grid, field.n, functional, ctl.scheme)
    });
    if next.iter().any(|v| !v.is_finite()) {
        return Err(FlowError::BlowUp {
            last_valid_t: field.t.to_f64_lossy(),
            reason: "non-finite power sum".into(),
        });
    }
    let t = if dt >= remaining {
        ctl.t_end.max(field.t)
    } else {
        field.t + dt
    };
    Ok(TauField {
        grid: field.grid.clone(),
        n: field.n,
        tau: next.chunks(field.n).map(<[T]>::to_vec).collect(),
        t,
    })
}

/// Steps to `ctl.t_end`, calling `on_snapshot` on the initial field, every
/// `stride`-th step and the final field (`stride = 0` disables snapshots).
pub fn run_tau_system<T: Scalar>(
    field: &TauField<T>,
    functional: &FlowFunctional<T>,
    ctl: &StepControl<T>,
    stride: usize,
    mut on_snapshot: impl FnMut(&TauField<T>),
) -> Result<(TauField<T>, usize), FlowError> {
    let tv = |f: &TauField<T>| super::total_variation(&f.component(0), f.grid.boundary());
    let tv0 = tv(field);
    let floor = T::lit(1e-12) * (T::one() + crate::scalar::sup_norm(&field.component(0)));
    if stride > 0 {
        on_snapshot(field);
    }
    let mut f = field.clone();
    let mut steps = 0;
    while f.t < ctl.t_end {
        if steps >= ctl.max_steps {
            return Err(FlowError::NoProgress {
                t: f.t.to_f64_lossy(),
                t_end: ctl.t_end.to_f64_lossy(),
                steps,
            });
        }
        let next = step_tau_system(&f, functional, ctl)?;
        steps += 1;
        let v = tv(&next);
        if v > T::lit(10.0) * tv0 && v > floor {
            return Err(FlowError::BlowUp {
                last_valid_t: f.t.to_f64_lossy(),
                reason: format!("total variation of tau1 grew from {tv0} to {v}"),
            });
        }
        f = next;
        if stride > 0 && (steps % stride == 0 || f.t >= ctl.t_end) {
            on_snapshot(&f);
        }
    }
    Ok((f, steps))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn cpc_data_is_stationary() {
        let grid = Grid::periodic(1.0, 32).unwrap();
        let field = TauField::from_spectra(grid, 3, |_| vec![0.5, -1.0, 2.0]).unwrap();
        for f in [FlowFunctional::ext_ricci(3).unwrap(), FlowFunctional::b1(3).unwrap()] {
            let ctl = StepControl::new(0.9, Scheme::Upwind, 0.5);
            let (out, _) = run_tau_system(&field, &f, &ctl, 0, |_| {}).unwrap();
            assert_eq!(out.tau, field.tau);
        }
    }

    #[test]
    fn totally_geodesic_fixed_point() {
        let grid = Grid::periodic(1.0, 16).unwrap();
        let field = TauField::from_umbilical(grid, 2, |_| 0.0).unwrap();
        let f = FlowFunctional::ext_ricci(2).unwrap();
        let ctl = StepControl::new(0.9, Scheme::LaxFriedrichs, 1.0);
        let (out, _) = run_tau_system(&field, &f, &ctl, 0, |_| {}).unwrap();
        assert!(out.tau.iter().flatten().all(|&v| v == 0.0));
    }

    #[test]
    fn hat_b1_coefficients_are_half_identity() {
        let tau = [0.6f64, 0.12, 0.024];
        let f = FlowFunctional::b1(3).unwrap();
        let (norm, trace) = coefficient_bounds(&tau, 3, &f, &node_data(&tau, 3, &f));
        assert!((norm - 0.5).abs() < 1e-8);
        assert!((trace - 1.5).abs() < 1e-8);
    }

    #[test]
    fn single_step_matches_scalar_upwind_for_b1() {
        let grid = Grid::periodic(1.0, 64).unwrap();
        let l0 = |s: f64| 0.3 * (2.0 * PI * s).sin();
        let field = TauField::from_umbilical(grid, 1, l0).unwrap();
        let f = FlowFunctional::b1(1).unwrap();
        let ctl = StepControl::new(0.8, Scheme::Upwind, 1.0);
        let next = step_tau_system(&field, &f, &ctl).unwrap();
        let ds = 1.0 / 64.0;
        let dt = 0.8 * ds / 0.5;
        assert!((next.t - dt).abs() < 1e-9);
        let old = field.component(0);
        for i in 0..64 {
            let want = old[i] - next.t * 0.5 * (old[i] - old[(i + 63) % 64]) / ds;
            assert!((next.tau[i][0] - want).abs() < 1e-9);
        }
    }

    #[test]
    fn mismatched_dimension_rejected() {
        let grid = Grid::periodic(1.0, 16).unwrap();
        let field = TauField::from_umbilical(grid, 2, |s| s).unwrap();
        let f = FlowFunctional::b1(3).unwrap();
        assert!(step_tau_system(&field, &f, &StepControl::new(0.5, Scheme::Upwind, 1.0)).is_err());
    }
}
