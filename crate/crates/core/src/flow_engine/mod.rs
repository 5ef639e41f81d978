//! Time evolution of curvature data along one arclength-parameterized
//! normal curve.
//!
//! `N(·)` is `∂_s` on a uniform grid. The scalar umbilical law
//! `∂_t λ + ½ ∂_s ψ(λ) = 0`, the coupled power-sum system and the
//! normalized extrinsic Ricci flow all advance with explicit steps under a
//! CFL restriction.

mod characteristics;
mod normalized;
mod tau_system;
mod umbilical;
mod warping;

pub use characteristics::characteristics_oracle;
pub use normalized::{normalized_ricci_step, NormalizationSign, NormalizedStepReport};
pub use tau_system::{run_tau_system, step_tau_system, TauField};
pub use umbilical::{run_umbilical, step_umbilical, total_variation, RunOptions, UmbilicalRun};
pub use warping::{evolve_warping, LambdaHistory, WarpingIntegrator};

use std::fmt;
use std::sync::Arc;

use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FlowError {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("invalid profile: {0}")]
    InvalidProfile(String),
    #[error("invalid step control: {0}")]
    InvalidControl(String),
    #[error("no progress: t = {t} after {steps} steps, target {t_end}")]
    NoProgress { t: f64, t_end: f64, steps: usize },
    #[error("blow-up after t = {last_valid_t}: {reason}")]
    BlowUp { last_valid_t: f64, reason: String },
    #[error("characteristics cross before t = {t}; oracle invalid")]
    ShockFormed { t: f64 },
    #[error("history mismatch: {0}")]
    HistoryMismatch(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Boundary {
    Periodic,
    /// One-sided at the ends; ghost values from the inflow function when
    /// one is supplied, constant extrapolation otherwise.
    Transmissive,
}

/// Uniform arclength grid over `[origin, origin + length]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid<T> {
    origin: T,
    length: T,
    nodes: usize,
    boundary: Boundary,
}

impl<T: Scalar> Grid<T> {
    pub const MIN_NODES: usize = 8;

    pub fn new(origin: T, length: T, nodes: usize, boundary: Boundary) -> Result<Self, FlowError> {
        if nodes < Self::MIN_NODES {
            return Err(FlowError::InvalidGrid(format!(
                "need at least {} nodes, got {nodes}",
                Self::MIN_NODES
            )));
        }
        if !(length > T::zero()) || !length.is_finite() || !origin.is_finite() {
            return Err(FlowError::InvalidGrid(format!(
                "length must be positive and finite, got {length}"
            )));
        }
        Ok(Self {
            origin,
            length,
            nodes,
            boundary,
        })
    }

    pub fn periodic(length: T, nodes: usize) -> Result<Self, FlowError> {
        Self::new(T::zero(), length, nodes, Boundary::Periodic)
    }

    pub fn interval(a: T, b: T, nodes: usize) -> Result<Self, FlowError> {
        Self::new(a, b - a, nodes, Boundary::Transmissive)
    }

    pub fn nodes(&self) -> usize {
        self.nodes
    }

    pub fn origin(&self) -> T {
        self.origin
    }

    pub fn length(&self) -> T {
        self.length
    }

    pub fn boundary(&self) -> Boundary {
        self.boundary
    }

    /// `L/G` when periodic, `L/(G-1)` otherwise.
    pub fn spacing(&self) -> T {
        match self.boundary {
            Boundary::Periodic => self.length / T::from_usize_lossy(self.nodes),
            Boundary::Transmissive => self.length / T::from_usize_lossy(self.nodes - 1),
        }
    }

    pub fn coordinate(&self, i: usize) -> T {
        self.origin + T::from_usize_lossy(i) * self.spacing()
    }

    pub fn coordinates(&self) -> Vec<T> {
        (0..self.nodes).map(|i| self.coordinate(i)).collect()
    }

    /// Quadrature weights: uniform when periodic, trapezoidal otherwise.
    pub fn quadrature_weights(&self) -> Vec<T> {
        let ds = self.spacing();
        let mut w = vec![ds; self.nodes];
        if self.boundary == Boundary::Transmissive {
            let half = ds * T::lit(0.5);
            w[0] = half;
            w[self.nodes - 1] = half;
        }
        w
    }

    /// Central first derivative; one-sided second-order stencils at the ends
    /// of a non-periodic grid.
    pub fn derivative(&self, values: &[T]) -> Vec<T> {
        let g = self.nodes;
        let ds = self.spacing();
        let two = T::lit(2.0);
        (0..g)
            .map(|i| match self.boundary {
                Boundary::Periodic => (values[(i + 1) % g] - values[(i + g - 1) % g]) / (two * ds),
                Boundary::Transmissive => {
                    if i == 0 {
                        (T::lit(-3.0) * values[0] + T::lit(4.0) * values[1] - values[2]) / (two * ds)
                    } else if i == g - 1 {
                        (T::lit(3.0) * values[g - 1] - T::lit(4.0) * values[g - 2] + values[g - 3]) / (two * ds)
                    } else {
                        (values[i + 1] - values[i - 1]) / (two * ds)
                    }
                }
            })
            .collect()
    }
}

/// Sampled normal curve of a totally umbilical foliation: normal curvature
/// `λ` and warping factor `φ` per node.
#[derive(Debug, Clone, PartialEq)]
pub struct UmbilicalProfile<T> {
    pub grid: Grid<T>,
    pub lambda: Vec<T>,
    pub phi: Vec<T>,
    pub t: T,
}

impl<T: Scalar> UmbilicalProfile<T> {
    pub fn new(grid: Grid<T>, lambda: Vec<T>, phi: Vec<T>) -> Result<Self, FlowError> {
        let p = Self {
            grid,
            lambda,
            phi,
            t: T::zero(),
        };
        p.validate()?;
        Ok(p)
    }

    pub fn from_fn(grid: Grid<T>, lambda: impl Fn(T) -> T, phi: impl Fn(T) -> T) -> Result<Self, FlowError> {
        let s = grid.coordinates();
        let l = s.iter().map(|&x| lambda(x)).collect();
        let p = s.iter().map(|&x| phi(x)).collect();
        Self::new(grid, l, p)
    }

    pub fn validate(&self) -> Result<(), FlowError> {
        let g = self.grid.nodes();
        if self.lambda.len() != g || self.phi.len() != g {
            return Err(FlowError::InvalidProfile(format!(
                "expected {g} nodes, got lambda {} / phi {}",
                self.lambda.len(),
                self.phi.len()
            )));
        }
        if let Some(i) = self.lambda.iter().position(|v| !v.is_finite()) {
            return Err(FlowError::InvalidProfile(format!("lambda[{i}] is not finite")));
        }
        if let Some(i) = self.phi.iter().position(|&v| !(v > T::zero()) || !v.is_finite()) {
            return Err(FlowError::InvalidProfile(format!(
                "phi[{i}] must be positive and finite"
            )));
        }
        Ok(())
    }

    pub fn s(&self) -> Vec<T> {
        self.grid.coordinates()
    }
}

/// Exact boundary data `(t, s) -> λ` used for ghost nodes on transmissive grids.
pub type Inflow<T> = Arc<dyn Fn(T, T) -> T + Send + Sync>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    /// Characteristic-speed upwinding, `½ψ'(λ)` per node.
    Upwind,
    /// Conservative flux `½ψ(λ)` with global Lax–Friedrichs dissipation.
    LaxFriedrichs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TimeIntegrator {
    ForwardEuler,
    /// Two-stage Heun (SSP-RK2).
    Heun,
}

#[derive(Clone)]
pub struct StepControl<T> {
    pub cfl: T,
    pub scheme: Scheme,
    pub integrator: TimeIntegrator,
    pub t_end: T,
    pub max_steps: usize,
    pub inflow: Option<Inflow<T>>,
    /// Permits `cfl > 1`; only for stability scans.
    pub allow_supercritical: bool,
}

impl<T: fmt::Debug> fmt::Debug for StepControl<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("StepControl")
            .field("cfl", &self.cfl)
            .field("scheme", &self.scheme)
            .field("integrator", &self.integrator)
            .field("t_end", &self.t_end)
            .field("max_steps", &self.max_steps)
            .field("inflow", &self.inflow.is_some())
            .finish()
    }
}

impl<T: Scalar> StepControl<T> {
    pub fn new(cfl: T, scheme: Scheme, t_end: T) -> Self {
        Self {
            cfl,
            scheme,
            integrator: TimeIntegrator::ForwardEuler,
            t_end,
            max_steps: 10_000_000,
            inflow: None,
            allow_supercritical: false,
        }
    }

    pub fn with_integrator(mut self, integrator: TimeIntegrator) -> Self {
        self.integrator = integrator;
        self
    }

    pub fn with_inflow(mut self, inflow: Inflow<T>) -> Self {
        self.inflow = Some(inflow);
        self
    }

    pub fn with_max_steps(mut self, max_steps: usize) -> Self {
        self.max_steps = max_steps;
        self
    }

    pub fn validate(&self) -> Result<(), FlowError> {
        let upper = if self.allow_supercritical {
            T::lit(1e3)
        } else {
            T::one()
        };
        if !(self.cfl > T::zero() && self.cfl <= upper) {
            return Err(FlowError::InvalidControl(format!(
                "cfl must lie in (0, 1], got {}",
                self.cfl
            )));
        }
        if self.max_steps == 0 {
            return Err(FlowError::InvalidControl("max_steps must be >= 1".into()));
        }
        if !self.t_end.is_finite() {
            return Err(FlowError::InvalidControl("t_end must be finite".into()));
        }
        Ok(())
    }
}

/// Time step `cfl·Δs / speed`, clipped to the remaining time. A zero speed
/// leaves the state unchanged, so the remaining time is taken in one step.
pub(crate) fn cfl_step<T: Scalar>(cfl: T, ds: T, speed: T, remaining: T) -> T {
    if speed > T::zero() {
        (cfl * ds / speed).min(remaining)
    } else {
        remaining
    }
}

/// Explicit update `u + dt·L(u, t)`, or the two-stage Heun combination.
pub(crate) fn advance<T: Scalar>(
    integrator: TimeIntegrator,
    u: &[T],
    t: T,
    dt: T,
    mut rate: impl FnMut(&[T], T) -> Vec<T>,
) -> Vec<T> {
    let k1 = rate(u, t);
    let stage: Vec<T> = u.iter().zip(&k1).map(|(&a, &k)| a + dt * k).collect();
    match integrator {
        TimeIntegrator::ForwardEuler => stage,
        TimeIntegrator::Heun => {
            let k2 = rate(&stage, t + dt);
            let half = T::lit(0.5);
            u.iter()
                .zip(&stage)
                .zip(&k2)
                .map(|((&a, &s), &k)| half * a + half * (s + dt * k))
                .collect()
        }
    }
}
