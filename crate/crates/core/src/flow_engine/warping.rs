//! Warping factor reconstruction `φ_t = φ_0 exp(½∫_0^t ψ(λ) dt)`.

use super::{FlowError, Grid, UmbilicalProfile};
use crate::scalar::Scalar;
use crate::sym_curvature::{psi_of_lambda, FlowFunctional};

/// Time-ordered λ snapshots on a shared grid.
#[derive(Debug, Clone, PartialEq)]
pub struct LambdaHistory<T> {
    grid: Grid<T>,
    times: Vec<T>,
    lambdas: Vec<Vec<T>>,
}

impl<T: Scalar> LambdaHistory<T> {
    pub fn new(grid: Grid<T>) -> Self {
        Self {
            grid,
            times: Vec::new(),
            lambdas: Vec::new(),
        }
    }

    pub fn push(&mut self, t: T, lambda: Vec<T>) -> Result<(), FlowError> {
        if lambda.len() != self.grid.nodes() {
            return Err(FlowError::HistoryMismatch(format!(
                "snapshot has {} nodes, grid has {}",
                lambda.len(),
                self.grid.nodes()
            )));
        }
        if let Some(&last) = self.times.last() {
            if !(t >= last) {
                return Err(FlowError::HistoryMismatch(format!("time {t} precedes {last}")));
            }
        }
        self.times.push(t);
        self.lambdas.push(lambda);
        Ok(())
    }

    pub fn grid(&self) -> &Grid<T> {
        &self.grid
    }

    pub fn times(&self) -> &[T] {
        &self.times
    }

    pub fn snapshots(&self) -> &[Vec<T>] {
        &self.lambdas
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }
}

/// Running trapezoidal integral `∫ψ(λ) dt` per node.
#[derive(Debug, Clone)]
pub struct WarpingIntegrator<T> {
    integral: Vec<T>,
    last: Option<(T, Vec<T>)>,
}

impl<T: Scalar> WarpingIntegrator<T> {
    pub fn new(nodes: usize) -> Self {
        Self {
            integral: vec![T::zero(); nodes],
            last: None,
        }
    }

    pub fn push(&mut self, functional: &FlowFunctional<T>, t: T, lambda: &[T]) {
        let psi: Vec<T> = lambda.iter().map(|&l| psi_of_lambda(functional, l)).collect();
        if let Some((t0, psi0)) = &self.last {
            let half_dt = (t - *t0) * T::lit(0.5);
            for ((acc, &a), &b) in self.integral.iter_mut().zip(psi0).zip(&psi) {
                *acc += half_dt * (a + b);
            }
        }
        self.last = Some((t, psi));
    }

    pub fn integral(&self) -> &[T] {
        &self.integral
    }

    pub fn warp(&self, phi0: &[T]) -> Vec<T> {
        let half = T::lit(0.5);
        phi0.iter()
            .zip(&self.integral)
            .map(|(&p, &i)| p * (half * i).exp())
            .collect()
    }
}

/// Final warping factor from a λ history starting at the profile `p0`.
pub fn evolve_warping<T: Scalar>(
    history: &LambdaHistory<T>,
    p0: &UmbilicalProfile<T>,
    functional: &FlowFunctional<T>,
) -> Result<Vec<T>, FlowError> {
    if history.grid() != &p0.grid {
        return Err(FlowError::HistoryMismatch(
            "history grid differs from the initial profile".into(),
        ));
    }
    let mut acc = WarpingIntegrator::new(p0.grid.nodes());
    for (t, l) in history.times().iter().zip(history.snapshots()) {
        acc.push(functional, *t, l);
    }
    Ok(acc.warp(&p0.phi))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_lambda_exponential_law() {
        let grid = Grid::<f64>::periodic(1.0, 8).unwrap();
        let p0 = UmbilicalProfile::from_fn(grid.clone(), |_| 0.4, |s| 1.0 + s).unwrap();
        let f = FlowFunctional::umbilical_square(2).unwrap();
        let mut h = LambdaHistory::new(grid);
        for k in 0..=10 {
            h.push(0.1 * k as f64, vec![0.4; 8]).unwrap();
        }
        let phi = evolve_warping(&h, &p0, &f).unwrap();
        for (p, q) in phi.iter().zip(&p0.phi) {
            assert!((p - q * (0.5 * 1.0 * 0.16f64).exp()).abs() < 1e-12);
        }
    }

    #[test]
    fn zero_psi_keeps_phi() {
        let grid = Grid::<f64>::periodic(1.0, 8).unwrap();
        let p0 = UmbilicalProfile::from_fn(grid.clone(), |s| s, |_| 2.0).unwrap();
        let f = FlowFunctional::affine(2, 0.0, 0.0);
        // affine(0, 0) is trivial and rejected; ψ ≡ 0 comes from tau1 - c on λ = c/n.
        assert!(f.is_err());
        let f = FlowFunctional::tau1_minus_c(2, 1.0).unwrap();
        let mut h = LambdaHistory::new(grid);
        h.push(0.0, vec![0.5; 8]).unwrap();
        h.push(3.0, vec![0.5; 8]).unwrap();
        assert_eq!(evolve_warping(&h, &p0, &f).unwrap(), vec![2.0; 8]);
    }

    #[test]
    fn mismatched_grids_rejected() {
        let grid = Grid::<f64>::periodic(1.0, 8).unwrap();
        let other = Grid::<f64>::periodic(1.0, 9).unwrap();
        let p0 = UmbilicalProfile::from_fn(other, |_| 0.0, |_| 1.0).unwrap();
        let h = LambdaHistory::new(grid.clone());
        let f = FlowFunctional::b1(2).unwrap();
        assert!(evolve_warping(&h, &p0, &f).is_err());
        let mut h = LambdaHistory::new(grid);
        assert!(h.push(0.0, vec![0.0; 3]).is_err());
        h.push(1.0, vec![0.0; 8]).unwrap();
        assert!(h.push(0.5, vec![0.0; 8]).is_err());
    }
}
