use super::SolitonError;
use crate::scalar::Scalar;
use crate::sym_curvature::{assemble_h_eigen, FlowFunctional, PrincipalCurvatureSpectrum};

/// Which tracing convention a candidate satisfies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Normalization {
    /// `tr h = nε + 2 div X`.
    Unscaled,
    /// `tr h / n = ε + 2 div X`.
    PerDimension,
    Both,
    Neither,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TraceIdentityCheck<T> {
    pub trace_h: T,
    /// `tr h - nε - 2 div X`.
    pub residual: T,
    /// `tr h / n - ε - 2 div X`.
    pub per_dimension_residual: T,
}

impl<T: Scalar> TraceIdentityCheck<T> {
    pub fn normalization(&self, tol: T) -> Normalization {
        match (self.residual.abs() <= tol, self.per_dimension_residual.abs() <= tol) {
            (true, true) => Normalization::Both,
            (true, false) => Normalization::Unscaled,
            (false, true) => Normalization::PerDimension,
            (false, false) => Normalization::Neither,
        }
    }
}

pub fn check_trace_identity<T: Scalar>(
    spec: &PrincipalCurvatureSpectrum<T>,
    functional: &FlowFunctional<T>,
    eps: T,
    div_x: T,
) -> TraceIdentityCheck<T> {
    let trace_h: T = assemble_h_eigen(spec, functional).into_iter().sum();
    let nf = T::from_usize_lossy(spec.n());
    let two = T::lit(2.0);
    TraceIdentityCheck {
        trace_h,
        residual: trace_h - nf * eps - two * div_x,
        per_dimension_residual: trace_h / nf - eps - two * div_x,
    }
}

/// `ε = (Σ wᵢ traceᵢ / Σ wᵢ) / n`.
pub fn estimate_eps_leaf<T: Scalar>(trace_samples: &[T], weights: &[T], n: usize) -> Result<T, SolitonError> {
    if trace_samples.len() != weights.len() {
        return Err(SolitonError::LengthMismatch(format!(
            "{} trace samples, {} weights",
            trace_samples.len(),
            weights.len()
        )));
    }
    if n == 0 {
        return Err(SolitonError::UnsupportedDimension {
            n,
            reason: "leaf dimension must be positive",
        });
    }
    let total: T = weights.iter().copied().sum();
    if !(total > T::zero()) {
        return Err(SolitonError::NonPositiveWeight);
    }
    let avg = trace_samples.iter().zip(weights).map(|(&t, &w)| t * w).sum::<T>() / total;
    Ok(avg / T::from_usize_lossy(n))
}
