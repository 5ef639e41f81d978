//! Normalized extrinsic Ricci flow for surfaces (`n = 2`), umbilical model.
//!
//! With `Ric^ex = σ_2 ĝ = λ² ĝ`, the conformal factor obeys
//! `∂_t log φ² = -2λ² + ρ/2` where `ρ = 2⟨R^ex⟩ = 4⟨λ²⟩` is the average over
//! the profile with volume weight `φ² ds`.

use super::umbilical::advance_lambda;
use super::{FlowError, StepControl, UmbilicalProfile};
use crate::scalar::Scalar;
use crate::sym_curvature::FlowFunctional;

/// Sign of the normalization term.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum NormalizationSign {
    /// `+4⟨λ²⟩`: constant-λ data is a fixed point of the conformal factor.
    #[default]
    FixedPointPreserving,
    /// The literal `ρ^ex = -2⟨Ric(N,N)⟩` reading, which equals `-4⟨λ²⟩`
    /// after the integral formula; constant λ then shrinks the leaves.
    AsPrinted,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormalizedStepReport<T> {
    pub dt: T,
    /// Normalization constant actually used.
    pub rho: T,
    /// `Σ w_i (-2λ_i² + ρ/2)` with `w_i = φ_i² Δs_i`.
    pub normalization_integral: T,
    /// `Σ w_i |-2λ_i² + ρ/2|`, for scaling the integral.
    pub normalization_scale: T,
}

/// λ step under ψ(λ) = -2λ² (the constant `ρ/2` does not enter `∂_s ψ`),
/// then the conformal-factor step with ρ computed from the updated λ.
pub fn normalized_ricci_step<T: Scalar>(
    p: &UmbilicalProfile<T>,
    ctl: &StepControl<T>,
    sign: NormalizationSign,
) -> Result<(UmbilicalProfile<T>, NormalizedStepReport<T>), FlowError> {
    let ricci = FlowFunctional::ext_ricci(2).expect("n = 2 is supported");
    let (lambda, dt) = advance_lambda(p, &ricci, ctl)?;

    let weights: Vec<T> = p
        .grid
        .quadrature_weights()
        .iter()
        .zip(&p.phi)
        .map(|(&w, &phi)| w * phi * phi)
        .collect();
    let total: T = weights.iter().copied().sum();
    let mean_sq = weights.iter().zip(&lambda).map(|(&w, &l)| w * l * l).sum::<T>() / total;
    let four = T::lit(4.0);
    let rho = match sign {
        NormalizationSign::FixedPointPreserving => four * mean_sq,
        NormalizationSign::AsPrinted => -four * mean_sq,
    };
    let half = T::lit(0.5);
    let two = T::lit(2.0);
    let rates: Vec<T> = lambda.iter().map(|&l| -two * l * l + half * rho).collect();
    let normalization_integral = weights.iter().zip(&rates).map(|(&w, &r)| w * r).sum();
    let normalization_scale = weights.iter().zip(&rates).map(|(&w, &r)| w * r.abs()).sum();
    let phi = p
        .phi
        .iter()
        .zip(&rates)
        .map(|(&phi, &r)| phi * (half * dt * r).exp())
        .collect();
    let remaining = ctl.t_end - p.t;
    let t = if dt >= remaining { ctl.t_end.max(p.t) } else { p.t + dt };
    Ok((
        UmbilicalProfile {
            grid: p.grid.clone(),
            lambda,
            phi,
            t,
        },
        NormalizedStepReport {
            dt,
            rho,
            normalization_integral,
            normalization_scale,
        },
    ))
}
