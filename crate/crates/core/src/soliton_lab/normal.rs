use super::{EpsChoice, ResidualNorm, SolitonReport, Verdict};
use crate::flow_engine::UmbilicalProfile;
use crate::scalar::{sup_norm, Scalar};
use crate::sym_curvature::{psi_of_lambda, psi_prime, FlowFunctional};

/// Below this `|λ|` the `λ = 0` branch of μ is used.
pub const MU_SWITCH: f64 = 1e-8;

/// μ(λ) = -(n/2)(ψ(λ) - ψ(0))/λ, extended by -(n/2)ψ'(0) at λ = 0.
///
/// With a closed-form ψ = Σ c_j λ^j the quotient is the polynomial
/// `Σ_{j≥1} c_j λ^{j-1}`, evaluated without cancellation on both branches.
pub fn mu_of_lambda<T: Scalar>(functional: &FlowFunctional<T>, lambda: T) -> T {
    let half_n = T::from_usize_lossy(functional.n()) * T::lit(0.5);
    if let Some(c) = functional.umbilical_polynomial() {
        let x = if lambda.abs() < T::lit(MU_SWITCH) {
            T::zero()
        } else {
            lambda
        };
        let quotient = c.iter().skip(1).rev().fold(T::zero(), |acc, &cj| acc * x + cj);
        return -half_n * quotient;
    }
    if lambda.abs() < T::lit(MU_SWITCH) {
        -half_n * psi_prime(functional, T::zero())
    } else {
        -half_n * (psi_of_lambda(functional, lambda) - psi_of_lambda(functional, T::zero())) / lambda
    }
}

/// `max(|μ(±δ) - μ(0)|)` at `δ = MU_SWITCH`; small when ψ is C¹ near 0.
pub fn mu_continuity_gap<T: Scalar>(functional: &FlowFunctional<T>) -> T {
    let d = T::lit(MU_SWITCH);
    let m0 = mu_of_lambda(functional, T::zero());
    (mu_of_lambda(functional, d) - m0)
        .abs()
        .max((mu_of_lambda(functional, -d) - m0).abs())
}

/// Checks `X = μ(λ) N` against `ψ(λ) - ε = -(2/n) μ λ` and `X(λ) = 0`.
///
/// `EpsChoice::Auto` takes `ε = ψ(0)`. The verdict is `Degenerate` when the
/// check fails on a profile where ψ' vanishes somewhere.
pub fn check_normal_soliton<T: Scalar>(
    p: &UmbilicalProfile<T>,
    functional: &FlowFunctional<T>,
    eps: EpsChoice<T>,
    tol: T,
) -> SolitonReport<T> {
    let eps = match eps {
        EpsChoice::Value(e) => e,
        EpsChoice::Auto => psi_of_lambda(functional, T::zero()),
    };
    let two_over_n = T::lit(2.0) / T::from_usize_lossy(functional.n());
    let res: Vec<T> = p
        .lambda
        .iter()
        .map(|&l| psi_of_lambda(functional, l) - eps + two_over_n * mu_of_lambda(functional, l) * l)
        .collect();
    let n_lambda = sup_norm(&p.grid.derivative(&p.lambda));
    let residual = ResidualNorm::of("psi(lambda) - eps + (2/n) mu lambda", &res);
    let ok = residual.linf <= tol && n_lambda <= tol;

    let mut notes = Vec::new();
    let mut alternative_eps = None;
    if n_lambda <= tol {
        let mean = p.lambda.iter().copied().sum::<T>() / T::from_usize_lossy(p.lambda.len());
        let alt = psi_of_lambda(functional, mean);
        alternative_eps = Some(alt);
        notes.push(format!(
            "lambda is constant; X = 0 with eps = psi(lambda) = {alt} is also a soliton"
        ));
    }
    let min_slope = p
        .lambda
        .iter()
        .map(|&l| psi_prime(functional, l).abs())
        .fold(T::infinity(), T::min);
    let verdict = if ok {
        Verdict::Soliton
    } else if min_slope <= tol {
        notes.push(format!("psi' vanishes on the profile (min |psi'| = {min_slope})"));
        Verdict::Degenerate
    } else {
        Verdict::NotSoliton
    };
    SolitonReport {
        residuals: vec![residual],
        eps_used: eps,
        n_lambda_norm: Some(n_lambda),
        alternative_eps,
        tolerance: tol,
        verdict,
        notes,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConformalKillingReport<T> {
    /// `L_X ĝ = μ ĝ` factor per node.
    pub mu: Vec<T>,
    pub killing: bool,
    pub homothety: bool,
}

/// Leaf-wise conformal factor `μ = ψ(λ) - ε`.
pub fn conformal_killing_factor<T: Scalar>(
    p: &UmbilicalProfile<T>,
    functional: &FlowFunctional<T>,
    eps: T,
    tol: T,
) -> ConformalKillingReport<T> {
    let mu: Vec<T> = p.lambda.iter().map(|&l| psi_of_lambda(functional, l) - eps).collect();
    let (lo, hi) = mu.iter().fold((T::infinity(), T::neg_infinity()), |(lo, hi), &m| {
        (lo.min(m), hi.max(m))
    });
    let homothety = hi - lo <= tol;
    let killing = sup_norm(&mu) <= tol;
    ConformalKillingReport { mu, killing, homothety }
}
