//! Static checks of extrinsic geometric soliton structures
//! `h(b) = ε ĝ + L_X ĝ`.

mod biregular;
mod normal;
mod ricci;
mod trace;

pub use biregular::{check_biregular_surface, BiregularGrid};
pub use normal::{
    check_normal_soliton, conformal_killing_factor, mu_continuity_gap, mu_of_lambda, ConformalKillingReport, MU_SWITCH,
};
pub use ricci::{classify_ricci_soliton, AdmissibleSpectrum, RootStructure, SpectrumClassification};
pub use trace::{check_trace_identity, estimate_eps_leaf, Normalization, TraceIdentityCheck};

use crate::flow_engine::UmbilicalProfile;
use crate::scalar::Scalar;
use crate::sym_curvature::{psi_of_lambda, FlowFunctional};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SolitonError {
    #[error("metric component {component} is not positive at node ({i}, {j})")]
    NonPositiveMetric {
        component: &'static str,
        i: usize,
        j: usize,
    },
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("total weight must be positive")]
    NonPositiveWeight,
    #[error("length mismatch: {0}")]
    LengthMismatch(String),
    #[error("leaf dimension n = {n} is not supported here: {reason}")]
    UnsupportedDimension { n: usize, reason: &'static str },
    #[error("candidate geometry and vector field do not match: {0}")]
    ShapeMismatch(String),
}

/// How ε is chosen.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EpsChoice<T> {
    /// ψ(0) for normal solitons, the leaf average of `tr h / n` otherwise.
    Auto,
    Value(T),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Soliton,
    NotSoliton,
    /// A hypothesis of the check fails on the data (e.g. ψ' vanishes), so
    /// a nonzero residual does not rule the structure out.
    Degenerate,
}

/// Sup and root-mean-square norm of one residual field.
#[derive(Debug, Clone, PartialEq)]
pub struct ResidualNorm<T> {
    pub equation: String,
    pub linf: T,
    pub l2: T,
}

impl<T: Scalar> ResidualNorm<T> {
    pub fn of(equation: impl Into<String>, values: &[T]) -> Self {
        let linf = crate::scalar::sup_norm(values);
        let l2 = if values.is_empty() {
            T::zero()
        } else {
            (values.iter().map(|&v| v * v).sum::<T>() / T::from_usize_lossy(values.len())).sqrt()
        };
        Self {
            equation: equation.into(),
            linf,
            l2,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolitonReport<T> {
    pub residuals: Vec<ResidualNorm<T>>,
    pub eps_used: T,
    /// `‖N(λ)‖∞`, when λ is part of the candidate.
    pub n_lambda_norm: Option<T>,
    /// A second ε under which the candidate is also a soliton (with `X = 0`).
    pub alternative_eps: Option<T>,
    pub tolerance: T,
    pub verdict: Verdict,
    pub notes: Vec<String>,
}

impl<T: Scalar> SolitonReport<T> {
    pub fn max_residual(&self) -> T {
        self.residuals.iter().fold(T::zero(), |m, r| m.max(r.linf))
    }
}

/// Default tolerance for analytically supplied data.
pub fn analytic_tolerance<T: Scalar>() -> T {
    T::lit(1e-8)
}

/// Default tolerance for data passed through second-order differences.
pub fn fd_tolerance<T: Scalar>(spacing: T) -> T {
    T::lit(10.0) * spacing * spacing
}

#[derive(Debug, Clone, PartialEq)]
pub enum CandidateGeometry<T> {
    Umbilical(UmbilicalProfile<T>),
    Biregular(BiregularGrid<T>),
}

#[derive(Debug, Clone, PartialEq)]
pub enum CandidateField<T> {
    Zero,
    /// `X = μ N`.
    NormalScaled(Vec<T>),
    /// `L_X ĝ = μ ĝ` along the leaves.
    LeafConformalKilling(Vec<T>),
    BiregularComponents {
        x0: Vec<T>,
        x1: Vec<T>,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolitonCandidate<T> {
    pub geometry: CandidateGeometry<T>,
    pub field: CandidateField<T>,
    pub eps: EpsChoice<T>,
}

/// Dispatches a candidate to the matching check.
pub fn check_candidate<T: Scalar>(
    candidate: &SolitonCandidate<T>,
    functional: &FlowFunctional<T>,
    tol: T,
) -> Result<SolitonReport<T>, SolitonError> {
    match (&candidate.geometry, &candidate.field) {
        (CandidateGeometry::Biregular(g), CandidateField::Zero) => {
            check_biregular_surface(&g.clone().without_field(), functional, candidate.eps, tol)
        }
        (CandidateGeometry::Biregular(g), CandidateField::BiregularComponents { x0, x1 }) => {
            let g = g.clone().with_field_values(x0.clone(), x1.clone())?;
            check_biregular_surface(&g, functional, candidate.eps, tol)
        }
        (CandidateGeometry::Biregular(_), f) => Err(SolitonError::ShapeMismatch(format!(
            "biregular grids take Zero or BiregularComponents, got {f:?}"
        ))),
        (CandidateGeometry::Umbilical(p), CandidateField::Zero) => {
            Ok(umbilical_with_mu(p, functional, None, candidate.eps, tol))
        }
        (CandidateGeometry::Umbilical(p), CandidateField::NormalScaled(mu)) => {
            if mu.len() != p.lambda.len() {
                return Err(SolitonError::LengthMismatch(format!(
                    "mu has {} nodes, profile {}",
                    mu.len(),
                    p.lambda.len()
                )));
            }
            Ok(umbilical_with_mu(p, functional, Some(mu), candidate.eps, tol))
        }
        (CandidateGeometry::Umbilical(p), CandidateField::LeafConformalKilling(mu)) => {
            if mu.len() != p.lambda.len() {
                return Err(SolitonError::LengthMismatch(format!(
                    "mu has {} nodes, profile {}",
                    mu.len(),
                    p.lambda.len()
                )));
            }
            let eps = match candidate.eps {
                EpsChoice::Value(e) => e,
                EpsChoice::Auto => leaf_mean(p, |i| psi_of_lambda(functional, p.lambda[i]) - mu[i]),
            };
            let res: Vec<T> = p
                .lambda
                .iter()
                .zip(mu)
                .map(|(&l, &m)| psi_of_lambda(functional, l) - eps - m)
                .collect();
            let residuals = vec![ResidualNorm::of("psi(lambda) - eps - mu", &res)];
            let verdict = if residuals[0].linf <= tol {
                Verdict::Soliton
            } else {
                Verdict::NotSoliton
            };
            Ok(SolitonReport {
                residuals,
                eps_used: eps,
                n_lambda_norm: None,
                alternative_eps: None,
                tolerance: tol,
                verdict,
                notes: vec![],
            })
        }
        (CandidateGeometry::Umbilical(_), f) => Err(SolitonError::ShapeMismatch(format!(
            "umbilical profiles do not take {f:?}"
        ))),
    }
}

fn leaf_mean<T: Scalar>(p: &UmbilicalProfile<T>, value: impl Fn(usize) -> T) -> T {
    let w = p.grid.quadrature_weights();
    let total: T = w.iter().copied().sum();
    w.iter().enumerate().map(|(i, &wi)| wi * value(i)).sum::<T>() / total
}

/// `X = μN` (or `X = 0` when `mu` is `None`) on an umbilical profile:
/// residual `ψ(λ) - ε + (2/n) μ λ` and the constraint `X(λ) = μ N(λ) = 0`.
fn umbilical_with_mu<T: Scalar>(
    p: &UmbilicalProfile<T>,
    functional: &FlowFunctional<T>,
    mu: Option<&[T]>,
    eps: EpsChoice<T>,
    tol: T,
) -> SolitonReport<T> {
    let nf = T::from_usize_lossy(functional.n());
    let two_over_n = T::lit(2.0) / nf;
    let eps = match (eps, mu) {
        (EpsChoice::Value(e), _) => e,
        (EpsChoice::Auto, Some(_)) => psi_of_lambda(functional, T::zero()),
        (EpsChoice::Auto, None) => leaf_mean(p, |i| psi_of_lambda(functional, p.lambda[i])),
    };
    let res: Vec<T> = p
        .lambda
        .iter()
        .enumerate()
        .map(|(i, &l)| psi_of_lambda(functional, l) - eps + mu.map_or(T::zero(), |m| two_over_n * m[i] * l))
        .collect();
    let dl = p.grid.derivative(&p.lambda);
    let n_lambda = crate::scalar::sup_norm(&dl);
    let mut residuals = vec![ResidualNorm::of("psi(lambda) - eps + (2/n) mu lambda", &res)];
    if let Some(m) = mu {
        let x_lambda: Vec<T> = m.iter().zip(&dl).map(|(&a, &b)| a * b).collect();
        residuals.push(ResidualNorm::of("X(lambda)", &x_lambda));
    }
    let ok = residuals.iter().all(|r| r.linf <= tol);
    SolitonReport {
        residuals,
        eps_used: eps,
        n_lambda_norm: Some(n_lambda),
        alternative_eps: None,
        tolerance: tol,
        verdict: if ok { Verdict::Soliton } else { Verdict::NotSoliton },
        notes: vec![],
    }
}
