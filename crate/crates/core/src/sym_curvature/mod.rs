//! Algebra of principal curvatures in the principal frame.
//!
//! Every quantity here is a symmetric function of the spectrum `k_1..k_n`
//! of the Weingarten operator: power sums `τ_j = tr A^j`, mean curvatures
//! `σ_j`, the eigenvalues of a flow tensor `h(b)`, and the extrinsic Ricci
//! tensor `Ric^ex = τ_1 b̂_1 - b̂_2`.

mod functional;
mod newton;

pub use functional::{psi_of_lambda, psi_prime, ComponentFn, FlowComponent, FlowFunctional};
pub use newton::{elementary_from_power, extend_power, newton_residuals, power_sums, power_sums_closure};

use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CurvatureError {
    #[error("spectrum must contain at least one principal curvature")]
    EmptySpectrum,
    #[error("principal curvature k[{index}] is not finite")]
    NonFinite { index: usize },
    #[error("invalid power-sum order m = {m}")]
    InvalidOrder { m: usize },
    #[error("need at least {needed} entries, got {got}")]
    TooShort { needed: usize, got: usize },
    #[error("Newton identity j = {index} violated: residual {residual:e}")]
    Inconsistent { index: usize, residual: f64 },
    #[error("invalid flow functional: {0}")]
    InvalidFunctional(String),
    #[error("tolerance must be positive")]
    NonPositiveTolerance,
}

/// Principal curvatures `k_1..k_n` of a leaf with respect to its unit normal.
#[derive(Debug, Clone, PartialEq)]
pub struct PrincipalCurvatureSpectrum<T> {
    pub(crate) k: Vec<T>,
}

impl<T: Scalar> PrincipalCurvatureSpectrum<T> {
    pub fn new(k: Vec<T>) -> Result<Self, CurvatureError> {
        if k.is_empty() {
            return Err(CurvatureError::EmptySpectrum);
        }
        if let Some(index) = k.iter().position(|v| !v.is_finite()) {
            return Err(CurvatureError::NonFinite { index });
        }
        Ok(Self { k })
    }

    /// Totally umbilical spectrum `(λ, …, λ)`.
    pub fn umbilical(n: usize, lambda: T) -> Result<Self, CurvatureError> {
        Self::new(vec![lambda; n])
    }

    pub fn n(&self) -> usize {
        self.k.len()
    }

    pub fn curvatures(&self) -> &[T] {
        &self.k
    }

    pub fn max_abs(&self) -> T {
        crate::scalar::sup_norm(&self.k)
    }
}

/// Power sums and mean curvatures of one spectrum, kept together so that
/// the Newton identities can be audited.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricInvariants<T> {
    pub n: usize,
    /// `τ_1..τ_m`, `m >= n`.
    pub tau: Vec<T>,
    /// `σ_1..σ_n`.
    pub sigma: Vec<T>,
}

impl<T: Scalar> SymmetricInvariants<T> {
    pub fn from_spectrum(spec: &PrincipalCurvatureSpectrum<T>, m: usize) -> Result<Self, CurvatureError> {
        let n = spec.n();
        let tau = power_sums(spec, m.max(n))?;
        let sigma = elementary_from_power(&tau, n)?;
        Ok(Self { n, tau, sigma })
    }

    /// Largest residual of both Newton recurrences, scaled by the size of
    /// the terms involved.
    pub fn max_relative_residual(&self) -> T {
        let mut worst = T::zero();
        for (res, scale) in newton_residuals(&self.tau, &self.sigma) {
            worst = worst.max(res.abs() / scale.max(T::one()));
        }
        let n = self.n;
        for j in (n + 1)..=self.tau.len() {
            let mut res = self.tau[j - 1];
            let mut scale = res.abs();
            for i in 1..=n {
                let term = self.tau[j - i - 1] * self.sigma[i - 1];
                scale += term.abs();
                if i % 2 == 1 {
                    res -= term;
                } else {
                    res += term;
                }
            }
            worst = worst.max(res.abs() / scale.max(T::one()));
        }
        worst
    }
}

/// Eigenvalues `h_i = Σ_j f_j(τ) k_i^j` of `h(b)` in the principal frame.
pub fn assemble_h_eigen<T: Scalar>(spec: &PrincipalCurvatureSpectrum<T>, functional: &FlowFunctional<T>) -> Vec<T> {
    let tau = power_sums(spec, spec.n()).expect("n >= 1");
    let f = functional.eval_all(&tau);
    spec.k
        .iter()
        .map(|&k| {
            let mut kj = T::one();
            let mut acc = T::zero();
            for &fj in &f {
                acc += fj * kj;
                kj *= k;
            }
            acc
        })
        .collect()
}

/// Spectrum after the leaf-wise conformal change `e^{2φ} ĝ`: `k_i - N(φ)`.
pub fn conformal_shift<T: Scalar>(spec: &PrincipalCurvatureSpectrum<T>, c: T) -> PrincipalCurvatureSpectrum<T> {
    PrincipalCurvatureSpectrum {
        k: spec.k.iter().map(|&k| k - c).collect(),
    }
}

/// Eigenvalues `τ_1 k_i - k_i²` of the extrinsic Ricci tensor.
pub fn extrinsic_ricci_eigen<T: Scalar>(spec: &PrincipalCurvatureSpectrum<T>) -> Vec<T> {
    let tau1: T = spec.k.iter().copied().sum();
    spec.k.iter().map(|&k| tau1 * k - k * k).collect()
}

/// Extrinsic scalar curvature `τ_1² - τ_2`, which equals `2σ_2`.
pub fn extrinsic_scalar<T: Scalar>(spec: &PrincipalCurvatureSpectrum<T>) -> T {
    let tau = power_sums(spec, 2).expect("m = 2");
    let r = tau[0] * tau[0] - tau[1];
    debug_assert!({
        let sigma = elementary_from_power(&tau, spec.n().min(2)).expect("length checked");
        let two_sigma2 = if spec.n() >= 2 { sigma[1] + sigma[1] } else { T::zero() };
        let scale = tau[0] * tau[0] + tau[1].abs();
        (r - two_sigma2).abs() <= T::identity_rtol() * scale + T::identity_atol()
    });
    r
}

/// Outcome of the extrinsic-Ricci-flatness test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RicciFlatVerdict<T> {
    /// `Ric^ex` vanishes; `totally_geodesic` records whether all `k_i` do too.
    Flat {
        totally_geodesic: bool,
    },
    NotFlat {
        max_eigen: T,
    },
}

impl<T> RicciFlatVerdict<T> {
    pub fn is_flat(&self) -> bool {
        matches!(self, Self::Flat { .. })
    }
}

/// Flat iff `max_i |τ_1 k_i - k_i²| <= tol`. Total geodesy is checked
/// separately rather than inferred: rank-one spectra `(a, 0, …, 0)` and every
/// curve (`n = 1`) are extrinsic-Ricci-flat without being totally geodesic.
pub fn classify_extrinsic_ricci_flat<T: Scalar>(
    spec: &PrincipalCurvatureSpectrum<T>,
    tol: T,
) -> Result<RicciFlatVerdict<T>, CurvatureError> {
    if !(tol > T::zero()) {
        return Err(CurvatureError::NonPositiveTolerance);
    }
    let max_eigen = crate::scalar::sup_norm(&extrinsic_ricci_eigen(spec));
    Ok(if max_eigen <= tol {
        RicciFlatVerdict::Flat {
            totally_geodesic: spec.max_abs() <= tol,
        }
    } else {
        RicciFlatVerdict::NotFlat { max_eigen }
    })
}
