//! Flow functionals `h(b) = Σ_j f_j(τ) b̂_j` and their umbilical profile ψ(λ).

use std::fmt;
use std::sync::Arc;

use super::CurvatureError;
use crate::scalar::Scalar;

/// One coefficient function `f_j(τ_1..τ_n)`.
pub type ComponentFn<T> = Arc<dyn Fn(&[T]) -> T + Send + Sync>;

#[derive(Clone)]
pub struct FlowComponent<T> {
    pub tag: String,
    f: Option<ComponentFn<T>>,
}

impl<T: Scalar> FlowComponent<T> {
    fn zero(j: usize) -> Self {
        Self {
            tag: format!("f{j} = 0"),
            f: None,
        }
    }

    pub fn eval(&self, tau: &[T]) -> T {
        self.f.as_ref().map_or_else(T::zero, |f| f(tau))
    }

    pub fn is_structurally_zero(&self) -> bool {
        self.f.is_none()
    }
}

/// Coefficients `f_0..f_{n-1}` of an extrinsic geometric flow on an
/// `n`-dimensional leaf.
#[derive(Clone)]
pub struct FlowFunctional<T> {
    name: String,
    n: usize,
    components: Vec<FlowComponent<T>>,
    /// Closed-form ψ(λ) = Σ c_j λ^j, when the constructor knows it.
    umbilical: Option<Vec<T>>,
}

impl<T> fmt::Debug for FlowFunctional<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FlowFunctional")
            .field("name", &self.name)
            .field("n", &self.n)
            .field(
                "components",
                &self.components.iter().map(|c| c.tag.as_str()).collect::<Vec<_>>(),
            )
            .finish()
    }
}

impl<T: Scalar> FlowFunctional<T> {
    /// Builds a functional from the nonzero components `(j, tag, f_j)`.
    /// Components not listed are identically zero.
    pub fn new(
        name: impl Into<String>,
        n: usize,
        nonzero: Vec<(usize, String, ComponentFn<T>)>,
    ) -> Result<Self, CurvatureError> {
        if n == 0 {
            return Err(CurvatureError::EmptySpectrum);
        }
        let mut components: Vec<FlowComponent<T>> = (0..n).map(FlowComponent::zero).collect();
        for (j, tag, f) in nonzero {
            if j >= n {
                return Err(CurvatureError::InvalidFunctional(format!(
                    "component index {j} out of range 0..{n}"
                )));
            }
            components[j] = FlowComponent { tag, f: Some(f) };
        }
        let out = Self {
            name: name.into(),
            n,
            components,
            umbilical: None,
        };
        if !out.is_nontrivial() {
            return Err(CurvatureError::InvalidFunctional(
                "every f_j vanishes on the sample set".into(),
            ));
        }
        Ok(out)
    }

    /// Samples each component on a fixed set of τ-vectors coming from
    /// small spectra; a functional is trivial if all samples vanish.
    fn is_nontrivial(&self) -> bool {
        let ks = [-1.3, -0.4, 0.0, 0.7, 2.1];
        let mut tau = vec![T::zero(); self.n];
        for (a, &base) in ks.iter().enumerate() {
            for (i, t) in tau.iter_mut().enumerate() {
                let ki: f64 = base + 0.37 * (i as f64) - 0.11 * (a as f64);
                *t = T::lit((0..self.n).map(|m| (ki + 0.05 * m as f64).powi(i as i32 + 1)).sum());
            }
            if self.components.iter().any(|c| c.eval(&tau) != T::zero()) {
                return true;
            }
        }
        false
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn components(&self) -> &[FlowComponent<T>] {
        &self.components
    }

    /// Attaches the closed-form umbilical profile ψ(λ) = Σ c_j λ^j. It must
    /// agree with the components; the catalog constructors are tested for it.
    pub fn with_umbilical_polynomial(mut self, coeffs: Vec<T>) -> Self {
        self.umbilical = Some(coeffs);
        self
    }

    /// Coefficients `c_0, c_1, …` of ψ(λ), if known in closed form.
    pub fn umbilical_polynomial(&self) -> Option<&[T]> {
        self.umbilical.as_deref()
    }

    pub fn tags(&self) -> Vec<String> {
        self.components.iter().map(|c| c.tag.clone()).collect()
    }

    /// `f_j(τ)` for every `j`.
    pub fn eval_all(&self, tau: &[T]) -> Vec<T> {
        self.components.iter().map(|c| c.eval(tau)).collect()
    }

    /// `h(b) = b̂_j`, i.e. `f_i = δ_ij`. Requires `j < n`.
    pub fn hat_b(n: usize, j: usize) -> Result<Self, CurvatureError> {
        let mut poly = vec![T::zero(); j + 1];
        poly[j] = T::one();
        Ok(Self::new(
            format!("b{j}"),
            n,
            vec![(j, format!("f{j} = 1"), Arc::new(|_: &[T]| T::one()))],
        )?
        .with_umbilical_polynomial(poly))
    }

    /// `h(b) = b̂_1`, so ψ(λ) = λ. For curves (`n = 1`) `b̂_1 = τ_1 ĝ`, which
    /// is expressed through `f_0 = τ_1`.
    pub fn b1(n: usize) -> Result<Self, CurvatureError> {
        if n == 1 {
            Ok(
                Self::new("b1", 1, vec![(0, "f0 = tau1".into(), Arc::new(|t: &[T]| t[0]))])?
                    .with_umbilical_polynomial(vec![T::zero(), T::one()]),
            )
        } else {
            Self::hat_b(n, 1)
        }
    }

    /// `f_0 = τ_1 - c`: ψ(λ) = nλ - c.
    pub fn tau1_minus_c(n: usize, c: T) -> Result<Self, CurvatureError> {
        Ok(Self::new(
            format!("tau1_minus_c({c})"),
            n,
            vec![(0, format!("f0 = tau1 - {c}"), Arc::new(move |t: &[T]| t[0] - c))],
        )?
        .with_umbilical_polynomial(vec![-c, T::from_usize_lossy(n)]))
    }

    /// `h(b) = -2 Ric^ex = -2τ_1 b̂_1 + 2 b̂_2`.
    ///
    /// For `n = 2` the `b̂_2` term is folded into `f_0` through
    /// `A² = τ_1 A - σ_2 Id`, leaving `f_0 = -2σ_2 = τ_2 - τ_1²`.
    /// Curves carry no extrinsic Ricci curvature, so `n = 1` is rejected.
    pub fn ext_ricci(n: usize) -> Result<Self, CurvatureError> {
        let poly = vec![
            T::zero(),
            T::zero(),
            -T::lit(2.0) * T::from_usize_lossy(n.saturating_sub(1)),
        ];
        let f = match n {
            0 | 1 => Err(CurvatureError::InvalidFunctional(
                "extrinsic Ricci functional needs n >= 2".into(),
            )),
            2 => Self::new(
                "ext_ricci",
                2,
                vec![(0, "f0 = tau2 - tau1^2".into(), Arc::new(|t: &[T]| t[1] - t[0] * t[0]))],
            ),
            _ => Self::new(
                "ext_ricci",
                n,
                vec![
                    (1, "f1 = -2*tau1".into(), Arc::new(|t: &[T]| -(t[0] + t[0]))),
                    (2, "f2 = 2".into(), Arc::new(|_: &[T]| T::lit(2.0))),
                ],
            ),
        }?;
        Ok(f.with_umbilical_polynomial(poly))
    }

    /// `f_0 = (τ_1/n)²`: ψ(λ) = λ².
    pub fn umbilical_square(n: usize) -> Result<Self, CurvatureError> {
        let nf = T::from_usize_lossy(n);
        Ok(Self::new(
            "umbilical_square",
            n,
            vec![(
                0,
                format!("f0 = (tau1/{n})^2"),
                Arc::new(move |t: &[T]| (t[0] / nf) * (t[0] / nf)),
            )],
        )?
        .with_umbilical_polynomial(vec![T::zero(), T::zero(), T::one()]))
    }

    /// `f_0 = a τ_1/n + b`: ψ(λ) = aλ + b.
    pub fn affine(n: usize, a: T, b: T) -> Result<Self, CurvatureError> {
        let nf = T::from_usize_lossy(n);
        Ok(Self::new(
            format!("affine({a},{b})"),
            n,
            vec![(
                0,
                format!("f0 = {a}*tau1/{n} + {b}"),
                Arc::new(move |t: &[T]| a * (t[0] / nf) + b),
            )],
        )?
        .with_umbilical_polynomial(vec![b, a]))
    }
}

/// ψ(λ) = Σ_j f_j(nλ, nλ², …, nλⁿ) λ^j.
pub fn psi_of_lambda<T: Scalar>(functional: &FlowFunctional<T>, lambda: T) -> T {
    let n = functional.n();
    let nf = T::from_usize_lossy(n);
    let mut tau = Vec::with_capacity(n);
    let mut p = T::one();
    for _ in 0..n {
        p *= lambda;
        tau.push(nf * p);
    }
    let mut acc = T::zero();
    let mut lam_j = T::one();
    for c in functional.components() {
        if !c.is_structurally_zero() {
            acc += c.eval(&tau) * lam_j;
        }
        lam_j *= lambda;
    }
    acc
}

/// Central-difference ψ'(λ).
pub fn psi_prime<T: Scalar>(functional: &FlowFunctional<T>, lambda: T) -> T {
    crate::scalar::central_derivative(|x| psi_of_lambda(functional, x), lambda)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_polynomials_match_components() {
        let mut catalog = vec![FlowFunctional::<f64>::affine(3, -0.7, 0.2).unwrap()];
        for n in 1..=5 {
            catalog.push(FlowFunctional::b1(n).unwrap());
            catalog.push(FlowFunctional::tau1_minus_c(n, 0.3).unwrap());
            catalog.push(FlowFunctional::umbilical_square(n).unwrap());
            catalog.push(FlowFunctional::affine(n, -2.0, 0.75).unwrap());
            if n >= 2 {
                catalog.push(FlowFunctional::ext_ricci(n).unwrap());
                catalog.push(FlowFunctional::hat_b(n, n - 1).unwrap());
            }
        }
        for f in &catalog {
            let poly = f.umbilical_polynomial().expect("catalog entries carry psi");
            for lam in [-1.7, -0.3, 0.0, 0.45, 2.2] {
                let direct: f64 = poly.iter().rev().fold(0.0, |acc, &c| acc * lam + c);
                let psi = psi_of_lambda(f, lam);
                assert!((direct - psi).abs() <= 1e-12 * (1.0 + psi.abs()), "{f:?} at {lam}");
            }
        }
    }

    #[test]
    fn psi_examples() {
        for n in 1..=5 {
            let b1 = FlowFunctional::<f64>::b1(n).unwrap();
            assert_eq!(psi_of_lambda(&b1, 0.75), 0.75);
            let f = FlowFunctional::<f64>::tau1_minus_c(n, 0.5).unwrap();
            assert!((psi_of_lambda(&f, 1.25) - (n as f64 * 1.25 - 0.5)).abs() < 1e-14);
            assert_eq!(psi_of_lambda(&f, 0.0), -0.5);
        }
    }

    #[test]
    fn ext_ricci_umbilical_profile() {
        for n in 2..=6 {
            let f = FlowFunctional::<f64>::ext_ricci(n).unwrap();
            let lam = 0.8;
            let want = -2.0 * (n as f64 - 1.0) * lam * lam;
            assert!((psi_of_lambda(&f, lam) - want).abs() < 1e-12, "n={n}");
        }
        assert!(FlowFunctional::<f64>::ext_ricci(1).is_err());
    }

    #[test]
    fn catalog_profiles() {
        let sq = FlowFunctional::<f64>::umbilical_square(3).unwrap();
        assert!((psi_of_lambda(&sq, -1.5) - 2.25).abs() < 1e-14);
        let af = FlowFunctional::<f64>::affine(1, -2.0, 1.0).unwrap();
        assert_eq!(psi_of_lambda(&af, 0.25), 0.5);
        assert_eq!(psi_prime(&af, 0.0), -2.0);
    }

    #[test]
    fn rejects_trivial_and_out_of_range() {
        let zero: ComponentFn<f64> = Arc::new(|_| 0.0);
        assert!(FlowFunctional::new("z", 2, vec![(0, "0".into(), zero.clone())]).is_err());
        assert!(FlowFunctional::new("z", 2, vec![(2, "x".into(), zero)]).is_err());
        assert!(FlowFunctional::<f64>::hat_b(2, 2).is_err());
    }
}
