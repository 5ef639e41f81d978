//! Profile curves of hypersurfaces of revolution `f(x₀)² = Σ xᵢ²`.

mod cone;

pub use cone::{cone_flow_check, ConeFlowReport, ConeFlowSetup};

use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum RevolutionError {
    #[error("profile radius must be positive, got {value} at sample {index}")]
    NonPositiveRadius { index: usize, value: f64 },
    #[error("profile parameter must be strictly increasing at sample {0}")]
    NotIncreasing(usize),
    #[error("profile needs at least {needed} samples, got {got}")]
    TooShort { needed: usize, got: usize },
    #[error("sample arrays differ in length")]
    LengthMismatch,
    #[error("x1 = {0} is not in the domain x1 > 0 of the constant-curvature profile")]
    Singular(f64),
    #[error("invalid integration range: {0}")]
    InvalidRange(String),
    #[error("the cone apex x0 = t/2 = {apex} enters the domain starting at {start}")]
    ApexInDomain { apex: f64, start: f64 },
    #[error("cone angle must lie in (0, pi/2), got {0}")]
    InvalidAngle(f64),
    #[error(transparent)]
    Flow(#[from] crate::flow_engine::FlowError),
    #[error(transparent)]
    Functional(#[from] crate::sym_curvature::CurvatureError),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ProfileKind<T> {
    Cone { beta: T },
    ConstantLambda { c: T },
    User,
}

/// Sampled profile curve `param ↦ (axial, radius)` with its derivatives in
/// `param`. For a graph `x₁ = f(x₀)` the parameter is `x₀` itself.
#[derive(Debug, Clone, PartialEq)]
pub struct RevolutionProfile<T> {
    pub param: Vec<T>,
    pub axial: Vec<T>,
    pub radius: Vec<T>,
    pub d_axial: Vec<T>,
    pub d_radius: Vec<T>,
    pub kind: ProfileKind<T>,
}

impl<T: Scalar> RevolutionProfile<T> {
    pub fn new(
        param: Vec<T>,
        axial: Vec<T>,
        radius: Vec<T>,
        d_axial: Vec<T>,
        d_radius: Vec<T>,
        kind: ProfileKind<T>,
    ) -> Result<Self, RevolutionError> {
        let n = param.len();
        if [axial.len(), radius.len(), d_axial.len(), d_radius.len()]
            .iter()
            .any(|&l| l != n)
        {
            return Err(RevolutionError::LengthMismatch);
        }
        if n < 2 {
            return Err(RevolutionError::TooShort { needed: 2, got: n });
        }
        if let Some(i) = radius.iter().position(|r| !(r.is_finite() && *r > T::zero())) {
            return Err(RevolutionError::NonPositiveRadius {
                index: i,
                value: radius[i].to_f64_lossy(),
            });
        }
        if let Some(i) = (1..n).find(|&i| !(param[i] > param[i - 1])) {
            return Err(RevolutionError::NotIncreasing(i));
        }
        Ok(Self {
            param,
            axial,
            radius,
            d_axial,
            d_radius,
            kind,
        })
    }

    /// Graph `x₁ = f(x₀)` sampled at `x0`.
    pub fn graph(
        x0: Vec<T>,
        f: impl Fn(T) -> T,
        f_prime: impl Fn(T) -> T,
        kind: ProfileKind<T>,
    ) -> Result<Self, RevolutionError> {
        let radius = x0.iter().map(|&x| f(x)).collect();
        let d_radius = x0.iter().map(|&x| f_prime(x)).collect();
        let ones = vec![T::one(); x0.len()];
        Self::new(x0.clone(), x0, radius, ones, d_radius, kind)
    }

    /// Line `x₁ = tan β · x₀` sampled at `nodes` points of `[a, b]`.
    pub fn cone(beta: T, a: T, b: T, nodes: usize) -> Result<Self, RevolutionError> {
        if nodes < 2 {
            return Err(RevolutionError::TooShort { needed: 2, got: nodes });
        }
        let h = (b - a) / T::from_usize_lossy(nodes - 1);
        let x0 = (0..nodes).map(|i| a + T::from_usize_lossy(i) * h).collect();
        let slope = beta.tan();
        Self::graph(x0, |x| slope * x, |_| slope, ProfileKind::Cone { beta })
    }

    pub fn len(&self) -> usize {
        self.param.len()
    }

    pub fn is_empty(&self) -> bool {
        self.param.is_empty()
    }
}

/// Induced metric `g₀₀ dp² + g₁₁ Σ dxᵢ²` per sample.
pub fn profile_metric<T: Scalar>(p: &RevolutionProfile<T>) -> Vec<(T, T)> {
    (0..p.len())
        .map(|i| {
            (
                p.d_axial[i] * p.d_axial[i] + p.d_radius[i] * p.d_radius[i],
                p.radius[i] * p.radius[i],
            )
        })
        .collect()
}

/// Relabels samples by arclength, starting from `start`; derivatives are
/// renormalized so `g₀₀ = 1` at every sample.
///
/// Arclength uses the trapezoid rule on the sampled speed.
pub fn reparameterize_arclength<T: Scalar>(p: &RevolutionProfile<T>, start: T) -> RevolutionProfile<T> {
    let speed: Vec<T> = profile_metric(p).iter().map(|(g00, _)| g00.sqrt()).collect();
    let half = T::lit(0.5);
    let mut s = Vec::with_capacity(p.len());
    s.push(start);
    for i in 1..p.len() {
        let ds = half * (speed[i] + speed[i - 1]) * (p.param[i] - p.param[i - 1]);
        s.push(s[i - 1] + ds);
    }
    RevolutionProfile {
        param: s,
        axial: p.axial.clone(),
        radius: p.radius.clone(),
        d_axial: p.d_axial.iter().zip(&speed).map(|(&d, &v)| d / v).collect(),
        d_radius: p.d_radius.iter().zip(&speed).map(|(&d, &v)| d / v).collect(),
        kind: p.kind,
    }
}

/// Axial coordinate of the constant-curvature profile at radius `x1`:
/// `log((w - 2)/(w + 2)) + w + C` with `w = √(4 + x₁²)`.
///
/// `w - 2` is evaluated as `x₁²/(w + 2)` to avoid cancellation for small `x₁`.
pub fn closed_form_gamma<T: Scalar>(x1: T, c: T) -> Result<T, RevolutionError> {
    if !(x1 > T::zero()) || !x1.is_finite() {
        return Err(RevolutionError::Singular(x1.to_f64_lossy()));
    }
    let two = T::lit(2.0);
    let w = (T::lit(4.0) + x1 * x1).sqrt();
    let wp = w + two;
    Ok((x1 * x1 / (wp * wp)).ln() + w + c)
}

/// `dx₀/dx₁ = √(4 + x₁²)/x₁`.
fn gamma_slope<T: Scalar>(x1: T) -> T {
    (T::lit(4.0) + x1 * x1).sqrt() / x1
}

/// Integrates `dx₀/dx₁ = √(4 + x₁²)/x₁` from `x1_start` to `x1_end` with
/// classic RK4, seeded by the closed form so both share the constant `c`.
/// The last step is shortened to land on `x1_end`.
pub fn integrate_constant_lambda<T: Scalar>(
    x1_start: T,
    x1_end: T,
    step: T,
    c: T,
) -> Result<RevolutionProfile<T>, RevolutionError> {
    if !(x1_start > T::zero()) {
        return Err(RevolutionError::Singular(x1_start.to_f64_lossy()));
    }
    if !(x1_end > x1_start) || !x1_end.is_finite() {
        return Err(RevolutionError::InvalidRange(format!(
            "need x1_start < x1_end, got {x1_start} and {x1_end}"
        )));
    }
    if !(step > T::zero()) {
        return Err(RevolutionError::InvalidRange(format!(
            "step must be positive, got {step}"
        )));
    }
    let steps = ((x1_end - x1_start) / step)
        .ceil()
        .to_usize()
        .unwrap_or(usize::MAX)
        .max(1);
    if steps > 100_000_000 {
        return Err(RevolutionError::InvalidRange(format!("{steps} steps requested")));
    }
    let mut x1s = Vec::with_capacity(steps + 1);
    let mut x0s = Vec::with_capacity(steps + 1);
    let (mut y, mut x) = (x1_start, closed_form_gamma(x1_start, c)?);
    x1s.push(y);
    x0s.push(x);
    let half = T::lit(0.5);
    let sixth = T::one() / T::lit(6.0);
    for k in 1..=steps {
        let y_next = if k == steps {
            x1_end
        } else {
            x1_start + T::from_usize_lossy(k) * step
        };
        let h = y_next - y;
        let k1 = gamma_slope(y);
        let k2 = gamma_slope(y + half * h);
        let k3 = k2;
        let k4 = gamma_slope(y_next);
        x += h * sixth * (k1 + T::lit(2.0) * (k2 + k3) + k4);
        y = y_next;
        x1s.push(y);
        x0s.push(x);
    }
    // As a graph over x₀: f' = dx₁/dx₀.
    let d_radius = x1s.iter().map(|&y| T::one() / gamma_slope(y)).collect();
    let ones = vec![T::one(); x0s.len()];
    RevolutionProfile::new(x0s.clone(), x0s, x1s, ones, d_radius, ProfileKind::ConstantLambda { c })
}

/// `K(∂₀, ∂₁) = -1/(x₁² + 2)²` on the constant-curvature profile.
pub fn sectional_curvature_profile<T: Scalar>(x1: T) -> T {
    let d = x1 * x1 + T::lit(2.0);
    -T::one() / (d * d)
}

/// One row of the profile curvature table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvatureRow<T> {
    pub x0: T,
    pub x1: T,
    pub g00: T,
    pub g11: T,
    /// Normal curvature `sin φ / f` of the parallels, `tan φ = f'`.
    pub lambda: T,
    pub k_formula: T,
    /// `-f''/(f(1 + f'²)²)` from second-order differences of the samples.
    pub k_oracle: T,
}

/// Curvature table on the interior samples of a graph profile. `f'` and
/// `f''` come from three-point differences on the (possibly nonuniform)
/// axial samples, independent of the stored derivatives.
pub fn curvature_table<T: Scalar>(p: &RevolutionProfile<T>) -> Result<Vec<CurvatureRow<T>>, RevolutionError> {
    if p.len() < 3 {
        return Err(RevolutionError::TooShort {
            needed: 3,
            got: p.len(),
        });
    }
    if let Some(i) = (1..p.len()).find(|&i| !(p.axial[i] > p.axial[i - 1])) {
        return Err(RevolutionError::NotIncreasing(i));
    }
    let metric = profile_metric(p);
    let two = T::lit(2.0);
    Ok((1..p.len() - 1)
        .map(|i| {
            let (x, f) = (&p.axial, &p.radius);
            let hm = x[i] - x[i - 1];
            let hp = x[i + 1] - x[i];
            let d1 = (hm * hm * f[i + 1] - hp * hp * f[i - 1] + (hp * hp - hm * hm) * f[i]) / (hp * hm * (hp + hm));
            let d2 = two * (hm * f[i + 1] - (hp + hm) * f[i] + hp * f[i - 1]) / (hp * hm * (hp + hm));
            let q = T::one() + d1 * d1;
            let fp = p.d_radius[i] / p.d_axial[i];
            let sin_phi = fp / (T::one() + fp * fp).sqrt();
            CurvatureRow {
                x0: x[i],
                x1: f[i],
                g00: metric[i].0,
                g11: metric[i].1,
                lambda: sin_phi / f[i],
                k_formula: sectional_curvature_profile(f[i]),
                k_oracle: -d2 / (f[i] * q * q),
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cylinder_and_cone_metric() {
        let p = RevolutionProfile::graph(vec![0.0, 1.0, 2.0], |_| 1.5, |_| 0.0, ProfileKind::User).unwrap();
        assert!(profile_metric(&p).iter().all(|&(a, b)| a == 1.0 && b == 2.25));
        let beta = std::f64::consts::FRAC_PI_6;
        let p = RevolutionProfile::cone(beta, 1.0, 3.0, 5).unwrap();
        for (i, (g00, g11)) in profile_metric(&p).into_iter().enumerate() {
            let x = p.axial[i];
            assert!((g00 - 1.0 / beta.cos().powi(2)).abs() < 1e-14);
            assert!((g11 - (beta.tan() * x).powi(2)).abs() < 1e-14);
        }
    }

    #[test]
    fn cone_arclength() {
        let beta = 0.4f64;
        let p = RevolutionProfile::cone(beta, 1.0, 3.0, 9).unwrap();
        let q = reparameterize_arclength(&p, 1.0 / beta.cos());
        for i in 0..q.len() {
            assert!((q.param[i] - p.param[i] / beta.cos()).abs() < 1e-13);
            assert!((q.radius[i] - q.param[i] * beta.sin()).abs() < 1e-13);
        }
        assert!(profile_metric(&q).iter().all(|(g, _)| (g - 1.0).abs() < 1e-14));
        let r = reparameterize_arclength(&q, q.param[0]);
        assert!(r.param.iter().zip(&q.param).all(|(a, b)| (a - b).abs() < 1e-10));
    }

    #[test]
    fn closed_form_properties() {
        let g = |x: f64| closed_form_gamma(x, 0.0).unwrap();
        for x in [1.0, 2.0, 5.0] {
            let h = 1e-5;
            let fd = (g(x + h) - g(x - h)) / (2.0 * h);
            assert!((fd - (4.0 + x * x).sqrt() / x).abs() < 1e-6);
            assert!((closed_form_gamma(x, 1.0).unwrap() - g(x) - 1.0).abs() < 1e-14);
        }
        let w = (4.0f64 + 0.09).sqrt();
        let printed = ((w - 2.0) / (w + 2.0)).ln() + w;
        assert!((g(0.3) - printed).abs() < 1e-13);
        assert!(g(1e-6) < -25.0);
        assert!(closed_form_gamma(0.0, 0.0).is_err());
    }

    #[test]
    fn ode_matches_closed_form() {
        let p = integrate_constant_lambda(0.5f64, 10.0, 1e-3, 0.25).unwrap();
        let err = p
            .radius
            .iter()
            .zip(&p.axial)
            .map(|(&y, &x)| (x - closed_form_gamma(y, 0.25).unwrap()).abs())
            .fold(0.0, f64::max);
        assert!(err < 1e-10, "{err}");
        assert_eq!(*p.radius.last().unwrap(), 10.0);
    }

    #[test]
    fn curvature_oracle_agrees() {
        let p = integrate_constant_lambda(0.5f64, 10.0, 1e-3, 0.0).unwrap();
        let rows = curvature_table(&p).unwrap();
        let worst = rows
            .iter()
            .map(|r| (r.k_formula - r.k_oracle).abs())
            .fold(0.0, f64::max);
        assert!(worst < 1e-6, "{worst}");
        for r in &rows {
            assert!(r.k_formula < 0.0);
            assert!((r.lambda - 1.0 / (2.0 * (r.x1 * r.x1 + 2.0)).sqrt()).abs() < 1e-12);
        }
        assert_eq!(sectional_curvature_profile(0.0f64), -0.25);
    }

    #[test]
    fn asymptotic_slope() {
        let p = integrate_constant_lambda(90.0f64, 100.0, 1e-2, 0.0).unwrap();
        assert!((p.d_radius.last().unwrap() - 1.0).abs() < 1e-3);
    }

    #[test]
    fn rejects_bad_profiles() {
        assert!(matches!(
            RevolutionProfile::graph(vec![0.0, 1.0], |x| x, |_| 1.0, ProfileKind::User),
            Err(RevolutionError::NonPositiveRadius { index: 0, .. })
        ));
        assert!(matches!(
            RevolutionProfile::graph(vec![1.0, 1.0], |_| 1.0, |_| 0.0, ProfileKind::User),
            Err(RevolutionError::NotIncreasing(1))
        ));
        assert!(integrate_constant_lambda(0.0, 1.0, 0.1, 0.0).is_err());
    }
}
