use super::SolitonError;
use crate::scalar::Scalar;

/// Integer test on `n₂ - n₁`.
const INTEGER_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RootStructure<T> {
    /// Negative discriminant.
    None,
    Single(T),
    /// `(k̄₁, k̄₂)` with `k̄₁ > k̄₂`.
    Pair(T, T),
}

/// `n₁` curvatures equal to `k̄₁` and `n₂` equal to `k̄₂`; for a single root
/// `k̄₁ = k̄₂` and `n₂ = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdmissibleSpectrum<T> {
    pub k1: T,
    pub n1: usize,
    pub k2: T,
    pub n2: usize,
}

impl<T: Scalar> AdmissibleSpectrum<T> {
    pub fn is_umbilical(&self) -> bool {
        self.n1 == 0 || self.n2 == 0 || self.k1 == self.k2
    }

    pub fn curvatures(&self) -> Vec<T> {
        let mut k = vec![self.k1; self.n1];
        k.extend(std::iter::repeat_n(self.k2, self.n2));
        k
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumClassification<T> {
    pub n: usize,
    pub tau1: T,
    pub r: T,
    /// `τ₁² + 4r`.
    pub discriminant: T,
    pub roots: RootStructure<T>,
    /// `(n - 2) τ₁ / √(τ₁² + 4r)`, defined for two distinct roots.
    pub multiplicity_gap: Option<T>,
    pub spectra: Vec<AdmissibleSpectrum<T>>,
    /// Some spectrum is admissible, so the leaves can have constant
    /// principal curvatures.
    pub cpc: bool,
}

impl<T: Scalar> SpectrumClassification<T> {
    /// Multiplicities of the first spectrum with two distinct curvatures.
    pub fn multiplicities(&self) -> Option<(usize, usize)> {
        self.spectra.iter().find(|s| !s.is_umbilical()).map(|s| (s.n1, s.n2))
    }
}

/// Spectra with `k(k - τ₁) = r` for every principal curvature and `Σk = τ₁`.
pub fn classify_ricci_soliton<T: Scalar>(n: usize, tau1: T, r: T) -> Result<SpectrumClassification<T>, SolitonError> {
    if n < 3 {
        return Err(SolitonError::UnsupportedDimension {
            n,
            reason: "the classification needs n >= 3",
        });
    }
    let nf = T::from_usize_lossy(n);
    let two = T::lit(2.0);
    let disc = tau1 * tau1 + T::lit(4.0) * r;
    let disc_scale = tau1 * tau1 + T::lit(4.0) * r.abs();
    let disc_zero = disc.abs() <= T::lit(T::IDENTITY_ATOL) + T::lit(T::IDENTITY_RTOL) * disc_scale;

    let mut out = SpectrumClassification {
        n,
        tau1,
        r,
        discriminant: disc,
        roots: RootStructure::None,
        multiplicity_gap: None,
        spectra: Vec::new(),
        cpc: false,
    };
    if disc_zero {
        let k = tau1 / two;
        out.roots = RootStructure::Single(k);
        if (nf * k - tau1).abs() <= T::lit(T::IDENTITY_ATOL) + T::lit(T::IDENTITY_RTOL) * tau1.abs() {
            out.spectra.push(AdmissibleSpectrum {
                k1: k,
                n1: n,
                k2: k,
                n2: 0,
            });
        }
    } else if disc > T::zero() {
        let sq = disc.sqrt();
        let (k1, k2) = ((tau1 + sq) / two, (tau1 - sq) / two);
        out.roots = RootStructure::Pair(k1, k2);
        let d = (nf - two) * tau1 / sq;
        out.multiplicity_gap = Some(d);
        let m = d.round();
        if (d - m).abs() <= T::lit(INTEGER_TOL) {
            if let Some(m) = m.to_i64() {
                let n2 = n as i64 + m;
                if n2 % 2 == 0 && (0..=2 * n as i64).contains(&n2) {
                    let n2 = (n2 / 2) as usize;
                    out.spectra.push(AdmissibleSpectrum { k1, n1: n - n2, k2, n2 });
                }
            }
        }
        // Umbilical option k = τ₁/n, tested directly on k²(1 - n) = r.
        let k = tau1 / nf;
        let lhs = k * k * (T::one() - nf);
        if (lhs - r).abs() <= T::lit(T::IDENTITY_ATOL) + T::lit(T::IDENTITY_RTOL) * r.abs() {
            let s = if (k - k1).abs() <= (k - k2).abs() {
                AdmissibleSpectrum { k1, n1: n, k2, n2: 0 }
            } else {
                AdmissibleSpectrum { k1, n1: 0, k2, n2: n }
            };
            if !out.spectra.iter().any(|t| t.n1 == s.n1 && t.n2 == s.n2) {
                out.spectra.push(s);
            }
        }
    }
    out.cpc = !out.spectra.is_empty();
    Ok(out)
}
