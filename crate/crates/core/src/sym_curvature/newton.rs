//! Power sums, elementary symmetric functions and the Newton recurrences
//! linking them.

use super::{CurvatureError, PrincipalCurvatureSpectrum};
use crate::scalar::Scalar;

/// `τ_j = Σ_i k_i^j` for `j = 1..=m`. The zeroth power sum is the leaf
/// dimension `n` and is never returned.
pub fn power_sums<T: Scalar>(spec: &PrincipalCurvatureSpectrum<T>, m: usize) -> Result<Vec<T>, CurvatureError> {
    if m == 0 {
        return Err(CurvatureError::InvalidOrder { m });
    }
    let mut powers = spec.k.clone();
    let mut tau = Vec::with_capacity(m);
    for j in 1..=m {
        if j > 1 {
            for (p, &k) in powers.iter_mut().zip(&spec.k) {
                *p *= k;
            }
        }
        tau.push(powers.iter().copied().sum());
    }
    Ok(tau)
}

/// Solves the first Newton recurrence for `σ_1..σ_n`:
/// `j σ_j = Σ_{i=1}^{j} (-1)^{i-1} σ_{j-i} τ_i`, with `σ_0 = 1`.
pub fn elementary_from_power<T: Scalar>(tau: &[T], n: usize) -> Result<Vec<T>, CurvatureError> {
    if n == 0 {
        return Err(CurvatureError::EmptySpectrum);
    }
    if tau.len() < n {
        return Err(CurvatureError::TooShort {
            needed: n,
            got: tau.len(),
        });
    }
    let mut sigma = Vec::with_capacity(n + 1);
    sigma.push(T::one());
    for j in 1..=n {
        let mut acc = T::zero();
        for i in 1..=j {
            let term = sigma[j - i] * tau[i - 1];
            if i % 2 == 1 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        sigma.push(acc / T::from_usize_lossy(j));
    }
    sigma.remove(0);
    Ok(sigma)
}

/// Residuals of the first Newton recurrence for `j = 1..=n`, each paired with
/// the magnitude scale of its terms.
pub fn newton_residuals<T: Scalar>(tau: &[T], sigma: &[T]) -> Vec<(T, T)> {
    let n = sigma.len();
    let sig = |i: usize| if i == 0 { T::one() } else { sigma[i - 1] };
    (1..=n.min(tau.len()))
        .map(|j| {
            let mut res = T::zero();
            let mut scale = T::zero();
            for i in 0..j {
                let term = tau[j - i - 1] * sig(i);
                scale += term.abs();
                if i % 2 == 0 {
                    res += term;
                } else {
                    res -= term;
                }
            }
            let last = T::from_usize_lossy(j) * sig(j);
            scale += last.abs();
            if j % 2 == 0 {
                res += last;
            } else {
                res -= last;
            }
            (res, scale)
        })
        .collect()
}

/// Extends `τ_1..τ_n` to `τ_{n+1}..τ_m` with the second Newton recurrence
/// `τ_j = Σ_{i=1}^{n} (-1)^{i-1} τ_{j-i} σ_i`.
///
/// The inputs are checked against the first recurrence before extending.
pub fn extend_power<T: Scalar>(tau: &[T], sigma: &[T], m: usize) -> Result<Vec<T>, CurvatureError> {
    let n = sigma.len();
    if n == 0 {
        return Err(CurvatureError::EmptySpectrum);
    }
    if tau.len() < n {
        return Err(CurvatureError::TooShort {
            needed: n,
            got: tau.len(),
        });
    }
    if m <= n {
        return Err(CurvatureError::InvalidOrder { m });
    }
    for (j, (res, scale)) in newton_residuals(&tau[..n], sigma).into_iter().enumerate() {
        let bound = T::identity_rtol() * scale + T::identity_atol();
        if res.abs() > bound || !res.is_finite() {
            return Err(CurvatureError::Inconsistent {
                index: j + 1,
                residual: res.to_f64_lossy(),
            });
        }
    }
    Ok(extend_unchecked(&tau[..n], sigma, m))
}

/// Recurrence without the consistency check; used on hot paths where the
/// σ's were just derived from the τ's.
pub(crate) fn extend_unchecked<T: Scalar>(tau: &[T], sigma: &[T], m: usize) -> Vec<T> {
    let n = sigma.len();
    let mut all: Vec<T> = tau[..n].to_vec();
    // j > n >= i, so τ_{j-i} has index >= 1 and τ_0 is never touched here.
    for j in (n + 1)..=m {
        let mut acc = T::zero();
        for i in 1..=n {
            let term = all[j - i - 1] * sigma[i - 1];
            if i % 2 == 1 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        all.push(acc);
    }
    all.split_off(n)
}

/// Power sums `τ_1..τ_m` of any length from `τ_1..τ_n`: the first `n` are
/// copied, the rest come from the recurrence.
pub fn power_sums_closure<T: Scalar>(tau: &[T], n: usize, m: usize) -> Vec<T> {
    let mut out: Vec<T> = tau[..n.min(m)].to_vec();
    if m > n {
        let sigma = elementary_from_power(&tau[..n], n).expect("length checked");
        out.extend(extend_unchecked(&tau[..n], &sigma, m));
    }
    out
}
