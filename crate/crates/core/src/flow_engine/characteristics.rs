//! Method-of-characteristics reference solution for the umbilical law.
//!
//! λ is constant along `s(t) = s_0 + ½ψ'(λ_0(s_0)) t` while those lines do
//! not cross. For ψ(λ) = λ this reduces to the translation `λ_0(s - t/2)`.

use super::{Boundary, FlowError, Grid};
use crate::scalar::Scalar;
use crate::sym_curvature::{psi_prime, FlowFunctional};

/// Samples the characteristic solution at time `t` on every grid node.
///
/// `lambda0` is evaluated directly, so the result is exact up to the
/// root solve. On periodic grids feet are wrapped into one period; on
/// intervals `lambda0` must be defined wherever the feet land.
pub fn characteristics_oracle<T: Scalar>(
    lambda0: &dyn Fn(T) -> T,
    grid: &Grid<T>,
    t: T,
    functional: &FlowFunctional<T>,
) -> Result<Vec<T>, FlowError> {
    let a = grid.origin();
    let len = grid.length();
    let wrap = |s: T| match grid.boundary() {
        Boundary::Periodic => {
            let r = (s - a) % len;
            a + if r < T::zero() { r + len } else { r }
        }
        Boundary::Transmissive => s,
    };
    let eval = |s: T| lambda0(wrap(s));
    let speed = |s0: T| T::lit(0.5) * psi_prime(functional, eval(s0));
    let nodes = grid.coordinates();
    if t == T::zero() {
        return Ok(nodes.iter().map(|&s| eval(s)).collect());
    }

    let h = grid.spacing() * T::lit(0.25);
    let sample = |lo: T, hi: T| -> Vec<(T, T)> {
        let count = ((hi - lo) / h).ceil().to_usize().unwrap_or(0).max(1);
        (0..=count)
            .map(|i| {
                let s0 = lo + (hi - lo) * T::from_usize_lossy(i) / T::from_usize_lossy(count);
                (s0, speed(s0))
            })
            .collect()
    };
    let range = |samples: &[(T, T)]| {
        samples
            .iter()
            .fold((T::infinity(), T::neg_infinity()), |(lo, hi), &(_, c)| {
                (lo.min(c), hi.max(c))
            })
    };

    let (mut c_min, mut c_max) = range(&sample(a, a + len));
    let mut samples = Vec::new();
    for _ in 0..2 {
        let lo = a - (c_max * t).max(T::zero()) - grid.spacing();
        let hi = a + len - (c_min * t).min(T::zero()) + grid.spacing();
        samples = sample(lo, hi);
        let (lo_c, hi_c) = range(&samples);
        c_min = c_min.min(lo_c);
        c_max = c_max.max(hi_c);
    }
    if samples.windows(2).any(|w| !(w[1].0 + w[1].1 * t > w[0].0 + w[0].1 * t)) {
        return Err(FlowError::ShockFormed { t: t.to_f64_lossy() });
    }

    let eps = T::epsilon();
    Ok(nodes
        .iter()
        .map(|&s| {
            if c_max == c_min {
                return eval(s - c_min * t);
            }
            let (mut lo, mut hi) = (s - c_max * t, s - c_min * t);
            for _ in 0..200 {
                let mid = (lo + hi) * T::lit(0.5);
                if mid + speed(mid) * t < s {
                    lo = mid;
                } else {
                    hi = mid;
                }
                if hi - lo <= T::lit(4.0) * eps * s.abs().max(T::one()) {
                    break;
                }
            }
            eval((lo + hi) * T::lit(0.5))
        })
        .collect())
}
