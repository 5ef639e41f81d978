//! Floating point abstraction shared by every numerical kernel.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};

/// Real scalar the kernels are generic over: `f32` or `f64`.
///
/// Identity tolerances live here because they depend on the precision:
/// an assertion that is tight in double precision is meaningless in single.
pub trait Scalar:
    Float + FloatConst + FromPrimitive + ToPrimitive + NumAssign + Sum + Debug + Display + Default + Send + Sync + 'static
{
    /// Relative tolerance for algebraic identities.
    const IDENTITY_RTOL: f64;
    /// Absolute floor paired with [`Scalar::IDENTITY_RTOL`].
    const IDENTITY_ATOL: f64;

    /// Converts an `f64` literal. Never fails for the supported types.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    #[inline]
    fn from_usize_lossy(n: usize) -> Self {
        Self::from_usize(n).expect("usize representable")
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    fn identity_rtol() -> Self {
        Self::lit(Self::IDENTITY_RTOL)
    }

    fn identity_atol() -> Self {
        Self::lit(Self::IDENTITY_ATOL)
    }

    /// `|a - b| <= max(rtol * max(|a|, |b|), atol)` with the identity tolerances.
    fn approx_eq(self, other: Self) -> bool {
        let scale = self.abs().max(other.abs());
        (self - other).abs() <= (Self::identity_rtol() * scale).max(Self::identity_atol())
    }
}

impl Scalar for f64 {
    const IDENTITY_RTOL: f64 = 1e-10;
    const IDENTITY_ATOL: f64 = 1e-12;
}

impl Scalar for f32 {
    const IDENTITY_RTOL: f64 = 1e-4;
    const IDENTITY_ATOL: f64 = 1e-5;
}

/// Power of two closest to `1e-6`; stepping by it keeps `x ± h` free of rounding
/// for dyadic `x`.
pub const FD_STEP: f64 = 9.5367431640625e-7; // 2^-20

/// Central difference step `FD_STEP * max(1, |x|)`.
pub fn fd_step<T: Scalar>(x: T) -> T {
    T::lit(FD_STEP) * x.abs().max(T::one())
}

/// Central-difference derivative of `f` at `x`.
pub fn central_derivative<T: Scalar>(f: impl Fn(T) -> T, x: T) -> T {
    let h = fd_step(x);
    (f(x + h) - f(x - h)) / (h + h)
}

/// Sup norm of a slice; zero for an empty slice.
pub fn sup_norm<T: Scalar>(values: &[T]) -> T {
    values.iter().fold(T::zero(), |m, v| m.max(v.abs()))
}
