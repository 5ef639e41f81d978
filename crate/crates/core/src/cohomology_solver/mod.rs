//! Fourier solver for the cohomological equation `X(f) = h - mean(h)` of a
//! linear flow `X = v·∂` on the torus `T^d`, `d ∈ {2, 3}`.

mod lattice;

pub use lattice::{diophantine_margin, lattice_points, DiophantineMargin};

use std::collections::BTreeMap;

use num_complex::Complex;

use crate::scalar::Scalar;

/// Lattice vector in `ℤ^d`.
pub type Mode = Vec<i64>;

/// Default refusal threshold on `|⟨u, v⟩|`.
pub const RESONANCE_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CohomologyError {
    #[error("torus dimension must be 2 or 3, got {0}")]
    InvalidDimension(usize),
    #[error("truncation radius must be at least 1")]
    InvalidRadius,
    #[error("direction vector must be finite and nonzero")]
    InvalidDirection,
    #[error("mode {u:?} lies outside the truncation radius {k}")]
    OutOfRange { u: Mode, k: usize },
    #[error("mode {u:?} has dimension {got}, expected {expected}")]
    ModeDimension { u: Mode, got: usize, expected: usize },
    #[error("coefficients are not conjugate symmetric at {u:?} (defect {defect:e})")]
    NotConjugateSymmetric { u: Mode, defect: f64 },
    #[error("grid sample: {0}")]
    GridShape(String),
    #[error("resonant mode {u:?}: |<u,v>| = {divisor:e} is below the floor {floor:e} while h carries energy there")]
    Resonance { u: Mode, divisor: f64, floor: f64 },
    #[error("Diophantine exponent must be positive")]
    InvalidExponent,
}

/// Finite Fourier table `{u : |u|∞ ≤ K} → ĉ_u`; absent modes are zero.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierTable<T> {
    dim: usize,
    radius: usize,
    coeffs: BTreeMap<Mode, Complex<T>>,
}

impl<T: Scalar> FourierTable<T> {
    pub fn new(dim: usize, radius: usize) -> Result<Self, CohomologyError> {
        if !(2..=3).contains(&dim) {
            return Err(CohomologyError::InvalidDimension(dim));
        }
        if radius == 0 {
            return Err(CohomologyError::InvalidRadius);
        }
        Ok(Self {
            dim,
            radius,
            coeffs: BTreeMap::new(),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    fn check(&self, u: &[i64]) -> Result<(), CohomologyError> {
        if u.len() != self.dim {
            return Err(CohomologyError::ModeDimension {
                u: u.to_vec(),
                got: u.len(),
                expected: self.dim,
            });
        }
        if u.iter().any(|c| c.unsigned_abs() as usize > self.radius) {
            return Err(CohomologyError::OutOfRange {
                u: u.to_vec(),
                k: self.radius,
            });
        }
        Ok(())
    }

    /// Adds `c` to `ĉ_u`.
    pub fn add(&mut self, u: &[i64], c: Complex<T>) -> Result<(), CohomologyError> {
        self.check(u)?;
        *self.coeffs.entry(u.to_vec()).or_default() += c;
        Ok(())
    }

    /// Adds `a cos(2π⟨u,x⟩) + b sin(2π⟨u,x⟩)`.
    pub fn add_real_mode(&mut self, u: &[i64], a: T, b: T) -> Result<(), CohomologyError> {
        let half = T::lit(0.5);
        if u.iter().all(|&c| c == 0) {
            return self.add(u, Complex::new(a, T::zero()));
        }
        let neg: Mode = u.iter().map(|c| -c).collect();
        self.add(u, Complex::new(a * half, -b * half))?;
        self.add(&neg, Complex::new(a * half, b * half))
    }

    pub fn get(&self, u: &[i64]) -> Complex<T> {
        self.coeffs.get(u).copied().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Mode, &Complex<T>)> {
        self.coeffs.iter()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn max_abs(&self) -> T {
        self.coeffs.values().fold(T::zero(), |m, c| m.max(c.norm()))
    }

    /// `max |ĉ_{-u} - conj(ĉ_u)|` with the mode attaining it.
    pub fn conjugate_symmetry_defect(&self) -> (T, Option<Mode>) {
        let mut worst = (T::zero(), None);
        for (u, c) in &self.coeffs {
            let neg: Mode = u.iter().map(|x| -x).collect();
            let d = (self.get(&neg) - c.conj()).norm();
            if d > worst.0 {
                worst = (d, Some(u.clone()));
            }
        }
        worst
    }

    /// Evaluates `Σ ĉ_u e^{2πi⟨u,x⟩}`.
    pub fn eval(&self, x: &[T]) -> Complex<T> {
        self.coeffs
            .iter()
            .map(|(u, c)| {
                let phase = T::TAU() * dot_int(u, x);
                c * Complex::new(phase.cos(), phase.sin())
            })
            .fold(Complex::default(), |a, b| a + b)
    }
}

fn dot_int<T: Scalar>(u: &[i64], v: &[T]) -> T {
    u.iter().zip(v).map(|(&a, &b)| T::lit(a as f64) * b).sum()
}

/// Uniform real sample of a function on `T^d`, `m` nodes per axis at
/// `x = j/m`, row-major with the first axis slowest.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSample<T> {
    pub dim: usize,
    pub m: usize,
    pub values: Vec<T>,
}

impl<T: Scalar> GridSample<T> {
    pub fn new(dim: usize, m: usize, values: Vec<T>) -> Result<Self, CohomologyError> {
        if !(2..=3).contains(&dim) {
            return Err(CohomologyError::InvalidDimension(dim));
        }
        if m == 0 || values.len() != m.pow(dim as u32) {
            return Err(CohomologyError::GridShape(format!(
                "{} values do not form a {m}^{dim} grid",
                values.len()
            )));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(CohomologyError::GridShape(format!("value {i} is not finite")));
        }
        Ok(Self { dim, m, values })
    }

    pub fn from_fn(dim: usize, m: usize, f: impl Fn(&[T]) -> T) -> Result<Self, CohomologyError> {
        let total = m.pow(dim as u32);
        let mut values = Vec::with_capacity(total);
        let mut x = vec![T::zero(); dim];
        for idx in 0..total {
            unravel(idx, m, dim, &mut x);
            values.push(f(&x));
        }
        Self::new(dim, m, values)
    }

    /// Direct-summation DFT onto `|u|∞ ≤ radius`; needs `m > 2·radius`.
    pub fn dft(&self, radius: usize) -> Result<FourierTable<T>, CohomologyError> {
        if self.m <= 2 * radius {
            return Err(CohomologyError::GridShape(format!(
                "{} nodes per axis alias modes of radius {radius}; need more than {}",
                self.m,
                2 * radius
            )));
        }
        let mut table = FourierTable::new(self.dim, radius)?;
        let m = self.m;
        let mf = T::from_usize_lossy(m);
        // twiddle[(k + radius) * m + j] = e^{-2πi k j / m}
        let span = 2 * radius + 1;
        let mut twiddle = Vec::with_capacity(span * m);
        for k in -(radius as i64)..=radius as i64 {
            for j in 0..m {
                let r = ((k * j as i64).rem_euclid(m as i64)) as f64;
                let a = -T::TAU() * T::lit(r) / mf;
                twiddle.push(Complex::new(a.cos(), a.sin()));
            }
        }
        let norm = T::one() / T::from_usize_lossy(self.values.len());
        let mut idx = vec![0usize; self.dim];
        for u in lattice_points(self.dim, radius) {
            let mut acc = Complex::<T>::default();
            for (flat, &h) in self.values.iter().enumerate() {
                unravel_index(flat, m, &mut idx);
                let mut w = Complex::new(h, T::zero());
                for (axis, &j) in idx.iter().enumerate() {
                    w *= twiddle[(u[axis] + radius as i64) as usize * m + j];
                }
                acc += w;
            }
            let c = acc * norm;
            if c.norm() > T::zero() {
                table.coeffs.insert(u, c);
            }
        }
        Ok(table)
    }
}

fn unravel_index(flat: usize, m: usize, idx: &mut [usize]) {
    let mut r = flat;
    for slot in idx.iter_mut().rev() {
        *slot = r % m;
        r /= m;
    }
}

fn unravel<T: Scalar>(flat: usize, m: usize, dim: usize, x: &mut [T]) {
    let mut idx = vec![0usize; dim];
    unravel_index(flat, m, &mut idx);
    let mf = T::from_usize_lossy(m);
    for (xi, &j) in x.iter_mut().zip(&idx) {
        *xi = T::from_usize_lossy(j) / mf;
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum RightHandSide<T> {
    Coefficients(FourierTable<T>),
    Grid(GridSample<T>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct TorusCohomologyProblem<T> {
    /// Direction of the linear flow; its length is the torus dimension.
    pub v: Vec<T>,
    pub h: RightHandSide<T>,
    /// Truncation radius `K` in the sup norm.
    pub radius: usize,
    /// Diophantine exponent.
    pub s: T,
    pub resonance_floor: T,
}

impl<T: Scalar> TorusCohomologyProblem<T> {
    pub fn new(v: Vec<T>, h: RightHandSide<T>, radius: usize, s: T) -> Self {
        Self {
            v,
            h,
            radius,
            s,
            resonance_floor: T::lit(RESONANCE_FLOOR),
        }
    }

    pub fn dim(&self) -> usize {
        self.v.len()
    }

    /// Leaf dimension `n` of the foliation on `T^{n+1}`.
    pub fn leaf_dim(&self) -> usize {
        self.v.len() - 1
    }

    fn validate(&self) -> Result<(), CohomologyError> {
        if !(2..=3).contains(&self.dim()) {
            return Err(CohomologyError::InvalidDimension(self.dim()));
        }
        if self.radius == 0 {
            return Err(CohomologyError::InvalidRadius);
        }
        if self.v.iter().any(|c| !c.is_finite()) || self.v.iter().all(|c| *c == T::zero()) {
            return Err(CohomologyError::InvalidDirection);
        }
        if !(self.s > T::zero()) {
            return Err(CohomologyError::InvalidExponent);
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CohomologySolution<T> {
    pub v: Vec<T>,
    pub s: T,
    /// Coefficients of `h` actually solved for.
    pub h_hat: FourierTable<T>,
    /// Solution of `X(f) = h - ĥ₀`, with `f̂₀ = 0`.
    pub f_hat: FourierTable<T>,
    /// The absorbed mean `ĥ₀`.
    pub eps: T,
    /// Factor `n/2` turning `f` into the potential of `ψ(λ) - ε = (2/n) X(f)`.
    pub potential_scale: T,
    pub margin: DiophantineMargin<T>,
    /// Sup of `|X(f) - (h - ĥ₀)|` on the verification grid.
    pub residual: T,
    /// Sup of `|Im f|` on the verification grid.
    pub max_imag: T,
    pub verification_nodes: usize,
    /// Sup of `|h - Σ ĥ_u e_u|` on the input sample, for grid input.
    pub truncation_error: Option<T>,
}

/// Energy below this fraction of `max |ĥ|` does not count as carried by a mode.
const ENERGY_RTOL: f64 = 1e-12;

pub fn solve_linear_flow<T: Scalar>(p: &TorusCohomologyProblem<T>) -> Result<CohomologySolution<T>, CohomologyError> {
    p.validate()?;
    let (h_hat, truncation_error) = match &p.h {
        RightHandSide::Coefficients(t) => {
            if t.dim != p.dim() {
                return Err(CohomologyError::InvalidDimension(t.dim));
            }
            if t.radius > p.radius {
                if let Some((u, _)) = t
                    .iter()
                    .find(|(u, _)| u.iter().any(|c| c.unsigned_abs() as usize > p.radius))
                {
                    return Err(CohomologyError::OutOfRange {
                        u: u.clone(),
                        k: p.radius,
                    });
                }
            }
            (
                FourierTable {
                    dim: t.dim,
                    radius: p.radius,
                    coeffs: t.coeffs.clone(),
                },
                None,
            )
        }
        RightHandSide::Grid(g) => {
            if g.dim != p.dim() {
                return Err(CohomologyError::InvalidDimension(g.dim));
            }
            let t = g.dft(p.radius)?;
            let mut x = vec![T::zero(); g.dim];
            let mut err = T::zero();
            for (i, &h) in g.values.iter().enumerate() {
                unravel(i, g.m, g.dim, &mut x);
                err = err.max((t.eval(&x).re - h).abs());
            }
            (t, Some(err))
        }
    };
    let scale = h_hat.max_abs().max(T::one());
    let (defect, at) = h_hat.conjugate_symmetry_defect();
    if defect > T::lit(1e-12) * scale {
        return Err(CohomologyError::NotConjugateSymmetric {
            u: at.unwrap_or_default(),
            defect: defect.to_f64_lossy(),
        });
    }

    let margin = diophantine_margin(&p.v, p.radius, p.s)?;
    let energy_floor = T::lit(ENERGY_RTOL) * scale;
    let mut worst: Option<(Mode, T)> = None;
    let mut f_hat = FourierTable::new(p.dim(), p.radius)?;
    let zero: Mode = vec![0; p.dim()];
    for (u, c) in h_hat.iter() {
        if *u == zero || c.norm() <= energy_floor {
            continue;
        }
        let divisor = dot_int(u, &p.v);
        if divisor.abs() < p.resonance_floor {
            if worst.as_ref().is_none_or(|(_, d)| divisor.abs() < *d) {
                worst = Some((u.clone(), divisor.abs()));
            }
            continue;
        }
        let symbol = Complex::new(T::zero(), T::TAU() * divisor);
        f_hat.coeffs.insert(u.clone(), c / symbol);
    }
    if let Some((u, d)) = worst {
        return Err(CohomologyError::Resonance {
            u,
            divisor: d.to_f64_lossy(),
            floor: p.resonance_floor.to_f64_lossy(),
        });
    }
    let eps = h_hat.get(&zero).re;
    let (residual, max_imag, nodes) = verify(&p.v, &h_hat, &f_hat, 4 * p.radius);
    Ok(CohomologySolution {
        v: p.v.clone(),
        s: p.s,
        h_hat,
        f_hat,
        eps,
        potential_scale: T::from_usize_lossy(p.leaf_dim()) / T::lit(2.0),
        margin,
        residual,
        max_imag,
        verification_nodes: nodes,
        truncation_error,
    })
}

/// Direct evaluation of `X(f)` against `h - ĥ₀` on an `m^d` grid.
fn verify<T: Scalar>(v: &[T], h: &FourierTable<T>, f: &FourierTable<T>, m: usize) -> (T, T, usize) {
    let dim = v.len();
    let total = m.pow(dim as u32);
    let zero: Mode = vec![0; dim];
    let mut x = vec![T::zero(); dim];
    let (mut res, mut imag) = (T::zero(), T::zero());
    for i in 0..total {
        unravel(i, m, dim, &mut x);
        let mut xf = Complex::<T>::default();
        let mut fx = Complex::<T>::default();
        for (u, c) in f.iter() {
            let phase = T::TAU() * dot_int(u, &x);
            let e = Complex::new(phase.cos(), phase.sin());
            fx += c * e;
            xf += c * e * Complex::new(T::zero(), T::TAU() * dot_int(u, v));
        }
        let mut hx = Complex::<T>::default();
        for (u, c) in h.iter() {
            if *u != zero {
                let phase = T::TAU() * dot_int(u, &x);
                hx += c * Complex::new(phase.cos(), phase.sin());
            }
        }
        res = res.max((xf - hx).norm());
        imag = imag.max(fx.im.abs());
    }
    (res, imag, total)
}

/// One row per shell `‖u‖₂² = norm2` of modes carrying energy.
#[derive(Debug, Clone, PartialEq)]
pub struct AmplificationRow<T> {
    pub norm2: i64,
    pub modes: usize,
    /// `max |f̂_u| / |ĥ_u|` over the shell.
    pub max_amplification: T,
    pub min_divisor: T,
    /// `‖u‖^s / (2π · margin)`, the Diophantine bound on the amplification.
    pub bound: T,
}

pub fn amplification_report<T: Scalar>(sol: &CohomologySolution<T>) -> Vec<AmplificationRow<T>> {
    let mut shells: BTreeMap<i64, AmplificationRow<T>> = BTreeMap::new();
    for (u, f) in sol.f_hat.iter() {
        let h = sol.h_hat.get(u);
        let norm2: i64 = u.iter().map(|c| c * c).sum();
        let amp = f.norm() / h.norm();
        let div = dot_int(u, &sol.v).abs();
        let bound = T::lit(norm2 as f64).sqrt().powf(sol.s) / (T::TAU() * sol.margin.value);
        let row = shells.entry(norm2).or_insert(AmplificationRow {
            norm2,
            modes: 0,
            max_amplification: T::zero(),
            min_divisor: T::infinity(),
            bound,
        });
        row.modes += 1;
        row.max_amplification = row.max_amplification.max(amp);
        row.min_divisor = row.min_divisor.min(div);
    }
    shells.into_values().collect()
}
