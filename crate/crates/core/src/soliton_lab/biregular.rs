use super::{EpsChoice, ResidualNorm, SolitonError, SolitonReport, Verdict};
use crate::scalar::Scalar;
use crate::sym_curvature::{psi_of_lambda, FlowFunctional};

const MIN_NODES: usize = 8;

/// Node values of a surface metric `g₀₀ dx₀² + g₁₁ dx₁²` in biregular
/// foliated coordinates; leaves are the curves `x₀ = const`.
///
/// Values are stored row-major with `x₀` as the slow index.
#[derive(Debug, Clone, PartialEq)]
pub struct BiregularGrid<T> {
    lengths: [T; 2],
    nodes: [usize; 2],
    periodic: [bool; 2],
    g00: Vec<T>,
    g11: Vec<T>,
    x0: Option<Vec<T>>,
    x1: Option<Vec<T>>,
}

impl<T: Scalar> BiregularGrid<T> {
    pub fn new(
        lengths: [T; 2],
        nodes: [usize; 2],
        periodic: [bool; 2],
        g00: Vec<T>,
        g11: Vec<T>,
    ) -> Result<Self, SolitonError> {
        if nodes[0] < MIN_NODES || nodes[1] < MIN_NODES {
            return Err(SolitonError::InvalidGrid(format!(
                "need at least {MIN_NODES}x{MIN_NODES} nodes, got {}x{}",
                nodes[0], nodes[1]
            )));
        }
        if !lengths.iter().all(|l| l.is_finite() && *l > T::zero()) {
            return Err(SolitonError::InvalidGrid("side lengths must be positive".into()));
        }
        let len = nodes[0] * nodes[1];
        if g00.len() != len || g11.len() != len {
            return Err(SolitonError::LengthMismatch(format!(
                "metric arrays need {len} values, got {} and {}",
                g00.len(),
                g11.len()
            )));
        }
        for (name, values) in [("g00", &g00), ("g11", &g11)] {
            if let Some(idx) = values.iter().position(|v| !(v.is_finite() && *v > T::zero())) {
                return Err(SolitonError::NonPositiveMetric {
                    component: name,
                    i: idx / nodes[1],
                    j: idx % nodes[1],
                });
            }
        }
        Ok(Self {
            lengths,
            nodes,
            periodic,
            g00,
            g11,
            x0: None,
            x1: None,
        })
    }

    pub fn from_fn(
        lengths: [T; 2],
        nodes: [usize; 2],
        periodic: [bool; 2],
        g00: impl Fn(T, T) -> T,
        g11: impl Fn(T, T) -> T,
    ) -> Result<Self, SolitonError> {
        let mut a = Vec::with_capacity(nodes[0] * nodes[1]);
        let mut b = Vec::with_capacity(nodes[0] * nodes[1]);
        for i in 0..nodes[0] {
            for j in 0..nodes[1] {
                let (x, y) = (
                    Self::coord(lengths, nodes, periodic, 0, i),
                    Self::coord(lengths, nodes, periodic, 1, j),
                );
                a.push(g00(x, y));
                b.push(g11(x, y));
            }
        }
        Self::new(lengths, nodes, periodic, a, b)
    }

    pub fn with_field_values(mut self, x0: Vec<T>, x1: Vec<T>) -> Result<Self, SolitonError> {
        let len = self.g00.len();
        if x0.len() != len || x1.len() != len {
            return Err(SolitonError::LengthMismatch(format!(
                "field arrays need {len} values, got {} and {}",
                x0.len(),
                x1.len()
            )));
        }
        self.x0 = Some(x0);
        self.x1 = Some(x1);
        Ok(self)
    }

    pub fn with_field_fn(self, x0: impl Fn(T, T) -> T, x1: impl Fn(T, T) -> T) -> Result<Self, SolitonError> {
        let (a, b) = self.sample(|x, y| (x0(x, y), x1(x, y)));
        self.with_field_values(a, b)
    }

    pub fn without_field(mut self) -> Self {
        self.x0 = None;
        self.x1 = None;
        self
    }

    pub fn nodes(&self) -> [usize; 2] {
        self.nodes
    }

    pub fn lengths(&self) -> [T; 2] {
        self.lengths
    }

    pub fn periodic(&self) -> [bool; 2] {
        self.periodic
    }

    pub fn g00(&self) -> &[T] {
        &self.g00
    }

    pub fn g11(&self) -> &[T] {
        &self.g11
    }

    pub fn spacing(&self, axis: usize) -> T {
        Self::step(self.lengths, self.nodes, self.periodic, axis)
    }

    pub fn coordinate(&self, axis: usize, i: usize) -> T {
        Self::coord(self.lengths, self.nodes, self.periodic, axis, i)
    }

    fn step(lengths: [T; 2], nodes: [usize; 2], periodic: [bool; 2], axis: usize) -> T {
        let cells = if periodic[axis] { nodes[axis] } else { nodes[axis] - 1 };
        lengths[axis] / T::from_usize_lossy(cells)
    }

    fn coord(lengths: [T; 2], nodes: [usize; 2], periodic: [bool; 2], axis: usize, i: usize) -> T {
        T::from_usize_lossy(i) * Self::step(lengths, nodes, periodic, axis)
    }

    fn sample(&self, f: impl Fn(T, T) -> (T, T)) -> (Vec<T>, Vec<T>) {
        let mut a = Vec::with_capacity(self.g00.len());
        let mut b = Vec::with_capacity(self.g00.len());
        for i in 0..self.nodes[0] {
            for j in 0..self.nodes[1] {
                let (u, v) = f(self.coordinate(0, i), self.coordinate(1, j));
                a.push(u);
                b.push(v);
            }
        }
        (a, b)
    }

    /// Partial derivative along `axis`: central inside, periodic wrap or
    /// second-order one-sided stencils at the edges.
    pub fn partial(&self, axis: usize, values: &[T]) -> Vec<T> {
        let [m0, m1] = self.nodes;
        let m = self.nodes[axis];
        let h2 = T::lit(2.0) * self.spacing(axis);
        let at = |i: usize, j: usize, k: usize| -> T {
            if axis == 0 {
                values[k * m1 + j]
            } else {
                values[i * m1 + k]
            }
        };
        let mut out = Vec::with_capacity(values.len());
        for i in 0..m0 {
            for j in 0..m1 {
                let k = if axis == 0 { i } else { j };
                let d = if self.periodic[axis] {
                    at(i, j, (k + 1) % m) - at(i, j, (k + m - 1) % m)
                } else if k == 0 {
                    T::lit(-3.0) * at(i, j, 0) + T::lit(4.0) * at(i, j, 1) - at(i, j, 2)
                } else if k == m - 1 {
                    T::lit(3.0) * at(i, j, m - 1) - T::lit(4.0) * at(i, j, m - 2) + at(i, j, m - 3)
                } else {
                    at(i, j, k + 1) - at(i, j, k - 1)
                };
                out.push(d / h2);
            }
        }
        out
    }

    /// Normal curvature `λ = -(∂₀ log g₁₁) / (2√g₀₀)` of the leaves.
    pub fn leaf_curvature(&self) -> Vec<T> {
        let log_g11: Vec<T> = self.g11.iter().map(|v| v.ln()).collect();
        self.partial(0, &log_g11)
            .into_iter()
            .zip(&self.g00)
            .map(|(d, &g)| -d / (T::lit(2.0) * g.sqrt()))
            .collect()
    }
}

/// Residuals of the biregular surface system for `(g, X, ε)`:
/// the soliton equation and the three constraints on `X`.
///
/// `EpsChoice::Auto` uses the leaf average of ψ(λ) weighted by `√g₁₁`,
/// averaged over leaves.
pub fn check_biregular_surface<T: Scalar>(
    g: &BiregularGrid<T>,
    functional: &FlowFunctional<T>,
    eps: EpsChoice<T>,
    tol: T,
) -> Result<SolitonReport<T>, SolitonError> {
    if functional.n() != 1 {
        return Err(SolitonError::UnsupportedDimension {
            n: functional.n(),
            reason: "surfaces have one-dimensional leaves",
        });
    }
    let len = g.g00.len();
    let zero = vec![T::zero(); len];
    let x0 = g.x0.as_deref().unwrap_or(&zero);
    let x1 = g.x1.as_deref().unwrap_or(&zero);

    let lambda = g.leaf_curvature();
    let psi: Vec<T> = lambda.iter().map(|&l| psi_of_lambda(functional, l)).collect();
    let mut notes = Vec::new();
    let eps = match eps {
        EpsChoice::Value(e) => e,
        EpsChoice::Auto => {
            let m1 = g.nodes[1];
            let per_leaf: Vec<T> = (0..g.nodes[0])
                .map(|i| {
                    let row = i * m1..(i + 1) * m1;
                    let w: Vec<T> = g.g11[row.clone()].iter().map(|v| v.sqrt()).collect();
                    super::estimate_eps_leaf(&psi[row], &w, 1).expect("metric is positive")
                })
                .collect();
            let mean = per_leaf.iter().copied().sum::<T>() / T::from_usize_lossy(per_leaf.len());
            let spread = per_leaf.iter().fold(T::zero(), |m, &e| m.max((e - mean).abs()));
            if spread > tol {
                notes.push(format!("leaf averages of psi(lambda) differ by up to {spread}"));
            }
            mean
        }
    };

    let two = T::lit(2.0);
    let half = T::lit(0.5);
    let d1x1 = g.partial(1, x1);
    let d0g11 = g.partial(0, &g.g11);
    let d1g11 = g.partial(1, &g.g11);
    let log_g00: Vec<T> = g.g00.iter().map(|v| v.ln()).collect();
    let d0lg00 = g.partial(0, &log_g00);
    let d1lg00 = g.partial(1, &log_g00);
    let d0x0 = g.partial(0, x0);

    let r1: Vec<T> = (0..len)
        .map(|k| psi[k] - eps - (two * d1x1[k] * g.g11[k] + x0[k] * d0g11[k] + x1[k] * d1g11[k]))
        .collect();
    let r2 = g.partial(1, x0);
    let r3 = g.partial(0, x1);
    let r4: Vec<T> = (0..len)
        .map(|k| d0x0[k] + half * (x0[k] * d0lg00[k] + x1[k] * d1lg00[k]))
        .collect();
    let residuals = vec![
        ResidualNorm::of("soliton equation", &r1),
        ResidualNorm::of("d1 X0", &r2),
        ResidualNorm::of("d0 X1", &r3),
        ResidualNorm::of("d0 X0 + X(log g00)/2", &r4),
    ];
    let verdict = if residuals.iter().all(|r| r.linf <= tol) {
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
        notes,
    })
}
