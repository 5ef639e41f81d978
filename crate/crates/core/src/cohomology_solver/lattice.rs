use super::{dot_int, CohomologyError, Mode};
use crate::scalar::Scalar;

/// All `u ∈ ℤ^dim` with `|u|∞ ≤ radius`, in lexicographic order.
pub fn lattice_points(dim: usize, radius: usize) -> impl Iterator<Item = Mode> {
    let span = 2 * radius + 1;
    let r = radius as i64;
    (0..span.pow(dim as u32)).map(move |mut flat| {
        let mut u = vec![0i64; dim];
        for slot in u.iter_mut().rev() {
            *slot = (flat % span) as i64 - r;
            flat /= span;
        }
        u
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiophantineMargin<T> {
    /// `min |⟨u,v⟩| · ‖u‖₂^s` over `0 < |u|∞ ≤ K`.
    pub value: T,
    /// A minimizing lattice vector.
    pub argmin: Mode,
}

/// Exhaustive lattice scan of `|⟨u,v⟩| · ‖u‖₂^s`.
pub fn diophantine_margin<T: Scalar>(v: &[T], radius: usize, s: T) -> Result<DiophantineMargin<T>, CohomologyError> {
    if radius == 0 {
        return Err(CohomologyError::InvalidRadius);
    }
    if !(2..=3).contains(&v.len()) {
        return Err(CohomologyError::InvalidDimension(v.len()));
    }
    let mut best = DiophantineMargin {
        value: T::infinity(),
        argmin: vec![0; v.len()],
    };
    for u in lattice_points(v.len(), radius) {
        // u and -u give the same value; keep the lexicographically positive one.
        match u.iter().find(|&&c| c != 0) {
            Some(&c) if c > 0 => {}
            _ => continue,
        }
        let norm2: i64 = u.iter().map(|c| c * c).sum();
        let value = dot_int(&u, v).abs() * T::lit(norm2 as f64).sqrt().powf(s);
        if value < best.value {
            best = DiophantineMargin { value, argmin: u };
        }
    }
    Ok(best)
}
