//! Spectral radius of nonnegative irreducible matrices by power iteration,
//! certified by Collatz–Wielandt brackets.

use num_traits::Float;
use serde::Serialize;

use super::matrix::Matrix;

pub const DEFAULT_TOLERANCE: f64 = 1e-9;
pub const DEFAULT_MAX_ITERATIONS: usize = 100_000;

/// `low <= ρ <= high`, both bounds certified for the input matrix.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SpectralEstimate<T> {
    pub low: T,
    pub high: T,
    pub iterations: usize,
    /// `high - low` reached the tolerance.
    pub converged: bool,
}

impl<T: Float> SpectralEstimate<T> {
    pub fn exact(value: T) -> Self {
        Self {
            low: value,
            high: value,
            iterations: 0,
            converged: true,
        }
    }

    pub fn midpoint(&self) -> T {
        (self.low + self.high) / (T::one() + T::one())
    }

    pub fn contains(&self, value: T) -> bool {
        self.low <= value && value <= self.high
    }
}

/// For a positive vector `v`, `min (Mv)_i / v_i <= ρ(M) <= max (Mv)_i / v_i`.
fn collatz_wielandt<T: Float>(m: &Matrix<T>, v: &[T]) -> (T, T) {
    let n = m.size();
    let mut low = T::infinity();
    let mut high = T::zero();
    for i in 0..n {
        let mv = (0..n).fold(T::zero(), |acc, j| acc + *m.get(i, j) * v[j]);
        let ratio = mv / v[i];
        low = low.min(ratio);
        high = high.max(ratio);
    }
    (low, high)
}

/// Spectral radius of an irreducible nonnegative matrix. Iterates with
/// `M + I`, which is primitive whenever `M` is irreducible, so periodic
/// matrices converge too; the brackets are taken on `M` itself.
pub fn spectral_radius<T: Float>(m: &Matrix<T>, tolerance: T, max_iterations: usize) -> SpectralEstimate<T> {
    let n = m.size();
    if n == 0 {
        return SpectralEstimate::exact(T::zero());
    }
    if n == 1 {
        return SpectralEstimate::exact(*m.get(0, 0));
    }
    let mut v = vec![T::one(); n];
    let mut best_low = T::zero();
    let mut best_high = T::infinity();
    for iteration in 1..=max_iterations {
        let mut next: Vec<T> = (0..n)
            .map(|i| (0..n).fold(v[i], |acc, j| acc + *m.get(i, j) * v[j]))
            .collect();
        let scale = next.iter().fold(T::zero(), |a, &b| a.max(b));
        if scale <= T::zero() {
            return SpectralEstimate::exact(T::zero());
        }
        for e in &mut next {
            *e = *e / scale;
        }
        v = next;
        if v.iter().all(|&e| e > T::zero()) {
            let (low, high) = collatz_wielandt(m, &v);
            best_low = best_low.max(low);
            best_high = best_high.min(high);
            if best_high - best_low <= tolerance {
                return SpectralEstimate {
                    low: best_low,
                    high: best_high,
                    iterations: iteration,
                    converged: true,
                };
            }
        }
    }
    SpectralEstimate {
        low: best_low,
        high: best_high,
        iterations: max_iterations,
        converged: false,
    }
}
