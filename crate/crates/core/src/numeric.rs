//! Small summation helpers shared by the engine and the oracles.

use crate::Real;

/// Pairwise (tree) summation. Keeps the floating-point drift of reordered
/// inputs well below 1e-12 relative, which the permutation-invariance
/// guarantees of the engine rely on.
pub(crate) fn pairwise_sum<T: Real>(terms: &[T]) -> T {
    if terms.len() <= 8 {
        return terms.iter().fold(T::zero(), |acc, &t| acc + t);
    }
    let mid = terms.len() / 2;
    pairwise_sum(&terms[..mid]) + pairwise_sum(&terms[mid..])
}

/// Kahan compensated accumulator for long mixed-sign series.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Kahan<T> {
    sum: T,
    compensation: T,
}

impl<T: Real> Kahan<T> {
    pub(crate) fn new() -> Self {
        Kahan {
            sum: T::zero(),
            compensation: T::zero(),
        }
    }

    pub(crate) fn add(&mut self, value: T) {
        let adjusted = value - self.compensation;
        let next = self.sum + adjusted;
        self.compensation = (next - self.sum) - adjusted;
        self.sum = next;
    }

    pub(crate) fn value(&self) -> T {
        self.sum
    }
}
