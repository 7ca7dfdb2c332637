//! Real-axis evaluation of `ζ(σ)`, the prime zeta function `P(σ)` and tree
//! zeta functions `ζ_T(σ) = Σ_{t(n) = T} n^{-σ}`, each with an error bound.

mod prime_zeta;
mod riemann;
mod tree_zeta;

use serde::Serialize;

pub use prime_zeta::{mobius_table, prime_zeta};
pub use riemann::{riemann_zeta, zeta_minus_one};
pub use tree_zeta::{exponents_with_tree, tree_zeta_direct, tree_zeta_partition};

use crate::error::{Error, Result};
use crate::tree::BirthBudget;

/// A binary64 value with a bound on its distance from the true value.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EvalResult {
    pub value: f64,
    pub error_bound: f64,
}

impl EvalResult {
    pub fn new(value: f64, error_bound: f64) -> Self {
        debug_assert!(error_bound >= 0.0 && error_bound.is_finite());
        EvalResult { value, error_bound }
    }

    pub fn exact(value: f64) -> Self {
        EvalResult {
            value,
            error_bound: 0.0,
        }
    }

    pub fn lower(&self) -> f64 {
        self.value - self.error_bound
    }

    pub fn upper(&self) -> f64 {
        self.value + self.error_bound
    }

    /// Whether `x` lies in `[value - error_bound, value + error_bound]`.
    pub fn contains(&self, x: f64) -> bool {
        (self.value - x).abs() <= self.error_bound
    }

    /// Whether the two enclosures overlap.
    pub fn agrees_with(&self, other: &EvalResult) -> bool {
        (self.value - other.value).abs() <= self.error_bound + other.error_bound
    }
}

/// Requested accuracy and the work caps that go with it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerance {
    target: f64,
    /// Most series terms a single evaluation may use.
    pub max_terms: u64,
    /// Largest total exponent `Σ v` the partition method will reach.
    pub max_exponent_sum: u64,
    pub birth_budget: BirthBudget,
}

impl Tolerance {
    /// Below this, binary64 rounding dominates any truncation error.
    pub const MIN_TARGET: f64 = 3.552713678800501e-15; // 2^-48

    pub fn new(target: f64) -> Result<Self> {
        Tolerance::default().with_target(target)
    }

    pub fn with_target(self, target: f64) -> Result<Self> {
        if !(target.is_finite() && target >= Self::MIN_TARGET) {
            return Err(Error::domain(format!(
                "tolerance {target:e} is below 2^-48 or not finite"
            )));
        }
        Ok(Tolerance { target, ..self })
    }

    pub fn target(&self) -> f64 {
        self.target
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            target: 1e-12,
            max_terms: 100_000,
            max_exponent_sum: 1 << 16,
            birth_budget: BirthBudget::default(),
        }
    }
}

/// Compensated summation that also tracks `Σ |x|` for rounding allowances.
#[derive(Clone, Copy, Debug, Default)]
pub(crate) struct Neumaier {
    sum: f64,
    comp: f64,
    abs: f64,
}

impl Neumaier {
    pub(crate) fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
        self.abs += x.abs();
    }

    pub(crate) fn value(&self) -> f64 {
        self.sum + self.comp
    }

    pub(crate) fn abs_sum(&self) -> f64 {
        self.abs
    }
}

pub(crate) fn check_sigma(sigma: f64) -> Result<()> {
    if !sigma.is_finite() {
        return Err(Error::domain(format!(
            "sigma must be a finite real, got {sigma}"
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn min_target_is_two_to_minus_48() {
        assert_eq!(Tolerance::MIN_TARGET, 2f64.powi(-48));
        assert!(Tolerance::new(2f64.powi(-48)).is_ok());
        assert!(Tolerance::new(2f64.powi(-49)).is_err());
        assert!(Tolerance::new(f64::NAN).is_err());
        assert!(Tolerance::new(-1.0).is_err());
    }

    #[test]
    fn compensated_sum() {
        let mut s = Neumaier::default();
        for x in [1.0, 1e100, 1.0, -1e100] {
            s.add(x);
        }
        assert_eq!(s.value(), 2.0);
        assert_eq!(s.abs_sum(), 2e100 + 2.0);
    }

    #[test]
    fn enclosures() {
        let a = EvalResult::new(1.0, 0.1);
        assert!(a.contains(1.05));
        assert!(!a.contains(1.2));
        assert!(a.agrees_with(&EvalResult::new(1.15, 0.05)));
        assert!(!a.agrees_with(&EvalResult::new(1.2, 0.05)));
        assert_eq!(EvalResult::exact(1.0).error_bound, 0.0);
    }
}
