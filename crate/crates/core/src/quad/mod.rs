//! Adaptive Gauss-Legendre oracle for oscillatory integrals.
//!
//! Panels are split until the phase advances by at most `theta` radians
//! across them and the weight varies by at most `amp_variation` of its
//! supremum. A resolvable panel is compared against its four children;
//! the children are accepted when they agree with the parent to the local
//! share of the tolerance, otherwise each child is refined further with its
//! already computed value as the new parent.

mod amplitude;
mod gauss;
mod panel1d;
mod panel2d;

use num_complex::Complex;
use thiserror::Error;

pub use amplitude::{Amplitude, Bump1, Rect, Weight1, Weight2, NORM_GRID, NORM_SAFETY};
pub use gauss::{gauss_legendre, PANEL_ORDER};
pub use panel1d::{integrate_1d, integrate_1d_with};
pub use panel2d::{integrate_2d, integrate_2d_with};

use crate::scalar::Real;

/// Smallest accepted absolute tolerance.
pub const MIN_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuadError {
    #[error("BudgetExceeded: more than {max_panels} panels needed; lambda too large for the oracle")]
    BudgetExceeded { max_panels: usize },
    #[error("InvalidTolerance: tolerance {tol} is below {MIN_TOL}")]
    InvalidTolerance { tol: f64 },
    #[error("NonFinite: integrand produced a non-finite value")]
    NonFinite,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadConfig {
    /// Largest phase advance, in radians, of a panel handed to the rule.
    pub theta: f64,
    /// Largest weight variation of such a panel, relative to the weight sup.
    pub amp_variation: f64,
    /// Accepted-panel ceiling.
    pub max_panels: usize,
    /// Tiles per side of the initial parallel split.
    pub tiles: usize,
    /// Panels narrower than this fraction of the domain are accepted as is.
    pub min_relative_width: f64,
}

impl Default for QuadConfig {
    fn default() -> Self {
        Self {
            theta: 40.0,
            amp_variation: 0.1,
            max_panels: 1 << 22,
            tiles: 8,
            min_relative_width: 1e-9,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult<T> {
    pub value: Complex<T>,
    /// Sum over accepted panels of `|parent - children|`, plus the mass of
    /// panels skipped as negligible.
    pub abs_error_estimate: T,
    pub panels: usize,
}

/// `1 / (|lambda|^{1/3} + |lambda|^{1/2} |sigma|^{1/4})`.
pub fn airy_envelope<T: Real>(lambda: T, sigma: T) -> T {
    let l = lambda.abs();
    T::one() / (l.cbrt() + l.sqrt() * sigma.abs().sqrt().sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn envelope_examples() {
        assert_eq!(airy_envelope(1.0, 0.0), 1.0);
        assert_relative_eq!(airy_envelope(64.0, 0.0), 0.25, max_relative = 1e-15);
        assert_relative_eq!(airy_envelope(16.0_f64, 1.0), 1.0 / (16f64.cbrt() + 4.0), max_relative = 1e-15);
        assert!((airy_envelope(16.0_f64, 1.0) - 0.15338).abs() < 1e-5);
    }
}
