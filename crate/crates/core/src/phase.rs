//! Smooth real phases in one and two variables.
//!
//! [`Phase2`] is what the quadrature, the centering solver and the Taylor
//! machinery consume. Polynomials implement it exactly; arbitrary closures
//! get derivatives from fourth-order central differences.

use std::sync::Arc;

use thiserror::Error;

use crate::poly::{Axis, BivarPoly, CompiledPoly};
use crate::scalar::Real;

/// A derivative the phase cannot provide.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("DifferentiationFailure: derivative of order ({}, {}) unavailable", order.0, order.1)]
pub struct DifferentiationFailure {
    pub order: (u32, u32),
}

/// Step used by the finite-difference fallback.
pub const FD_STEP: f64 = 1e-3;

pub trait Phase2<T: Real>: Send + Sync {
    fn value(&self, x: [T; 2]) -> T;

    fn gradient(&self, x: [T; 2]) -> [T; 2] {
        let h = T::lit(FD_STEP);
        let f = |p: [T; 2]| self.value(p);
        [
            stencil_2d(&f, x, (1, 0), h).unwrap_or_else(|_| T::nan()),
            stencil_2d(&f, x, (0, 1), h).unwrap_or_else(|_| T::nan()),
        ]
    }

    /// Mixed partial `D^order` at `x`.
    fn derivative(&self, x: [T; 2], order: (u32, u32)) -> Result<T, DifferentiationFailure> {
        finite_difference(&|p: [T; 2]| self.value(p), x, order, T::lit(FD_STEP))
    }

    /// Exact polynomial form, when there is one.
    fn to_polynomial(&self) -> Option<BivarPoly<T>> {
        None
    }
}

impl<T: Real, P: Phase2<T> + ?Sized> Phase2<T> for Arc<P> {
    fn value(&self, x: [T; 2]) -> T {
        (**self).value(x)
    }
    fn gradient(&self, x: [T; 2]) -> [T; 2] {
        (**self).gradient(x)
    }
    fn derivative(&self, x: [T; 2], order: (u32, u32)) -> Result<T, DifferentiationFailure> {
        (**self).derivative(x, order)
    }
    fn to_polynomial(&self) -> Option<BivarPoly<T>> {
        (**self).to_polynomial()
    }
}

impl<T: Real, P: Phase2<T> + ?Sized> Phase2<T> for &P {
    fn value(&self, x: [T; 2]) -> T {
        (**self).value(x)
    }
    fn gradient(&self, x: [T; 2]) -> [T; 2] {
        (**self).gradient(x)
    }
    fn derivative(&self, x: [T; 2], order: (u32, u32)) -> Result<T, DifferentiationFailure> {
        (**self).derivative(x, order)
    }
    fn to_polynomial(&self) -> Option<BivarPoly<T>> {
        (**self).to_polynomial()
    }
}

impl<T: Real> Phase2<T> for CompiledPoly<T> {
    #[inline]
    fn value(&self, x: [T; 2]) -> T {
        self.eval(x)
    }
    #[inline]
    fn gradient(&self, x: [T; 2]) -> [T; 2] {
        self.gradient(x)
    }
    fn derivative(&self, x: [T; 2], order: (u32, u32)) -> Result<T, DifferentiationFailure> {
        Ok(self.source().derivative(order).eval(x))
    }
    fn to_polynomial(&self) -> Option<BivarPoly<T>> {
        Some(self.source().clone())
    }
}

impl<T: Real> Phase2<T> for BivarPoly<T> {
    fn value(&self, x: [T; 2]) -> T {
        self.eval(x)
    }
    fn gradient(&self, x: [T; 2]) -> [T; 2] {
        [self.partial(Axis::X1).eval(x), self.partial(Axis::X2).eval(x)]
    }
    fn derivative(&self, x: [T; 2], order: (u32, u32)) -> Result<T, DifferentiationFailure> {
        Ok(BivarPoly::derivative(self, order).eval(x))
    }
    fn to_polynomial(&self) -> Option<BivarPoly<T>> {
        Some(self.clone())
    }
}

/// A phase given by a closure; derivatives by finite differences.
pub struct FnPhase<F> {
    f: F,
}

impl<F> FnPhase<F> {
    pub fn new(f: F) -> Self {
        Self { f }
    }
}

impl<T: Real, F: Fn([T; 2]) -> T + Send + Sync> Phase2<T> for FnPhase<F> {
    fn value(&self, x: [T; 2]) -> T {
        (self.f)(x)
    }
}

/// Pointwise sum of phases.
pub struct SumPhase<T: Real> {
    parts: Vec<Arc<dyn Phase2<T>>>,
}

impl<T: Real> SumPhase<T> {
    pub fn new(parts: Vec<Arc<dyn Phase2<T>>>) -> Self {
        Self { parts }
    }
}

impl<T: Real> Phase2<T> for SumPhase<T> {
    fn value(&self, x: [T; 2]) -> T {
        self.parts.iter().map(|p| p.value(x)).sum()
    }

    fn gradient(&self, x: [T; 2]) -> [T; 2] {
        self.parts.iter().fold([T::zero(); 2], |acc, p| {
            let g = p.gradient(x);
            [acc[0] + g[0], acc[1] + g[1]]
        })
    }

    fn derivative(&self, x: [T; 2], order: (u32, u32)) -> Result<T, DifferentiationFailure> {
        let mut acc = T::zero();
        for p in &self.parts {
            acc = acc + p.derivative(x, order)?;
        }
        Ok(acc)
    }

    fn to_polynomial(&self) -> Option<BivarPoly<T>> {
        let mut acc = BivarPoly::zero();
        for p in &self.parts {
            acc = &acc + &p.to_polynomial()?;
        }
        Some(acc)
    }
}

// (offset, weight) pairs; every stencil is fourth-order accurate.
const D1: [(i32, f64); 4] = [(-2, 1.0 / 12.0), (-1, -8.0 / 12.0), (1, 8.0 / 12.0), (2, -1.0 / 12.0)];
const D2: [(i32, f64); 5] = [
    (-2, -1.0 / 12.0),
    (-1, 16.0 / 12.0),
    (0, -30.0 / 12.0),
    (1, 16.0 / 12.0),
    (2, -1.0 / 12.0),
];
const D3: [(i32, f64); 6] = [
    (-3, 1.0 / 8.0),
    (-2, -1.0),
    (-1, 13.0 / 8.0),
    (1, -13.0 / 8.0),
    (2, 1.0),
    (3, -1.0 / 8.0),
];
const D4: [(i32, f64); 7] = [
    (-3, -1.0 / 6.0),
    (-2, 2.0),
    (-1, -13.0 / 2.0),
    (0, 28.0 / 3.0),
    (1, -13.0 / 2.0),
    (2, 2.0),
    (3, -1.0 / 6.0),
];

fn stencil(order: u32) -> Option<&'static [(i32, f64)]> {
    match order {
        0 => Some(&[(0, 1.0)]),
        1 => Some(&D1),
        2 => Some(&D2),
        3 => Some(&D3),
        4 => Some(&D4),
        _ => None,
    }
}

fn stencil_2d<T: Real>(
    f: &dyn Fn([T; 2]) -> T,
    x: [T; 2],
    order: (u32, u32),
    h: T,
) -> Result<T, DifferentiationFailure> {
    let fail = DifferentiationFailure { order };
    let (sa, sb) = match (stencil(order.0), stencil(order.1)) {
        (Some(a), Some(b)) if order.0 + order.1 <= 4 => (a, b),
        _ => return Err(fail),
    };
    let mut acc = T::zero();
    for &(i, wi) in sa {
        for &(j, wj) in sb {
            let p = [x[0] + T::lit(i as f64) * h, x[1] + T::lit(j as f64) * h];
            acc = acc + T::lit(wi * wj) * f(p);
        }
    }
    let value = acc / h.powi((order.0 + order.1) as i32);
    if value.is_finite() {
        Ok(value)
    } else {
        Err(fail)
    }
}

/// Tensor-product central difference for `D^order f(x)`, total order at most 4.
pub fn finite_difference<T: Real>(
    f: &dyn Fn([T; 2]) -> T,
    x: [T; 2],
    order: (u32, u32),
    h: T,
) -> Result<T, DifferentiationFailure> {
    stencil_2d(f, x, order, h)
}

/// One-dimensional phase.
pub trait Phase1<T: Real>: Send + Sync {
    fn value(&self, x: T) -> T;

    fn derivative(&self, x: T) -> T {
        let h = T::lit(FD_STEP);
        D1.iter()
            .map(|&(k, w)| T::lit(w) * self.value(x + T::lit(k as f64) * h))
            .sum::<T>()
            / h
    }
}

/// Dense univariate polynomial, coefficients in ascending degree.
#[derive(Debug, Clone, PartialEq)]
pub struct Poly1<T> {
    coeffs: Vec<T>,
}

impl<T: Real> Poly1<T> {
    pub fn new(coeffs: Vec<T>) -> Self {
        Self { coeffs }
    }

    /// `x^3 + sigma x`.
    pub fn airy(sigma: T) -> Self {
        Self::new(vec![T::zero(), sigma, T::zero(), T::one()])
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }
}

impl<T: Real> Phase1<T> for Poly1<T> {
    fn value(&self, x: T) -> T {
        self.coeffs.iter().rev().fold(T::zero(), |acc, &c| acc * x + c)
    }

    fn derivative(&self, x: T) -> T {
        self.coeffs
            .iter()
            .enumerate()
            .skip(1)
            .rev()
            .fold(T::zero(), |acc, (k, &c)| acc * x + T::count(k) * c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn stencils_are_exact_on_low_degree_polynomials() {
        // every stencil is exact for degree <= order + 3 polynomials up to rounding
        let f = |p: [f64; 2]| p[0].powi(3) * p[1] + 0.5 * p[0] * p[0] * p[1] * p[1] - p[1].powi(4);
        let x = [0.3, -0.2];
        let h = FD_STEP;
        assert_relative_eq!(finite_difference(&f, x, (0, 0), h).unwrap(), f(x));
        assert_relative_eq!(
            finite_difference(&f, x, (1, 0), h).unwrap(),
            3.0 * 0.09 * -0.2 + 0.3 * 0.04,
            epsilon = 1e-9
        );
        assert_relative_eq!(finite_difference(&f, x, (2, 1), h).unwrap(), 6.0 * 0.3 + 2.0 * -0.2, epsilon = 1e-5);
        assert_relative_eq!(finite_difference(&f, x, (3, 1), h).unwrap(), 6.0, epsilon = 1e-3);
        assert_relative_eq!(finite_difference(&f, x, (0, 4), h).unwrap(), -24.0, epsilon = 1e-3);
    }

    #[test]
    fn high_orders_fail() {
        let f = |p: [f64; 2]| p[0];
        let err = finite_difference(&f, [0.0, 0.0], (5, 0), FD_STEP).unwrap_err();
        assert_eq!(err.order, (5, 0));
        assert!(err.to_string().starts_with("DifferentiationFailure"));
        assert!(finite_difference(&f, [0.0, 0.0], (3, 2), FD_STEP).is_err());
        let nan = |_: [f64; 2]| f64::NAN;
        assert!(finite_difference(&nan, [0.0, 0.0], (1, 0), FD_STEP).is_err());
    }

    #[test]
    fn fn_phase_matches_polynomial() {
        let poly: BivarPoly<f64> = "x1^4 + x1^2*x2^2 + x2^4".parse().unwrap();
        let q = poly.clone();
        let closure = FnPhase::new(move |x: [f64; 2]| q.eval(x));
        let x = [0.2, 0.7];
        let g1 = Phase2::gradient(&poly, x);
        let g2 = closure.gradient(x);
        assert_relative_eq!(g1[0], g2[0], epsilon = 1e-10);
        assert_relative_eq!(g1[1], g2[1], epsilon = 1e-10);
        assert!(closure.to_polynomial().is_none());
    }

    #[test]
    fn sum_phase_is_polynomial_when_parts_are() {
        let a: Arc<dyn Phase2<f64>> = Arc::new("x1^4".parse::<BivarPoly<f64>>().unwrap());
        let b: Arc<dyn Phase2<f64>> = Arc::new("x2".parse::<BivarPoly<f64>>().unwrap());
        let s = SumPhase::new(vec![a.clone(), b]);
        assert_eq!(s.to_polynomial().unwrap(), "x1^4 + x2".parse().unwrap());
        assert_eq!(s.value([1.0, 2.0]), 3.0);
        let c: Arc<dyn Phase2<f64>> = Arc::new(FnPhase::new(|x: [f64; 2]| x[0]));
        assert!(SumPhase::new(vec![a, c]).to_polynomial().is_none());
    }

    #[test]
    fn poly1_evaluation() {
        let p = Poly1::airy(-1.0_f64);
        assert_eq!(p.value(2.0), 6.0);
        assert_eq!(Phase1::derivative(&p, 2.0), 11.0);
    }
}
