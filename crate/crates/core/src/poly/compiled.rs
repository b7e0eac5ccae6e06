use super::{Axis, BivarPoly};
use crate::scalar::Real;

/// Dense nested-Horner form of a polynomial, for hot evaluation loops.
///
/// Row `i` holds the coefficients of `x1^i` as a polynomial in `x2`.
#[derive(Clone)]
pub struct CompiledPoly<T> {
    source: BivarPoly<T>,
    rows: Vec<Vec<T>>,
    d1: Vec<Vec<T>>,
    d2: Vec<Vec<T>>,
}

fn dense<T: Real>(p: &BivarPoly<T>) -> Vec<Vec<T>> {
    let max_i = p.terms().map(|((i, _), _)| i as usize).max();
    let Some(max_i) = max_i else {
        return Vec::new();
    };
    let mut rows: Vec<Vec<T>> = vec![Vec::new(); max_i + 1];
    for ((i, j), &c) in p.terms() {
        let row = &mut rows[i as usize];
        if row.len() <= j as usize {
            row.resize(j as usize + 1, T::zero());
        }
        row[j as usize] = c;
    }
    rows
}

#[inline]
fn horner<T: Real>(rows: &[Vec<T>], x: [T; 2]) -> T {
    let mut acc = T::zero();
    for row in rows.iter().rev() {
        let inner = row.iter().rev().fold(T::zero(), |a, &c| a * x[1] + c);
        acc = acc * x[0] + inner;
    }
    acc
}

impl<T: Real> CompiledPoly<T> {
    pub fn new(p: &BivarPoly<T>) -> Self {
        Self {
            rows: dense(p),
            d1: dense(&p.partial(Axis::X1)),
            d2: dense(&p.partial(Axis::X2)),
            source: p.clone(),
        }
    }

    pub fn source(&self) -> &BivarPoly<T> {
        &self.source
    }

    #[inline]
    pub fn eval(&self, x: [T; 2]) -> T {
        horner(&self.rows, x)
    }

    #[inline]
    pub fn gradient(&self, x: [T; 2]) -> [T; 2] {
        [horner(&self.d1, x), horner(&self.d2, x)]
    }
}

impl<T: Real> std::fmt::Debug for CompiledPoly<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "CompiledPoly({})", self.source)
    }
}

impl<T: Real> From<BivarPoly<T>> for CompiledPoly<T> {
    fn from(p: BivarPoly<T>) -> Self {
        Self::new(&p)
    }
}
