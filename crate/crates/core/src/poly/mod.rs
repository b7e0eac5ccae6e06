//! Sparse bivariate polynomials.
//!
//! [`BivarPoly`] stores a finite map from exponent pairs `(i, j)` to the
//! coefficient of `x1^i * x2^j`. Zero coefficients are never stored, so
//! structural equality is polynomial equality.

mod compiled;
mod norm;
mod parse;
mod taylor;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::scalar::Coeff;

pub use compiled::CompiledPoly;
pub use norm::{c_norm, c_norm_report, CNormReport, Square};
pub use parse::ParsePolyError;
pub use taylor::{quasi_distance, taylor_data, LocalPhase, TaylorData};

/// Exponent pair `(i, j)` of the monomial `x1^i x2^j`.
pub type Exponent = (u32, u32);

/// Axis selector for [`BivarPoly::partial`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    X1,
    X2,
}

#[derive(Clone, PartialEq, Default)]
pub struct BivarPoly<C> {
    terms: BTreeMap<Exponent, C>,
}

impl<C: Coeff> BivarPoly<C> {
    pub fn zero() -> Self {
        Self { terms: BTreeMap::new() }
    }

    pub fn constant(c: C) -> Self {
        Self::monomial(c, 0, 0)
    }

    pub fn monomial(c: C, i: u32, j: u32) -> Self {
        let mut p = Self::zero();
        p.add_term(i, j, c);
        p
    }

    pub fn x1() -> Self {
        Self::monomial(C::one(), 1, 0)
    }

    pub fn x2() -> Self {
        Self::monomial(C::one(), 0, 1)
    }

    /// Build from `(i, j, c)` triples; repeated exponents are summed.
    pub fn from_terms<I>(terms: I) -> Self
    where
        I: IntoIterator<Item = (u32, u32, C)>,
    {
        let mut p = Self::zero();
        for (i, j, c) in terms {
            p.add_term(i, j, c);
        }
        p
    }

    /// Add `c * x1^i x2^j` in place, dropping the entry if it cancels.
    pub fn add_term(&mut self, i: u32, j: u32, c: C) {
        if c.is_zero() {
            return;
        }
        let key = (i, j);
        match self.terms.remove(&key) {
            Some(old) => {
                let sum = old + c;
                if !sum.is_zero() {
                    self.terms.insert(key, sum);
                }
            }
            None => {
                self.terms.insert(key, c);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Stored terms in lexicographic exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (Exponent, &C)> + '_ {
        self.terms.iter().map(|(&e, c)| (e, c))
    }

    pub fn coeff(&self, i: u32, j: u32) -> C {
        self.terms.get(&(i, j)).cloned().unwrap_or_else(C::zero)
    }

    /// Total degree; `-1` for the zero polynomial.
    pub fn degree(&self) -> i32 {
        self.terms
            .keys()
            .map(|&(i, j)| (i + j) as i32)
            .max()
            .unwrap_or(-1)
    }

    pub fn map_coeffs<D: Coeff>(&self, f: impl Fn(&C) -> D) -> BivarPoly<D> {
        BivarPoly::from_terms(self.terms.iter().map(|(&(i, j), c)| (i, j, f(c))))
    }

    pub fn to_f64(&self) -> BivarPoly<f64> {
        self.map_coeffs(|c| c.as_f64())
    }

    pub fn scale(&self, k: &C) -> Self {
        self.map_coeffs(|c| c.clone() * k.clone())
    }

    /// Value at `x`.
    ///
    /// Nested Horner evaluation: an inner Horner pass in `x2` per distinct
    /// power of `x1`, then an outer pass in `x1`. Terms are visited in
    /// lexicographic exponent order, so the result is bit-reproducible.
    pub fn eval(&self, x: [C; 2]) -> C {
        let [x1, x2] = x;
        let mut rows: Vec<(u32, C)> = Vec::new();
        let mut iter = self.terms.iter().peekable();
        while let Some((&(i, j), c)) = iter.next() {
            // (j, coefficient) for the current power of x1, ascending in j
            let mut row: Vec<(u32, &C)> = vec![(j, c)];
            while let Some(&(&(i2, j2), c2)) = iter.peek() {
                if i2 != i {
                    break;
                }
                row.push((j2, c2));
                iter.next();
            }
            rows.push((i, horner_sparse(row.iter().map(|(e, c)| (*e, *c)), &x2)));
        }
        horner_sparse(rows.iter().map(|(e, c)| (*e, c)), &x1)
    }

    /// Formal partial derivative.
    pub fn partial(&self, axis: Axis) -> Self {
        let mut out = Self::zero();
        for (&(i, j), c) in &self.terms {
            match axis {
                Axis::X1 if i > 0 => out.add_term(i - 1, j, c.clone() * C::from_count(i as u64)),
                Axis::X2 if j > 0 => out.add_term(i, j - 1, c.clone() * C::from_count(j as u64)),
                _ => {}
            }
        }
        out
    }

    /// Mixed derivative `D^(a, b)`.
    pub fn derivative(&self, order: Exponent) -> Self {
        let mut out = Self::zero();
        let (a, b) = order;
        for (&(i, j), c) in &self.terms {
            if i >= a && j >= b {
                let k = falling_factorial(i, a) * falling_factorial(j, b);
                out.add_term(i - a, j - b, c.clone() * C::from_count(k));
            }
        }
        out
    }

    /// Sum of the terms of total degree exactly `d`.
    pub fn homogeneous_part(&self, d: u32) -> Self {
        self.filter_degree(|deg| deg == d)
    }

    /// Terms whose total degree satisfies `keep`.
    pub fn filter_degree(&self, keep: impl Fn(u32) -> bool) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .filter(|(&(i, j), _)| keep(i + j))
                .map(|(&e, c)| (e, c.clone()))
                .collect(),
        }
    }

    pub fn is_homogeneous(&self, d: u32) -> bool {
        self.terms.keys().all(|&(i, j)| i + j == d)
    }

    /// True iff every stored monomial has weighted degree within `tol` of `d`.
    pub fn is_quasi_homogeneous(&self, weights: (f64, f64), d: f64, tol: f64) -> bool {
        self.terms
            .keys()
            .all(|&(i, j)| (weights.0 * i as f64 + weights.1 * j as f64 - d).abs() <= tol)
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut out = Self::constant(C::one());
        for _ in 0..n {
            out = &out * self;
        }
        out
    }

    /// `p(l1(x), l2(x))` for polynomials `l1`, `l2`.
    pub fn compose(&self, l1: &Self, l2: &Self) -> Self {
        let max_i = self.terms.keys().map(|e| e.0).max().unwrap_or(0);
        let max_j = self.terms.keys().map(|e| e.1).max().unwrap_or(0);
        let pow1 = powers(l1, max_i);
        let pow2 = powers(l2, max_j);
        let mut out = Self::zero();
        for (&(i, j), c) in &self.terms {
            let term = (&pow1[i as usize] * &pow2[j as usize]).scale(c);
            out = &out + &term;
        }
        out
    }

    /// `p(x + z)`.
    pub fn shift(&self, z: [C; 2]) -> Self {
        let [z1, z2] = z;
        let l1 = Self::from_terms([(1, 0, C::one()), (0, 0, z1)]);
        let l2 = Self::from_terms([(0, 1, C::one()), (0, 0, z2)]);
        self.compose(&l1, &l2)
    }

    /// `p(M x)` for a 2x2 matrix in row-major order.
    pub fn linear_substitute(&self, m: [[C; 2]; 2]) -> Self {
        let [[a, b], [c, d]] = m;
        let l1 = Self::from_terms([(1, 0, a), (0, 1, b)]);
        let l2 = Self::from_terms([(1, 0, c), (0, 1, d)]);
        self.compose(&l1, &l2)
    }

    /// `p(a x1, b x2)`.
    pub fn scale_vars(&self, a: &C, b: &C) -> Self {
        self.map_terms(|i, j, c| c.clone() * pow_ring(a, i) * pow_ring(b, j))
    }

    fn map_terms(&self, f: impl Fn(u32, u32, &C) -> C) -> Self {
        Self::from_terms(self.terms.iter().map(|(&(i, j), c)| (i, j, f(i, j, c))))
    }
}

fn powers<C: Coeff>(base: &BivarPoly<C>, n: u32) -> Vec<BivarPoly<C>> {
    let mut out = Vec::with_capacity(n as usize + 1);
    out.push(BivarPoly::constant(C::one()));
    for k in 0..n as usize {
        let next = &out[k] * base;
        out.push(next);
    }
    out
}

pub(crate) fn falling_factorial(n: u32, k: u32) -> u64 {
    if k > n {
        return 0;
    }
    (n - k + 1..=n).map(u64::from).product()
}

pub(crate) fn pow_ring<C: Coeff>(base: &C, mut e: u32) -> C {
    let mut result = C::one();
    let mut b = base.clone();
    while e > 0 {
        if e & 1 == 1 {
            result = result * b.clone();
        }
        e >>= 1;
        if e > 0 {
            b = b.clone() * b;
        }
    }
    result
}

/// Horner over sparse ascending exponents: `sum c_k x^{e_k}`.
fn horner_sparse<'a, C: Coeff>(items: impl DoubleEndedIterator<Item = (u32, &'a C)>, x: &C) -> C {
    let mut acc: Option<C> = None;
    let mut prev_exp = 0u32;
    for (e, c) in items.rev() {
        acc = Some(match acc {
            None => c.clone(),
            Some(a) => a * pow_ring(x, prev_exp - e) + c.clone(),
        });
        prev_exp = e;
    }
    match acc {
        None => C::zero(),
        Some(a) => a * pow_ring(x, prev_exp),
    }
}

impl<C: Coeff> Add for &BivarPoly<C> {
    type Output = BivarPoly<C>;
    fn add(self, rhs: Self) -> BivarPoly<C> {
        let mut out = self.clone();
        for (&(i, j), c) in &rhs.terms {
            out.add_term(i, j, c.clone());
        }
        out
    }
}

impl<C: Coeff> Sub for &BivarPoly<C> {
    type Output = BivarPoly<C>;
    fn sub(self, rhs: Self) -> BivarPoly<C> {
        let mut out = self.clone();
        for (&(i, j), c) in &rhs.terms {
            out.add_term(i, j, -c.clone());
        }
        out
    }
}

impl<C: Coeff> Mul for &BivarPoly<C> {
    type Output = BivarPoly<C>;
    fn mul(self, rhs: Self) -> BivarPoly<C> {
        let mut out = BivarPoly::zero();
        for (&(i, j), a) in &self.terms {
            for (&(k, l), b) in &rhs.terms {
                out.add_term(i + k, j + l, a.clone() * b.clone());
            }
        }
        out
    }
}

impl<C: Coeff> Neg for &BivarPoly<C> {
    type Output = BivarPoly<C>;
    fn neg(self) -> BivarPoly<C> {
        self.map_coeffs(|c| -c.clone())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl<C: Coeff> $tr for BivarPoly<C> {
            type Output = BivarPoly<C>;
            fn $m(self, rhs: Self) -> BivarPoly<C> {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl<C: Coeff> Neg for BivarPoly<C> {
    type Output = BivarPoly<C>;
    fn neg(self) -> BivarPoly<C> {
        -&self
    }
}

impl<C: Coeff> fmt::Display for BivarPoly<C> {
    /// Writes the text format accepted by [`str::parse`], highest total degree first.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut keys: Vec<_> = self.terms.keys().copied().collect();
        keys.sort_by(|a, b| (b.0 + b.1).cmp(&(a.0 + a.1)).then(b.0.cmp(&a.0)));
        for (n, (i, j)) in keys.into_iter().enumerate() {
            let lit = self.terms[&(i, j)].to_literal();
            let (negative, body) = match lit.strip_prefix('-') {
                Some(rest) => (true, rest.to_string()),
                None => (false, lit),
            };
            match (n, negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let mut factors: Vec<String> = Vec::new();
            if body != "1" || (i == 0 && j == 0) {
                factors.push(body);
            }
            for (name, e) in [("x1", i), ("x2", j)] {
                match e {
                    0 => {}
                    1 => factors.push(name.to_string()),
                    _ => factors.push(format!("{name}^{e}")),
                }
            }
            f.write_str(&factors.join("*"))?;
        }
        Ok(())
    }
}

impl<C: Coeff> fmt::Debug for BivarPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BivarPoly({self})")
    }
}
