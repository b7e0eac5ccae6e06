use super::{falling_factorial, BivarPoly, CompiledPoly};
use crate::scalar::Coeff;

/// The closed square `[-w, w]^2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Square {
    half_width: f64,
}

impl Square {
    /// `None` unless `half_width` is finite and positive.
    pub fn new(half_width: f64) -> Option<Self> {
        (half_width.is_finite() && half_width > 0.0).then_some(Self { half_width })
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub fn contains(&self, x: [f64; 2]) -> bool {
        x[0].abs() <= self.half_width && x[1].abs() <= self.half_width
    }
}

/// Both sides of a `C^N` norm computation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CNormReport {
    /// Coefficient-sum upper bound, valid on the whole square.
    pub bound: f64,
    /// Largest value of `sum |D^a p|` over the sample lattice.
    pub lattice_max: f64,
}

/// Multi-indices `a` with `|a| <= n`.
fn orders(n: u32) -> impl Iterator<Item = (u32, u32)> {
    (0..=n).flat_map(move |t| (0..=t).map(move |a| (a, t - a)))
}

/// Rigorous upper bound for `max_{square} sum_{|a| <= n} |D^a p|`.
///
/// Uses `|D^a x^m| <= m!/(m-a)! w^{|m|-|a|}` on the square, summed over terms
/// and multi-indices, then inflated slightly to absorb rounding.
fn coefficient_bound<C: Coeff>(p: &BivarPoly<C>, n: u32, w: f64) -> f64 {
    let mut total = 0.0;
    for ((i, j), c) in p.terms() {
        let c = c.abs_f64();
        for (a, b) in orders(n) {
            let k = falling_factorial(i, a) * falling_factorial(j, b);
            if k > 0 {
                total += c * k as f64 * w.powi((i - a + j - b) as i32);
            }
        }
    }
    total * (1.0 + 1e-12)
}

/// `C^n` norm of `p` on the square: coefficient bound plus lattice maximum.
///
/// `grid` is the number of lattice points per side, at least 16.
pub fn c_norm_report<C: Coeff>(p: &BivarPoly<C>, n: u32, square: &Square, grid: usize) -> CNormReport {
    let bound = coefficient_bound(p, n, square.half_width);
    let pf = p.to_f64();
    let derivs: Vec<CompiledPoly<f64>> = orders(n)
        .map(|o| pf.derivative(o))
        .filter(|d| !d.is_zero())
        .map(|d| CompiledPoly::new(&d))
        .collect();
    let grid = grid.max(16);
    let w = square.half_width;
    let step = 2.0 * w / (grid - 1) as f64;
    let mut lattice_max = 0.0_f64;
    for a in 0..grid {
        let x1 = -w + step * a as f64;
        for b in 0..grid {
            let x2 = -w + step * b as f64;
            let s: f64 = derivs.iter().map(|d| d.eval([x1, x2]).abs()).sum();
            lattice_max = lattice_max.max(s);
        }
    }
    CNormReport { bound, lattice_max }
}

/// The rigorous `C^n` bound of `p` on the square.
pub fn c_norm<C: Coeff>(p: &BivarPoly<C>, n: u32, square: &Square, grid: usize) -> f64 {
    c_norm_report(p, n, square, grid).bound
}
