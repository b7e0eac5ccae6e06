use nalgebra::DMatrix;

use super::QuarticForm;
use crate::poly::{Axis, BivarPoly};

/// Singular values below this (after column normalization) count as zero.
pub const RANK_THRESHOLD: f64 = 1e-10;

/// Monomials of total degree at most 3.
const E1: [(u32, u32); 10] = [(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2), (3, 0), (2, 1), (1, 2), (0, 3)];
/// `1, x1, x2, x1^2, x2^2, x1 x2, x1^3, x2^3`.
const B: [(u32, u32); 8] = [(0, 0), (1, 0), (0, 1), (2, 0), (0, 2), (1, 1), (3, 0), (0, 3)];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VersalityReport {
    pub dim_ideal_slice: usize,
    pub dim_b: usize,
    pub dim_intersection: usize,
    pub dim_sum: usize,
    pub is_versal: bool,
}

fn coords(p: &BivarPoly<f64>) -> Vec<f64> {
    E1.iter().map(|&(i, j)| p.coeff(i, j)).collect()
}

fn rank(columns: &[Vec<f64>]) -> usize {
    let cols: Vec<Vec<f64>> = columns
        .iter()
        .filter_map(|c| {
            let n = c.iter().map(|x| x * x).sum::<f64>().sqrt();
            (n > 0.0).then(|| c.iter().map(|x| x / n).collect())
        })
        .collect();
    if cols.is_empty() {
        return 0;
    }
    let m = DMatrix::from_fn(E1.len(), cols.len(), |r, c| cols[c][r]);
    m.svd(false, false)
        .singular_values
        .iter()
        .filter(|&&s| s > RANK_THRESHOLD)
        .count()
}

/// Ranks of `span{d1 f, d2 f}`, `B` and their sum inside the ten-dimensional
/// space of polynomials of degree at most 3.
pub fn versality_check(f: &QuarticForm) -> VersalityReport {
    let p = f.to_poly();
    let ideal = vec![coords(&p.partial(Axis::X1)), coords(&p.partial(Axis::X2))];
    let basis: Vec<Vec<f64>> = B
        .iter()
        .map(|&(i, j)| coords(&BivarPoly::monomial(1.0, i, j)))
        .collect();
    let dim_ideal_slice = rank(&ideal);
    let dim_b = rank(&basis);
    let all: Vec<Vec<f64>> = ideal.into_iter().chain(basis).collect();
    let dim_sum = rank(&all);
    let dim_intersection = dim_ideal_slice + dim_b - dim_sum;
    VersalityReport {
        dim_ideal_slice,
        dim_b,
        dim_intersection,
        dim_sum,
        is_versal: dim_intersection == 0 && dim_sum == E1.len(),
    }
}
