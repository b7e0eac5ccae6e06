use std::sync::Arc;

use super::{BivarPoly, Square};
use crate::phase::{DifferentiationFailure, Phase2, SumPhase};
use crate::scalar::Real;

/// The phase seen from the expansion center, `y -> phase(center + y) - s00`.
#[derive(Clone)]
pub enum LocalPhase<T: Real> {
    /// Exact local polynomial with the constant term removed.
    Polynomial(BivarPoly<T>),
    /// Full phase in the original coordinates; the shift is applied on evaluation.
    General(Arc<dyn Phase2<T>>),
}

impl<T: Real> std::fmt::Debug for LocalPhase<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            LocalPhase::Polynomial(p) => write!(f, "Polynomial({p})"),
            LocalPhase::General(_) => f.write_str("General(..)"),
        }
    }
}

/// Taylor coefficients `s_ij = D^(i,j) phase(center) / (i! j!)` through order
/// three, the quartic part and a remainder bound on the square.
#[derive(Debug, Clone)]
pub struct TaylorData<T: Real> {
    pub center: [T; 2],
    pub s00: T,
    pub s10: T,
    pub s01: T,
    pub s20: T,
    pub s11: T,
    pub s02: T,
    pub s30: T,
    pub s21: T,
    pub s12: T,
    pub s03: T,
    pub quartic_part: BivarPoly<T>,
    /// Bound for `|phase(center + y) - T_4(y)|` over the square.
    pub remainder_bound: T,
    pub local: LocalPhase<T>,
}

impl<T: Real> TaylorData<T> {
    /// Coefficient of `y1^i y2^j` for `i + j <= 3`.
    pub fn s(&self, i: u32, j: u32) -> T {
        match (i, j) {
            (0, 0) => self.s00,
            (1, 0) => self.s10,
            (0, 1) => self.s01,
            (2, 0) => self.s20,
            (1, 1) => self.s11,
            (0, 2) => self.s02,
            (3, 0) => self.s30,
            (2, 1) => self.s21,
            (1, 2) => self.s12,
            (0, 3) => self.s03,
            _ => T::zero(),
        }
    }

    /// The fourth-order Taylor polynomial in `y`, without `s00`.
    pub fn taylor_polynomial(&self) -> BivarPoly<T> {
        let low = BivarPoly::from_terms(
            LOW_ORDERS
                .iter()
                .map(|&(i, j)| (i, j, self.s(i, j))),
        );
        &low + &self.quartic_part
    }

    /// `phase(center + y) - s00`.
    pub fn local_value(&self, y: [T; 2]) -> T {
        match &self.local {
            LocalPhase::Polynomial(p) => p.eval(y),
            LocalPhase::General(g) => g.value([self.center[0] + y[0], self.center[1] + y[1]]) - self.s00,
        }
    }
}

const LOW_ORDERS: [(u32, u32); 9] = [(1, 0), (0, 1), (2, 0), (1, 1), (0, 2), (3, 0), (2, 1), (1, 2), (0, 3)];

fn factorial(n: u32) -> u64 {
    (1..=u64::from(n)).product()
}

/// Taylor data of `f_pi + g_plus_f` about `center`.
///
/// When `g_plus_f` is polynomial the expansion is an exact shift and the
/// remainder bound is the coefficient sum of the degree >= 5 terms over the
/// square seen from `center`. Otherwise derivatives come from
/// [`Phase2::derivative`] and the remainder is the sampled maximum over a
/// 33 x 33 lattice of the square, doubled; that bound is an estimate, not a
/// certificate.
pub fn taylor_data<T: Real>(
    f_pi: &BivarPoly<T>,
    g_plus_f: Arc<dyn Phase2<T>>,
    center: [T; 2],
    square: &Square,
) -> Result<TaylorData<T>, DifferentiationFailure> {
    let w = T::lit(square.half_width());
    if let Some(g) = g_plus_f.to_polynomial() {
        let local = (f_pi + &g).shift(center);
        let s00 = local.coeff(0, 0);
        let r = w + center[0].abs().max(center[1].abs());
        let remainder_bound = local
            .filter_degree(|d| d >= 5)
            .terms()
            .map(|((i, j), c)| c.abs() * r.powi((i + j) as i32))
            .sum::<T>();
        return Ok(TaylorData {
            center,
            s00,
            s10: local.coeff(1, 0),
            s01: local.coeff(0, 1),
            s20: local.coeff(2, 0),
            s11: local.coeff(1, 1),
            s02: local.coeff(0, 2),
            s30: local.coeff(3, 0),
            s21: local.coeff(2, 1),
            s12: local.coeff(1, 2),
            s03: local.coeff(0, 3),
            quartic_part: local.homogeneous_part(4),
            remainder_bound,
            local: LocalPhase::Polynomial(local.filter_degree(|d| d > 0)),
        });
    }

    let coeff = |i: u32, j: u32| -> Result<T, DifferentiationFailure> {
        let exact = f_pi.derivative((i, j)).eval(center);
        let other = g_plus_f.derivative(center, (i, j))?;
        Ok((exact + other) / T::lit((factorial(i) * factorial(j)) as f64))
    };
    let mut quartic_part = BivarPoly::zero();
    for a in 0..=4 {
        quartic_part.add_term(a, 4 - a, coeff(a, 4 - a)?);
    }
    let full: Arc<dyn Phase2<T>> = Arc::new(SumPhase::new(vec![Arc::new(f_pi.clone()), g_plus_f.clone()]));
    let mut data = TaylorData {
        center,
        s00: full.value(center),
        s10: coeff(1, 0)?,
        s01: coeff(0, 1)?,
        s20: coeff(2, 0)?,
        s11: coeff(1, 1)?,
        s02: coeff(0, 2)?,
        s30: coeff(3, 0)?,
        s21: coeff(2, 1)?,
        s12: coeff(1, 2)?,
        s03: coeff(0, 3)?,
        quartic_part,
        remainder_bound: T::zero(),
        local: LocalPhase::General(full),
    };
    let t4 = data.taylor_polynomial();
    let n = 33;
    let mut worst = T::zero();
    for a in 0..n {
        for b in 0..n {
            let x = [
                -w + T::lit(2.0) * w * T::count(a) / T::count(n - 1),
                -w + T::lit(2.0) * w * T::count(b) / T::count(n - 1),
            ];
            let y = [x[0] - center[0], x[1] - center[1]];
            worst = worst.max((data.local_value(y) - t4.eval(y)).abs());
        }
    }
    data.remainder_bound = T::lit(2.0) * worst;
    Ok(data)
}

/// `rho = |s10|^{4/3} + |s01|^{4/3} + s20^2 + s02^2 + s11^2 + s30^4 + s03^4`.
pub fn quasi_distance<T: Real>(t: &TaylorData<T>) -> T {
    let four_thirds = T::lit(4.0 / 3.0);
    t.s10.abs().powf(four_thirds)
        + t.s01.abs().powf(four_thirds)
        + t.s20.powi(2)
        + t.s02.powi(2)
        + t.s11.powi(2)
        + t.s30.powi(4)
        + t.s03.powi(4)
}
