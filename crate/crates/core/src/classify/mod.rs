//! Binary quartic forms: roots on the circle, normal forms, oscillation
//! type and versality ranks.

mod reduce;
mod roots;
mod versality;

use thiserror::Error;

use crate::poly::BivarPoly;

pub use reduce::{reduce_to_normal_form, TOL_NF};
pub use roots::{circle_roots, CircleRoot};
pub use versality::{versality_check, VersalityReport, RANK_THRESHOLD};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ClassifyError {
    #[error("NotQuartic: expected a nonzero homogeneous polynomial of degree 4")]
    NotQuartic,
    #[error("IllConditioned: root cluster near angle {angle:.6} cannot be resolved at the given tolerance")]
    IllConditioned { angle: f64 },
    #[error("MultiplicityTooHigh: root at angle {angle:.6} has multiplicity {multiplicity}")]
    MultiplicityTooHigh { angle: f64, multiplicity: u32 },
    #[error("ReductionFailed: no normal form found (best residual {residual:.3e})")]
    ReductionFailed { residual: f64 },
}

/// `a40 x1^4 + a31 x1^3 x2 + a22 x1^2 x2^2 + a13 x1 x2^3 + a04 x2^4`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuarticForm {
    pub a40: f64,
    pub a31: f64,
    pub a22: f64,
    pub a13: f64,
    pub a04: f64,
}

impl QuarticForm {
    pub fn new(a40: f64, a31: f64, a22: f64, a13: f64, a04: f64) -> Self {
        Self { a40, a31, a22, a13, a04 }
    }

    /// `x1^4 + mu x1^2 x2^2 + x2^4`.
    pub fn mu(mu: f64) -> Self {
        Self::new(1.0, 0.0, mu, 0.0, 1.0)
    }

    /// `x1^2 (x1^2 + x2^2)`.
    pub fn degen_plus() -> Self {
        Self::new(1.0, 0.0, 1.0, 0.0, 0.0)
    }

    /// `x1^2 (x1^2 - x2^2)`.
    pub fn degen_minus() -> Self {
        Self::new(1.0, 0.0, -1.0, 0.0, 0.0)
    }

    pub fn coeffs(&self) -> [f64; 5] {
        [self.a40, self.a31, self.a22, self.a13, self.a04]
    }

    pub fn from_coeffs(c: [f64; 5]) -> Self {
        Self::new(c[0], c[1], c[2], c[3], c[4])
    }

    /// Fails unless `p` is a nonzero form of degree exactly 4.
    pub fn from_poly(p: &BivarPoly<f64>) -> Result<Self, ClassifyError> {
        if p.is_zero() || !p.is_homogeneous(4) {
            return Err(ClassifyError::NotQuartic);
        }
        Ok(Self::new(p.coeff(4, 0), p.coeff(3, 1), p.coeff(2, 2), p.coeff(1, 3), p.coeff(0, 4)))
    }

    pub fn to_poly(&self) -> BivarPoly<f64> {
        BivarPoly::from_terms((0..5).map(|k| (4 - k as u32, k as u32, self.coeffs()[k])))
    }

    pub fn eval(&self, x: [f64; 2]) -> f64 {
        let [x1, x2] = x;
        let c = self.coeffs();
        (0..5).map(|k| c[k] * x1.powi(4 - k as i32) * x2.powi(k as i32)).sum()
    }

    /// `l1` norm of the coefficient vector.
    pub fn norm1(&self) -> f64 {
        self.coeffs().iter().map(|c| c.abs()).sum()
    }

    /// Coefficients of `f(M u)` for `M` in row-major order.
    pub fn pull_back(&self, m: [[f64; 2]; 2]) -> Self {
        // (p x1 + q x2) with x = M u: x1 = m00 u1 + m01 u2, x2 = m10 u1 + m11 u2
        let [[a, b], [c, d]] = m;
        let mut out = [0.0; 5];
        let coeffs = self.coeffs();
        for k in 0..5 {
            if coeffs[k] == 0.0 {
                continue;
            }
            // x1^{4-k} x2^k expanded as a polynomial in (u1, u2), coefficient of u1^{4-n} u2^n
            let mut poly = [0.0; 5];
            poly[0] = 1.0;
            let mut deg = 0;
            for _ in 0..(4 - k) {
                poly = mul_linear(poly, deg, a, b);
                deg += 1;
            }
            for _ in 0..k {
                poly = mul_linear(poly, deg, c, d);
                deg += 1;
            }
            for n in 0..5 {
                out[n] += coeffs[k] * poly[n];
            }
        }
        Self::from_coeffs(out)
    }

    pub fn scale(&self, k: f64) -> Self {
        Self::from_coeffs(self.coeffs().map(|c| c * k))
    }
}

/// Multiply a binary form of degree `deg` (coefficient `n` on `u1^{deg-n} u2^n`)
/// by `p u1 + q u2`.
fn mul_linear(poly: [f64; 5], deg: usize, p: f64, q: f64) -> [f64; 5] {
    let mut out = [0.0; 5];
    for n in 0..=deg {
        out[n] += p * poly[n];
        out[n + 1] += q * poly[n];
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NormalKind {
    /// `u1^4 + mu u1^2 u2^2 + u2^4`
    Mu(f64),
    /// `u1^2 (u1^2 + u2^2)`
    DegenPlus,
    /// `u1^2 (u1^2 - u2^2)`
    DegenMinus,
}

impl NormalKind {
    pub fn representative(&self) -> QuarticForm {
        match *self {
            NormalKind::Mu(mu) => QuarticForm::mu(mu),
            NormalKind::DegenPlus => QuarticForm::degen_plus(),
            NormalKind::DegenMinus => QuarticForm::degen_minus(),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            NormalKind::Mu(_) => "Mu",
            NormalKind::DegenPlus => "DegenPlus",
            NormalKind::DegenMinus => "DegenMinus",
        }
    }
}

/// `f(transform u) / scale` equals the representative of `kind`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormalForm {
    pub kind: NormalKind,
    pub transform: [[f64; 2]; 2],
    pub scale: f64,
}

impl NormalForm {
    /// Largest coefficient mismatch between `f(transform u) / scale` and the representative.
    pub fn mismatch(&self, f: &QuarticForm) -> f64 {
        let got = f.pull_back(self.transform).scale(1.0 / self.scale);
        let want = self.kind.representative();
        got.coeffs()
            .iter()
            .zip(want.coeffs())
            .map(|(g, w)| (g - w).abs())
            .fold(0.0, f64::max)
    }
}

/// Leading decay exponent and log power of `J(lambda)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OscillationType {
    pub beta: f64,
    pub p: u32,
}

/// `Mu(mu)` with `mu^2 != 4` decays like `lambda^{-1/2}`; `mu^2 = 4` and the
/// double-root families carry one power of `ln lambda`.
pub fn oscillation_type(nf: &NormalForm) -> OscillationType {
    let log_case = match nf.kind {
        NormalKind::Mu(mu) => (mu * mu - 4.0).abs() <= TOL_NF * (1.0 + mu * mu),
        NormalKind::DegenPlus | NormalKind::DegenMinus => true,
    };
    OscillationType {
        beta: -0.5,
        p: u32::from(log_case),
    }
}
