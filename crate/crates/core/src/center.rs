//! Shift of the expansion point that removes the `y1^2 y2` and `y1 y2^2`
//! Taylor coefficients.

use thiserror::Error;

use crate::phase::{DifferentiationFailure, Phase2};
use crate::scalar::Real;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CenterError {
    #[error("NoConvergence: {iterations} iterations, best residual {residual:e}")]
    NoConvergence { iterations: usize, residual: f64 },
    #[error("SingularJacobian: condition number {condition:e}")]
    SingularJacobian { condition: f64 },
    #[error(transparent)]
    DifferentiationFailure(#[from] DifferentiationFailure),
}

/// Condition numbers above this are treated as singular.
pub const MAX_CONDITION: f64 = 1e12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CenterConfig {
    pub tol: f64,
    pub max_iter: usize,
    /// Iterates are kept in `[-search_box, search_box]^2`.
    pub search_box: f64,
    /// Step halvings before giving up on a Newton direction.
    pub max_halvings: usize,
}

impl Default for CenterConfig {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            max_iter: 50,
            search_box: 0.25,
            max_halvings: 20,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CenterResult<T> {
    pub z: [T; 2],
    pub iterations: usize,
    pub residual: T,
}

fn factorial(n: u32) -> f64 {
    (1..=n).map(f64::from).product()
}

/// Taylor coefficient of `y1^i y2^j` in `phase(z + y)`.
fn taylor_coeff<T: Real, P: Phase2<T> + ?Sized>(
    phase: &P,
    exact: Option<&crate::poly::BivarPoly<T>>,
    z: [T; 2],
    (i, j): (u32, u32),
) -> Result<T, DifferentiationFailure> {
    match exact {
        Some(p) => Ok(p.derivative((i, j)).eval(z) / T::lit(factorial(i) * factorial(j))),
        None => Ok(phase.derivative(z, (i, j))? / T::lit(factorial(i) * factorial(j))),
    }
}

/// `(alpha21, alpha12)`: coefficients of `y1^2 y2` and `y1 y2^2` in `phase(z + y)`.
pub fn mixed_cubic_coeffs<T: Real, P: Phase2<T> + ?Sized>(phase: &P, z: [T; 2]) -> Result<(T, T), DifferentiationFailure> {
    let exact = phase.to_polynomial();
    Ok((
        taylor_coeff(phase, exact.as_ref(), z, (2, 1))?,
        taylor_coeff(phase, exact.as_ref(), z, (1, 2))?,
    ))
}

/// [`newton_center_with`] with the default box and damping.
pub fn newton_center<T: Real, P: Phase2<T> + ?Sized>(
    phase: &P,
    z0: [T; 2],
    tol: f64,
    max_iter: usize,
) -> Result<CenterResult<T>, CenterError> {
    newton_center_with(
        phase,
        z0,
        &CenterConfig {
            tol,
            max_iter,
            ..CenterConfig::default()
        },
    )
}

/// Damped Newton iteration on `(alpha21, alpha12)(z) = 0`.
///
/// The Jacobian is `[[3 c31, 2 c22], [2 c22, 3 c13]]` in the quartic Taylor
/// coefficients at the current iterate. A step is halved until the residual
/// decreases; iterates are clamped to the search box.
pub fn newton_center_with<T: Real, P: Phase2<T> + ?Sized>(
    phase: &P,
    z0: [T; 2],
    cfg: &CenterConfig,
) -> Result<CenterResult<T>, CenterError> {
    let exact = phase.to_polynomial();
    let exact = exact.as_ref();
    let residual_at = |z: [T; 2]| -> Result<(T, T, T), DifferentiationFailure> {
        let a = taylor_coeff(phase, exact, z, (2, 1))?;
        let b = taylor_coeff(phase, exact, z, (1, 2))?;
        Ok((a, b, a.hypot(b)))
    };
    let tol = T::lit(cfg.tol);
    let bound = T::lit(cfg.search_box);
    let clamp = |z: [T; 2]| [z[0].max(-bound).min(bound), z[1].max(-bound).min(bound)];

    let mut z = z0;
    let (mut a, mut b, mut res) = residual_at(z)?;
    for iteration in 0..cfg.max_iter {
        if res <= tol {
            return Ok(CenterResult {
                z,
                iterations: iteration,
                residual: res,
            });
        }
        let c31 = taylor_coeff(phase, exact, z, (3, 1))?;
        let c22 = taylor_coeff(phase, exact, z, (2, 2))?;
        let c13 = taylor_coeff(phase, exact, z, (1, 3))?;
        let (j11, j12, j22) = (T::lit(3.0) * c31, T::lit(2.0) * c22, T::lit(3.0) * c13);
        let condition = condition_number(j11.as_f64(), j12.as_f64(), j22.as_f64());
        if !(condition <= MAX_CONDITION) {
            return Err(CenterError::SingularJacobian { condition });
        }
        let det = j11 * j22 - j12 * j12;
        let step = [-(j22 * a - j12 * b) / det, -(j11 * b - j12 * a) / det];
        let mut t = T::one();
        let mut accepted = false;
        for _ in 0..=cfg.max_halvings {
            let trial = clamp([z[0] + t * step[0], z[1] + t * step[1]]);
            let (ta, tb, tr) = residual_at(trial)?;
            if tr < res {
                z = trial;
                (a, b, res) = (ta, tb, tr);
                accepted = true;
                break;
            }
            t = t * T::lit(0.5);
        }
        if !accepted {
            return Err(CenterError::NoConvergence {
                iterations: iteration + 1,
                residual: res.as_f64(),
            });
        }
    }
    if res <= tol {
        return Ok(CenterResult {
            z,
            iterations: cfg.max_iter,
            residual: res,
        });
    }
    Err(CenterError::NoConvergence {
        iterations: cfg.max_iter,
        residual: res.as_f64(),
    })
}

/// Ratio of singular values of the symmetric matrix `[[a, b], [b, c]]`.
fn condition_number(a: f64, b: f64, c: f64) -> f64 {
    let mean = 0.5 * (a + c);
    let radius = (0.25 * (a - c) * (a - c) + b * b).sqrt();
    let (l1, l2) = ((mean + radius).abs(), (mean - radius).abs());
    let (big, small) = (l1.max(l2), l1.min(l2));
    if small == 0.0 {
        f64::INFINITY
    } else {
        big / small
    }
}
