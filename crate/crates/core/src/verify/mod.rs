//! Perturbation sampling, decay fits, uniform sweeps, the log-case limit
//! and the Airy envelope.

mod fit;
mod limits;
mod sweep;

use thiserror::Error;

pub use fit::{decay_fit, DecayFit, MIN_DECADES, MIN_POINTS};
pub use limits::{airy_sweep, limit_check, limit_check_with, AiryPoint, AirySweep, LimitCheck};
pub use sweep::{
    sample_perturbation, uniform_sweep, CrossCheck, SweepConfig, SweepResult, SweepRow, PERTURBATION_DEGREE,
    PERTURBATION_NORM_ORDER,
};

use crate::center::CenterError;
use crate::dyadic::DyadicError;
use crate::phase::DifferentiationFailure;
use crate::quad::QuadError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum VerifyError {
    #[error("InsufficientRange: {points} points over {decades:.3} decades")]
    InsufficientRange { points: usize, decades: f64 },
    #[error("NonPositiveMagnitude: |J| <= 0 at lambda = {lambda}")]
    NonPositiveMagnitude { lambda: f64 },
    #[error("InvalidConfig: {reason}")]
    InvalidConfig { reason: String },
    #[error(transparent)]
    Quad(#[from] QuadError),
    #[error(transparent)]
    Dyadic(#[from] DyadicError),
    #[error(transparent)]
    Center(#[from] CenterError),
    #[error(transparent)]
    DifferentiationFailure(#[from] DifferentiationFailure),
}

/// `n` geometrically spaced points from `lo` to `hi`, endpoints exact.
pub fn geometric_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..n)
            .map(|k| {
                if k == 0 {
                    lo
                } else if k + 1 == n {
                    hi
                } else {
                    lo * (hi / lo).powf(k as f64 / (n - 1) as f64)
                }
            })
            .collect(),
    }
}
