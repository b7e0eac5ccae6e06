use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{decay_fit, geometric_grid, DecayFit, VerifyError};
use crate::center::{newton_center_with, CenterConfig};
use crate::classify::QuarticForm;
use crate::dyadic::{dyadic_integrate, DyadicConfig};
use crate::phase::Phase2;
use crate::poly::{c_norm, taylor_data, BivarPoly, Square};
use crate::quad::{integrate_2d_with, Amplitude};

/// Largest total degree of a sampled perturbation.
pub const PERTURBATION_DEGREE: u32 = 7;
/// Order of the norm the perturbations are measured in.
pub const PERTURBATION_NORM_ORDER: u32 = 8;

/// Random polynomial of degree at most 7 with `c_norm(F, 8, square) = epsilon / 2`.
///
/// Coefficients are uniform in `[-1, 1]` before rescaling; `(seed, id)`
/// selects an independent ChaCha8 stream.
pub fn sample_perturbation(epsilon: f64, square: &Square, seed: u64, id: u64) -> BivarPoly<f64> {
    assert!(epsilon > 0.0, "epsilon must be positive");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(id);
    let mut f = BivarPoly::zero();
    for d in 0..=PERTURBATION_DEGREE {
        for i in (0..=d).rev() {
            f.add_term(i, d - i, rng.gen_range(-1.0..=1.0));
        }
    }
    let norm = c_norm(&f, PERTURBATION_NORM_ORDER, square, 16);
    f.scale(&(0.5 * epsilon / norm))
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    /// Quartic principal part `f_pi`.
    pub f_pi: QuarticForm,
    /// Fixed smooth addition `g`, if any.
    pub g: Option<BivarPoly<f64>>,
    pub epsilon: f64,
    /// Perturbations `0..n`; zero runs the unperturbed phase alone as id 0.
    pub n_perturbations: usize,
    pub lambda_min: f64,
    pub lambda_max: f64,
    pub lambda_points: usize,
    pub seed: u64,
    pub amp_radius: f64,
    pub box_half_width: f64,
    /// Re-center each phase before the decomposition; the origin otherwise.
    pub recenter: bool,
    /// Compare against direct quadrature at the two smallest lambda.
    pub cross_check: bool,
    pub center: CenterConfig,
    pub dyadic: DyadicConfig,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            f_pi: QuarticForm::mu(1.0),
            g: None,
            epsilon: 0.05,
            n_perturbations: 25,
            lambda_min: 1e2,
            lambda_max: 1e4,
            lambda_points: 5,
            seed: 0,
            amp_radius: 0.5,
            box_half_width: 0.5,
            recenter: true,
            cross_check: true,
            center: CenterConfig::default(),
            dyadic: DyadicConfig::default(),
        }
    }
}

impl SweepConfig {
    pub fn validate(&self) -> Result<(), VerifyError> {
        let bad = |reason: &str| Err(VerifyError::InvalidConfig { reason: reason.to_string() });
        if !(self.epsilon > 0.0) {
            return bad("epsilon must be positive");
        }
        if !(self.lambda_min >= 2.0) || !(self.lambda_max >= self.lambda_min) || self.lambda_points == 0 {
            return bad("lambda grid needs 2 <= lambda_min <= lambda_max and at least one point");
        }
        if !(self.amp_radius > 0.0) || !(self.box_half_width > 0.0) {
            return bad("amp_radius and box must be positive");
        }
        if self.amp_radius > self.box_half_width {
            return bad("amplitude support must lie in the box");
        }
        Ok(())
    }

    pub fn lambdas(&self) -> Vec<f64> {
        geometric_grid(self.lambda_min, self.lambda_max, self.lambda_points)
    }

    pub fn amplitude(&self) -> Amplitude<f64> {
        Amplitude::bump([0.0, 0.0], self.amp_radius)
    }

    pub fn square(&self) -> Square {
        Square::new(self.box_half_width).expect("validated box")
    }

    /// `g + F_id`.
    pub fn deformation(&self, id: usize) -> BivarPoly<f64> {
        let g = self.g.clone().unwrap_or_else(BivarPoly::zero);
        if self.n_perturbations == 0 {
            return g;
        }
        &g + &sample_perturbation(self.epsilon, &self.square(), self.seed, id as u64)
    }

    fn ids(&self) -> usize {
        self.n_perturbations.max(1)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub lambda: f64,
    pub pert_id: usize,
    /// `|J|`, NaN for a failed row.
    pub abs_j: f64,
    /// `lambda^{1/2} |J| / (ln(2 + lambda) ||a||_{C^1})`.
    pub normalized: f64,
    pub failure: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CrossCheck {
    pub lambda: f64,
    pub pert_id: usize,
    pub rel_diff: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    /// Sorted by `(lambda, pert_id)`.
    pub rows: Vec<SweepRow>,
    /// Per-lambda maximum of `normalized` over complete columns.
    pub sup_curve: Vec<(f64, f64)>,
    /// Fit of `max_F |J|` against lambda over complete columns.
    pub fit: Result<DecayFit, VerifyError>,
    pub failed: usize,
    pub cross_checks: Vec<CrossCheck>,
}

impl SweepResult {
    /// Largest `normalized` over all rows divided by the median of `sup_curve`.
    pub fn uniformity_ratio(&self) -> f64 {
        let max = self
            .rows
            .iter()
            .filter(|r| r.failure.is_none())
            .map(|r| r.normalized)
            .fold(f64::NEG_INFINITY, f64::max);
        let mut sup: Vec<f64> = self.sup_curve.iter().map(|s| s.1).collect();
        sup.sort_by(f64::total_cmp);
        if sup.is_empty() {
            return f64::NAN;
        }
        let n = sup.len();
        let median = if n % 2 == 1 { sup[n / 2] } else { 0.5 * (sup[n / 2 - 1] + sup[n / 2]) };
        max / median
    }

    pub fn max_cross_check(&self) -> f64 {
        self.cross_checks.iter().map(|c| c.rel_diff).fold(0.0, f64::max)
    }
}

struct RowOutcome {
    abs_j: f64,
    direct: Option<f64>,
}

fn run_row(cfg: &SweepConfig, deformation: &BivarPoly<f64>, lambda: f64, cross: bool) -> Result<RowOutcome, VerifyError> {
    let f_pi = cfg.f_pi.to_poly();
    let full = &f_pi + deformation;
    let z = if cfg.recenter {
        newton_center_with(&full, [0.0, 0.0], &cfg.center)?.z
    } else {
        [0.0, 0.0]
    };
    let rest: Arc<dyn Phase2<f64>> = Arc::new(deformation.clone());
    let t = taylor_data(&f_pi, rest, z, &cfg.square())?;
    let amp = cfg.amplitude();
    let d = dyadic_integrate(&t, &cfg.f_pi, &amp, lambda, &cfg.dyadic)?;
    let value = d.total();
    let direct = if cross {
        let r = integrate_2d_with(&full, &amp, lambda, cfg.dyadic.tol, &cfg.dyadic.quad)?;
        Some((value - r.value).norm() / r.value.norm())
    } else {
        None
    };
    Ok(RowOutcome { abs_j: value.norm(), direct })
}

/// Integrates `f_pi + g + F` for every `(lambda, F)` pair of the grid.
///
/// Rows run in parallel and are collected in `(lambda, pert_id)` order, so
/// the result does not depend on the schedule. A failing row is recorded
/// with its error and excluded, together with its whole lambda column,
/// from `sup_curve` and the fit.
pub fn uniform_sweep(cfg: &SweepConfig) -> Result<SweepResult, VerifyError> {
    cfg.validate()?;
    let lambdas = cfg.lambdas();
    let deformations: Vec<BivarPoly<f64>> = (0..cfg.ids()).map(|id| cfg.deformation(id)).collect();
    let mut cross_lambdas = lambdas.clone();
    cross_lambdas.truncate(2);
    let jobs: Vec<(usize, usize)> = (0..lambdas.len())
        .flat_map(|l| (0..cfg.ids()).map(move |id| (l, id)))
        .collect();
    let amp_norm = cfg.amplitude().c1_norm();
    let outcomes: Vec<(usize, usize, Result<RowOutcome, VerifyError>)> = jobs
        .par_iter()
        .map(|&(l, id)| {
            let cross = cfg.cross_check && l < 2;
            (l, id, run_row(cfg, &deformations[id], lambdas[l], cross))
        })
        .collect();

    let mut rows = Vec::with_capacity(outcomes.len());
    let mut cross_checks = Vec::new();
    let mut failed = 0;
    for (l, id, out) in outcomes {
        let lambda = lambdas[l];
        match out {
            Ok(o) => {
                if let Some(rel_diff) = o.direct {
                    cross_checks.push(CrossCheck {
                        lambda,
                        pert_id: id,
                        rel_diff,
                    });
                }
                rows.push(SweepRow {
                    lambda,
                    pert_id: id,
                    abs_j: o.abs_j,
                    normalized: lambda.sqrt() * o.abs_j / ((2.0 + lambda).ln() * amp_norm),
                    failure: None,
                });
            }
            Err(e) => {
                failed += 1;
                rows.push(SweepRow {
                    lambda,
                    pert_id: id,
                    abs_j: f64::NAN,
                    normalized: f64::NAN,
                    failure: Some(e.to_string()),
                });
            }
        }
    }

    let mut sup_curve = Vec::new();
    let mut sup_abs = Vec::new();
    for &lambda in &lambdas {
        let column: Vec<&SweepRow> = rows.iter().filter(|r| r.lambda == lambda).collect();
        if column.iter().any(|r| r.failure.is_some()) {
            continue;
        }
        sup_curve.push((lambda, column.iter().map(|r| r.normalized).fold(f64::NEG_INFINITY, f64::max)));
        sup_abs.push((lambda, column.iter().map(|r| r.abs_j).fold(f64::NEG_INFINITY, f64::max)));
    }
    Ok(SweepResult {
        rows,
        sup_curve,
        fit: decay_fit(&sup_abs),
        failed,
        cross_checks,
    })
}
