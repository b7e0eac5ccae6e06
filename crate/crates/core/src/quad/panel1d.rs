use num_complex::Complex;

use super::amplitude::Weight1;
use super::gauss::{panel_rule, PANEL_ORDER};
use super::{QuadConfig, QuadError, QuadResult, MIN_TOL};
use crate::phase::Phase1;
use crate::scalar::Real;

struct Ctx<'a, T: Real, P, W> {
    phase: &'a P,
    weight: &'a W,
    lambda: T,
    nodes: [T; PANEL_ORDER],
    weights: [T; PANEL_ORDER],
    theta: T,
    amp_variation: T,
    density: T,
    weight_sup: T,
    min_width: T,
    accepted: usize,
    max_panels: usize,
}

impl<T: Real, P: Phase1<T>, W: Weight1<T>> Ctx<'_, T, P, W> {
    fn rule(&self, a: T, b: T) -> Complex<T> {
        let half = T::lit(0.5);
        let (c, h) = ((a + b) * half, (b - a) * half);
        let mut re = T::zero();
        let mut im = T::zero();
        for k in 0..PANEL_ORDER {
            let x = c + h * self.nodes[k];
            let w = self.weight.value(x);
            if w == T::zero() {
                continue;
            }
            let (s, co) = (self.lambda * self.phase.value(x)).sin_cos();
            re = re + self.weights[k] * w * co;
            im = im + self.weights[k] * w * s;
        }
        Complex::new(re * h, im * h)
    }

    fn needs_split(&self, a: T, b: T) -> bool {
        let half = T::lit(0.5);
        let xs = [a, (a + b) * half, b];
        let width = b - a;
        let mut fmin = T::infinity();
        let mut fmax = T::neg_infinity();
        let mut amin = T::infinity();
        let mut amax = T::neg_infinity();
        let mut slope = T::zero();
        for &x in &xs {
            let f = self.phase.value(x);
            let w = self.weight.value(x);
            fmin = fmin.min(f);
            fmax = fmax.max(f);
            amin = amin.min(w);
            amax = amax.max(w);
            slope = slope.max(self.phase.derivative(x).abs() * width);
        }
        let range = (fmax - fmin).max(slope) * self.lambda.abs();
        !(range <= self.theta) || !(amax - amin <= self.amp_variation * self.weight_sup)
    }

    fn panel(&mut self, a: T, b: T, known: Option<Complex<T>>) -> Result<(Complex<T>, T), QuadError> {
        let zero = Complex::new(T::zero(), T::zero());
        let sup = self.weight.sup_on(a, b);
        if sup == T::zero() {
            return Ok((zero, T::zero()));
        }
        let width = b - a;
        let local_tol = self.density * width;
        if sup * width <= T::lit(1e-3) * local_tol {
            return Ok((zero, sup * width));
        }
        let mid = (a + b) * T::lit(0.5);
        let tiny = width <= self.min_width;
        if known.is_none() && !tiny && self.needs_split(a, b) {
            let (v1, e1) = self.panel(a, mid, None)?;
            let (v2, e2) = self.panel(mid, b, None)?;
            return Ok((v1 + v2, e1 + e2));
        }
        let parent = known.unwrap_or_else(|| self.rule(a, b));
        let left = self.rule(a, mid);
        let right = self.rule(mid, b);
        let refined = left + right;
        let error = (parent - refined).norm();
        if error <= local_tol || tiny {
            self.accepted += 1;
            if self.accepted > self.max_panels {
                return Err(QuadError::BudgetExceeded {
                    max_panels: self.max_panels,
                });
            }
            return Ok((refined, error));
        }
        let (v1, e1) = self.panel(a, mid, Some(left))?;
        let (v2, e2) = self.panel(mid, b, Some(right))?;
        Ok((v1 + v2, e1 + e2))
    }
}

/// `\int w(x) exp(i lambda phi(x)) dx` over the support interval of `w`.
pub fn integrate_1d<T, P, W>(phase: &P, weight: &W, lambda: T, tol: T) -> Result<QuadResult<T>, QuadError>
where
    T: Real,
    P: Phase1<T>,
    W: Weight1<T>,
{
    integrate_1d_with(phase, weight, lambda, tol, &QuadConfig::default())
}

/// [`integrate_1d`] with explicit configuration; runs on the calling thread.
pub fn integrate_1d_with<T, P, W>(
    phase: &P,
    weight: &W,
    lambda: T,
    tol: T,
    cfg: &QuadConfig,
) -> Result<QuadResult<T>, QuadError>
where
    T: Real,
    P: Phase1<T>,
    W: Weight1<T>,
{
    if !(tol.as_f64() >= MIN_TOL) {
        return Err(QuadError::InvalidTolerance { tol: tol.as_f64() });
    }
    if !lambda.is_finite() {
        return Err(QuadError::NonFinite);
    }
    let (a, b) = weight.support();
    let (nodes, weights) = panel_rule::<T>();
    let mut ctx = Ctx {
        phase,
        weight,
        lambda,
        nodes,
        weights,
        theta: T::lit(cfg.theta),
        amp_variation: T::lit(cfg.amp_variation),
        density: tol / (b - a),
        weight_sup: weight.sup_on(a, b),
        min_width: (b - a) * T::lit(cfg.min_relative_width),
        accepted: 0,
        max_panels: cfg.max_panels,
    };
    let (value, error) = ctx.panel(a, b, None)?;
    if !(value.re.is_finite() && value.im.is_finite()) {
        return Err(QuadError::NonFinite);
    }
    Ok(QuadResult {
        value,
        abs_error_estimate: error,
        panels: ctx.accepted,
    })
}
