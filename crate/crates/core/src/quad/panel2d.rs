use std::sync::atomic::{AtomicUsize, Ordering};

use num_complex::Complex;
use rayon::prelude::*;

use super::amplitude::{Rect, Weight2};
use super::gauss::{panel_rule, PANEL_ORDER};
use super::{QuadConfig, QuadError, QuadResult, MIN_TOL};
use crate::phase::Phase2;
use crate::poly::CompiledPoly;
use crate::scalar::Real;

struct Ctx<'a, T: Real, P, W> {
    phase: &'a P,
    weight: &'a W,
    lambda: T,
    nodes: [T; PANEL_ORDER],
    weights: [T; PANEL_ORDER],
    theta: T,
    amp_variation: T,
    /// absolute error allowed per unit area
    density: T,
    weight_sup: T,
    min_width: T,
    accepted: &'a AtomicUsize,
    max_panels: usize,
}

#[derive(Clone, Copy)]
struct Partial<T> {
    value: Complex<T>,
    error: T,
}

impl<T: Real> Partial<T> {
    fn zero() -> Self {
        Self {
            value: Complex::new(T::zero(), T::zero()),
            error: T::zero(),
        }
    }

    fn add(self, o: Self) -> Self {
        Self {
            value: self.value + o.value,
            error: self.error + o.error,
        }
    }
}

impl<T: Real, P: Phase2<T>, W: Weight2<T>> Ctx<'_, T, P, W> {
    /// Tensor Gauss-Legendre sum over one panel.
    fn rule(&self, r: &Rect<T>) -> Complex<T> {
        let half = T::lit(0.5);
        let (cx, cy) = ((r.x0 + r.x1) * half, (r.y0 + r.y1) * half);
        let (hx, hy) = (r.width() * half, r.height() * half);
        let mut re = T::zero();
        let mut im = T::zero();
        for a in 0..PANEL_ORDER {
            let x1 = cx + hx * self.nodes[a];
            let mut row_re = T::zero();
            let mut row_im = T::zero();
            for b in 0..PANEL_ORDER {
                let x = [x1, cy + hy * self.nodes[b]];
                let w = self.weight.value(x);
                if w == T::zero() {
                    continue;
                }
                let (s, c) = (self.lambda * self.phase.value(x)).sin_cos();
                row_re = row_re + self.weights[b] * w * c;
                row_im = row_im + self.weights[b] * w * s;
            }
            re = re + self.weights[a] * row_re;
            im = im + self.weights[a] * row_im;
        }
        Complex::new(re * hx * hy, im * hx * hy)
    }

    /// Whether the panel is resolvable by one tensor rule: phase range and
    /// weight variation from a 3 x 3 sample.
    fn needs_split(&self, r: &Rect<T>) -> bool {
        let half = T::lit(0.5);
        let xs = [r.x0, (r.x0 + r.x1) * half, r.x1];
        let ys = [r.y0, (r.y0 + r.y1) * half, r.y1];
        let (w, h) = (r.width(), r.height());
        let mut fmin = T::infinity();
        let mut fmax = T::neg_infinity();
        let mut amin = T::infinity();
        let mut amax = T::neg_infinity();
        let mut slope = T::zero();
        for &x1 in &xs {
            for &x2 in &ys {
                let f = self.phase.value([x1, x2]);
                let g = self.phase.gradient([x1, x2]);
                let a = self.weight.amplitude_value([x1, x2]);
                fmin = fmin.min(f);
                fmax = fmax.max(f);
                amin = amin.min(a);
                amax = amax.max(a);
                slope = slope.max(g[0].abs() * w + g[1].abs() * h);
            }
        }
        let range = (fmax - fmin).max(slope) * self.lambda.abs();
        !(range <= self.theta) || !(amax - amin <= self.amp_variation * self.weight_sup)
    }

    fn panel(&self, r: Rect<T>, known: Option<Complex<T>>) -> Result<Partial<T>, QuadError> {
        let sup = self.weight.sup_on(&r);
        if sup == T::zero() {
            return Ok(Partial::zero());
        }
        let area = r.area();
        let local_tol = self.density * area;
        if sup * area <= T::lit(1e-3) * local_tol {
            return Ok(Partial {
                value: Complex::new(T::zero(), T::zero()),
                error: sup * area,
            });
        }
        let tiny = r.width().max(r.height()) <= self.min_width;
        if known.is_none() && !tiny && self.needs_split(&r) {
            let mut acc = Partial::zero();
            for q in r.quadrants() {
                acc = acc.add(self.panel(q, None)?);
            }
            return Ok(acc);
        }
        let parent = match known {
            Some(v) => v,
            None => self.rule(&r),
        };
        let quads = r.quadrants();
        let children = quads.map(|q| self.rule(&q));
        let refined = children[0] + children[1] + children[2] + children[3];
        let error = (parent - refined).norm();
        if error <= local_tol || tiny {
            let n = self.accepted.fetch_add(1, Ordering::Relaxed) + 1;
            if n > self.max_panels {
                return Err(QuadError::BudgetExceeded {
                    max_panels: self.max_panels,
                });
            }
            return Ok(Partial { value: refined, error });
        }
        let mut acc = Partial::zero();
        for (q, c) in quads.into_iter().zip(children) {
            acc = acc.add(self.panel(q, Some(c))?);
        }
        Ok(acc)
    }
}

/// `\int w(x) exp(i lambda phi(x)) dx` over the support rectangle of `w`.
pub fn integrate_2d<T, P, W>(phase: &P, weight: &W, lambda: T, tol: T) -> Result<QuadResult<T>, QuadError>
where
    T: Real,
    P: Phase2<T>,
    W: Weight2<T>,
{
    integrate_2d_with(phase, weight, lambda, tol, &QuadConfig::default())
}

/// [`integrate_2d`] with explicit configuration.
///
/// The support rectangle is cut into `cfg.tiles^2` tiles processed in
/// parallel; each tile is refined depth-first and the tile results are summed
/// in tile order, so the value does not depend on the thread schedule.
pub fn integrate_2d_with<T, P, W>(
    phase: &P,
    weight: &W,
    lambda: T,
    tol: T,
    cfg: &QuadConfig,
) -> Result<QuadResult<T>, QuadError>
where
    T: Real,
    P: Phase2<T>,
    W: Weight2<T>,
{
    if !(tol.as_f64() >= MIN_TOL) {
        return Err(QuadError::InvalidTolerance { tol: tol.as_f64() });
    }
    if !lambda.is_finite() {
        return Err(QuadError::NonFinite);
    }
    match phase.to_polynomial() {
        Some(p) => run(&CompiledPoly::new(&p), weight, lambda, tol, cfg),
        None => run(phase, weight, lambda, tol, cfg),
    }
}

fn run<T, P, W>(phase: &P, weight: &W, lambda: T, tol: T, cfg: &QuadConfig) -> Result<QuadResult<T>, QuadError>
where
    T: Real,
    P: Phase2<T>,
    W: Weight2<T>,
{
    let domain = weight.support();
    let (nodes, weights) = panel_rule::<T>();
    let accepted = AtomicUsize::new(0);
    let ctx = Ctx {
        phase,
        weight,
        lambda,
        nodes,
        weights,
        theta: T::lit(cfg.theta),
        amp_variation: T::lit(cfg.amp_variation),
        density: tol / domain.area(),
        weight_sup: weight.sup_on(&domain),
        min_width: domain.width().max(domain.height()) * T::lit(cfg.min_relative_width),
        accepted: &accepted,
        max_panels: cfg.max_panels,
    };
    let n = cfg.tiles.max(1);
    let (dx, dy) = (domain.width() / T::count(n), domain.height() / T::count(n));
    let tiles: Vec<Rect<T>> = (0..n * n)
        .map(|k| {
            let (a, b) = (k / n, k % n);
            Rect::new(
                domain.x0 + dx * T::count(a),
                if a + 1 == n { domain.x1 } else { domain.x0 + dx * T::count(a + 1) },
                domain.y0 + dy * T::count(b),
                if b + 1 == n { domain.y1 } else { domain.y0 + dy * T::count(b + 1) },
            )
        })
        .collect();
    let parts: Vec<Result<Partial<T>, QuadError>> = tiles.par_iter().map(|t| ctx.panel(*t, None)).collect();
    let mut total = Partial::zero();
    for p in parts {
        total = total.add(p?);
    }
    if !(total.value.re.is_finite() && total.value.im.is_finite()) {
        return Err(QuadError::NonFinite);
    }
    Ok(QuadResult {
        value: total.value,
        abs_error_estimate: total.error,
        panels: accepted.load(Ordering::Relaxed),
    })
}
