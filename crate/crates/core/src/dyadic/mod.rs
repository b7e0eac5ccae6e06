//! Quasi-homogeneous partition of unity and the ring-by-ring evaluation of
//! `J(lambda)` around a centered expansion point.

mod cutoff;

use num_complex::Complex;
use rayon::prelude::*;
use thiserror::Error;

pub use cutoff::{beta_cutoff, chi, dilate, partition_weights, CutoffProfile};

use crate::classify::QuarticForm;
use crate::phase::{FnPhase, Phase2};
use crate::poly::{quasi_distance, BivarPoly, CompiledPoly, LocalPhase, TaylorData};
use crate::quad::{integrate_2d_with, Amplitude, QuadConfig, QuadError, Rect, Weight2, MIN_TOL};
use crate::scalar::Real;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DyadicError {
    #[error(transparent)]
    Quad(#[from] QuadError),
    #[error("RhoDegenerate: quasi-distance is zero, the high-rho scaling is undefined")]
    RhoDegenerate,
    #[error("InvalidLambda: lambda = {lambda} must be at least 2")]
    InvalidLambda { lambda: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    /// `lambda rho <= 2`: base scale `lambda^{-1/4}`.
    LowRho,
    /// `lambda rho > 2`: base scale `rho^{1/4}`.
    HighRho,
}

impl Regime {
    pub fn name(&self) -> &'static str {
        match self {
            Regime::LowRho => "LowRho",
            Regime::HighRho => "HighRho",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DyadicConfig {
    pub nu0: i32,
    /// `K = ceil(ring_constant * ln lambda)`, capped by `max_rings`.
    pub ring_constant: f64,
    pub max_rings: i32,
    /// Absolute tolerance on the total.
    pub tol: f64,
    /// Override of the automatic regime choice.
    pub force_regime: Option<Regime>,
    pub quad: QuadConfig,
    pub profile: CutoffProfile,
}

impl Default for DyadicConfig {
    fn default() -> Self {
        Self {
            nu0: 2,
            ring_constant: 1.5,
            max_rings: 64,
            tol: 1e-9,
            force_regime: None,
            quad: QuadConfig::default(),
            profile: CutoffProfile,
        }
    }
}

/// Normalized low-order coefficients `sigma_ij = s_ij / rho^{w_ij}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sigma<T> {
    pub s10: T,
    pub s01: T,
    pub s20: T,
    pub s11: T,
    pub s02: T,
    pub s30: T,
    pub s03: T,
}

impl<T: Real> Sigma<T> {
    fn from_taylor(t: &TaylorData<T>, rho: T) -> Self {
        let w = |e: f64| rho.powf(T::lit(e));
        Self {
            s10: t.s10 / w(0.75),
            s01: t.s01 / w(0.75),
            s20: t.s20 / w(0.5),
            s11: t.s11 / w(0.5),
            s02: t.s02 / w(0.5),
            s30: t.s30 / w(0.25),
            s03: t.s03 / w(0.25),
        }
    }

    /// Quasi-distance of the normalized coefficients; 1 up to rounding.
    pub fn quasisphere(&self) -> T {
        let ft = T::lit(4.0 / 3.0);
        self.s10.abs().powf(ft)
            + self.s01.abs().powf(ft)
            + self.s20.powi(2)
            + self.s11.powi(2)
            + self.s02.powi(2)
            + self.s30.powi(4)
            + self.s03.powi(4)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RingDecomposition<T> {
    pub nu0: i32,
    /// Index of the last ring.
    pub k_max: i32,
    pub j0: Complex<T>,
    /// `(k, J_k)` for `k = nu0 + 1 ..= K`.
    pub rings: Vec<(i32, Complex<T>)>,
    pub regime: Regime,
    pub rho: T,
    /// Base length of the substitution `y = base * tau`.
    pub base: T,
    /// `None` when `rho = 0`.
    pub sigma: Option<Sigma<T>>,
    /// Whether ring `K` reaches past the amplitude support, so that the
    /// rings carry all of `J`.
    pub complete: bool,
    /// `||quartic part - f_pi||_1`, the quartic drift caused by the deformation.
    pub quartic_drift: T,
    pub abs_error_estimate: T,
    pub panels: usize,
}

impl<T: Real> RingDecomposition<T> {
    pub fn total(&self) -> Complex<T> {
        self.rings.iter().fold(self.j0, |acc, (_, v)| acc + v)
    }
}

/// Local phase rescaled to a ring: `t -> P(L t) / L^4`.
enum ScaledPhase<T: Real> {
    Poly(CompiledPoly<T>),
    General { local: LocalPhase<T>, center: [T; 2], s00: T, len: T },
}

impl<T: Real> Phase2<T> for ScaledPhase<T> {
    fn value(&self, t: [T; 2]) -> T {
        match self {
            ScaledPhase::Poly(p) => p.eval(t),
            ScaledPhase::General { local, center, s00, len } => {
                let y = [*len * t[0], *len * t[1]];
                let v = match local {
                    LocalPhase::Polynomial(p) => p.eval(y),
                    LocalPhase::General(g) => g.value([center[0] + y[0], center[1] + y[1]]) - *s00,
                };
                v / len.powi(4)
            }
        }
    }

    fn gradient(&self, t: [T; 2]) -> [T; 2] {
        match self {
            ScaledPhase::Poly(p) => p.gradient(t),
            ScaledPhase::General { .. } => FnPhase::new(|x: [T; 2]| self.value(x)).gradient(t),
        }
    }
}

fn scaled_phase<T: Real>(t: &TaylorData<T>, len: T) -> ScaledPhase<T> {
    match &t.local {
        LocalPhase::Polynomial(p) => {
            let q: BivarPoly<T> = p.scale_vars(&len, &len).scale(&(T::one() / len.powi(4)));
            ScaledPhase::Poly(CompiledPoly::from(q))
        }
        LocalPhase::General(_) => ScaledPhase::General {
            local: t.local.clone(),
            center: t.center,
            s00: t.s00,
            len,
        },
    }
}

/// `a(z + L t) * cut(t)` where `cut` is `beta(t)` for the central piece and
/// `beta(t) - beta(delta_2 t)` for a ring.
struct PieceWeight<'a, T: Real> {
    amp: &'a Amplitude<T>,
    center: [T; 2],
    len: T,
    ring: bool,
    profile: CutoffProfile,
    support: Rect<T>,
}

impl<'a, T: Real> PieceWeight<'a, T> {
    fn new(amp: &'a Amplitude<T>, center: [T; 2], len: T, ring: bool, profile: CutoffProfile) -> Option<Self> {
        let outer = T::lit(2f64.powf(0.25));
        let cut = Rect::square([T::zero(), T::zero()], outer);
        let a = amp.support();
        let mapped = Rect::new(
            (a.x0 - center[0]) / len,
            (a.x1 - center[0]) / len,
            (a.y0 - center[1]) / len,
            (a.y1 - center[1]) / len,
        );
        let support = cut.intersect(&mapped)?;
        Some(Self {
            amp,
            center,
            len,
            ring,
            profile,
            support,
        })
    }

    fn cut(&self, t: [T; 2]) -> T {
        if self.ring {
            chi(&self.profile, t)
        } else {
            beta_cutoff(&self.profile, t)
        }
    }
}

impl<T: Real> Weight2<T> for PieceWeight<'_, T> {
    fn value(&self, t: [T; 2]) -> T {
        let c = self.cut(t);
        if c == T::zero() {
            return T::zero();
        }
        let x = [self.center[0] + self.len * t[0], self.center[1] + self.len * t[1]];
        self.amp.value(x) * c
    }

    fn sup_on(&self, r: &Rect<T>) -> T {
        let near = r.clamp([T::zero(), T::zero()]);
        let far = r.farthest([T::zero(), T::zero()]);
        let near2 = near[0] * near[0] + near[1] * near[1];
        let far2 = far[0] * far[0] + far[1] * far[1];
        // both cutoffs vanish beyond 2^{1/4}; a ring also vanishes inside 2^{-1/4}
        if near2 >= T::SQRT_2() || (self.ring && far2 <= T::one() / T::SQRT_2()) {
            return T::zero();
        }
        let mapped = Rect::new(
            self.center[0] + self.len * r.x0,
            self.center[0] + self.len * r.x1,
            self.center[1] + self.len * r.y0,
            self.center[1] + self.len * r.y1,
        );
        self.amp.sup_on(&mapped)
    }

    fn support(&self) -> Rect<T> {
        self.support
    }

    fn amplitude_value(&self, t: [T; 2]) -> T {
        self.amp.value([self.center[0] + self.len * t[0], self.center[1] + self.len * t[1]])
    }
}

/// Ring decomposition of `\int a(x) exp(i lambda phi(x)) dx` around the
/// expansion point of `t`.
///
/// With `y = x - z` and base length `l` (`lambda^{-1/4}` when
/// `lambda rho <= 2`, else `rho^{1/4}`), the substitution `y = l tau` is
/// followed by the partition of unity in `tau`. The central piece and ring
/// `k` are integrated in `t = 2^{-k/4} tau` (the central piece at
/// `k = nu0`), where the phase is `P(L t) / L^4` at frequency
/// `lambda L^4`, `L = l 2^{k/4}`, and the Jacobian is `L^2`.
pub fn dyadic_integrate<T: Real>(
    t: &TaylorData<T>,
    f_pi: &QuarticForm,
    amp: &Amplitude<T>,
    lambda: T,
    cfg: &DyadicConfig,
) -> Result<RingDecomposition<T>, DyadicError> {
    if !(lambda >= T::lit(2.0)) {
        return Err(DyadicError::InvalidLambda { lambda: lambda.as_f64() });
    }
    let rho = quasi_distance(t);
    let regime = match cfg.force_regime {
        Some(r) => r,
        None if lambda * rho <= T::lit(2.0) => Regime::LowRho,
        None => Regime::HighRho,
    };
    let base = match regime {
        Regime::LowRho => lambda.powf(T::lit(-0.25)),
        Regime::HighRho => {
            if rho == T::zero() {
                return Err(DyadicError::RhoDegenerate);
            }
            rho.powf(T::lit(0.25))
        }
    };
    let sigma = (rho > T::zero()).then(|| Sigma::from_taylor(t, rho));

    let nu0 = cfg.nu0;
    let rings_wanted = (cfg.ring_constant * lambda.as_f64().ln()).ceil() as i32;
    let k_max = rings_wanted.min(cfg.max_rings).max(nu0);
    let c = amp.center();
    let reach = (c[0] - t.center[0]).hypot(c[1] - t.center[1]) + amp.radius();
    let complete = base * T::lit(2f64.powf(f64::from(k_max) / 4.0)) >= reach;

    let reference = f_pi.to_poly();
    let quartic_drift = E4
        .iter()
        .map(|&(i, j)| (t.quartic_part.coeff(i, j) - T::lit(reference.coeff(i, j))).abs())
        .sum::<T>();

    let pieces: Vec<i32> = (nu0..=k_max).collect();
    let n_pieces = T::count(pieces.len());
    let results: Vec<Result<(Complex<T>, T, usize), DyadicError>> = pieces
        .par_iter()
        .map(|&k| {
            let len = base * T::lit(2f64.powf(f64::from(k) / 4.0));
            let jac = len * len;
            let weight = match PieceWeight::new(amp, t.center, len, k > nu0, cfg.profile) {
                Some(w) => w,
                None => return Ok((Complex::new(T::zero(), T::zero()), T::zero(), 0)),
            };
            let phase = scaled_phase(t, len);
            let tol = (T::lit(cfg.tol) / (n_pieces * jac)).max(T::lit(MIN_TOL));
            let r = integrate_2d_with(&phase, &weight, lambda * len.powi(4), tol, &cfg.quad)?;
            Ok((r.value * jac, r.abs_error_estimate * jac, r.panels))
        })
        .collect();

    let (s, c0) = (lambda * t.s00).sin_cos();
    let rot = Complex::new(c0, s);
    let mut j0 = Complex::new(T::zero(), T::zero());
    let mut rings = Vec::with_capacity(pieces.len().saturating_sub(1));
    let mut abs_error_estimate = T::zero();
    let mut panels = 0;
    for (&k, r) in pieces.iter().zip(results) {
        let (v, e, p) = r?;
        abs_error_estimate = abs_error_estimate + e;
        panels += p;
        if k == nu0 {
            j0 = v * rot;
        } else {
            rings.push((k, v * rot));
        }
    }
    Ok(RingDecomposition {
        nu0,
        k_max,
        j0,
        rings,
        regime,
        rho,
        base,
        sigma,
        complete,
        quartic_drift,
        abs_error_estimate,
        panels,
    })
}

const E4: [(u32, u32); 5] = [(4, 0), (3, 1), (2, 2), (1, 3), (0, 4)];

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{taylor_data, Square};
    use crate::quad::integrate_2d;
    use std::sync::Arc;

    fn p(text: &str) -> BivarPoly<f64> {
        text.parse().unwrap()
    }

    fn data(f_pi: &str, g: &str) -> TaylorData<f64> {
        taylor_data(&p(f_pi), Arc::new(p(g)), [0.0, 0.0], &Square::new(0.5).unwrap()).unwrap()
    }

    #[test]
    fn matches_direct_quadrature() {
        let t = data("x1^4 + x2^4", "0");
        let amp = Amplitude::bump([0.0, 0.0], 0.5);
        let d = dyadic_integrate(&t, &QuarticForm::mu(0.0), &amp, 100.0, &DyadicConfig::default()).unwrap();
        assert_eq!(d.regime, Regime::LowRho);
        assert_eq!(d.rho, 0.0);
        assert!(d.complete);
        assert!(d.sigma.is_none());
        let direct = integrate_2d(&p("x1^4 + x2^4"), &amp, 100.0, 1e-10).unwrap().value;
        assert!((d.total() - direct).norm() <= 1e-3 * direct.norm(), "{} vs {}", d.total(), direct);
    }

    #[test]
    fn high_rho_with_linear_term() {
        let t = data("x1^4 + x2^4", "x1");
        assert_eq!(quasi_distance(&t), 1.0);
        let amp = Amplitude::bump([0.0, 0.0], 0.5);
        let d = dyadic_integrate(&t, &QuarticForm::mu(0.0), &amp, 100.0, &DyadicConfig::default()).unwrap();
        assert_eq!(d.regime, Regime::HighRho);
        let s = d.sigma.unwrap();
        assert!((s.s10.abs().powf(4.0 / 3.0) - 1.0).abs() < 1e-14);
        assert!((s.quasisphere() - 1.0).abs() < 1e-14);
        let direct = integrate_2d(&p("x1^4 + x2^4 + x1"), &amp, 100.0, 1e-10).unwrap().value;
        assert!((d.total() - direct).norm() <= 1e-3 * direct.norm().max(1e-6));
    }

    #[test]
    fn forced_high_rho_without_rho() {
        let t = data("x1^4 + x2^4", "0");
        let cfg = DyadicConfig {
            force_regime: Some(Regime::HighRho),
            ..DyadicConfig::default()
        };
        let amp = Amplitude::bump([0.0, 0.0], 0.5);
        let err = dyadic_integrate(&t, &QuarticForm::mu(0.0), &amp, 100.0, &cfg).unwrap_err();
        assert_eq!(err, DyadicError::RhoDegenerate);
        assert!(err.to_string().starts_with("RhoDegenerate"));
    }

    #[test]
    fn ring_count_and_drift() {
        let t = data("x1^4 + x1^2*x2^2 + x2^4", "0.01*x1^4");
        let amp = Amplitude::bump([0.0, 0.0], 0.5);
        let d = dyadic_integrate(&t, &QuarticForm::mu(1.0), &amp, 50.0, &DyadicConfig::default()).unwrap();
        assert_eq!(d.k_max, (1.5 * 50f64.ln()).ceil() as i32);
        assert_eq!(d.rings.len() as i32, d.k_max - d.nu0);
        assert!((d.quartic_drift - 0.01).abs() < 1e-15);
    }

    #[test]
    fn quartic_dilation_covariance() {
        let f = QuarticForm::new(1.0, -0.3, 0.7, 0.2, 2.0);
        for (x, r) in [([0.3, -1.2], 5.0), ([2.0, 0.1], 0.01), ([-0.7, 0.4], 123.0)] {
            let lhs = f.eval(dilate(r, x));
            assert!((lhs - r * f.eval(x)).abs() <= 1e-12 * lhs.abs().max(1.0));
        }
    }
}
