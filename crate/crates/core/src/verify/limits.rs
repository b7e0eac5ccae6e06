use super::{fit::line_fit, VerifyError};
use crate::classify::QuarticForm;
use crate::phase::Poly1;
use crate::quad::{airy_envelope, integrate_1d, integrate_2d, Amplitude, Bump1};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LimitCheck {
    /// `lambda^{1/2} |J| / ln lambda` at the largest lambda.
    pub c_estimate: f64,
    /// The same statistic at the largest lambda over its value one decade
    /// below (the grid point nearest to `lambda_max / 10` in log scale).
    pub convergence_ratio: f64,
}

fn statistic(lambda: f64, abs_j: f64) -> f64 {
    lambda.sqrt() * abs_j / lambda.ln()
}

/// [`LimitCheck`] from precomputed `(lambda, |J|)` samples.
pub fn limit_check_with(samples: &[(f64, f64)]) -> Result<LimitCheck, VerifyError> {
    let lo = samples.iter().map(|s| s.0).fold(f64::INFINITY, f64::min);
    let (top, top_j) = samples
        .iter()
        .copied()
        .max_by(|a, b| a.0.total_cmp(&b.0))
        .ok_or(VerifyError::InsufficientRange { points: 0, decades: 0.0 })?;
    let decades = (top / lo).log10();
    if decades < 2.0 - 1e-9 || !(lo > 1.0) {
        return Err(VerifyError::InsufficientRange {
            points: samples.len(),
            decades,
        });
    }
    let target = (top / 10.0).ln();
    let (reference, reference_j) = samples
        .iter()
        .copied()
        .min_by(|a, b| (a.0.ln() - target).abs().total_cmp(&(b.0.ln() - target).abs()))
        .expect("nonempty");
    let c_estimate = statistic(top, top_j);
    Ok(LimitCheck {
        c_estimate,
        convergence_ratio: c_estimate / statistic(reference, reference_j),
    })
}

/// `lambda^{1/2} |J| / ln lambda` for the phase `f_pi` alone, by direct quadrature.
pub fn limit_check(f_pi: &QuarticForm, amp: &Amplitude<f64>, lambdas: &[f64], tol: f64) -> Result<LimitCheck, VerifyError> {
    let phase = f_pi.to_poly();
    let mut samples = Vec::with_capacity(lambdas.len());
    for &lambda in lambdas {
        let r = integrate_2d(&phase, amp, lambda, tol)?;
        samples.push((lambda, r.value.norm()));
    }
    limit_check_with(&samples)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AiryPoint {
    pub lambda: f64,
    pub sigma: f64,
    pub abs_j: f64,
    pub envelope: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AirySweep {
    pub points: Vec<AiryPoint>,
    /// `max |J_A| / envelope` over the grid.
    pub c: f64,
}

impl AirySweep {
    fn ratio_at(&self, lambda: f64, sigma: f64) -> Option<f64> {
        self.points
            .iter()
            .find(|p| p.lambda == lambda && p.sigma == sigma)
            .map(|p| p.ratio)
    }

    /// Whether `c` is at most 10 times the ratio at the smallest lambda and `sigma = 0`.
    pub fn sanity_ok(&self) -> bool {
        let lo = self.points.iter().map(|p| p.lambda).fold(f64::INFINITY, f64::min);
        self.ratio_at(lo, 0.0).is_some_and(|r| self.c <= 10.0 * r)
    }

    /// Least-squares slope of `ln |J_A|` against `ln lambda` in the column
    /// `sigma`, over `lambda_from <= lambda <= lambda_to`.
    pub fn column_exponent(&self, sigma: f64, lambda_from: f64, lambda_to: f64) -> Option<f64> {
        let (xs, ys): (Vec<f64>, Vec<f64>) = self
            .points
            .iter()
            .filter(|p| p.sigma == sigma && p.lambda >= lambda_from && p.lambda <= lambda_to && p.abs_j > 0.0)
            .map(|p| (p.lambda.ln(), p.abs_j.ln()))
            .unzip();
        (xs.len() >= 2).then(|| line_fit(&xs, &ys).0)
    }
}

/// `|\int a(x) exp(i lambda (x^3 + sigma x)) dx|` against the envelope
/// `1 / (lambda^{1/3} + lambda^{1/2} |sigma|^{1/4})` over the grid.
pub fn airy_sweep(lambdas: &[f64], sigmas: &[f64], amp: &Bump1<f64>, tol: f64) -> Result<AirySweep, VerifyError> {
    let mut points = Vec::with_capacity(lambdas.len() * sigmas.len());
    for &sigma in sigmas {
        let phase = Poly1::airy(sigma);
        for &lambda in lambdas {
            let abs_j = integrate_1d(&phase, amp, lambda, tol)?.value.norm();
            let envelope = airy_envelope(lambda, sigma);
            points.push(AiryPoint {
                lambda,
                sigma,
                abs_j,
                envelope,
                ratio: abs_j / envelope,
            });
        }
    }
    let c = points.iter().map(|p| p.ratio).fold(f64::NEG_INFINITY, f64::max);
    Ok(AirySweep { points, c })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::geometric_grid;

    #[test]
    fn limit_statistic_on_synthetic_data() {
        let samples: Vec<(f64, f64)> = geometric_grid(1e2, 1e5, 8)
            .into_iter()
            .map(|l| (l, 0.7 * l.ln() / l.sqrt()))
            .collect();
        let r = limit_check_with(&samples).unwrap();
        assert!((r.c_estimate - 0.7).abs() < 1e-12);
        assert!((r.convergence_ratio - 1.0).abs() < 1e-12);
        assert!(matches!(
            limit_check_with(&samples[4..]),
            Err(VerifyError::InsufficientRange { .. })
        ));
    }

    #[test]
    fn single_point_airy() {
        let amp = Bump1::new(0.35, 0.65);
        let s = airy_sweep(&[50.0], &[0.0], &amp, 1e-10).unwrap();
        assert_eq!(s.points.len(), 1);
        assert_eq!(s.c, s.points[0].ratio);
        assert!(s.sanity_ok());
    }

    #[test]
    fn amplitude_linearity() {
        let amp = Amplitude::bump([0.0, 0.0], 0.5);
        let grid = geometric_grid(1e2, 1e4, 3);
        let f = QuarticForm::degen_plus();
        let one = limit_check(&f, &amp, &grid, 1e-10).unwrap();
        let two = limit_check(&f, &amp.scaled(2.0), &grid, 1e-10).unwrap();
        assert!((two.c_estimate / one.c_estimate - 2.0).abs() < 0.1);
        assert!(one.c_estimate > 0.0);
    }
}
