use super::VerifyError;

/// Least-squares fit of `|J| ~ C lambda^beta (ln lambda)^p`, `p` in `{0, 1}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayFit {
    pub beta_hat: f64,
    pub p_hat: u32,
    pub c_hat: f64,
    /// RMS residual in `ln |J|` of the `p = 0` model.
    pub residual_p0: f64,
    pub residual_p1: f64,
    /// Slope of the model that was not selected.
    pub beta_other: f64,
}

/// Minimum number of samples and decades accepted by [`decay_fit`].
pub const MIN_POINTS: usize = 6;
pub const MIN_DECADES: f64 = 2.0;

/// Slope, intercept and RMS residual of the ordinary least-squares line.
pub(crate) fn line_fit(xs: &[f64], ys: &[f64]) -> (f64, f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let rss: f64 = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| (y - intercept - slope * x).powi(2))
        .sum();
    (slope, intercept, (rss / n).sqrt())
}

/// Fits `ln|J| = ln C + beta ln lambda` and `ln|J| = ln C + beta ln lambda + ln ln lambda`
/// and keeps the model with the smaller residual.
pub fn decay_fit(samples: &[(f64, f64)]) -> Result<DecayFit, VerifyError> {
    if let Some(&(lambda, _)) = samples.iter().find(|(_, m)| !(*m > 0.0)) {
        return Err(VerifyError::NonPositiveMagnitude { lambda });
    }
    let lo = samples.iter().map(|s| s.0).fold(f64::INFINITY, f64::min);
    let hi = samples.iter().map(|s| s.0).fold(f64::NEG_INFINITY, f64::max);
    let decades = if samples.is_empty() { 0.0 } else { (hi / lo).log10() };
    if samples.len() < MIN_POINTS || decades < MIN_DECADES - 1e-9 || !(lo > 1.0) {
        return Err(VerifyError::InsufficientRange {
            points: samples.len(),
            decades,
        });
    }
    let xs: Vec<f64> = samples.iter().map(|s| s.0.ln()).collect();
    let y0: Vec<f64> = samples.iter().map(|s| s.1.ln()).collect();
    let y1: Vec<f64> = samples.iter().map(|s| s.1.ln() - s.0.ln().ln()).collect();
    let (b0, c0, r0) = line_fit(&xs, &y0);
    let (b1, c1, r1) = line_fit(&xs, &y1);
    Ok(if r0 <= r1 {
        DecayFit {
            beta_hat: b0,
            p_hat: 0,
            c_hat: c0.exp(),
            residual_p0: r0,
            residual_p1: r1,
            beta_other: b1,
        }
    } else {
        DecayFit {
            beta_hat: b1,
            p_hat: 1,
            c_hat: c1.exp(),
            residual_p0: r0,
            residual_p1: r1,
            beta_other: b0,
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::geometric_grid;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn synth(f: impl Fn(f64) -> f64) -> Vec<(f64, f64)> {
        geometric_grid(1e2, 1e5, 8).into_iter().map(|l| (l, f(l))).collect()
    }

    #[test]
    fn exact_power() {
        let fit = decay_fit(&synth(|l| l.powf(-0.5))).unwrap();
        assert!((fit.beta_hat + 0.5).abs() < 1e-10);
        assert_eq!(fit.p_hat, 0);
        assert!(fit.residual_p0 < 1e-9);
        assert!((fit.c_hat - 1.0).abs() < 1e-9);
    }

    #[test]
    fn exact_log_power() {
        let fit = decay_fit(&synth(|l| l.powf(-0.5) * l.ln())).unwrap();
        assert!((fit.beta_hat + 0.5).abs() < 1e-10);
        assert_eq!(fit.p_hat, 1);
        assert!(fit.residual_p1 < 1e-9);
    }

    #[test]
    fn exact_third() {
        let fit = decay_fit(&synth(|l| l.powf(-1.0 / 3.0))).unwrap();
        assert!((fit.beta_hat + 1.0 / 3.0).abs() < 1e-10);
        assert_eq!(fit.p_hat, 0);
    }

    #[test]
    fn errors() {
        let short: Vec<(f64, f64)> = geometric_grid(1e2, 1e3, 8).into_iter().map(|l| (l, 1.0 / l)).collect();
        assert!(matches!(decay_fit(&short), Err(VerifyError::InsufficientRange { .. })));
        let mut bad = synth(|l| 1.0 / l);
        bad[3].1 = 0.0;
        let err = decay_fit(&bad).unwrap_err();
        assert!(matches!(err, VerifyError::NonPositiveMagnitude { .. }));
        assert!(err.to_string().starts_with("NonPositiveMagnitude"));
    }

    #[test]
    fn model_selection_under_noise() {
        // uniform multiplicative noise of +-5% on 16 points over three decades
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        for p in [0u32, 1] {
            let mut correct = 0;
            for _ in 0..100 {
                let samples: Vec<(f64, f64)> = geometric_grid(1e2, 1e5, 16)
                    .into_iter()
                    .map(|l| {
                        let clean = l.powf(-0.5) * l.ln().powi(p as i32);
                        (l, clean * (1.0 + rng.gen_range(-0.05..0.05)))
                    })
                    .collect();
                if decay_fit(&samples).unwrap().p_hat == p {
                    correct += 1;
                }
            }
            assert!(correct >= 95, "p = {p}: {correct}/100");
        }
    }
}
