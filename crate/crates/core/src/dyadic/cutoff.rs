use crate::scalar::Real;

/// Quasi-homogeneous dilation `delta_r(x) = r^{1/4} x`.
pub fn dilate<T: Real>(r: T, x: [T; 2]) -> [T; 2] {
    let k = r.powf(T::lit(0.25));
    [k * x[0], k * x[1]]
}

/// Smooth transition `h: [0, 1] -> [0, 1]`, `h(s) = psi(1 - s) / (psi(1 - s) + psi(s))`
/// with `psi(u) = exp(-1/u)` for `u > 0`. Flat to all orders at both ends.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct CutoffProfile;

fn psi<T: Real>(u: T) -> T {
    if u <= T::zero() {
        T::zero()
    } else {
        (-T::one() / u).exp()
    }
}

impl CutoffProfile {
    pub fn h<T: Real>(&self, s: T) -> T {
        if s <= T::zero() {
            return T::one();
        }
        if s >= T::one() {
            return T::zero();
        }
        let a = psi(T::one() - s);
        a / (a + psi(s))
    }
}

/// `beta(x)`: 1 for `|x| <= 1`, 0 for `|x| >= 2^{1/4}`, `h` of the normalized
/// `|x|^2` in between.
pub fn beta_cutoff<T: Real>(profile: &CutoffProfile, x: [T; 2]) -> T {
    let r2 = x[0] * x[0] + x[1] * x[1];
    let s = (r2 - T::one()) / (T::SQRT_2() - T::one());
    profile.h(s)
}

/// `chi(x) = beta(x) - beta(delta_2(x))`.
pub fn chi<T: Real>(profile: &CutoffProfile, x: [T; 2]) -> T {
    beta_cutoff(profile, x) - beta_cutoff(profile, dilate(T::lit(2.0), x))
}

/// `beta(delta_{2^-nu}(x))`.
pub(crate) fn beta_at_scale<T: Real>(profile: &CutoffProfile, x: [T; 2], nu: i32) -> T {
    let k = T::lit(2.0).powf(T::lit(-f64::from(nu) / 4.0));
    beta_cutoff(profile, [k * x[0], k * x[1]])
}

/// `[beta(delta_{2^-nu0} x), chi_{nu0+1}(x), ..., chi_K(x)]` with
/// `chi_nu(x) = beta(delta_{2^-nu} x) - beta(delta_{2^-(nu-1)} x)`.
///
/// The list telescopes: its sum is `beta(delta_{2^-K} x)`.
pub fn partition_weights<T: Real>(profile: &CutoffProfile, x: [T; 2], nu0: i32, k_max: i32) -> Vec<T> {
    assert!(k_max >= nu0, "K must be at least nu0");
    let mut out = Vec::with_capacity((k_max - nu0 + 1) as usize);
    let mut prev = beta_at_scale(profile, x, nu0);
    out.push(prev);
    for nu in nu0 + 1..=k_max {
        let cur = beta_at_scale(profile, x, nu);
        out.push(cur - prev);
        prev = cur;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const P: CutoffProfile = CutoffProfile;

    #[test]
    fn dilations() {
        assert_eq!(dilate(16.0, [1.0, 1.0]), [2.0, 2.0]);
        assert_eq!(dilate(1.0, [0.3, -0.7]), [0.3, -0.7]);
        let twice = dilate(4.0, dilate(4.0, [1.0f64, 0.0]));
        assert!((twice[0] - 2.0).abs() < 1e-15 && twice[1] == 0.0);
    }

    #[test]
    fn beta_values() {
        assert_eq!(beta_cutoff(&P, [0.5, 0.0]), 1.0);
        assert_eq!(beta_cutoff(&P, [1.3, 0.0]), 0.0);
        let mid = beta_cutoff(&P, [1.09, 0.0]);
        assert!(mid > 0.0 && mid < 1.0);
        assert!(beta_cutoff(&P, [1.05, 0.0]) > mid && beta_cutoff(&P, [1.12, 0.0]) < mid);
        assert_eq!(P.h(0.0), 1.0);
        assert_eq!(P.h(1.0), 0.0);
        assert!((P.h(0.5f64) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn chi_values() {
        assert_eq!(chi(&P, [0.5, 0.0]), 0.0);
        assert_eq!(chi(&P, [1.2, 0.0]), 0.0);
        // beta(x) = 1 at |x| = 1 and |delta_2 x| = 2^{1/4} puts beta(delta_2 x) at 0
        assert_eq!(chi(&P, [1.0, 0.0]), 1.0);
    }

    #[test]
    fn origin_weights() {
        let w = partition_weights(&P, [0.0, 0.0], 2, 6);
        assert_eq!(w, vec![1.0, 0.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn far_point_weights() {
        let w = partition_weights(&P, [100.0, 0.0], 2, 10);
        assert!(w.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn random_points_sum_to_one() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..1000 {
            let x = [rng.gen_range(-30.0..30.0), rng.gen_range(-30.0..30.0)];
            let w = partition_weights(&P, x, 2, 20);
            let s: f64 = w.iter().sum();
            assert!((s - beta_at_scale(&P, x, 20)).abs() <= 1e-12);
            if dilate(2f64.powi(-20), x).iter().map(|v| v * v).sum::<f64>() <= 1.0 {
                assert!((s - 1.0).abs() <= 1e-12);
            }
        }
    }

    proptest! {
        #[test]
        fn telescoping(x in -100.0f64..100.0, y in -100.0f64..100.0, nu0 in 0i32..4, extra in 0i32..30) {
            let w = partition_weights(&P, [x, y], nu0, nu0 + extra);
            let s: f64 = w.iter().sum();
            prop_assert!((s - beta_at_scale(&P, [x, y], nu0 + extra)).abs() <= 1e-12);
            prop_assert!(w.iter().all(|v| *v >= -1e-15 && *v <= 1.0 + 1e-15));
        }

        #[test]
        fn beta_monotone(r1 in 0.0f64..2.0, r2 in 0.0f64..2.0) {
            let (a, b) = (r1.min(r2), r1.max(r2));
            prop_assert!(beta_cutoff(&P, [a, 0.0]) >= beta_cutoff(&P, [b, 0.0]));
        }
    }
}
