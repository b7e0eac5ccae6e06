use std::f64::consts::FRAC_1_SQRT_2;

use super::{circle_roots, ClassifyError, NormalForm, NormalKind, QuarticForm};

/// Coefficient tolerance for a reduction to count as exact.
pub const TOL_NF: f64 = 1e-8;

type Mat = [[f64; 2]; 2];

fn mat_mul(a: Mat, b: Mat) -> Mat {
    [
        [a[0][0] * b[0][0] + a[0][1] * b[1][0], a[0][0] * b[0][1] + a[0][1] * b[1][1]],
        [a[1][0] * b[0][0] + a[1][1] * b[1][0], a[1][0] * b[0][1] + a[1][1] * b[1][1]],
    ]
}

fn rotation(t: f64) -> Mat {
    let (s, c) = t.sin_cos();
    [[c, -s], [s, c]]
}

fn finish(f: &QuarticForm, kind: NormalKind, transform: Mat, scale: f64) -> Result<NormalForm, ClassifyError> {
    let nf = NormalForm { kind, transform, scale };
    let mu_size = match kind {
        NormalKind::Mu(mu) => mu.abs(),
        _ => 1.0,
    };
    let residual = nf.mismatch(f);
    if residual <= TOL_NF * (1.0 + mu_size) && residual.is_finite() {
        Ok(nf)
    } else {
        Err(ClassifyError::ReductionFailed { residual })
    }
}

/// Linear change of variables to `u1^4 + mu u1^2 u2^2 + u2^4` or `u1^2 (u1^2 +- u2^2)`.
///
/// * one double root: reflect it onto the `u2` axis, shear away the
///   `u1^3 u2` term, rescale `u2`;
/// * two double roots: send them to the diagonals, giving `Mu(-2)`;
/// * no double root: Gauss-Newton over `R(a) diag(1, k) R(b)` to cancel the
///   `u1^3 u2` and `u1 u2^3` coefficients, started from the identity and then
///   from a grid, keeping the first solution with `a40 a04 > 0`.
///
/// Forms with exactly two simple roots and no double root have no such
/// reduction and end in [`ClassifyError::ReductionFailed`].
pub fn reduce_to_normal_form(f: &QuarticForm, tol: f64) -> Result<NormalForm, ClassifyError> {
    let roots = circle_roots(f, tol)?;
    if let Some(r) = roots.iter().find(|r| r.multiplicity >= 3) {
        return Err(ClassifyError::MultiplicityTooHigh {
            angle: r.angle,
            multiplicity: r.multiplicity,
        });
    }
    let doubles: Vec<f64> = roots.iter().filter(|r| r.multiplicity == 2).map(|r| r.angle).collect();
    match doubles.as_slice() {
        [t] => one_double_root(f, *t),
        [t1, t2] => two_double_roots(f, *t1, *t2),
        [] => no_double_root(f),
        _ => Err(ClassifyError::ReductionFailed { residual: f64::INFINITY }),
    }
}

fn one_double_root(f: &QuarticForm, theta: f64) -> Result<NormalForm, ClassifyError> {
    let (s, c) = theta.sin_cos();
    // second column is the root direction, so the root lands on u1 = 0
    let reflect = [[-s, c], [c, s]];
    let g = f.pull_back(reflect);
    // g = u1^2 (A u1^2 + B u1 u2 + C u2^2) up to rounding
    let (a, b, cc) = (g.a40, g.a31, g.a22);
    if cc == 0.0 {
        return Err(ClassifyError::ReductionFailed { residual: f64::INFINITY });
    }
    let delta = -b / (2.0 * cc);
    let shear = [[1.0, 0.0], [delta, 1.0]];
    let a_prime = a - b * b / (4.0 * cc);
    if a_prime == 0.0 {
        return Err(ClassifyError::ReductionFailed { residual: f64::INFINITY });
    }
    let stretch = [[1.0, 0.0], [0.0, (a_prime / cc).abs().sqrt()]];
    let kind = if cc / a_prime > 0.0 {
        NormalKind::DegenPlus
    } else {
        NormalKind::DegenMinus
    };
    finish(f, kind, mat_mul(mat_mul(reflect, shear), stretch), a_prime)
}

fn two_double_roots(f: &QuarticForm, t1: f64, t2: f64) -> Result<NormalForm, ClassifyError> {
    let (s1, c1) = t1.sin_cos();
    let (s2, c2) = t2.sin_cos();
    let d = [[c1, c2], [s1, s2]];
    let p = [[FRAC_1_SQRT_2, FRAC_1_SQRT_2], [FRAC_1_SQRT_2, -FRAC_1_SQRT_2]];
    let m = mat_mul(d, p);
    let g = f.pull_back(m);
    if g.a40 == 0.0 {
        return Err(ClassifyError::ReductionFailed { residual: f64::INFINITY });
    }
    finish(f, NormalKind::Mu(-2.0), m, g.a40)
}

/// Diagonal form `A u1^4 + B u1^2 u2^2 + C u2^4` with `A C > 0` to `Mu`.
fn from_diagonal(f: &QuarticForm, m: Mat) -> Result<NormalForm, ClassifyError> {
    let g = f.pull_back(m);
    if !(g.a40 * g.a04 > 0.0) {
        return Err(ClassifyError::ReductionFailed { residual: f64::INFINITY });
    }
    let stretch = [[g.a40.abs().powf(-0.25), 0.0], [0.0, g.a04.abs().powf(-0.25)]];
    let sign = g.a40.signum();
    let mu = g.a22 / ((g.a40 * g.a04).sqrt() * sign);
    finish(f, NormalKind::Mu(mu), mat_mul(m, stretch), sign)
}

/// `R(a) diag(1, e^k) R(b)`.
fn param_matrix(p: [f64; 3]) -> Mat {
    mat_mul(mat_mul(rotation(p[0]), [[1.0, 0.0], [0.0, p[1].exp()]]), rotation(p[2]))
}

/// Off-diagonal coefficients of the pulled-back form, relative to its size.
fn residual(f: &QuarticForm, p: [f64; 3]) -> [f64; 2] {
    let g = f.pull_back(param_matrix(p));
    let n = g.norm1();
    [g.a31 / n, g.a13 / n]
}

fn gauss_newton(f: &QuarticForm, start: [f64; 3]) -> ([f64; 3], f64) {
    let mut p = start;
    let norm = |r: [f64; 2]| (r[0] * r[0] + r[1] * r[1]).sqrt();
    let mut r = residual(f, p);
    for _ in 0..60 {
        if norm(r) <= 1e-15 {
            break;
        }
        let h = 1e-7;
        let mut jac = [[0.0; 3]; 2];
        for k in 0..3 {
            let mut hi = p;
            let mut lo = p;
            hi[k] += h;
            lo[k] -= h;
            let (rh, rl) = (residual(f, hi), residual(f, lo));
            jac[0][k] = (rh[0] - rl[0]) / (2.0 * h);
            jac[1][k] = (rh[1] - rl[1]) / (2.0 * h);
        }
        // minimum-norm step: dp = J^T (J J^T)^{-1} (-r)
        let jjt = [
            [dot3(jac[0], jac[0]), dot3(jac[0], jac[1])],
            [dot3(jac[1], jac[0]), dot3(jac[1], jac[1])],
        ];
        let det = jjt[0][0] * jjt[1][1] - jjt[0][1] * jjt[1][0];
        if det.abs() < 1e-300 {
            break;
        }
        let y = [
            (-r[0] * jjt[1][1] + r[1] * jjt[0][1]) / det,
            (r[0] * jjt[1][0] - r[1] * jjt[0][0]) / det,
        ];
        let dp = [
            jac[0][0] * y[0] + jac[1][0] * y[1],
            jac[0][1] * y[0] + jac[1][1] * y[1],
            jac[0][2] * y[0] + jac[1][2] * y[1],
        ];
        let mut t = 1.0;
        let mut improved = false;
        for _ in 0..30 {
            let q = [p[0] + t * dp[0], p[1] + t * dp[1], p[2] + t * dp[2]];
            let rq = residual(f, q);
            if norm(rq) < norm(r) {
                p = q;
                r = rq;
                improved = true;
                break;
            }
            t *= 0.5;
        }
        if !improved {
            break;
        }
    }
    (p, norm(r))
}

fn dot3(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn no_double_root(f: &QuarticForm) -> Result<NormalForm, ClassifyError> {
    let n = f.norm1();
    let identity = [[1.0, 0.0], [0.0, 1.0]];
    if f.a31.abs() <= TOL_NF * 1e-3 * n && f.a13.abs() <= TOL_NF * 1e-3 * n {
        if let Ok(nf) = from_diagonal(f, identity) {
            return Ok(nf);
        }
    }
    let mut best = f64::INFINITY;
    let mut starts = vec![[0.0, 0.0, 0.0]];
    for a in 0..8 {
        for k in [-1.5, -0.5, 0.5, 1.5, 0.0] {
            for b in 0..4 {
                starts.push([a as f64 * std::f64::consts::PI / 8.0, k, b as f64 * std::f64::consts::PI / 4.0]);
            }
        }
    }
    for start in starts {
        let (p, res) = gauss_newton(f, start);
        best = best.min(res);
        if res > 1e-13 {
            continue;
        }
        if let Ok(nf) = from_diagonal(f, param_matrix(p)) {
            return Ok(nf);
        }
    }
    Err(ClassifyError::ReductionFailed { residual: best })
}

#[cfg(test)]
mod tests {
    use super::super::oscillation_type;
    use super::*;
    use proptest::prelude::*;

    const TOL: f64 = 1e-9;

    #[test]
    fn already_normal() {
        let nf = reduce_to_normal_form(&QuarticForm::mu(3.0), TOL).unwrap();
        assert_eq!(nf.kind, NormalKind::Mu(3.0));
        assert_eq!(nf.transform, [[1.0, 0.0], [0.0, 1.0]]);
        assert_eq!(nf.scale, 1.0);
    }

    #[test]
    fn product_of_squares_is_mu_minus_two() {
        let f = QuarticForm::new(0.0, 0.0, 1.0, 0.0, 0.0);
        let nf = reduce_to_normal_form(&f, TOL).unwrap();
        assert_eq!(nf.kind, NormalKind::Mu(-2.0));
        assert!((nf.scale - 0.25).abs() < 1e-14);
        let s = FRAC_1_SQRT_2;
        for (row, want) in nf.transform.iter().zip([[s, s], [s, -s]]) {
            assert!((row[0] - want[0]).abs() < 1e-12 && (row[1] - want[1]).abs() < 1e-12);
        }
    }

    #[test]
    fn swapped_degenerate_minus() {
        // x2^2 (x2^2 - x1^2)
        let f = QuarticForm::new(0.0, 0.0, -1.0, 0.0, 1.0);
        let nf = reduce_to_normal_form(&f, TOL).unwrap();
        assert_eq!(nf.kind, NormalKind::DegenMinus);
        let t = nf.transform;
        assert!(t[0][0].abs() < 1e-12 && t[1][1].abs() < 1e-12);
        assert!((t[0][1].abs() - 1.0).abs() < 1e-12 && (t[1][0].abs() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn degenerate_plus() {
        let nf = reduce_to_normal_form(&QuarticForm::degen_plus(), TOL).unwrap();
        assert_eq!(nf.kind, NormalKind::DegenPlus);
        assert!(nf.mismatch(&QuarticForm::degen_plus()) < 1e-12);
    }

    #[test]
    fn errors() {
        assert!(matches!(
            reduce_to_normal_form(&QuarticForm::new(1.0, 0.0, 0.0, 0.0, 0.0), TOL),
            Err(ClassifyError::MultiplicityTooHigh { multiplicity: 4, .. })
        ));
        // (x1^2 - x2^2)(x1^2 + x2^2): two simple roots only
        let f = QuarticForm::new(1.0, 0.0, 0.0, 0.0, -1.0);
        let err = reduce_to_normal_form(&f, TOL).unwrap_err();
        assert!(matches!(err, ClassifyError::ReductionFailed { .. }));
        assert!(err.to_string().starts_with("ReductionFailed"));
    }

    #[test]
    fn four_simple_roots() {
        // mu = -3 has four real roots
        let m = [[1.3, 0.4], [-0.2, 0.9]];
        let f = QuarticForm::mu(-3.0).pull_back(m).scale(2.5);
        let nf = reduce_to_normal_form(&f, TOL).unwrap();
        assert!(matches!(nf.kind, NormalKind::Mu(mu) if mu < -2.0));
        assert!(nf.mismatch(&f) <= TOL_NF);
    }

    fn invertible() -> impl Strategy<Value = Mat> {
        prop::array::uniform4(-2.0f64..2.0)
            .prop_map(|v| [[v[0], v[1]], [v[2], v[3]]])
            .prop_filter("well conditioned", |m| {
                let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
                let fro = m.iter().flatten().map(|x| x * x).sum::<f64>();
                det.abs() > 0.2 * fro
            })
    }

    fn kind() -> impl Strategy<Value = NormalKind> {
        prop_oneof![
            (-1.8f64..6.0).prop_map(NormalKind::Mu),
            (-6.0f64..-2.3).prop_map(NormalKind::Mu),
            Just(NormalKind::DegenPlus),
            Just(NormalKind::DegenMinus),
            Just(NormalKind::Mu(-2.0)),
        ]
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]
        #[test]
        fn round_trip_through_random_transforms(k in kind(), m in invertible(), s in prop_oneof![0.3f64..3.0, -3.0f64..-0.3]) {
            let f = k.representative().pull_back(m).scale(s);
            let nf = reduce_to_normal_form(&f, TOL).unwrap();
            // pulling back through the found transform reproduces the representative
            let mismatch = nf.mismatch(&f);
            let size = match nf.kind { NormalKind::Mu(mu) => 1.0 + mu.abs(), _ => 1.0 };
            prop_assert!(mismatch <= TOL_NF * size, "mismatch {mismatch}");
            // and the representative pushed forward reproduces f
            let inv = {
                let t = nf.transform;
                let det = t[0][0] * t[1][1] - t[0][1] * t[1][0];
                [[t[1][1] / det, -t[0][1] / det], [-t[1][0] / det, t[0][0] / det]]
            };
            let back = nf.kind.representative().pull_back(inv).scale(nf.scale);
            let fnorm = f.norm1();
            for (a, b) in back.coeffs().iter().zip(f.coeffs()) {
                prop_assert!((a - b).abs() <= 1e-8 * fnorm.max(1.0) * size);
            }
            let id = NormalForm { kind: k, transform: [[1.0, 0.0], [0.0, 1.0]], scale: 1.0 };
            prop_assert_eq!(oscillation_type(&nf), oscillation_type(&id));
        }
    }
}
