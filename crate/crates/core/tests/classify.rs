use std::f64::consts::PI;

use osclab_core::classify::{
    circle_roots, oscillation_type, reduce_to_normal_form, versality_check, ClassifyError, NormalKind, QuarticForm,
    TOL_NF,
};
use osclab_core::Poly;
use proptest::prelude::*;

const TOL: f64 = 1e-9;

fn form(text: &str) -> QuarticForm {
    QuarticForm::from_poly(&text.parse::<Poly>().unwrap()).unwrap()
}

/// Directions where `f(cos t, sin t)` changes sign, from a dense scan.
fn sign_changes(f: &QuarticForm, n: usize) -> Vec<f64> {
    let g = |t: f64| f.eval([t.cos(), t.sin()]);
    let off = 0.123 / n as f64;
    (0..n)
        .filter_map(|k| {
            let (t0, t1) = (PI * k as f64 / n as f64 + off, PI * (k + 1) as f64 / n as f64 + off);
            ((g(t0) < 0.0) != (g(t1) < 0.0)).then_some(0.5 * (t0 + t1))
        })
        .collect()
}

#[test]
fn spec_forms() {
    let nf = reduce_to_normal_form(&form("x1^4 + 3*x1^2*x2^2 + x2^4"), TOL).unwrap();
    assert_eq!(nf.kind, NormalKind::Mu(3.0));
    assert_eq!(oscillation_type(&nf).p, 0);

    let nf = reduce_to_normal_form(&form("x1^2*x2^2"), TOL).unwrap();
    assert_eq!(nf.kind, NormalKind::Mu(-2.0));
    assert!((nf.scale - 0.25).abs() < 1e-14);
    let ty = oscillation_type(&nf);
    assert_eq!((ty.beta, ty.p), (-0.5, 1));

    let nf = reduce_to_normal_form(&form("x2^2*(x2^2 - x1^2)"), TOL).unwrap();
    assert_eq!(nf.kind, NormalKind::DegenMinus);
    assert_eq!(oscillation_type(&nf).p, 1);
}

#[test]
fn odd_multiplicity_roots_match_sign_scan() {
    for text in ["x1^2*(x1^2 - x2^2)", "(x1 - 2*x2)*(x1 + x2)*(x1^2 + x2^2)", "x1^4 - 5*x1^2*x2^2 + x2^4"] {
        let f = form(text);
        let odd: Vec<f64> = circle_roots(&f, TOL)
            .unwrap()
            .into_iter()
            .filter(|r| r.multiplicity % 2 == 1)
            .map(|r| r.angle)
            .collect();
        let scan = sign_changes(&f, 20_000);
        assert_eq!(odd.len(), scan.len(), "{text}");
        for (a, b) in odd.iter().zip(&scan) {
            assert!((a - b).abs() < 1e-3, "{text}: {a} vs {b}");
        }
    }
}

#[test]
fn outside_the_hypothesis() {
    let err = reduce_to_normal_form(&form("x1^3*x2"), TOL).unwrap_err();
    assert!(matches!(err, ClassifyError::MultiplicityTooHigh { multiplicity: 3, .. }));
    assert!(err.to_string().starts_with("MultiplicityTooHigh"));
    assert!(matches!(QuarticForm::from_poly(&"x1^3".parse().unwrap()), Err(ClassifyError::NotQuartic)));
}

#[test]
fn versality_table() {
    for mu in [1.0, 3.0] {
        assert!(versality_check(&QuarticForm::mu(mu)).is_versal);
    }
    assert!(versality_check(&QuarticForm::degen_plus()).is_versal);
    let zero = versality_check(&QuarticForm::mu(0.0));
    assert_eq!((zero.dim_intersection, zero.is_versal), (2, false));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// The kind's representative pulled back through the inverse transform is `f / scale`.
    #[test]
    fn reduction_is_a_change_of_variables(mu in -1.9f64..8.0, a in 0.0f64..PI, k in 0.4f64..2.5, s in 0.2f64..5.0) {
        let (sn, cs) = a.sin_cos();
        let m = [[cs, -k * sn], [sn, k * cs]];
        let f = QuarticForm::mu(mu).pull_back(m).scale(s);
        let nf = reduce_to_normal_form(&f, TOL).unwrap();
        let size = match nf.kind { NormalKind::Mu(v) => 1.0 + v.abs(), _ => 1.0 };
        prop_assert!(nf.mismatch(&f) <= TOL_NF * size);
        prop_assert_eq!(oscillation_type(&nf).p, u32::from((mu * mu - 4.0).abs() < 1e-12));
        let det = nf.transform[0][0] * nf.transform[1][1] - nf.transform[0][1] * nf.transform[1][0];
        prop_assert!(det.abs() > 1e-12);
    }
}
