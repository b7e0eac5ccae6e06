use std::sync::Arc;

use osclab_core::center::newton_center;
use osclab_core::classify::QuarticForm;
use osclab_core::dyadic::{dyadic_integrate, DyadicConfig, Regime};
use osclab_core::phase::{FnPhase, Phase2};
use osclab_core::poly::{quasi_distance, taylor_data, Square};
use osclab_core::quad::{integrate_2d, Amplitude};
use osclab_core::verify::sample_perturbation;
use osclab_core::Poly;

fn square() -> Square {
    Square::new(0.5).unwrap()
}

#[test]
fn centered_decomposition_matches_direct() {
    let f = QuarticForm::mu(1.0);
    let f_pi = f.to_poly();
    let pert = sample_perturbation(0.05, &square(), 99, 3);
    let full = &f_pi + &pert;
    let c = newton_center(&full, [0.0, 0.0], 1e-12, 30).unwrap();
    let t = taylor_data(&f_pi, Arc::new(pert.clone()), c.z, &square()).unwrap();
    assert!(t.s21.abs() <= 1e-12 && t.s12.abs() <= 1e-12);
    let amp = Amplitude::bump([0.0, 0.0], 0.5);
    for lambda in [100.0, 1000.0] {
        let d = dyadic_integrate(&t, &f, &amp, lambda, &DyadicConfig::default()).unwrap();
        assert!(d.complete);
        let direct = integrate_2d(&full, &amp, lambda, 1e-10).unwrap().value;
        assert!((d.total() - direct).norm() <= 1e-3 * direct.norm());
        let expected = if lambda * quasi_distance(&t) <= 2.0 { Regime::LowRho } else { Regime::HighRho };
        assert_eq!(d.regime, expected);
    }
}

#[test]
fn general_phase_path() {
    // a non-polynomial deformation goes through finite differences
    let f = QuarticForm::degen_plus();
    let f_pi = f.to_poly();
    let g: Arc<dyn Phase2<f64>> = Arc::new(FnPhase::new(|x: [f64; 2]| 0.02 * (x[0] + 0.5 * x[1]).sin()));
    let t = taylor_data(&f_pi, g.clone(), [0.0, 0.0], &square()).unwrap();
    assert!((t.s10 - 0.02).abs() < 1e-9 && (t.s01 - 0.01).abs() < 1e-9);
    let amp = Amplitude::bump([0.0, 0.0], 0.5);
    let d = dyadic_integrate(&t, &f, &amp, 400.0, &DyadicConfig::default()).unwrap();
    assert_eq!(d.regime, Regime::HighRho);
    let full = FnPhase::new(move |x: [f64; 2]| f_pi.eval(x) + g.value(x));
    let direct = integrate_2d(&full, &amp, 400.0, 1e-10).unwrap().value;
    assert!((d.total() - direct).norm() <= 1e-3 * direct.norm());
}

#[test]
fn rings_respect_the_support() {
    let f = QuarticForm::mu(1.0);
    let t = taylor_data(&f.to_poly(), Arc::new(Poly::zero()), [0.0, 0.0], &square()).unwrap();
    let amp = Amplitude::bump([0.0, 0.0], 0.5);
    let lambda = 500.0;
    let d = dyadic_integrate(&t, &f, &amp, lambda, &DyadicConfig::default()).unwrap();
    assert!(d.k_max <= (1.5 * lambda.ln()).ceil() as i32);
    // a ring whose inner radius lies outside the support carries nothing
    for (k, v) in &d.rings {
        let inner = d.base * 2f64.powf((*k as f64 - 1.0) / 4.0);
        if inner >= 0.5 {
            assert_eq!(v.norm(), 0.0, "ring {k}");
        }
    }
}

#[test]
fn centering_is_stable_under_scaling() {
    // doubling F at most quadruples the shift
    let f_pi = QuarticForm::mu(1.0).to_poly();
    for id in 0..50 {
        let pert = sample_perturbation(0.05, &square(), 5, id);
        let z1 = newton_center(&(&f_pi + &pert), [0.0, 0.0], 1e-12, 30).unwrap().z;
        let z2 = newton_center(&(&f_pi + &pert.scale(&2.0)), [0.0, 0.0], 1e-12, 30).unwrap().z;
        let (n1, n2) = (z1[0].hypot(z1[1]), z2[0].hypot(z2[1]));
        assert!(n2 <= 4.0 * n1 + 1e-14, "id {id}: {n1} -> {n2}");
    }
}
