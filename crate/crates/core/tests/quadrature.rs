use std::f64::consts::PI;

use num_complex::Complex;
use osclab_core::quad::{
    integrate_1d, integrate_2d, integrate_2d_with, Amplitude, Bump1, QuadConfig, QuadError, Rect, Weight2,
};
use osclab_core::{Poly, Poly1};

fn p(text: &str) -> Poly {
    text.parse().unwrap()
}

fn bump_profile(s: f64) -> f64 {
    if s >= 1.0 {
        0.0
    } else {
        (1.0 - 1.0 / (1.0 - s)).exp()
    }
}

/// Composite Simpson rule with `n` (even) intervals.
fn simpson(f: impl Fn(f64) -> Complex<f64>, a: f64, b: f64, n: usize) -> Complex<f64> {
    let h = (b - a) / n as f64;
    let mut acc = f(a) + f(b);
    for k in 1..n {
        let w = if k % 2 == 1 { 4.0 } else { 2.0 };
        acc += f(a + h * k as f64) * w;
    }
    acc * (h / 3.0)
}

/// `\int bump(x) exp(i lambda |x|^2) dx` for a bump of radius `r` at the origin,
/// as `pi \int_0^{r^2} profile(u / r^2) e^{i lambda u} du`.
fn radial_oracle(r: f64, lambda: f64) -> Complex<f64> {
    let rr = r * r;
    simpson(
        |u| Complex::from_polar(bump_profile(u / rr), lambda * u),
        0.0,
        rr,
        400_000,
    ) * PI
}

#[test]
fn zero_phase_gives_the_mass() {
    let amp = Amplitude::bump([0.1, -0.2], 0.5);
    let r = integrate_2d(&Poly::zero(), &amp, 10.0, 1e-11).unwrap();
    let mass = radial_oracle(0.5, 0.0);
    assert!((r.value - mass).norm() < 1e-10, "{} vs {}", r.value, mass);
}

#[test]
fn morse_phase_matches_radial_oracle() {
    let amp = Amplitude::bump([0.0, 0.0], 0.5);
    for lambda in [10.0, 100.0, 1000.0] {
        let r = integrate_2d(&p("x1^2 + x2^2"), &amp, lambda, 1e-11).unwrap();
        let oracle = radial_oracle(0.5, lambda);
        assert!((r.value - oracle).norm() < 1e-9, "lambda {lambda}: {} vs {}", r.value, oracle);
    }
    // stationary phase: lambda |J| -> pi a(0)
    let r = integrate_2d(&p("x1^2 + x2^2"), &amp, 1e4, 1e-11).unwrap();
    assert!((1e4 * r.value.norm() - PI).abs() < 0.01);
}

#[test]
fn linear_phase_decays() {
    let amp = Amplitude::bump([0.0, 0.0], 1.0);
    let j25 = integrate_2d(&p("x1"), &amp, 25.0, 1e-11).unwrap().value.norm();
    let j50 = integrate_2d(&p("x1"), &amp, 50.0, 1e-11).unwrap().value.norm();
    assert!(j50 <= 0.7 * j25, "{j50} vs {j25}");
}

#[test]
fn one_dimensional_examples() {
    let amp = Bump1::new(0.0, 1.0);
    let linear = Poly1::new(vec![0.0, 1.0]);
    assert!(integrate_1d(&linear, &amp, 100.0, 1e-12).unwrap().value.norm() <= 10.0 / 100.0);

    let mass = simpson(|x| Complex::new(bump_profile(x * x), 0.0), -1.0, 1.0, 200_000).re;
    for lambda in [0.0, 0.5, 1.0] {
        assert!(integrate_1d(&Poly1::airy(0.3), &amp, lambda, 1e-12).unwrap().value.norm() <= mass + 1e-12);
    }

    // x^3: |J| ~ lambda^{-1/3}
    let grid: Vec<f64> = (0..7).map(|k| 10f64.powf(1.0 + 0.5 * k as f64)).collect();
    let (xs, ys): (Vec<f64>, Vec<f64>) = grid
        .iter()
        .map(|&l| {
            let j = integrate_1d(&Poly1::airy(0.0), &amp, l, 1e-12).unwrap().value.norm();
            (l.ln(), j.ln())
        })
        .unzip();
    let n = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
    let slope = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum::<f64>()
        / xs.iter().map(|x| (x - mx).powi(2)).sum::<f64>();
    assert!((slope + 1.0 / 3.0).abs() < 0.03, "slope {slope}");
}

#[test]
fn one_dimensional_matches_simpson() {
    let amp = Bump1::new(0.35, 0.65);
    for (sigma, lambda) in [(-1.0, 40.0), (0.0, 100.0), (0.3, 20.0)] {
        let r = integrate_1d(&Poly1::airy(sigma), &amp, lambda, 1e-12).unwrap();
        let oracle = simpson(
            |x| {
                let d = (x - 0.35) / 0.65;
                Complex::from_polar(bump_profile(d * d), lambda * (x * x * x + sigma * x))
            },
            -0.3,
            1.0,
            400_000,
        );
        assert!((r.value - oracle).norm() < 1e-9, "{} vs {}", r.value, oracle);
    }
}

struct Sum<'a>(&'a Amplitude<f64>, &'a Amplitude<f64>);

impl Weight2<f64> for Sum<'_> {
    fn value(&self, x: [f64; 2]) -> f64 {
        self.0.value(x) + self.1.value(x)
    }
    fn sup_on(&self, r: &Rect<f64>) -> f64 {
        self.0.sup_on(r) + self.1.sup_on(r)
    }
    fn support(&self) -> Rect<f64> {
        let (a, b) = (self.0.support(), self.1.support());
        Rect::new(a.x0.min(b.x0), a.x1.max(b.x1), a.y0.min(b.y0), a.y1.max(b.y1))
    }
}

#[test]
fn linear_in_the_amplitude() {
    let tol = 1e-10;
    let phase = p("x1^4 + x1^2*x2^2 + x2^4 + 0.3*x1");
    let a1 = Amplitude::bump([0.1, 0.0], 0.3);
    let a2 = Amplitude::bump([-0.2, 0.1], 0.25);
    let j1 = integrate_2d(&phase, &a1, 300.0, tol).unwrap().value;
    let j2 = integrate_2d(&phase, &a2, 300.0, tol).unwrap().value;
    let j12 = integrate_2d(&phase, &Sum(&a1, &a2), 300.0, tol).unwrap().value;
    assert!((j12 - j1 - j2).norm() <= 2.0 * tol);
}

#[test]
fn conjugate_symmetry_and_phase_shift() {
    let tol = 1e-10;
    let amp = Amplitude::bump([0.0, 0.0], 0.5);
    let phase = p("x1^2*(x1^2 + x2^2) + 0.1*x1*x2");
    let plus = integrate_2d(&phase, &amp, 500.0, tol).unwrap().value;
    let minus = integrate_2d(&phase, &amp, -500.0, tol).unwrap().value;
    assert!((minus - plus.conj()).norm() <= tol);
    let shifted = integrate_2d(&(&phase + &Poly::constant(0.37)), &amp, 500.0, tol).unwrap().value;
    assert!((shifted - plus * Complex::from_polar(1.0, 500.0 * 0.37)).norm() <= 10.0 * tol);
}

#[test]
fn refinement_is_consistent() {
    let amp = Amplitude::bump([0.0, 0.0], 0.5);
    let phase = p("x1^4 + 3*x1^2*x2^2 + x2^4");
    let coarse = integrate_2d(&phase, &amp, 2000.0, 1e-8).unwrap();
    let fine = integrate_2d(&phase, &amp, 2000.0, 5e-9).unwrap();
    assert!((coarse.value - fine.value).norm() <= coarse.abs_error_estimate.max(1e-15));
}

#[test]
fn schedule_independent() {
    let amp = Amplitude::bump([0.0, 0.0], 0.5);
    let phase = p("x1^4 + x1^2*x2^2 + x2^4 - 0.2*x2^3");
    let run = |threads: usize| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| integrate_2d(&phase, &amp, 3000.0, 1e-9).unwrap())
    };
    let (a, b) = (run(1), run(3));
    assert_eq!(a.value, b.value);
    assert_eq!(a.panels, b.panels);
}

#[test]
fn errors_are_named() {
    let amp = Amplitude::bump([0.0, 0.0], 0.5);
    let cfg = QuadConfig {
        max_panels: 100,
        ..QuadConfig::default()
    };
    let err = integrate_2d_with(&p("x1^4 + x2^4"), &amp, 1e5, 1e-9, &cfg).unwrap_err();
    assert_eq!(err, QuadError::BudgetExceeded { max_panels: 100 });
    assert!(err.to_string().starts_with("BudgetExceeded"));
    let err = integrate_2d(&p("x1"), &amp, 10.0, 1e-14).unwrap_err();
    assert!(err.to_string().starts_with("InvalidTolerance"));
    let err = integrate_2d(&p("x1"), &amp, f64::NAN, 1e-9).unwrap_err();
    assert_eq!(err, QuadError::NonFinite);
}

#[test]
fn single_precision_oracle() {
    let amp = Amplitude::<f32>::bump([0.0, 0.0], 0.5);
    let phase: osclab_core::Poly32 = "x1^2 + x2^2".parse().unwrap();
    let r = integrate_2d(&phase, &amp, 100.0f32, 1e-5).unwrap();
    let oracle = radial_oracle(0.5, 100.0);
    assert!((f64::from(r.value.re) - oracle.re).abs() < 1e-4);
    assert!((f64::from(r.value.im) - oracle.im).abs() < 1e-4);
}
