//! Compactly supported weights.

use crate::scalar::Real;

/// Axis-aligned rectangle `[x0, x1] x [y0, y1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rect<T> {
    pub x0: T,
    pub x1: T,
    pub y0: T,
    pub y1: T,
}

impl<T: Real> Rect<T> {
    pub fn new(x0: T, x1: T, y0: T, y1: T) -> Self {
        Self { x0, x1, y0, y1 }
    }

    pub fn square(center: [T; 2], half_width: T) -> Self {
        Self::new(
            center[0] - half_width,
            center[0] + half_width,
            center[1] - half_width,
            center[1] + half_width,
        )
    }

    pub fn width(&self) -> T {
        self.x1 - self.x0
    }

    pub fn height(&self) -> T {
        self.y1 - self.y0
    }

    pub fn area(&self) -> T {
        self.width() * self.height()
    }

    pub fn center(&self) -> [T; 2] {
        let half = T::lit(0.5);
        [(self.x0 + self.x1) * half, (self.y0 + self.y1) * half]
    }

    /// Quadrants in the order lower-left, lower-right, upper-left, upper-right.
    pub fn quadrants(&self) -> [Rect<T>; 4] {
        let [cx, cy] = self.center();
        [
            Rect::new(self.x0, cx, self.y0, cy),
            Rect::new(cx, self.x1, self.y0, cy),
            Rect::new(self.x0, cx, cy, self.y1),
            Rect::new(cx, self.x1, cy, self.y1),
        ]
    }

    /// Point of the rectangle closest to `p`.
    pub fn clamp(&self, p: [T; 2]) -> [T; 2] {
        [p[0].max(self.x0).min(self.x1), p[1].max(self.y0).min(self.y1)]
    }

    /// Point of the rectangle farthest from `p`.
    pub fn farthest(&self, p: [T; 2]) -> [T; 2] {
        let pick = |lo: T, hi: T, v: T| if (v - lo).abs() > (hi - v).abs() { lo } else { hi };
        [pick(self.x0, self.x1, p[0]), pick(self.y0, self.y1, p[1])]
    }

    pub fn intersect(&self, other: &Rect<T>) -> Option<Rect<T>> {
        let r = Rect::new(
            self.x0.max(other.x0),
            self.x1.min(other.x1),
            self.y0.max(other.y0),
            self.y1.min(other.y1),
        );
        (r.x0 < r.x1 && r.y0 < r.y1).then_some(r)
    }
}

/// A real weight on the plane with bounded support.
pub trait Weight2<T: Real>: Send + Sync {
    fn value(&self, x: [T; 2]) -> T;

    /// Upper bound for `|w|` on `rect`; exactly zero when `rect` misses the support.
    fn sup_on(&self, rect: &Rect<T>) -> T;

    /// Rectangle containing the support.
    fn support(&self) -> Rect<T>;

    /// The amplitude factor whose variation drives panel splitting. A weight
    /// that is an amplitude times a flat-ended cutoff returns the amplitude
    /// alone, leaving the cutoff to the error control.
    fn amplitude_value(&self, x: [T; 2]) -> T {
        self.value(x)
    }
}

impl<T: Real, W: Weight2<T> + ?Sized> Weight2<T> for &W {
    fn value(&self, x: [T; 2]) -> T {
        (**self).value(x)
    }
    fn sup_on(&self, rect: &Rect<T>) -> T {
        (**self).sup_on(rect)
    }
    fn support(&self) -> Rect<T> {
        (**self).support()
    }
    fn amplitude_value(&self, x: [T; 2]) -> T {
        (**self).amplitude_value(x)
    }
}

/// A real weight on the line with bounded support.
pub trait Weight1<T: Real>: Send + Sync {
    fn value(&self, x: T) -> T;
    fn sup_on(&self, a: T, b: T) -> T;
    fn support(&self) -> (T, T);
}

/// `exp(1 - 1/(1 - s))` for `s < 1`, else 0.
#[inline]
fn profile<T: Real>(s: T) -> T {
    if s >= T::one() {
        T::zero()
    } else {
        (T::one() - T::one() / (T::one() - s)).exp()
    }
}

/// Bump `k * exp(1 - 1/(1 - |(x - c)/r|^2))` supported in the disk of radius `r`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Amplitude<T> {
    center: [T; 2],
    radius: T,
    scale: T,
    c1_norm: T,
    c2_norm: T,
}

/// Grid side used for the sampled norms.
pub const NORM_GRID: usize = 256;
/// Safety factor applied to sampled norms.
pub const NORM_SAFETY: f64 = 1.5;

impl<T: Real> Amplitude<T> {
    pub fn bump(center: [T; 2], radius: T) -> Self {
        assert!(radius > T::zero(), "bump radius must be positive");
        let mut a = Self {
            center,
            radius,
            scale: T::one(),
            c1_norm: T::zero(),
            c2_norm: T::zero(),
        };
        let (c1, c2) = a.sampled_norms(NORM_GRID);
        a.c1_norm = T::lit(NORM_SAFETY) * c1;
        a.c2_norm = T::lit(NORM_SAFETY) * c2;
        a
    }

    /// The same bump multiplied by `k`; norms scale by `|k|`.
    pub fn scaled(&self, k: T) -> Self {
        Self {
            scale: self.scale * k,
            c1_norm: self.c1_norm * k.abs(),
            c2_norm: self.c2_norm * k.abs(),
            ..*self
        }
    }

    pub fn center(&self) -> [T; 2] {
        self.center
    }

    pub fn radius(&self) -> T {
        self.radius
    }

    pub fn scale(&self) -> T {
        self.scale
    }

    /// `||a||_{C^1}`: sampled `max(|a| + |d1 a| + |d2 a|)` times the safety factor.
    pub fn c1_norm(&self) -> T {
        self.c1_norm
    }

    /// `||a||_{C^2}`, same convention with second derivatives included.
    pub fn c2_norm(&self) -> T {
        self.c2_norm
    }

    fn local(&self, x: [T; 2]) -> ([T; 2], T) {
        let d = [(x[0] - self.center[0]) / self.radius, (x[1] - self.center[1]) / self.radius];
        (d, d[0] * d[0] + d[1] * d[1])
    }

    pub fn gradient(&self, x: [T; 2]) -> [T; 2] {
        let (d, s) = self.local(x);
        if s >= T::one() {
            return [T::zero(); 2];
        }
        let v = self.scale * profile(s);
        let u = T::one() / (T::one() - s);
        let k = -v * u * u * T::lit(2.0) / self.radius;
        [k * d[0], k * d[1]]
    }

    /// Second derivatives `[d11, d12, d22]`.
    pub fn hessian(&self, x: [T; 2]) -> [T; 3] {
        let (d, s) = self.local(x);
        if s >= T::one() {
            return [T::zero(); 3];
        }
        let v = self.scale * profile(s);
        let u = T::one() / (T::one() - s);
        let two = T::lit(2.0);
        let sk = [two * d[0] / self.radius, two * d[1] / self.radius];
        let skk = two / (self.radius * self.radius);
        let c = u.powi(4) - two * u.powi(3);
        [
            v * (c * sk[0] * sk[0] - u * u * skk),
            v * c * sk[0] * sk[1],
            v * (c * sk[1] * sk[1] - u * u * skk),
        ]
    }

    fn sampled_norms(&self, grid: usize) -> (T, T) {
        let rect = self.support();
        let step_x = rect.width() / T::count(grid - 1);
        let step_y = rect.height() / T::count(grid - 1);
        let mut c1 = T::zero();
        let mut c2 = T::zero();
        for a in 0..grid {
            for b in 0..grid {
                let x = [rect.x0 + step_x * T::count(a), rect.y0 + step_y * T::count(b)];
                let g = self.gradient(x);
                let h = self.hessian(x);
                let first = self.value(x).abs() + g[0].abs() + g[1].abs();
                c1 = c1.max(first);
                c2 = c2.max(first + h[0].abs() + T::lit(2.0) * h[1].abs() + h[2].abs());
            }
        }
        (c1, c2)
    }
}

impl<T: Real> Weight2<T> for Amplitude<T> {
    #[inline]
    fn value(&self, x: [T; 2]) -> T {
        let (_, s) = self.local(x);
        self.scale * profile(s)
    }

    fn sup_on(&self, rect: &Rect<T>) -> T {
        // the profile is radially decreasing, so the nearest point attains the sup
        self.value(rect.clamp(self.center)).abs()
    }

    fn support(&self) -> Rect<T> {
        Rect::square(self.center, self.radius)
    }
}

/// One-dimensional bump `k * exp(1 - 1/(1 - ((x - c)/r)^2))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bump1<T> {
    center: T,
    radius: T,
    scale: T,
}

impl<T: Real> Bump1<T> {
    pub fn new(center: T, radius: T) -> Self {
        assert!(radius > T::zero(), "bump radius must be positive");
        Self {
            center,
            radius,
            scale: T::one(),
        }
    }

    pub fn scaled(&self, k: T) -> Self {
        Self {
            scale: self.scale * k,
            ..*self
        }
    }

    pub fn center(&self) -> T {
        self.center
    }

    pub fn radius(&self) -> T {
        self.radius
    }
}

impl<T: Real> Weight1<T> for Bump1<T> {
    #[inline]
    fn value(&self, x: T) -> T {
        let d = (x - self.center) / self.radius;
        self.scale * profile(d * d)
    }

    fn sup_on(&self, a: T, b: T) -> T {
        self.value(self.center.max(a).min(b)).abs()
    }

    fn support(&self) -> (T, T) {
        (self.center - self.radius, self.center + self.radius)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn bump_examples() {
        let a = Amplitude::bump([0.1, -0.2], 0.5_f64);
        assert_eq!(a.value([0.1, -0.2]), 1.0);
        assert_eq!(a.value([0.6, -0.2]), 0.0);
        let r = 0.5 / 2f64.sqrt();
        assert_relative_eq!(a.value([0.1 + r, -0.2]), (-1.0f64).exp(), max_relative = 1e-14);
        assert!(a.c1_norm() >= 1.0);
        assert!(a.c2_norm() >= a.c1_norm());
    }

    #[test]
    fn derivatives_match_differences() {
        let a = Amplitude::bump([0.0, 0.0], 0.7_f64);
        let h = 1e-5;
        for x in [[0.1, 0.2], [-0.3, 0.35], [0.5, -0.1]] {
            let g = a.gradient(x);
            let fd1 = (a.value([x[0] + h, x[1]]) - a.value([x[0] - h, x[1]])) / (2.0 * h);
            let fd2 = (a.value([x[0], x[1] + h]) - a.value([x[0], x[1] - h])) / (2.0 * h);
            assert_relative_eq!(g[0], fd1, epsilon = 1e-8);
            assert_relative_eq!(g[1], fd2, epsilon = 1e-8);
            let hs = a.hessian(x);
            let g1p = a.gradient([x[0] + h, x[1]]);
            let g1m = a.gradient([x[0] - h, x[1]]);
            let g2p = a.gradient([x[0], x[1] + h]);
            let g2m = a.gradient([x[0], x[1] - h]);
            assert_relative_eq!(hs[0], (g1p[0] - g1m[0]) / (2.0 * h), epsilon = 1e-6);
            assert_relative_eq!(hs[1], (g2p[0] - g2m[0]) / (2.0 * h), epsilon = 1e-6);
            assert_relative_eq!(hs[2], (g2p[1] - g2m[1]) / (2.0 * h), epsilon = 1e-6);
        }
    }

    #[test]
    fn sup_on_is_exact_for_radial_profile() {
        let a = Amplitude::bump([0.0, 0.0], 1.0_f64);
        assert_eq!(a.sup_on(&Rect::new(-0.1, 0.1, -0.1, 0.1)), 1.0);
        assert_eq!(a.sup_on(&Rect::new(1.0, 2.0, 1.0, 2.0)), 0.0);
        let r = Rect::new(0.3, 0.5, 0.4, 0.6);
        assert_eq!(a.sup_on(&r), a.value([0.3, 0.4]));
        for k in 0..=10 {
            let t = k as f64 / 10.0;
            assert!(a.value([0.3 + 0.2 * t, 0.4 + 0.2 * t]) <= a.sup_on(&r));
        }
    }

    #[test]
    fn scaled_bump() {
        let a = Amplitude::bump([0.0, 0.0], 0.5_f64);
        let b = a.scaled(2.0);
        assert_eq!(b.value([0.1, 0.1]), 2.0 * a.value([0.1, 0.1]));
        assert_relative_eq!(b.c1_norm(), 2.0 * a.c1_norm());
    }

    #[test]
    fn bump1() {
        let b = Bump1::new(0.35_f64, 0.65);
        assert_eq!(b.value(0.35), 1.0);
        assert_eq!(b.value(1.0), 0.0);
        assert_eq!(b.value(-0.3), 0.0);
        assert_eq!(b.sup_on(2.0, 3.0), 0.0);
        assert_eq!(b.sup_on(-1.0, 0.0), b.value(0.0));
    }
}
