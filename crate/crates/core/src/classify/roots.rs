use std::f64::consts::PI;

use super::{ClassifyError, QuarticForm};

/// A projective real root of the form, as a direction angle in `[0, pi)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CircleRoot {
    pub angle: f64,
    pub multiplicity: u32,
}

/// `g(t) = f(cos t, sin t)` as `c0 + c2 cos 2t + s2 sin 2t + c4 cos 4t + s4 sin 4t`.
struct Harmonic {
    c0: f64,
    c2: f64,
    s2: f64,
    c4: f64,
    s4: f64,
}

impl Harmonic {
    fn new(f: &QuarticForm) -> Self {
        Self {
            c0: (3.0 * f.a40 + f.a22 + 3.0 * f.a04) / 8.0,
            c2: (f.a40 - f.a04) / 2.0,
            s2: (f.a31 + f.a13) / 4.0,
            c4: (f.a40 - f.a22 + f.a04) / 8.0,
            s4: (f.a31 - f.a13) / 8.0,
        }
    }

    fn norm(&self) -> f64 {
        self.c0.abs() + self.c2.abs() + self.s2.abs() + self.c4.abs() + self.s4.abs()
    }

    /// `j`-th derivative in `t`.
    fn deriv(&self, j: u32, t: f64) -> f64 {
        // d^j/dt^j of cos(kt), sin(kt) cycles through (cos, -sin, -cos, sin) scaled by k^j
        let term = |c: f64, s: f64, k: f64| {
            let (sn, cs) = (k * t).sin_cos();
            let kj = k.powi(j as i32);
            let (dc, ds) = match j % 4 {
                0 => (cs, sn),
                1 => (-sn, cs),
                2 => (-cs, -sn),
                _ => (sn, -cs),
            };
            kj * (c * dc + s * ds)
        };
        let constant = if j == 0 { self.c0 } else { 0.0 };
        constant + term(self.c2, self.s2, 2.0) + term(self.c4, self.s4, 4.0)
    }
}

const SCAN: usize = 2048;
const CLUSTER: f64 = 1e-4;
/// First non-vanishing derivative must clear its threshold by this factor.
const MARGIN: f64 = 100.0;
/// Other roots must lie this many flat-zone widths away from a multiple root.
const ZONE: f64 = 10.0;

fn bisect(h: &Harmonic, j: u32, mut a: f64, mut b: f64) -> f64 {
    let mut fa = h.deriv(j, a);
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        let fm = h.deriv(j, m);
        if fm == 0.0 {
            return m;
        }
        if (fa < 0.0) == (fm < 0.0) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

/// Multiplicity at `t`: index of the first derivative above `tol 4^j ||g||`, and
/// that derivative's ratio to its threshold.
fn multiplicity(h: &Harmonic, t: f64, tol: f64) -> (u32, f64) {
    let scale = h.norm();
    for j in 0..=5u32 {
        let threshold = tol * 4f64.powi(j as i32) * scale;
        let v = h.deriv(j, t).abs();
        if v > threshold {
            return (j, v / threshold);
        }
    }
    (6, f64::INFINITY)
}

fn wrap(t: f64) -> f64 {
    let r = t.rem_euclid(PI);
    if r >= PI {
        0.0
    } else {
        r
    }
}

/// Real projective roots of `f` with multiplicities.
///
/// A root of multiplicity `m` is a simple zero of the `(m-1)`-th derivative
/// of `g(t) = f(cos t, sin t)`, so sign changes of `g, g', g'', g'''` on a
/// uniform scan are bisected to full precision. A candidate is kept when `g`
/// vanishes there relative to `tol`, and candidates closer than `1e-4` are
/// merged with the largest multiplicity. When the first non-vanishing
/// derivative is within a factor 100 of its threshold the cluster is
/// reported as [`ClassifyError::IllConditioned`].
pub fn circle_roots(f: &QuarticForm, tol: f64) -> Result<Vec<CircleRoot>, ClassifyError> {
    if f.norm1() == 0.0 {
        return Err(ClassifyError::NotQuartic);
    }
    let h = Harmonic::new(f);
    let step = PI / SCAN as f64;
    // (angle, multiplicity, precision order j, margin)
    let mut cands: Vec<(f64, u32, u32, f64)> = Vec::new();
    for j in 0..4u32 {
        let mut prev = h.deriv(j, 0.0);
        for k in 1..=SCAN {
            let t = step * k as f64;
            let cur = h.deriv(j, t);
            let zero = if prev == 0.0 {
                Some(step * (k - 1) as f64)
            } else if (prev < 0.0) != (cur < 0.0) && cur != 0.0 {
                Some(bisect(&h, j, t - step, t))
            } else {
                None
            };
            if let Some(z) = zero {
                let (m, margin) = multiplicity(&h, z, tol);
                if m > 0 {
                    cands.push((wrap(z), m, j, margin));
                }
            }
            prev = cur;
        }
    }
    cands.sort_by(|a, b| a.0.total_cmp(&b.0));

    let mut clusters: Vec<Vec<(f64, u32, u32, f64)>> = Vec::new();
    for c in cands {
        match clusters.last_mut() {
            Some(cl) if c.0 - cl.last().map(|x| x.0).unwrap_or(c.0) <= CLUSTER => cl.push(c),
            _ => clusters.push(vec![c]),
        }
    }
    // the circle of directions is periodic
    if clusters.len() > 1 {
        let first = clusters[0][0].0;
        let last = clusters.last().and_then(|c| c.last()).map(|c| c.0).unwrap_or(first);
        if first + PI - last <= CLUSTER {
            let head = clusters.remove(0);
            clusters.last_mut().expect("nonempty").extend(head);
        }
    }

    let mut roots: Vec<(CircleRoot, f64)> = Vec::with_capacity(clusters.len());
    for cl in clusters {
        let best = cl
            .iter()
            .copied()
            .max_by(|a, b| a.1.cmp(&b.1).then(a.2.cmp(&b.2)))
            .expect("cluster nonempty");
        let (angle, m, _, margin) = best;
        if m > 4 {
            return Err(ClassifyError::IllConditioned { angle });
        }
        if margin < MARGIN {
            return Err(ClassifyError::IllConditioned { angle });
        }
        roots.push((CircleRoot { angle, multiplicity: m }, margin));
    }
    roots.sort_by(|a, b| a.0.angle.total_cmp(&b.0.angle));
    resolved(&roots)?;
    Ok(roots.into_iter().map(|r| r.0).collect())
}

/// Rejects root sets the tolerance cannot separate: an odd total multiplicity
/// (complex roots come in pairs), or a multiple root whose flat zone, where
/// `|g|` stays below the tolerance, reaches another root.
fn resolved(roots: &[(CircleRoot, f64)]) -> Result<(), ClassifyError> {
    let total: u32 = roots.iter().map(|r| r.0.multiplicity).sum();
    if total % 2 == 1 {
        let angle = roots.iter().find(|r| r.0.multiplicity % 2 == 1).map_or(0.0, |r| r.0.angle);
        return Err(ClassifyError::IllConditioned { angle });
    }
    for (r, margin) in roots.iter().filter(|r| r.0.multiplicity >= 2) {
        let m = r.multiplicity as i32;
        let factorial: f64 = (1..=m).map(f64::from).product();
        // |g^(m)| = margin * tol * 4^m * ||g||, so |g| <= tol ||g|| out to this width
        let width = (factorial / (margin * 4f64.powi(m))).powf(1.0 / m as f64);
        for (other, _) in roots.iter().filter(|o| o.0.angle != r.angle) {
            let d = (other.angle - r.angle).rem_euclid(PI);
            if d.min(PI - d) <= ZONE * width {
                return Err(ClassifyError::IllConditioned { angle: r.angle });
            }
        }
    }
    Ok(())
}
