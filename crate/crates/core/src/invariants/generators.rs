//! Seeded random shapes for the property suites.
//!
//! Curves are star-shaped about the origin: `r(θ) = r0·exp(p(θ))` with `p` a
//! trigonometric polynomial of low degree whose coefficient sum is capped, so
//! every sample is a simple polygon with `r0·e^{−A} ≤ |z| ≤ r0·e^{A}`.

use std::f64::consts::{PI, TAU};

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::geometry::{DomainSpec, Point, QuadrilateralSpec};

/// Independent stream for one trial of a seeded run.
pub fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    rng
}

#[derive(Debug, Clone, PartialEq)]
pub struct StarCurve {
    pub r0: f64,
    /// `(a_k, b_k)` for `k = 1, 2, …`.
    pub coeffs: Vec<(f64, f64)>,
    pub center: Point,
}

impl StarCurve {
    pub fn circle(r0: f64) -> StarCurve {
        StarCurve { r0, coeffs: Vec::new(), center: Point::new(0.0, 0.0) }
    }

    /// Random curve of degree ≤ `degree` with coefficient sum at most `amplitude`.
    pub fn random(rng: &mut impl Rng, r0: f64, degree: usize, amplitude: f64) -> StarCurve {
        let n = rng.gen_range(1..=degree.max(1));
        let raw: Vec<(f64, f64)> = (0..n).map(|_| (rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
        let total: f64 = raw.iter().map(|c| c.0.abs() + c.1.abs()).sum();
        let a = amplitude * rng.gen_range(0.2..1.0);
        let s = if total > 0.0 { a / total } else { 0.0 };
        StarCurve { r0, coeffs: raw.into_iter().map(|(x, y)| (x * s, y * s)).collect(), center: Point::new(0.0, 0.0) }
    }

    pub fn random_scaled(rng: &mut impl Rng, r0: std::ops::Range<f64>, degree: usize, amplitude: f64) -> StarCurve {
        let r0 = rng.gen_range(r0);
        StarCurve::random(rng, r0, degree, amplitude)
    }

    pub fn amplitude(&self) -> f64 {
        self.coeffs.iter().map(|c| c.0.abs() + c.1.abs()).sum()
    }

    pub fn radius(&self, theta: f64) -> f64 {
        let p: f64 = self.coeffs.iter().enumerate().map(|(k, &(a, b))| {
            let k = (k + 1) as f64;
            a * (k * theta).cos() + b * (k * theta).sin()
        }).sum();
        self.r0 * p.exp()
    }

    pub fn vertices(&self, n: usize) -> Vec<Point> {
        (0..n).map(|k| {
            let t = TAU * k as f64 / n as f64;
            self.center + Point::from_polar(self.radius(t), t)
        }).collect()
    }

    /// Guaranteed radial bounds of the `n`-gon about `center`, accounting for chords.
    pub fn bounds(&self, n: usize) -> (f64, f64) {
        let a = self.amplitude();
        (self.r0 * (-a).exp() * (PI / n as f64).cos(), self.r0 * a.exp())
    }

    pub fn polygon(&self, n: usize) -> DomainSpec {
        DomainSpec::polygon(&self.vertices(n))
    }

    pub fn describe(&self) -> String {
        let c: Vec<String> = self.coeffs.iter().map(|(a, b)| format!("{a:.4}/{b:.4}")).collect();
        format!("r0={:.4} c=[{}]", self.r0, c.join(" "))
    }
}

/// Convex quadrilateral from four sorted angles on a jittered circle.
pub fn random_convex_quad(rng: &mut impl Rng) -> QuadrilateralSpec {
    loop {
        let mut t: Vec<f64> = (0..4).map(|_| rng.gen_range(0.0..TAU)).collect();
        t.sort_by(f64::total_cmp);
        let v: Vec<Point> = t.iter().map(|&t| Point::from_polar(rng.gen_range(0.6..1.0), t)).collect();
        if is_convex(&v) && min_gap(&t) > 0.3 {
            return QuadrilateralSpec::new(&v, [0, 1, 2, 3]);
        }
    }
}

fn min_gap(t: &[f64]) -> f64 {
    let n = t.len();
    (0..n).map(|i| {
        let d = t[(i + 1) % n] - t[i];
        if d < 0.0 { d + TAU } else { d }
    }).fold(f64::INFINITY, f64::min)
}

/// Strict convexity of a counterclockwise polygon.
pub fn is_convex(v: &[Point]) -> bool {
    let n = v.len();
    (0..n).all(|i| {
        let a = v[(i + 1) % n] - v[i];
        let b = v[(i + 2) % n] - v[(i + 1) % n];
        (a.conj() * b).im > 1e-3 * a.norm() * b.norm()
    })
}
