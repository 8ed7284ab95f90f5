//! Sampled curves, logarithmic length, oscillation and logarithmic area.

use std::f64::consts::TAU;

use super::polygon;
use super::spec::{DomainSpec, RingDomainSpec};
use super::Point;
use crate::error::{Error, Result};
use crate::quadrature::integrate;

/// Ordered points approximating a curve.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveSamples {
    pub points: Vec<Point>,
    pub closed: bool,
}

impl CurveSamples {
    pub fn closed(points: Vec<Point>) -> CurveSamples {
        CurveSamples { points, closed: true }
    }

    pub fn open(points: Vec<Point>) -> CurveSamples {
        CurveSamples { points, closed: false }
    }

    /// `n` points of `f(θ)` for `θ = 2πk/n`.
    pub fn from_fn(n: usize, f: impl Fn(f64) -> Point) -> CurveSamples {
        CurveSamples::closed((0..n).map(|k| f(TAU * k as f64 / n as f64)).collect())
    }

    pub fn circle(r: f64, n: usize) -> CurveSamples {
        CurveSamples::from_fn(n, |t| Point::from_polar(r, t))
    }

    pub fn segments(&self) -> impl Iterator<Item = (Point, Point)> + '_ {
        let n = self.points.len();
        let m = if self.closed { n } else { n.saturating_sub(1) };
        (0..m).map(move |i| (self.points[i], self.points[(i + 1) % n]))
    }

    pub fn scaled(&self, c: f64) -> CurveSamples {
        CurveSamples { points: self.points.iter().map(|p| p * c).collect(), closed: self.closed }
    }

    pub fn to_polygon(&self) -> DomainSpec {
        DomainSpec::polygon(&self.points)
    }
}

fn asinh_diff(u: f64, v: f64) -> f64 {
    if u <= 0.0 && v <= 0.0 {
        (-v).asinh() - (-u).asinh()
    } else {
        u.asinh() - v.asinh()
    }
}

/// `∫ |dz| / |z|` over the segment `a → b`, in closed form.
fn segment_log_length(a: Point, b: Point) -> f64 {
    let d = b - a;
    let dd = d.norm();
    if dd == 0.0 {
        return 0.0;
    }
    let s0 = (a * d.conj()).re / (dd * dd);
    let q = (a.re * d.im - a.im * d.re).abs() / (dd * dd);
    if q <= 1e-15 * (s0.abs() + 1.0) {
        ((1.0 + s0).abs() / s0.abs()).ln().abs()
    } else {
        asinh_diff((1.0 + s0) / q, s0 / q)
    }
}

fn passes_origin(a: Point, b: Point) -> bool {
    super::primitives::point_segment_distance(Point::new(0.0, 0.0), a, b) <= 1e-300
}

/// Length in the metric `|dz|/|z|` of the polygonal path through the samples.
pub fn logarithmic_length(path: &CurveSamples) -> Result<f64> {
    let mut total = 0.0;
    for (a, b) in path.segments() {
        if passes_origin(a, b) {
            return Err(Error::InvalidArgument("path passes through the origin".into()));
        }
        total += segment_log_length(a, b);
    }
    Ok(total)
}

/// `(min |z|, max |z|, log(max/min))` over the samples.
pub fn curve_radii(curve: &CurveSamples) -> Result<(f64, f64, f64)> {
    if curve.points.is_empty() {
        return Err(Error::InvalidArgument("empty curve".into()));
    }
    let (mut r1, mut r2) = (f64::INFINITY, 0.0f64);
    for p in &curve.points {
        let r = p.norm();
        r1 = r1.min(r);
        r2 = r2.max(r);
    }
    if r1 <= 0.0 {
        return Err(Error::InvalidArgument("curve passes through the origin".into()));
    }
    Ok((r1, r2, (r2 / r1).ln()))
}

/// `∫ log|z| d arg z` along the segment `a → b`.
fn segment_log_angle(a: Point, b: Point) -> f64 {
    let d = b - a;
    let f = |t: f64| {
        let z = a + d * t;
        z.norm().ln() * (d / z).im
    };
    integrate(f, 0.0, 1.0, 1e-13, 1e-12).value
}

/// `∮ log|z| d arg z` around a counterclockwise boundary curve.
fn boundary_log_angle(d: &DomainSpec) -> Result<f64> {
    match d {
        DomainSpec::Disk { center, radius } => {
            let c = Point::new(center[0], center[1]);
            let a = *radius;
            let f = |t: f64| {
                let e = Point::from_polar(1.0, t);
                let z = c + e * a;
                z.norm().ln() * (Point::new(0.0, a) * e / z).im
            };
            let mut total = 0.0;
            for k in 0..16 {
                let t0 = TAU * k as f64 / 16.0;
                total += integrate(f, t0, t0 + TAU / 16.0, 1e-14, 1e-13).value;
            }
            Ok(total)
        }
        DomainSpec::Polygon { .. } => {
            let vs = d.vertices().unwrap();
            let sign = if polygon::signed_area(&vs) >= 0.0 { 1.0 } else { -1.0 };
            Ok(sign * polygon::edges(&vs).map(|(a, b)| segment_log_angle(a, b)).sum::<f64>())
        }
        other => Err(Error::InvalidDomain(format!("no closed boundary curve for {}", super::kind_name(other)))),
    }
}

fn require_origin_inside(d: &DomainSpec, what: &str) -> Result<()> {
    let o = Point::new(0.0, 0.0);
    if !d.contains(o) || d.boundary_distance(o) <= 0.0 {
        return Err(Error::InvalidDomain(format!("{what} must contain the origin in its interior")));
    }
    Ok(())
}

/// `∬ dx dy / |z|²` over a ring whose inner continuum holds the origin.
/// Unbounded rings are cut off at `|z| = truncation`.
pub fn logarithmic_area(ring: &RingDomainSpec, truncation: Option<f64>) -> Result<f64> {
    ring.validate()?;
    let need_t = |lo: f64| -> Result<f64> {
        match truncation {
            Some(t) if t > lo => Ok(t),
            _ => Err(Error::InvalidArgument(format!("unbounded ring needs a truncation radius beyond {lo}"))),
        }
    };
    match ring {
        RingDomainSpec::Canonical(d) => match *d {
            DomainSpec::Annulus { r, big_r } => Ok(TAU * (big_r / r).ln()),
            DomainSpec::Grotzsch { p } => Ok(TAU * need_t(p)?.ln()),
            DomainSpec::SlitAnnulus { r2, .. } => Ok(TAU * r2.ln()),
            DomainSpec::Teichmuller { .. } => Err(Error::InvalidDomain("origin lies on the boundary; logarithmic area is infinite".into())),
            _ => unreachable!("validated ring kind"),
        },
        RingDomainSpec::Between { outer, inner } => {
            let inner_part = match inner {
                DomainSpec::Disk { .. } | DomainSpec::Polygon { .. } => {
                    require_origin_inside(inner, "inner continuum")?;
                    boundary_log_angle(inner)?
                }
                _ => return Err(Error::InvalidDomain("origin must lie in the interior of the inner continuum".into())),
            };
            let outer_part = match outer {
                DomainSpec::PlaneMinusSlits { .. } => {
                    let (_, ext) = outer.finite_extent(Point::new(0.0, 0.0));
                    TAU * need_t(ext)?.ln()
                }
                _ => boundary_log_angle(outer)?,
            };
            Ok(outer_part - inner_part)
        }
    }
}

/// `∮_{∂G} log|z| d arg z` for a disk or polygon containing the origin; the
/// reduced logarithmic area, which bounds `2π` times the reduced module at 0.
pub fn reduced_logarithmic_area(domain: &DomainSpec) -> Result<f64> {
    domain.validate()?;
    require_origin_inside(domain, "domain")?;
    boundary_log_angle(domain)
}
