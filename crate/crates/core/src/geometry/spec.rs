//! Domain descriptions and their boundary pieces.

use serde::{Deserialize, Serialize};

use super::grid::{FrameSpec, Scene};
use super::polygon;
use super::primitives::{BoundaryLabel, Piece, Shape};
use super::Point;
use crate::error::{Error, Result};

type Xy = [f64; 2];

fn pt(v: Xy) -> Point {
    Point::new(v[0], v[1])
}

fn xy(p: Point) -> Xy {
    [p.re, p.im]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Slit {
    Ray { from: Xy, direction: Xy },
    Segment { from: Xy, to: Xy },
}

impl Slit {
    fn start(&self) -> Point {
        match self {
            Slit::Ray { from, .. } | Slit::Segment { from, .. } => pt(*from),
        }
    }

    fn piece(&self, label: BoundaryLabel, far: f64) -> Piece {
        match self {
            Slit::Segment { from, to } => Piece::segment(pt(*from), pt(*to), label),
            Slit::Ray { from, direction } => {
                let a = pt(*from);
                let d = pt(*direction);
                let d = d / d.norm();
                Piece::segment(a, a + d * (far + a.norm()), label)
            }
        }
    }
}

/// A plane domain. Slits have measure zero, so membership ignores them; they
/// enter only through boundary pieces.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum DomainSpec {
    Disk { center: Xy, radius: f64 },
    Annulus { r: f64, #[serde(rename = "R")] big_r: f64 },
    Polygon { vertices: Vec<Xy> },
    Grotzsch { #[serde(rename = "P")] p: f64 },
    Teichmuller { rho: f64, #[serde(rename = "P")] p: f64 },
    SlitAnnulus { #[serde(rename = "R2")] r2: f64, #[serde(rename = "P1")] p1: f64 },
    PlaneMinusSlits { slits: Vec<Slit> },
    ComplementOf { of: Box<DomainSpec> },
}

impl DomainSpec {
    pub fn disk(center: Point, radius: f64) -> DomainSpec {
        DomainSpec::Disk { center: xy(center), radius }
    }

    pub fn annulus(r: f64, big_r: f64) -> DomainSpec {
        DomainSpec::Annulus { r, big_r }
    }

    pub fn polygon(vertices: &[Point]) -> DomainSpec {
        DomainSpec::Polygon { vertices: vertices.iter().map(|&p| xy(p)).collect() }
    }

    pub fn grotzsch(p: f64) -> DomainSpec {
        DomainSpec::Grotzsch { p }
    }

    pub fn teichmuller(rho: f64, p: f64) -> DomainSpec {
        DomainSpec::Teichmuller { rho, p }
    }

    pub fn slit_annulus(r2: f64, p1: f64) -> DomainSpec {
        DomainSpec::SlitAnnulus { r2, p1 }
    }

    pub fn complement_of(of: DomainSpec) -> DomainSpec {
        DomainSpec::ComplementOf { of: Box::new(of) }
    }

    /// The plane minus the ray `[from, ∞)` in direction `dir`.
    pub fn plane_minus_ray(from: Point, dir: Point) -> DomainSpec {
        DomainSpec::PlaneMinusSlits { slits: vec![Slit::Ray { from: xy(from), direction: xy(dir) }] }
    }

    pub fn vertices(&self) -> Option<Vec<Point>> {
        match self {
            DomainSpec::Polygon { vertices } => Some(vertices.iter().map(|&v| pt(v)).collect()),
            _ => None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidDomain(m));
        let finite = |xs: &[f64]| xs.iter().all(|x| x.is_finite());
        match self {
            DomainSpec::Disk { center, radius } => {
                if !(finite(center) && radius.is_finite() && *radius > 0.0) {
                    return bad(format!("disk needs a finite center and positive radius, got radius {radius}"));
                }
            }
            DomainSpec::Annulus { r, big_r } => {
                if !(finite(&[*r, *big_r]) && *r > 0.0 && r < big_r) {
                    return Err(Error::DegenerateRing(format!("annulus requires 0 < r < R, got r = {r}, R = {big_r}")));
                }
            }
            DomainSpec::Polygon { vertices } => {
                let vs: Vec<Point> = vertices.iter().map(|&v| pt(v)).collect();
                if !vertices.iter().all(|v| finite(v)) {
                    return bad("polygon has non-finite vertices".into());
                }
                if !polygon::is_simple(&vs) {
                    return bad("polygon vertex list is not a simple closed chain".into());
                }
            }
            DomainSpec::Grotzsch { p } => {
                if !(p.is_finite() && *p > 1.0) {
                    return bad(format!("grotzsch requires P > 1, got {p}"));
                }
            }
            DomainSpec::Teichmuller { rho, p } => {
                if !(finite(&[*rho, *p]) && *rho > 0.0 && *p > 0.0) {
                    return bad(format!("teichmuller requires rho > 0 and P > 0, got rho = {rho}, P = {p}"));
                }
            }
            DomainSpec::SlitAnnulus { r2, p1 } => {
                if !(finite(&[*r2, *p1]) && 1.0 < *p1 && p1 < r2) {
                    return bad(format!("slit-annulus requires 1 < P1 < R2, got R2 = {r2}, P1 = {p1}"));
                }
            }
            DomainSpec::PlaneMinusSlits { slits } => {
                if slits.is_empty() {
                    return bad("plane-minus-slits needs at least one slit".into());
                }
                for s in slits {
                    let ok = match s {
                        Slit::Ray { from, direction } => finite(from) && finite(direction) && pt(*direction).norm() > 0.0,
                        Slit::Segment { from, to } => finite(from) && finite(to) && from != to,
                    };
                    if !ok {
                        return bad(format!("degenerate slit {s:?}"));
                    }
                }
            }
            DomainSpec::ComplementOf { of } => of.validate()?,
        }
        Ok(())
    }

    /// Membership in the open domain.
    pub fn contains(&self, z: Point) -> bool {
        match self {
            DomainSpec::Disk { center, radius } => (z - pt(*center)).norm() < *radius,
            DomainSpec::Annulus { r, big_r } => {
                let a = z.norm();
                *r < a && a < *big_r
            }
            DomainSpec::Polygon { vertices } => {
                let vs: Vec<Point> = vertices.iter().map(|&v| pt(v)).collect();
                polygon::contains(&vs, z)
            }
            DomainSpec::Grotzsch { .. } => z.norm() > 1.0,
            DomainSpec::Teichmuller { .. } | DomainSpec::PlaneMinusSlits { .. } => true,
            DomainSpec::SlitAnnulus { r2, .. } => {
                let a = z.norm();
                1.0 < a && a < *r2
            }
            DomainSpec::ComplementOf { of } => !of.contains_closed(z),
        }
    }

    /// Membership in the closure.
    pub fn contains_closed(&self, z: Point) -> bool {
        match self {
            DomainSpec::Disk { center, radius } => (z - pt(*center)).norm() <= *radius,
            DomainSpec::Annulus { r, big_r } => {
                let a = z.norm();
                *r <= a && a <= *big_r
            }
            DomainSpec::Polygon { vertices } => {
                let vs: Vec<Point> = vertices.iter().map(|&v| pt(v)).collect();
                polygon::contains(&vs, z) || polygon::boundary_distance(&vs, z) <= 1e-12 * polygon::scale(&vs)
            }
            DomainSpec::Grotzsch { .. } => z.norm() >= 1.0,
            DomainSpec::Teichmuller { .. } | DomainSpec::PlaneMinusSlits { .. } => true,
            DomainSpec::SlitAnnulus { r2, .. } => {
                let a = z.norm();
                1.0 <= a && a <= *r2
            }
            DomainSpec::ComplementOf { of } => !of.contains(z),
        }
    }

    pub fn is_bounded(&self) -> bool {
        matches!(self, DomainSpec::Disk { .. } | DomainSpec::Annulus { .. } | DomainSpec::Polygon { .. } | DomainSpec::SlitAnnulus { .. })
    }

    /// Whether some boundary piece runs off to infinity.
    pub fn has_rays(&self) -> bool {
        match self {
            DomainSpec::Grotzsch { .. } | DomainSpec::Teichmuller { .. } => true,
            DomainSpec::PlaneMinusSlits { slits } => slits.iter().any(|s| matches!(s, Slit::Ray { .. })),
            DomainSpec::ComplementOf { of } => of.has_rays(),
            _ => false,
        }
    }

    /// Boundary pieces with one label; rays are cut off at distance `far` beyond their start.
    pub fn pieces(&self, label: BoundaryLabel, far: f64) -> Vec<Piece> {
        let o = Point::new(0.0, 0.0);
        match self {
            DomainSpec::Disk { center, radius } => vec![Piece::circle(pt(*center), *radius, label)],
            DomainSpec::Annulus { r, big_r } => vec![Piece::circle(o, *r, label), Piece::circle(o, *big_r, label)],
            DomainSpec::Polygon { vertices } => {
                let vs: Vec<Point> = vertices.iter().map(|&v| pt(v)).collect();
                polygon::edges(&vs).map(|(a, b)| Piece::segment(a, b, label)).collect()
            }
            DomainSpec::Grotzsch { p } => {
                vec![Piece::circle(o, 1.0, label), Piece::segment(Point::new(*p, 0.0), Point::new(p + far, 0.0), label)]
            }
            DomainSpec::Teichmuller { rho, p } => vec![
                Piece::segment(Point::new(-rho, 0.0), o, label),
                Piece::segment(Point::new(*p, 0.0), Point::new(p + far, 0.0), label),
            ],
            DomainSpec::SlitAnnulus { r2, p1 } => vec![
                Piece::circle(o, 1.0, label),
                Piece::circle(o, *r2, label),
                Piece::segment(Point::new(*p1, 0.0), Point::new(*r2, 0.0), label),
            ],
            DomainSpec::PlaneMinusSlits { slits } => slits.iter().map(|s| s.piece(label, far)).collect(),
            DomainSpec::ComplementOf { of } => of.pieces(label, far),
        }
    }

    /// Smallest and largest distance from `c` to the finite part of the boundary.
    pub fn finite_extent(&self, c: Point) -> (f64, f64) {
        let pieces = match self {
            DomainSpec::Grotzsch { p } => {
                vec![Piece::circle(Point::new(0.0, 0.0), 1.0, BoundaryLabel::Zero), Piece::segment(Point::new(*p, 0.0), Point::new(*p, 0.0), BoundaryLabel::Zero)]
            }
            DomainSpec::Teichmuller { rho, p } => vec![Piece::segment(Point::new(-rho, 0.0), Point::new(*p, 0.0), BoundaryLabel::Zero)],
            DomainSpec::PlaneMinusSlits { slits } => slits
                .iter()
                .map(|s| match s {
                    Slit::Ray { .. } => Piece::segment(s.start(), s.start(), BoundaryLabel::Zero),
                    Slit::Segment { .. } => s.piece(BoundaryLabel::Zero, 0.0),
                })
                .collect(),
            DomainSpec::ComplementOf { of } => return of.finite_extent(c),
            _ => self.pieces(BoundaryLabel::Zero, 0.0),
        };
        let mut lo = f64::INFINITY;
        let mut hi: f64 = 0.0;
        for p in &pieces {
            let (a, b) = p.distance_range(c);
            lo = lo.min(a);
            hi = hi.max(b);
        }
        if matches!(self, DomainSpec::Teichmuller { .. }) {
            lo = lo.min(c.norm());
        }
        (lo, hi)
    }

    /// Distance from `c` to the boundary, counting rays in full.
    pub fn boundary_distance(&self, c: Point) -> f64 {
        let (_, hi) = self.finite_extent(c);
        self.pieces(BoundaryLabel::Zero, 4.0 * hi + 1.0)
            .iter()
            .map(|p| p.distance_range(c).0)
            .fold(f64::INFINITY, f64::min)
    }

    fn is_ring_kind(&self) -> bool {
        matches!(self, DomainSpec::Annulus { .. } | DomainSpec::Grotzsch { .. } | DomainSpec::Teichmuller { .. } | DomainSpec::SlitAnnulus { .. })
    }

    /// A point of the closed complement usable as a projection center.
    fn complement_point(&self) -> Option<Point> {
        match self {
            DomainSpec::ComplementOf { of } => of.interior_point(),
            DomainSpec::PlaneMinusSlits { slits } => Some(slits[0].start()),
            _ => None,
        }
    }

    /// Start of the first slit, for frame alignment.
    pub(crate) fn slit_tip(&self) -> Option<Point> {
        match self {
            DomainSpec::PlaneMinusSlits { slits } => Some(slits[0].start()),
            DomainSpec::ComplementOf { of } => of.slit_tip(),
            _ => None,
        }
    }

    /// A point inside the closed set described by this spec.
    fn interior_point(&self) -> Option<Point> {
        match self {
            DomainSpec::Disk { center, .. } => Some(pt(*center)),
            DomainSpec::Polygon { .. } => polygon::interior_point(&self.vertices().unwrap()),
            DomainSpec::ComplementOf { of } => of.complement_point(),
            _ => None,
        }
    }
}

/// A ring domain: either one of the canonical ring kinds, or the part of
/// `outer` lying outside the closed continuum described by `inner`.
///
/// The inner continuum is the closure of a disk or polygon, or the slit set of
/// `complement-of(plane-minus-slits)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RingDomainSpec {
    Between { outer: DomainSpec, inner: DomainSpec },
    Canonical(DomainSpec),
}

/// Options for the log-polar frame of a ring.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RingFrameOptions {
    /// Unbounded rings are cut off at `e^truncation` times their largest finite feature.
    pub truncation: f64,
}

impl Default for RingFrameOptions {
    fn default() -> Self {
        RingFrameOptions { truncation: 10.0 }
    }
}

impl RingDomainSpec {
    pub fn annulus(r: f64, big_r: f64) -> RingDomainSpec {
        RingDomainSpec::Canonical(DomainSpec::annulus(r, big_r))
    }

    pub fn between(outer: DomainSpec, inner: DomainSpec) -> RingDomainSpec {
        RingDomainSpec::Between { outer, inner }
    }

    /// Ring between two closed polygonal curves.
    pub fn between_curves(outer: &[Point], inner: &[Point]) -> RingDomainSpec {
        RingDomainSpec::between(DomainSpec::polygon(outer), DomainSpec::polygon(inner))
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            RingDomainSpec::Canonical(d) => {
                if !d.is_ring_kind() {
                    return Err(Error::NotARing(format!("{} is not a ring kind", kind_name(d))));
                }
                d.validate()
            }
            RingDomainSpec::Between { outer, inner } => {
                outer.validate()?;
                inner.validate()?;
                match outer {
                    DomainSpec::Disk { .. } | DomainSpec::Polygon { .. } => {}
                    DomainSpec::PlaneMinusSlits { .. } if outer.has_rays() => {}
                    _ => return Err(Error::InvalidDomain(format!("unsupported outer domain {}", kind_name(outer)))),
                }
                match inner {
                    DomainSpec::Disk { .. } | DomainSpec::Polygon { .. } => {}
                    DomainSpec::ComplementOf { of } if matches!(**of, DomainSpec::PlaneMinusSlits { .. }) && !of.has_rays() => {}
                    _ => return Err(Error::InvalidDomain(format!("unsupported inner continuum {}", kind_name(inner)))),
                }
                let (_, ext) = outer.finite_extent(Point::new(0.0, 0.0));
                for p in inner.pieces(BoundaryLabel::Zero, ext) {
                    for z in p.sample_points(64) {
                        if !outer.contains(z) {
                            return Err(Error::DegenerateRing("inner continuum touches or leaves the outer domain".into()));
                        }
                    }
                }
                if self.center().is_none() {
                    return Err(Error::InvalidDomain("inner continuum has no interior point".into()));
                }
                Ok(())
            }
        }
    }

    pub fn contains(&self, z: Point) -> bool {
        match self {
            RingDomainSpec::Canonical(d) => d.contains(z),
            RingDomainSpec::Between { outer, inner } => outer.contains(z) && !inner.contains_closed(z),
        }
    }

    /// Whether the inner continuum contains the origin.
    pub fn separates_origin(&self) -> bool {
        let o = Point::new(0.0, 0.0);
        match self {
            RingDomainSpec::Canonical(_) => true,
            RingDomainSpec::Between { inner, .. } => inner.contains_closed(o) || inner.boundary_distance(o) == 0.0,
        }
    }

    /// Point of the inner continuum used as the log-polar center.
    pub fn center(&self) -> Option<Point> {
        match self {
            RingDomainSpec::Canonical(_) => Some(Point::new(0.0, 0.0)),
            RingDomainSpec::Between { inner, .. } => inner.interior_point(),
        }
    }

    /// Labeled boundary pieces (inner continuum 0, outer 1).
    pub fn pieces(&self, far: f64) -> Vec<Piece> {
        use BoundaryLabel::{One, Zero};
        let o = Point::new(0.0, 0.0);
        match self {
            RingDomainSpec::Canonical(d) => match d {
                DomainSpec::Annulus { r, big_r } => vec![Piece::circle(o, *r, Zero), Piece::circle(o, *big_r, One)],
                DomainSpec::Grotzsch { p } => {
                    vec![Piece::circle(o, 1.0, Zero), Piece::segment(Point::new(*p, 0.0), Point::new(p + far, 0.0), One)]
                }
                DomainSpec::Teichmuller { rho, p } => vec![
                    Piece::segment(Point::new(-rho, 0.0), o, Zero),
                    Piece::segment(Point::new(*p, 0.0), Point::new(p + far, 0.0), One),
                ],
                DomainSpec::SlitAnnulus { r2, p1 } => vec![
                    Piece::circle(o, 1.0, Zero),
                    Piece::circle(o, *r2, One),
                    Piece::segment(Point::new(*p1, 0.0), Point::new(*r2, 0.0), One),
                ],
                _ => Vec::new(),
            },
            RingDomainSpec::Between { outer, inner } => {
                let mut v = inner.pieces(Zero, far);
                v.extend(outer.pieces(One, far));
                v
            }
        }
    }

    /// Free end of the principal outer slit, if any.
    fn slit_tip(&self) -> Option<Point> {
        match self {
            RingDomainSpec::Canonical(d) => match *d {
                DomainSpec::Grotzsch { p } | DomainSpec::Teichmuller { p, .. } => Some(Point::new(p, 0.0)),
                DomainSpec::SlitAnnulus { p1, .. } => Some(Point::new(p1, 0.0)),
                _ => None,
            },
            RingDomainSpec::Between { outer, .. } => outer.slit_tip(),
        }
    }

    fn unbounded(&self) -> bool {
        match self {
            RingDomainSpec::Canonical(d) => !d.is_bounded(),
            RingDomainSpec::Between { outer, .. } => !outer.is_bounded(),
        }
    }

    /// Distances from `c` to the inner continuum's boundary and to the finite outer boundary.
    fn extents(&self, c: Point) -> (f64, f64, f64) {
        let pieces = self.pieces(0.0);
        let mut inner_min = f64::INFINITY;
        let mut outer_min = f64::INFINITY;
        let mut all_max: f64 = 0.0;
        for p in &pieces {
            let (a, b) = p.distance_range(c);
            all_max = all_max.max(b);
            if p.label == BoundaryLabel::Zero {
                inner_min = inner_min.min(a);
            } else {
                outer_min = outer_min.min(a);
            }
        }
        (inner_min, outer_min, all_max)
    }

    /// Resolution-independent description for the log-polar grid about `center()`.
    pub fn scene(&self, opts: RingFrameOptions) -> Result<Scene> {
        self.validate()?;
        let c = self.center().ok_or_else(|| Error::InvalidDomain("no center for ring".into()))?;
        let (inner_min, outer_min, all_max) = self.extents(c);
        let unbounded = self.unbounded();
        let xi_min = if inner_min > 1e-9 * all_max {
            inner_min.ln() - 0.05
        } else {
            outer_min.min(all_max).ln() - opts.truncation
        };
        let xi_max = if unbounded { all_max.ln() + opts.truncation } else { all_max.ln() + 0.05 };
        let far = 2.0 * xi_max.exp() + 2.0 * c.norm();
        let pieces = self.pieces(far);
        let align = self.slit_tip().map(|t| ((t - c).norm().ln(), (t - c).arg()));
        let spec = self.clone();
        Ok(Scene {
            pieces,
            frame: FrameSpec::LogPolar { center: c, sign: 1.0, xi_min, xi_max, near: BoundaryLabel::Zero, far: BoundaryLabel::One, align },
            region: Box::new(move |z| spec.contains(z)),
        })
    }

    /// Cartesian description: bounding box of the finite features, enlarged
    /// to `truncation` times the largest finite feature for unbounded rings,
    /// with the box edge labeled as the outer boundary.
    pub fn cartesian_scene(&self, truncation: f64) -> Result<Scene> {
        self.validate()?;
        let c = self.center().unwrap_or(Point::new(0.0, 0.0));
        let (_, _, all_max) = self.extents(c);
        let half = if self.unbounded() { truncation * all_max } else { all_max * 1.01 };
        let pieces = self.pieces(4.0 * half + c.norm());
        let spec = self.clone();
        Ok(Scene {
            pieces,
            frame: FrameSpec::Cartesian { min: c - Point::new(half, half), max: c + Point::new(half, half), box_label: BoundaryLabel::One },
            region: Box::new(move |z| spec.contains(z)),
        })
    }
}

pub fn kind_name(d: &DomainSpec) -> &'static str {
    match d {
        DomainSpec::Disk { .. } => "disk",
        DomainSpec::Annulus { .. } => "annulus",
        DomainSpec::Polygon { .. } => "polygon",
        DomainSpec::Grotzsch { .. } => "grotzsch",
        DomainSpec::Teichmuller { .. } => "teichmuller",
        DomainSpec::SlitAnnulus { .. } => "slit-annulus",
        DomainSpec::PlaneMinusSlits { .. } => "plane-minus-slits",
        DomainSpec::ComplementOf { .. } => "complement-of",
    }
}

/// Polygon with four marked vertices; sides run from mark k to mark k+1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadrilateralSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<String>,
    pub vertices: Vec<Xy>,
    pub marks: [usize; 4],
}

impl QuadrilateralSpec {
    pub fn new(vertices: &[Point], marks: [usize; 4]) -> QuadrilateralSpec {
        QuadrilateralSpec { kind: Some("polygon".into()), vertices: vertices.iter().map(|&p| xy(p)).collect(), marks }
    }

    /// Axis-aligned rectangle `[0, w] × [0, h]` with the vertical sides as 𝔞 and 𝔠.
    pub fn rectangle(w: f64, h: f64) -> QuadrilateralSpec {
        let vs = [Point::new(w, 0.0), Point::new(w, h), Point::new(0.0, h), Point::new(0.0, 0.0)];
        QuadrilateralSpec::new(&vs, [0, 1, 2, 3])
    }

    pub fn points(&self) -> Vec<Point> {
        self.vertices.iter().map(|&v| pt(v)).collect()
    }

    /// Same polygon with the side pairs exchanged.
    pub fn conjugate(&self) -> QuadrilateralSpec {
        let m = self.marks;
        QuadrilateralSpec { kind: self.kind.clone(), vertices: self.vertices.clone(), marks: [m[1], m[2], m[3], m[0]] }
    }

    pub fn validate(&self) -> Result<()> {
        if let Some(k) = &self.kind {
            if k != "polygon" {
                return Err(Error::InvalidDomain(format!("quadrilateral boundary must be a polygon, got {k}")));
            }
        }
        DomainSpec::Polygon { vertices: self.vertices.clone() }.validate()?;
        let n = self.vertices.len();
        if self.marks.iter().any(|&m| m >= n) {
            return Err(Error::InvalidDomain("quadrilateral mark out of range".into()));
        }
        let gaps: Vec<usize> = (0..4).map(|k| (self.marks[(k + 1) % 4] + n - self.marks[k]) % n).collect();
        if gaps.iter().any(|&g| g == 0) || gaps.iter().sum::<usize>() != n {
            return Err(Error::InvalidDomain("quadrilateral marks must be distinct and cyclically ordered".into()));
        }
        if polygon::signed_area(&self.points()).abs() == 0.0 {
            return Err(Error::InvalidDomain("quadrilateral has zero area".into()));
        }
        Ok(())
    }

    /// Vertex chains of the four sides 𝔞, 𝔟, 𝔠, 𝔡.
    pub fn sides(&self) -> [Vec<Point>; 4] {
        let vs = self.points();
        let n = vs.len();
        let chain = |k: usize| {
            let (s, e) = (self.marks[k], self.marks[(k + 1) % 4]);
            let mut out = vec![vs[s]];
            let mut i = s;
            while i != e {
                i = (i + 1) % n;
                out.push(vs[i]);
            }
            out
        };
        [chain(0), chain(1), chain(2), chain(3)]
    }

    /// Pieces for the extremal distance between 𝔞 (label 0) and 𝔠 (label 1).
    pub fn pieces(&self) -> Vec<Piece> {
        let labels = [BoundaryLabel::Zero, BoundaryLabel::Neumann, BoundaryLabel::One, BoundaryLabel::Neumann];
        let mut out = Vec::new();
        for (side, label) in self.sides().iter().zip(labels) {
            for w in side.windows(2) {
                out.push(Piece { shape: Shape::Segment { a: w[0], b: w[1] }, label });
            }
        }
        out
    }

    pub fn scene(&self) -> Result<Scene> {
        self.validate()?;
        let vs = self.points();
        let (lo, hi) = polygon::bbox(&vs);
        Ok(Scene {
            pieces: self.pieces(),
            frame: FrameSpec::Cartesian { min: lo, max: hi, box_label: BoundaryLabel::Neumann },
            region: Box::new(move |z| polygon::contains(&vs, z)),
        })
    }
}
