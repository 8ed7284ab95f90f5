//! Boundary pieces, grid-link edges, and their intersections.

use serde::{Deserialize, Serialize};

use super::Point;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundaryLabel {
    Zero,
    One,
    Neumann,
}

impl BoundaryLabel {
    pub fn dirichlet_value(self) -> Option<f64> {
        match self {
            BoundaryLabel::Zero => Some(0.0),
            BoundaryLabel::One => Some(1.0),
            BoundaryLabel::Neumann => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Shape {
    Segment { a: Point, b: Point },
    Circle { center: Point, radius: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Piece {
    pub shape: Shape,
    pub label: BoundaryLabel,
}

impl Piece {
    pub fn segment(a: Point, b: Point, label: BoundaryLabel) -> Piece {
        Piece { shape: Shape::Segment { a, b }, label }
    }

    pub fn circle(center: Point, radius: f64, label: BoundaryLabel) -> Piece {
        Piece { shape: Shape::Circle { center, radius }, label }
    }

    /// Smallest and largest distance from `c` to the piece.
    pub fn distance_range(&self, c: Point) -> (f64, f64) {
        match self.shape {
            Shape::Segment { a, b } => (point_segment_distance(c, a, b), (a - c).norm().max((b - c).norm())),
            Shape::Circle { center, radius } => {
                let d = (center - c).norm();
                ((d - radius).abs(), d + radius)
            }
        }
    }

    /// Points on the piece, for containment spot checks.
    pub fn sample_points(&self, n: usize) -> Vec<Point> {
        match self.shape {
            Shape::Segment { a, b } => (0..=n).map(|k| a + (b - a) * (k as f64 / n as f64)).collect(),
            Shape::Circle { center, radius } => (0..n)
                .map(|k| center + Point::from_polar(radius, std::f64::consts::TAU * k as f64 / n as f64))
                .collect(),
        }
    }

    pub fn bbox(&self) -> (Point, Point) {
        match self.shape {
            Shape::Segment { a, b } => (Point::new(a.re.min(b.re), a.im.min(b.im)), Point::new(a.re.max(b.re), a.im.max(b.im))),
            Shape::Circle { center, radius } => (center - Point::new(radius, radius), center + Point::new(radius, radius)),
        }
    }
}

/// A grid link between two nodes, parametrized by `t ∈ [0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Edge {
    Segment { a: Point, b: Point },
    Arc { center: Point, radius: f64, theta0: f64, dtheta: f64 },
    /// Radial segment of a log-polar frame, parametrized linearly in `ξ = sign·ln|z − center|`.
    Radial { center: Point, sign: f64, xi_a: f64, xi_b: f64, eta: f64 },
}

impl Edge {
    pub fn at(&self, t: f64) -> Point {
        match *self {
            Edge::Segment { a, b } => a + (b - a) * t,
            Edge::Arc { center, radius, theta0, dtheta } => center + Point::from_polar(radius, theta0 + t * dtheta),
            Edge::Radial { center, sign, xi_a, xi_b, eta } => center + Point::from_polar((sign * (xi_a + t * (xi_b - xi_a))).exp(), eta),
        }
    }

    fn chord(&self) -> Edge {
        Edge::Segment { a: self.at(0.0), b: self.at(1.0) }
    }

    pub fn bbox(&self) -> (Point, Point) {
        match *self {
            Edge::Segment { a, b } => (Point::new(a.re.min(b.re), a.im.min(b.im)), Point::new(a.re.max(b.re), a.im.max(b.im))),
            Edge::Arc { radius, dtheta, .. } => {
                let a = self.at(0.0);
                let b = self.at(1.0);
                let pad = radius * (dtheta.abs() * dtheta.abs() / 8.0) + 1e-12 * radius;
                (
                    Point::new(a.re.min(b.re) - pad, a.im.min(b.im) - pad),
                    Point::new(a.re.max(b.re) + pad, a.im.max(b.im) + pad),
                )
            }
            Edge::Radial { .. } => self.chord().bbox(),
        }
    }

    /// Parameters in `[0, 1]` where the edge meets `shape`.
    pub fn crossings(&self, shape: &Shape, out: &mut Vec<f64>) {
        if let Edge::Radial { center, sign, xi_a, xi_b, .. } = *self {
            let start = out.len();
            let (a, b) = (self.at(0.0), self.at(1.0));
            self.chord().crossings(shape, out);
            for t in &mut out[start..] {
                let p = a + (b - a) * *t;
                *t = ((sign * (p - center).norm().ln() - xi_a) / (xi_b - xi_a)).clamp(0.0, 1.0);
            }
            return;
        }
        match (*self, *shape) {
            (Edge::Segment { a, b }, Shape::Segment { a: p, b: q }) => {
                if let Some(t) = segment_segment(a, b, p, q) {
                    out.push(t);
                }
            }
            (Edge::Segment { a, b }, Shape::Circle { center, radius }) => {
                for s in segment_circle(a, b, center, radius) {
                    if (-EPS..=1.0 + EPS).contains(&s) {
                        out.push(s.clamp(0.0, 1.0));
                    }
                }
            }
            (Edge::Arc { center, radius, theta0, dtheta }, Shape::Segment { a: p, b: q }) => {
                for s in segment_circle(p, q, center, radius) {
                    if (-EPS..=1.0 + EPS).contains(&s) {
                        let pt = p + (q - p) * s;
                        push_arc_param(pt, center, theta0, dtheta, out);
                    }
                }
            }
            (Edge::Arc { center, radius, theta0, dtheta }, Shape::Circle { center: c2, radius: r2 }) => {
                for pt in circle_circle(center, radius, c2, r2) {
                    push_arc_param(pt, center, theta0, dtheta, out);
                }
            }
            (Edge::Radial { .. }, _) => unreachable!(),
        }
    }
}

const EPS: f64 = 1e-12;

fn cross(a: Point, b: Point) -> f64 {
    a.re * b.im - a.im * b.re
}

fn push_arc_param(pt: Point, center: Point, theta0: f64, dtheta: f64, out: &mut Vec<f64>) {
    let ang = (pt - center).arg();
    let d = wrap_angle(ang - theta0);
    let t = d / dtheta;
    if (-EPS..=1.0 + EPS).contains(&t) {
        out.push(t.clamp(0.0, 1.0));
    }
}

/// Maps an angle into `(-π, π]`.
pub fn wrap_angle(a: f64) -> f64 {
    let tau = std::f64::consts::TAU;
    let mut r = a % tau;
    if r > std::f64::consts::PI {
        r -= tau;
    } else if r <= -std::f64::consts::PI {
        r += tau;
    }
    r
}

/// Parameter along `a→b` where it meets segment `p→q`; collinear overlaps count as no crossing.
pub fn segment_segment(a: Point, b: Point, p: Point, q: Point) -> Option<f64> {
    let d = b - a;
    let e = q - p;
    let denom = cross(d, e);
    let scale = d.norm() * e.norm();
    if denom.abs() <= 1e-14 * scale || scale == 0.0 {
        return None;
    }
    let w = p - a;
    let t = cross(w, e) / denom;
    let s = cross(w, d) / denom;
    if (-EPS..=1.0 + EPS).contains(&t) && (-EPS..=1.0 + EPS).contains(&s) {
        Some(t.clamp(0.0, 1.0))
    } else {
        None
    }
}

/// Parameters along `a→b` (unrestricted) where the line meets the circle; tangency yields one root.
pub fn segment_circle(a: Point, b: Point, c: Point, r: f64) -> Vec<f64> {
    let d = b - a;
    let f = a - c;
    let qa = d.norm_sqr();
    if qa == 0.0 {
        return Vec::new();
    }
    let qb = 2.0 * (f.re * d.re + f.im * d.im);
    let qc = f.norm_sqr() - r * r;
    let disc = qb * qb - 4.0 * qa * qc;
    let tol = 1e-12 * (qb * qb + (4.0 * qa * qc).abs());
    if disc < -tol {
        return Vec::new();
    }
    if disc <= tol {
        return vec![-qb / (2.0 * qa)];
    }
    let sq = disc.sqrt();
    let q = -0.5 * (qb + qb.signum() * sq);
    let (mut t0, mut t1) = if q != 0.0 { (q / qa, qc / q) } else { ((-qb - sq) / (2.0 * qa), (-qb + sq) / (2.0 * qa)) };
    if t0 > t1 {
        std::mem::swap(&mut t0, &mut t1);
    }
    vec![t0, t1]
}

pub fn circle_circle(c1: Point, r1: f64, c2: Point, r2: f64) -> Vec<Point> {
    let dv = c2 - c1;
    let d = dv.norm();
    if d <= 1e-14 * (r1 + r2) {
        return Vec::new();
    }
    let a = (r1 * r1 - r2 * r2 + d * d) / (2.0 * d);
    let h2 = r1 * r1 - a * a;
    let tol = 1e-12 * r1 * r1;
    if h2 < -tol {
        return Vec::new();
    }
    let u = dv / d;
    let base = c1 + u * a;
    if h2 <= tol {
        return vec![base];
    }
    let h = h2.sqrt();
    let perp = Point::new(-u.im, u.re);
    vec![base + perp * h, base - perp * h]
}

pub fn point_segment_distance(z: Point, a: Point, b: Point) -> f64 {
    let d = b - a;
    let len2 = d.norm_sqr();
    if len2 == 0.0 {
        return (z - a).norm();
    }
    let t = (((z - a) * d.conj()).re / len2).clamp(0.0, 1.0);
    (z - (a + d * t)).norm()
}

pub fn segment_segment_distance(a: Point, b: Point, p: Point, q: Point) -> f64 {
    if segment_segment(a, b, p, q).is_some() {
        return 0.0;
    }
    point_segment_distance(a, p, q)
        .min(point_segment_distance(b, p, q))
        .min(point_segment_distance(p, a, b))
        .min(point_segment_distance(q, a, b))
}

/// Uniform bucket index over segment pieces.
pub(crate) struct SegmentIndex {
    min: Point,
    cell: f64,
    nx: usize,
    ny: usize,
    buckets: Vec<Vec<u32>>,
    stamp: Vec<u32>,
    epoch: u32,
}

impl SegmentIndex {
    pub fn new(pieces: &[Piece], ids: &[usize]) -> SegmentIndex {
        let mut lo = Point::new(f64::INFINITY, f64::INFINITY);
        let mut hi = Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
        for &i in ids {
            let (a, b) = pieces[i].bbox();
            lo = Point::new(lo.re.min(a.re), lo.im.min(a.im));
            hi = Point::new(hi.re.max(b.re), hi.im.max(b.im));
        }
        if ids.is_empty() {
            lo = Point::new(0.0, 0.0);
            hi = Point::new(1.0, 1.0);
        }
        let w = (hi.re - lo.re).max(1e-300);
        let h = (hi.im - lo.im).max(1e-300);
        let target = (ids.len().max(1) * 2) as f64;
        let mut cell = (w * h / target).sqrt().max(w.max(h) / 1024.0);
        if !(cell > 0.0) {
            cell = 1.0;
        }
        let nx = ((w / cell).ceil() as usize).clamp(1, 1024);
        let ny = ((h / cell).ceil() as usize).clamp(1, 1024);
        let cell = (w / nx as f64).max(h / ny as f64);
        let mut idx = SegmentIndex { min: lo, cell, nx, ny, buckets: vec![Vec::new(); nx * ny], stamp: vec![0; pieces.len()], epoch: 0 };
        for &i in ids {
            let (a, b) = pieces[i].bbox();
            let (i0, j0) = idx.cell_of(a);
            let (i1, j1) = idx.cell_of(b);
            for j in j0..=j1 {
                for ii in i0..=i1 {
                    idx.buckets[j * nx + ii].push(i as u32);
                }
            }
        }
        idx
    }

    fn cell_of(&self, z: Point) -> (usize, usize) {
        let fx = ((z.re - self.min.re) / self.cell).floor();
        let fy = ((z.im - self.min.im) / self.cell).floor();
        (fx.clamp(0.0, (self.nx - 1) as f64) as usize, fy.clamp(0.0, (self.ny - 1) as f64) as usize)
    }

    /// Calls `f` once for every indexed segment whose bucket overlaps the box.
    pub fn query(&mut self, lo: Point, hi: Point, mut f: impl FnMut(usize)) {
        if hi.re < self.min.re - self.cell || hi.im < self.min.im - self.cell {
            return;
        }
        let maxx = self.min.re + self.cell * self.nx as f64;
        let maxy = self.min.im + self.cell * self.ny as f64;
        if lo.re > maxx + self.cell || lo.im > maxy + self.cell {
            return;
        }
        self.epoch = self.epoch.wrapping_add(1);
        if self.epoch == 0 {
            self.stamp.iter_mut().for_each(|s| *s = 0);
            self.epoch = 1;
        }
        let (i0, j0) = self.cell_of(lo);
        let (i1, j1) = self.cell_of(hi);
        for j in j0..=j1 {
            for i in i0..=i1 {
                for &s in &self.buckets[j * self.nx + i] {
                    let s = s as usize;
                    if self.stamp[s] != self.epoch {
                        self.stamp[s] = self.epoch;
                        f(s);
                    }
                }
            }
        }
    }
}
