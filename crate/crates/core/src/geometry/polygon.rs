//! Simple-polygon utilities.

use super::primitives::{point_segment_distance, segment_segment};
use super::Point;

pub fn edges(vs: &[Point]) -> impl Iterator<Item = (Point, Point)> + '_ {
    (0..vs.len()).map(move |i| (vs[i], vs[(i + 1) % vs.len()]))
}

/// Signed area, positive for counterclockwise chains.
pub fn signed_area(vs: &[Point]) -> f64 {
    0.5 * edges(vs).map(|(a, b)| a.re * b.im - b.re * a.im).sum::<f64>()
}

pub fn contains(vs: &[Point], z: Point) -> bool {
    let mut inside = false;
    for (a, b) in edges(vs) {
        if (a.im > z.im) != (b.im > z.im) {
            let x = a.re + (z.im - a.im) / (b.im - a.im) * (b.re - a.re);
            if z.re < x {
                inside = !inside;
            }
        }
    }
    inside
}

pub fn boundary_distance(vs: &[Point], z: Point) -> f64 {
    edges(vs).map(|(a, b)| point_segment_distance(z, a, b)).fold(f64::INFINITY, f64::min)
}

pub fn scale(vs: &[Point]) -> f64 {
    let (lo, hi) = bbox(vs);
    (hi - lo).norm()
}

pub fn bbox(vs: &[Point]) -> (Point, Point) {
    let mut lo = Point::new(f64::INFINITY, f64::INFINITY);
    let mut hi = Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
    for v in vs {
        lo = Point::new(lo.re.min(v.re), lo.im.min(v.im));
        hi = Point::new(hi.re.max(v.re), hi.im.max(v.im));
    }
    (lo, hi)
}

/// Checks that no two non-adjacent edges meet and no edge has zero length.
pub fn is_simple(vs: &[Point]) -> bool {
    let n = vs.len();
    if n < 3 {
        return false;
    }
    if edges(vs).any(|(a, b)| a == b) {
        return false;
    }
    let boxes: Vec<(Point, Point)> = edges(vs)
        .map(|(a, b)| (Point::new(a.re.min(b.re), a.im.min(b.im)), Point::new(a.re.max(b.re), a.im.max(b.im))))
        .collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| boxes[i].0.re.total_cmp(&boxes[j].0.re));
    for (k, &i) in order.iter().enumerate() {
        for &j in &order[k + 1..] {
            if boxes[j].0.re > boxes[i].1.re {
                break;
            }
            let adjacent = (i + 1) % n == j || (j + 1) % n == i;
            if adjacent || boxes[j].0.im > boxes[i].1.im || boxes[i].0.im > boxes[j].1.im {
                continue;
            }
            let (a, b) = (vs[i], vs[(i + 1) % n]);
            let (p, q) = (vs[j], vs[(j + 1) % n]);
            if segment_segment(a, b, p, q).is_some() {
                return false;
            }
        }
    }
    true
}

/// A point strictly inside the polygon, preferring the area centroid.
pub fn interior_point(vs: &[Point]) -> Option<Point> {
    let a = signed_area(vs);
    if a != 0.0 {
        let mut c = Point::new(0.0, 0.0);
        for (p, q) in edges(vs) {
            let w = p.re * q.im - q.re * p.im;
            c += (p + q) * w;
        }
        let c = c / (6.0 * a);
        let tol = 1e-3 * scale(vs);
        if contains(vs, c) && boundary_distance(vs, c) > tol {
            return Some(c);
        }
    }
    let (lo, hi) = bbox(vs);
    let mut best: Option<(f64, Point)> = None;
    for k in 1..64 {
        let y = lo.im + (hi.im - lo.im) * (k as f64 / 64.0);
        let mut xs: Vec<f64> = edges(vs)
            .filter(|(a, b)| (a.im > y) != (b.im > y))
            .map(|(a, b)| a.re + (y - a.im) / (b.im - a.im) * (b.re - a.re))
            .collect();
        xs.sort_by(f64::total_cmp);
        for pair in xs.chunks(2) {
            if pair.len() == 2 {
                let z = Point::new(0.5 * (pair[0] + pair[1]), y);
                let d = boundary_distance(vs, z);
                if contains(vs, z) && best.map_or(true, |(bd, _)| d > bd) {
                    best = Some((d, z));
                }
            }
        }
    }
    best.map(|(_, z)| z)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts(v: &[(f64, f64)]) -> Vec<Point> {
        v.iter().map(|&(x, y)| Point::new(x, y)).collect()
    }

    #[test]
    fn square_basics() {
        let sq = pts(&[(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)]);
        assert_eq!(signed_area(&sq), 1.0);
        assert!(contains(&sq, Point::new(0.5, 0.5)));
        assert!(!contains(&sq, Point::new(1.5, 0.5)));
        assert!(is_simple(&sq));
        assert!((interior_point(&sq).unwrap() - Point::new(0.5, 0.5)).norm() < 1e-12);
    }

    #[test]
    fn bowtie_is_not_simple() {
        let bt = pts(&[(0.0, 0.0), (1.0, 1.0), (1.0, 0.0), (0.0, 1.0)]);
        assert!(!is_simple(&bt));
    }

    #[test]
    fn interior_point_of_c_shape() {
        let c = pts(&[(0.0, 0.0), (3.0, 0.0), (3.0, 1.0), (1.0, 1.0), (1.0, 2.0), (3.0, 2.0), (3.0, 3.0), (0.0, 3.0)]);
        let z = interior_point(&c).unwrap();
        assert!(contains(&c, z));
    }
}
