use std::f64::consts::{PI, TAU};
use std::ops::Range;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::generators::{random_convex_quad, StarCurve};
use super::{check, run_suite, Estimate, SuiteOptions, TrialOutput, VerifierReport};
use crate::elliptic::{log_grotzsch_phi, log_teich_psi};
use crate::error::{Error, Result};
use crate::geometry::primitives::segment_segment_distance;
use crate::geometry::{logarithmic_area, polygon, reduced_logarithmic_area, DomainSpec, Point, RingDomainSpec};
use crate::modsolver::{quad_modulus_extrapolated, reduced_modulus, ring_modulus_extrapolated, At, ReducedOptions};
use crate::report::Report;

const N: usize = 96;
const ORIGIN: Point = Point::new(0.0, 0.0);

fn ring_module(ring: &RingDomainSpec, opts: &SuiteOptions) -> Result<Estimate> {
    Ok((&ring_modulus_extrapolated(ring, opts.resolution)?).into())
}

fn reduced(domain: &DomainSpec, at: At, opts: &SuiteOptions) -> Result<Estimate> {
    let r = reduced_modulus(domain, at, ReducedOptions { resolution: opts.resolution, ..Default::default() })?;
    Ok((&r).into())
}

fn skip(msg: &str) -> Error {
    Error::HypothesisNotMet(msg.to_string())
}

/// Random star curve scaled so its guaranteed lower (or upper) radial bound is
/// `base` times a random factor.
fn star_with_lo(rng: &mut ChaCha8Rng, base: f64, factor: Range<f64>, amplitude: f64) -> StarCurve {
    let target_lo = base * rng.gen_range(factor);
    star_at_lo(rng, target_lo, amplitude)
}

/// As [`star_with_lo`] with a log-uniform factor `e^{u}`, `u` drawn from `log_factor`.
fn star_with_log_lo(rng: &mut ChaCha8Rng, base: f64, log_factor: Range<f64>, amplitude: f64) -> StarCurve {
    let target_lo = base * rng.gen_range(log_factor).exp();
    star_at_lo(rng, target_lo, amplitude)
}

fn star_at_lo(rng: &mut ChaCha8Rng, target_lo: f64, amplitude: f64) -> StarCurve {
    let mut s = StarCurve::random(rng, 1.0, 4, amplitude);
    let (lo, _) = s.bounds(N);
    s.r0 = target_lo / lo;
    s
}

fn star_with_hi(rng: &mut ChaCha8Rng, base: f64, factor: Range<f64>, amplitude: f64) -> StarCurve {
    let target_hi = base * rng.gen_range(factor);
    let mut s = StarCurve::random(rng, 1.0, 4, amplitude);
    let (_, hi) = s.bounds(N);
    s.r0 = target_hi / hi;
    s
}

fn ring_of(outer: &StarCurve, inner: &StarCurve) -> RingDomainSpec {
    RingDomainSpec::between(outer.polygon(N), inner.polygon(N))
}

/// Proposition 1: a subring never has larger module.
pub fn check_monotonicity(trials: usize, seed: u64, opts: &SuiteOptions) -> VerifierReport {
    run_suite("monotonicity", trials, seed, opts, monotonicity_trial)
}

fn monotonicity_trial(_: usize, rng: &mut ChaCha8Rng, opts: &SuiteOptions) -> TrialOutput {
    let inner = StarCurve::random_scaled(rng, 0.5..1.5, 4, 0.35);
    let outer = star_with_lo(rng, inner.bounds(N).1, 3.0..12.0, 0.35);
    let shared = rng.gen_range(0..4);
    let inner2 = if shared == 1 { inner.clone() } else { star_with_lo(rng, inner.bounds(N).1, 1.02..1.5, 0.35) };
    let outer2 = if shared == 2 { outer.clone() } else { star_with_hi(rng, outer.bounds(N).0, 0.6..0.98, 0.35) };
    if inner2.bounds(N).1 >= 0.95 * outer2.bounds(N).0 {
        return Err(skip("no separating subring fits"));
    }
    let big = ring_module(&ring_of(&outer, &inner), opts)?;
    let sub = ring_module(&ring_of(&outer2, &inner2), opts)?;
    let inputs = format!("outer {}; inner {}; sub-outer {}; sub-inner {}", outer.describe(), inner.describe(), outer2.describe(), inner2.describe());
    Ok((inputs, vec![check("M' <= M", sub, big)]))
}

/// Proposition 2: two disjoint nested subrings have total module at most the module of the ring.
pub fn check_superadditivity(trials: usize, seed: u64, opts: &SuiteOptions) -> VerifierReport {
    run_suite("superadditivity", trials, seed, opts, superadditivity_trial)
}

fn superadditivity_trial(_: usize, rng: &mut ChaCha8Rng, opts: &SuiteOptions) -> TrialOutput {
    let inner = StarCurve::random_scaled(rng, 0.5..1.5, 4, 0.35);
    let mid = star_with_lo(rng, inner.bounds(N).1, 1.1..4.0, 0.35);
    let outer = star_with_lo(rng, mid.bounds(N).1, 1.1..4.0, 0.35);
    let m = ring_module(&ring_of(&outer, &inner), opts)?;
    let m1 = ring_module(&ring_of(&mid, &inner), opts)?;
    let m2 = ring_module(&ring_of(&outer, &mid), opts)?;
    let inputs = format!("outer {}; middle {}; inner {}", outer.describe(), mid.describe(), inner.describe());
    Ok((inputs, vec![check("M' + M'' <= M", m1 + m2, m)]))
}

/// Logarithmic area bounds: `2πM ≤ F` for rings about the origin (even
/// trials) and `2πM̃ ≤ F̃` for domains containing the origin (odd trials).
pub fn check_log_area(trials: usize, seed: u64, opts: &SuiteOptions) -> VerifierReport {
    run_suite("log-area", trials, seed, opts, log_area_trial)
}

fn log_area_trial(i: usize, rng: &mut ChaCha8Rng, opts: &SuiteOptions) -> TrialOutput {
    if i % 2 == 0 {
        let inner = StarCurve::random_scaled(rng, 0.5..1.5, 4, 0.5);
        let outer = star_with_lo(rng, inner.bounds(N).1, 1.2..10.0, 0.5);
        let ring = ring_of(&outer, &inner);
        let m = ring_module(&ring, opts)?;
        let f = logarithmic_area(&ring, None)?;
        let inputs = format!("outer {}; inner {}", outer.describe(), inner.describe());
        Ok((inputs, vec![check("2 pi M <= F", m.scale(TAU), Estimate::new(f, 1e-9 * f.abs().max(1.0)))]))
    } else {
        let mut s = StarCurve::random_scaled(rng, 0.5..3.0, 4, 0.5);
        let lo = s.bounds(N).0;
        s.center = Point::from_polar(lo * rng.gen_range(0.0..0.6), rng.gen_range(0.0..TAU));
        let g = s.polygon(N);
        let m = reduced(&g, At::Finite(ORIGIN), opts)?;
        let f = reduced_logarithmic_area(&g)?;
        let inputs = format!("domain {} center ({:.4}, {:.4})", s.describe(), s.center.re, s.center.im);
        Ok((inputs, vec![check("2 pi M~ <= F~", m.scale(TAU), Estimate::new(f, 1e-9 * f.abs().max(1.0)))]))
    }
}

/// Proposition 3: reduced modules of disjoint domains about 0 and ∞ sum to at most 0.
pub fn check_reduced_sum(trials: usize, seed: u64, opts: &SuiteOptions) -> VerifierReport {
    run_suite("reduced-sum", trials, seed, opts, reduced_sum_trial)
}

fn reduced_sum_trial(_: usize, rng: &mut ChaCha8Rng, opts: &SuiteOptions) -> TrialOutput {
    let mut a = StarCurve::random_scaled(rng, 0.5..2.0, 4, 0.4);
    let lo = a.bounds(N).0;
    a.center = Point::from_polar(lo * rng.gen_range(0.0..0.5), rng.gen_range(0.0..TAU));
    let reach = a.center.norm() + a.bounds(N).1;
    let mut b = star_with_lo(rng, reach, 1.01..2.0, 0.4);
    b.center = a.center * rng.gen_range(0.0..1.0);
    if b.bounds(N).0 - (b.center - a.center).norm() <= a.bounds(N).1 {
        return Err(skip("domains overlap"));
    }
    let inside = a.polygon(N);
    let outside = DomainSpec::complement_of(b.polygon(N));
    let m1 = reduced(&inside, At::Finite(ORIGIN), opts)?;
    let m2 = reduced(&outside, At::Infinity, opts)?;
    let inputs = format!("inner {} at ({:.4}, {:.4}); outer complement of {} at ({:.4}, {:.4})", a.describe(), a.center.re, a.center.im, b.describe(), b.center.re, b.center.im);
    Ok((inputs, vec![check("M~' + M~'' <= 0", m1 + m2, Estimate::exact(0.0))]))
}

/// Proposition 4: rings separating the closed unit disk from ∞ whose outer
/// continuum comes within `P` of the origin have module at most `log Φ(P)`.
pub fn check_grotzsch_extremal(trials: usize, seed: u64, opts: &SuiteOptions) -> VerifierReport {
    run_suite("grotzsch-extremal", trials, seed, opts, grotzsch_trial)
}

fn grotzsch_trial(i: usize, rng: &mut ChaCha8Rng, opts: &SuiteOptions) -> TrialOutput {
    let inner = if i % 3 == 0 { StarCurve::circle(1.0) } else { star_with_lo(rng, 1.0, 1.0..1.2, 0.3) };
    let inner_dom = if inner.coeffs.is_empty() { DomainSpec::disk(ORIGIN, 1.0) } else { inner.polygon(N) };
    let gap = rng.gen_range(1.1..4.0);
    let (outer, p, desc) = if i % 2 == 0 {
        let p = inner.bounds(N).1 * gap;
        let dir = Point::from_polar(1.0, rng.gen_range(0.0..TAU));
        (DomainSpec::plane_minus_ray(dir * p, dir), p, format!("ray from {p:.4} e^{{i{:.4}}}", dir.arg()))
    } else {
        let s = star_at_lo(rng, inner.bounds(N).1 * gap, 0.4);
        let d = s.polygon(N);
        let p = d.boundary_distance(ORIGIN);
        (d, p, format!("outer {}", s.describe()))
    };
    if p <= 1.0 {
        return Err(skip("P <= 1"));
    }
    let m = ring_module(&RingDomainSpec::between(outer, inner_dom), opts)?;
    let bound = log_grotzsch_phi(p)?;
    let inputs = format!("{desc}; inner {}; P={p:.6}", inner.describe());
    Ok((inputs, vec![check("M <= log Phi(P)", m, Estimate::new(bound, 1e-12 * bound))]))
}

/// Teichmüller's module theorem: rings separating `{0, ρe^{iφ}}` from
/// `{Pe^{iθ}, ∞}` have module at most `log Ψ(P/ρ)`.
pub fn check_teich_extremal(trials: usize, seed: u64, opts: &SuiteOptions) -> VerifierReport {
    run_suite("teich-extremal", trials, seed, opts, teich_trial)
}

fn teich_trial(i: usize, rng: &mut ChaCha8Rng, opts: &SuiteOptions) -> TrialOutput {
    let mut inner = StarCurve::random(rng, 1.0, 4, 0.5);
    let lo = inner.bounds(N).0;
    inner.center = Point::from_polar(lo * rng.gen_range(0.0..0.9), rng.gen_range(0.0..TAU));
    let vs = inner.vertices(N);
    let rho = vs.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let gap = rng.gen_range(1.05..3.0);
    let (outer, p, desc) = if i % 2 == 0 {
        let p = (inner.center.norm() + inner.bounds(N).1) * gap;
        let dir = Point::from_polar(1.0, rng.gen_range(0.0..TAU));
        (DomainSpec::plane_minus_ray(dir * p, dir), p, format!("ray from {p:.4} e^{{i{:.4}}}", dir.arg()))
    } else {
        let s = star_at_lo(rng, (inner.center.norm() + inner.bounds(N).1) * gap, 0.4);
        let d = s.polygon(N);
        let p = d.boundary_distance(ORIGIN);
        (d, p, format!("outer {}", s.describe()))
    };
    let m = ring_module(&RingDomainSpec::between(outer, DomainSpec::polygon(&vs)), opts)?;
    let bound = log_teich_psi(p / rho)?;
    let inputs = format!("{desc}; inner {} at ({:.4}, {:.4}); rho={rho:.6}; P={p:.6}", inner.describe(), inner.center.re, inner.center.im);
    Ok((inputs, vec![check("M <= log Psi(P/rho)", m, Estimate::new(bound, 1e-12 * bound))]))
}

/// Rings separating `|z| ≤ 1` from ∞ whose outer boundary lies in
/// `r ≤ |z| < P2` and reaches `|z| = r ≤ P1` are beaten by the slit annulus.
pub fn check_slit_annulus_extremal(trials: usize, seed: u64, opts: &SuiteOptions) -> VerifierReport {
    run_suite("slit-annulus-extremal", trials, seed, opts, slit_annulus_trial)
}

fn slit_annulus_trial(_: usize, rng: &mut ChaCha8Rng, opts: &SuiteOptions) -> TrialOutput {
    let p1 = rng.gen_range(1.3..3.0);
    let p2 = p1 * rng.gen_range(1.5..4.0);
    let s = star_with_lo(rng, 1.0, 1.05..p1, 0.5);
    let outer = s.polygon(N);
    let r = outer.boundary_distance(ORIGIN);
    let reach = s.vertices(N).iter().map(|z| z.norm()).fold(0.0, f64::max);
    if reach >= p2 || r > p1 || r <= 1.0 {
        return Err(skip("outer boundary leaves the admissible annulus"));
    }
    let m = ring_module(&RingDomainSpec::between(outer, DomainSpec::disk(ORIGIN, 1.0)), opts)?;
    let best = ring_module(&RingDomainSpec::Canonical(DomainSpec::slit_annulus(p2, p1)), opts)?;
    let inputs = format!("outer {}; P1={p1:.6}; P2={p2:.6}; r={r:.6}", s.describe());
    Ok((inputs, vec![check("M <= M(slit annulus)", m, best)]))
}

/// Proposition 5 and the two length-area inequalities for convex quadrilaterals.
pub fn check_quad_inequalities(trials: usize, seed: u64, opts: &SuiteOptions) -> VerifierReport {
    run_suite("quad-inequalities", trials, seed, opts, quad_trial)
}

fn quad_trial(_: usize, rng: &mut ChaCha8Rng, opts: &SuiteOptions) -> TrialOutput {
    let q = random_convex_quad(rng);
    let v = q.points();
    let e = quad_modulus_extrapolated(&q, opts.resolution)?;
    if !(e.value > e.error_estimate) {
        return Err(skip("extremal distance not resolved"));
    }
    let ratio = Estimate::new(1.0 / e.value, e.error_estimate / (e.value * (e.value - e.error_estimate)));
    let side = |k: usize| (v[k], v[(k + 1) % 4]);
    let dist = |a: (Point, Point), b: (Point, Point)| segment_segment_distance(a.0, a.1, b.0, b.1);
    let beta = dist(side(0), side(2));
    let alpha = dist(side(1), side(3));
    let f = polygon::signed_area(&v).abs();
    let geo = |x: f64| Estimate::new(x, 1e-12 * x.abs().max(1.0));
    let inputs = v.iter().map(|z| format!("({:.6}, {:.6})", z.re, z.im)).collect::<Vec<_>>().join(" ");
    Ok((
        inputs,
        vec![
            check("a/b <= F/beta^2", ratio, geo(f / (beta * beta))),
            check("alpha beta <= F", geo(alpha * beta), geo(f)),
            check("min(alpha, beta)^2 <= F", geo(alpha.min(beta).powi(2)), geo(f)),
        ],
    ))
}

/// Rings separating 0 from ∞ with module at least `threshold` (beyond the
/// error estimate) must contain a circle about the origin: the inner
/// continuum stays inside the smallest radius of the outer one.
pub fn check_circle_containment(trials: usize, seed: u64, threshold: f64, opts: &SuiteOptions) -> VerifierReport {
    run_suite("circle-containment", trials, seed, opts, move |i, rng, o| circle_trial(i, rng, threshold, o))
}

fn circle_trial(_: usize, rng: &mut ChaCha8Rng, threshold: f64, opts: &SuiteOptions) -> TrialOutput {
    let mut inner = StarCurve::random(rng, 1.0, 4, 0.8);
    let lo = inner.bounds(N).0;
    inner.center = Point::from_polar(lo * rng.gen_range(0.0..0.9), rng.gen_range(0.0..TAU));
    let vs = inner.vertices(N);
    let outer = star_with_log_lo(rng, inner.center.norm() + inner.bounds(N).1, -1.0..4.0, 0.8);
    let outer_dom = outer.polygon(N);
    let inner_dom = DomainSpec::polygon(&vs);
    let ring = RingDomainSpec::between(outer_dom.clone(), inner_dom);
    if ring.validate().is_err() {
        return Err(skip("curves cross"));
    }
    let m = ring_module(&ring, opts)?;
    if m.value - m.error <= threshold {
        return Err(skip("module below threshold"));
    }
    let max_inner = vs.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let min_outer = outer_dom.boundary_distance(ORIGIN);
    let inputs = format!("outer {}; inner {} at ({:.4}, {:.4}); M={:.6}", outer.describe(), inner.describe(), inner.center.re, inner.center.im, m.value);
    let geo = |x: f64| Estimate::new(x, 1e-12 * x);
    Ok((inputs, vec![check("max|inner| < min|outer|", geo(max_inner), geo(min_outer))]))
}

/// Module of the rotated Teichmüller configuration with inner slit reaching
/// radius 1 and outer slit starting at radius `q`, computed both ways. A
/// centered circle separates the slits exactly when `q > 1`, so the smallest
/// module guaranteeing such a circle is the value at `q = 1`.
pub fn teichmuller_threshold_scan(qs: &[f64], resolution: usize) -> Result<Report> {
    let mut rep = Report::new("teichmuller threshold scan", &["q", "log_psi", "grid_module", "grid_error", "circle_exists"]);
    let mut threshold = f64::NAN;
    for &q in qs {
        let closed = log_teich_psi(q)?;
        let m = ring_modulus_extrapolated(&RingDomainSpec::Canonical(DomainSpec::teichmuller(1.0, q)), resolution)?;
        rep.push_row(vec![q.into(), closed.into(), m.value.into(), m.error_estimate.into(), (q > 1.0).into()]);
        if q <= 1.0 && !(closed <= threshold) {
            threshold = closed;
        }
    }
    rep.set("largest module without a centered circle", threshold);
    rep.set("pi", PI);
    Ok(rep)
}
