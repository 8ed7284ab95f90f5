//! Near-equality of modules and the circularity of the set in between.
//!
//! For disjoint simply connected domains about 0 and ∞ the reduced modules
//! satisfy `M̃′ + M̃″ ≤ 0`, and a small deficit `δ = −(M̃′ + M̃″)` squeezes the
//! complement of their union into a thin ring about `|z| = e^{M̃′}`. The ring
//! form replaces the reduced modules by the modules of two subrings of an
//! annulus `r < |z| < R`.
//!
//! The containment is checked by the smallest `ε` that works: extreme moduli
//! of the intermediate set are read off the boundary pieces exactly, while the
//! (reduced) modules come from the grid solver.

use std::f64::consts::{PI, TAU};

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::geometry::{BoundaryLabel, DomainSpec, Point, RingDomainSpec};
use crate::invariants::generators::StarCurve;
use crate::invariants::{check, run_suite, Estimate, SuiteOptions, VerifierReport};
use crate::modsolver::{reduced_modulus, ring_modulus_extrapolated, At, ReducedOptions};
use crate::parallel::par_map;
use crate::report::{Report, Value};

const ORIGIN: Point = Point::new(0.0, 0.0);
const BOUNDARY_SAMPLES: usize = 2048;
/// Vertices of the polygons standing in for smooth curves.
const CURVE_VERTICES: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModulsatzOptions {
    pub resolution: usize,
    pub tolerance: f64,
    pub jobs: usize,
}

impl Default for ModulsatzOptions {
    fn default() -> Self {
        ModulsatzOptions { resolution: 128, tolerance: 1e-6, jobs: 1 }
    }
}

impl ModulsatzOptions {
    fn reduced(&self) -> ReducedOptions {
        ReducedOptions { resolution: self.resolution, ..Default::default() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Form {
    /// Reduced modules of domains about 0 and ∞.
    Special,
    /// Modules of two subrings of an annulus.
    Ring,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModulsatzReport {
    pub form: Form,
    /// `M̃′` or `M′`.
    pub m1: Estimate,
    /// `M̃″` or `M″`.
    pub m2: Estimate,
    /// `log(R/r)` of the ambient annulus in the ring form.
    pub log_ratio: Option<f64>,
    pub delta: Estimate,
    /// Smallest and largest `|z|` on the intermediate set.
    pub radii: (f64, f64),
    /// Predicted ring `lo ≤ log|z| ≤ hi` at `ε = 0`.
    pub predicted: (f64, f64),
    /// How far the intermediate set reaches below `lo` and above `hi`.
    pub overshoot: (f64, f64),
    pub epsilon_observed: f64,
    /// Reduced modules of the completed domains, in the ring form.
    pub completed: Option<(Estimate, Estimate)>,
    pub violations: usize,
    pub notes: Vec<String>,
}

impl ModulsatzReport {
    fn new(form: Form, m1: Estimate, m2: Estimate, log_ratio: Option<f64>, predicted: (f64, f64), radii: (f64, f64)) -> ModulsatzReport {
        let delta = Estimate::new(log_ratio.unwrap_or(0.0) - m1.value - m2.value, m1.error + m2.error);
        let overshoot = (predicted.0 - radii.0.ln(), radii.1.ln() - predicted.1);
        ModulsatzReport {
            form,
            m1,
            m2,
            log_ratio,
            delta,
            radii,
            predicted,
            overshoot,
            epsilon_observed: overshoot.0.max(overshoot.1).max(0.0),
            completed: None,
            violations: 0,
            notes: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.violations == 0
    }

    pub fn to_report(&self) -> Report {
        let title = match self.form {
            Form::Special => "modulsatz special",
            Form::Ring => "modulsatz ring",
        };
        let mut rep = Report::new(title, &[]);
        let (a, b) = match self.form {
            Form::Special => ("M~'", "M~''"),
            Form::Ring => ("M'", "M''"),
        };
        rep.set(a, self.m1.value);
        rep.set(&format!("{a} error"), self.m1.error);
        rep.set(b, self.m2.value);
        rep.set(&format!("{b} error"), self.m2.error);
        if let Some(l) = self.log_ratio {
            rep.set("log(R/r)", l);
        }
        rep.set("delta", self.delta.value);
        rep.set("delta error", self.delta.error);
        rep.set("min |z|", self.radii.0);
        rep.set("max |z|", self.radii.1);
        rep.set("predicted log|z| low", self.predicted.0);
        rep.set("predicted log|z| high", self.predicted.1);
        rep.set("overshoot low", self.overshoot.0);
        rep.set("overshoot high", self.overshoot.1);
        rep.set("epsilon_observed", self.epsilon_observed);
        if let Some((c1, c2)) = self.completed {
            rep.set("completed M~'", c1.value);
            rep.set("completed M~''", c2.value);
        }
        rep.set("holds", self.passed());
        rep.violations = self.violations;
        rep.worst_margin = Some(self.delta.value);
        rep.errors.extend(self.notes.iter().cloned());
        rep
    }
}

fn boundary_points(d: &DomainSpec) -> Vec<Point> {
    let (_, far) = d.finite_extent(ORIGIN);
    d.pieces(BoundaryLabel::Zero, 4.0 * far + 1.0).iter().flat_map(|p| p.sample_points(BOUNDARY_SAMPLES)).collect()
}

/// Rejects pairs where either domain reaches into the other. `g1` must be the
/// domain about 0; its boundary points must avoid the open `g2` and vice versa.
fn check_disjoint(g1: &DomainSpec, g2: &DomainSpec) -> Result<()> {
    if g2.contains(ORIGIN) {
        return Err(Error::InvalidDomain("the domain about infinity also contains 0".into()));
    }
    let scale = g1.finite_extent(ORIGIN).1.max(g2.finite_extent(ORIGIN).1);
    let inside = |d: &DomainSpec, z: Point| d.contains(z) && d.boundary_distance(z) > 1e-9 * scale;
    let hit = boundary_points(g1).into_iter().find(|&z| inside(g2, z)).or_else(|| boundary_points(g2).into_iter().find(|&z| inside(g1, z)));
    match hit {
        Some(z) => Err(Error::InvalidDomain(format!("domains overlap near ({:.6}, {:.6})", z.re, z.im))),
        None => Ok(()),
    }
}

fn reduced_at(d: &DomainSpec, at: At, opts: &ModulsatzOptions) -> Result<Estimate> {
    Ok((&reduced_modulus(d, at, opts.reduced())?).into())
}

/// Records the checks shared by both forms: `δ ≥ 0` and the fact that the
/// intermediate set always reaches the predicted ring from both sides.
fn record_checks(r: &mut ModulsatzReport, err1: f64, err2: f64, tol: f64) {
    let slack = r.delta.error + tol;
    if r.delta.value < -slack {
        r.violations += 1;
        r.notes.push(format!("deficit {} is negative beyond its error {}", r.delta.value, r.delta.error));
    }
    if r.overshoot.0 < -(err1 + tol) {
        r.violations += 1;
        r.notes.push(format!("intermediate set stays {} inside the lower predicted radius", -r.overshoot.0));
    }
    if r.overshoot.1 < -(err2 + tol) {
        r.violations += 1;
        r.notes.push(format!("intermediate set stays {} inside the upper predicted radius", -r.overshoot.1));
    }
}

/// Special form: `g1` contains 0, `g2` contains ∞. The complement of
/// `g1 ∪ g2` is compared with the ring `M̃′ ≤ log|z| ≤ −M̃″`.
pub fn verify_special_modulsatz(g1: &DomainSpec, g2: &DomainSpec, opts: &ModulsatzOptions) -> Result<ModulsatzReport> {
    g1.validate()?;
    g2.validate()?;
    if !g1.contains(ORIGIN) {
        return invalid("the first domain must contain 0");
    }
    if !g1.is_bounded() {
        return invalid("the first domain must be bounded");
    }
    check_disjoint(g1, g2)?;
    let m1 = reduced_at(g1, At::Finite(ORIGIN), opts)?;
    let m2 = reduced_at(g2, At::Infinity, opts)?;
    let radii = (g1.boundary_distance(ORIGIN), g2.finite_extent(ORIGIN).1);
    let mut r = ModulsatzReport::new(Form::Special, m1, m2, None, (m1.value, -m2.value), radii);
    record_checks(&mut r, m1.error, m2.error, opts.tolerance);
    Ok(r)
}

/// The bounded domain inside the outer boundary of a ring, and the closed
/// continuum it surrounds.
fn ring_parts(g: &RingDomainSpec) -> Result<(DomainSpec, DomainSpec)> {
    let bounded = |d: &DomainSpec| matches!(d, DomainSpec::Disk { .. } | DomainSpec::Polygon { .. });
    match g {
        RingDomainSpec::Canonical(DomainSpec::Annulus { r, big_r }) => Ok((DomainSpec::disk(ORIGIN, *big_r), DomainSpec::disk(ORIGIN, *r))),
        RingDomainSpec::Between { outer, inner } if bounded(outer) && bounded(inner) => Ok((outer.clone(), inner.clone())),
        _ => invalid("subrings must be annuli or lie between two disks or polygons"),
    }
}

fn min_radius(d: &DomainSpec) -> f64 {
    d.boundary_distance(ORIGIN)
}

fn max_radius(d: &DomainSpec) -> f64 {
    d.finite_extent(ORIGIN).1
}

/// Ring form: `g1` and `g2` are disjoint subrings of the annulus `ring`, and
/// `g1` separates 0 from `g2`. The set between them is compared with
/// `log r + M′ ≤ log|z| ≤ log R − M″`.
///
/// The completed domains (each subring with the complementary piece on its
/// own side adjoined) are also run through the special form; their reduced
/// modules must dominate `log r + M′` and `M″ − log R`.
pub fn verify_modulsatz(ring: &RingDomainSpec, g1: &RingDomainSpec, g2: &RingDomainSpec, opts: &ModulsatzOptions) -> Result<ModulsatzReport> {
    let (r, big_r) = match ring {
        RingDomainSpec::Canonical(DomainSpec::Annulus { r, big_r }) => (*r, *big_r),
        _ => return invalid("the ambient ring must be an annulus about 0"),
    };
    ring.validate()?;
    g1.validate()?;
    g2.validate()?;
    let (out1, in1) = ring_parts(g1)?;
    let (out2, in2) = ring_parts(g2)?;
    let tol = 1e-12 * big_r;
    for (name, out, inn) in [("first", &out1, &in1), ("second", &out2, &in2)] {
        if !inn.contains(ORIGIN) {
            return Err(Error::NotARing(format!("the {name} subring does not separate 0 from infinity")));
        }
        if max_radius(out) > big_r + tol || min_radius(inn) < r - tol {
            return invalid(format!("the {name} subring leaves the annulus"));
        }
    }
    let off = |d: &DomainSpec, z: Point| d.boundary_distance(z) > 1e-9 * big_r;
    let outside = boundary_points(&out1).into_iter().find(|&z| !in2.contains_closed(z) && off(&in2, z));
    let crossing = boundary_points(&in2).into_iter().find(|&z| out1.contains(z) && off(&out1, z));
    if let Some(z) = outside.or(crossing) {
        return invalid(format!(
            "the first subring does not separate 0 from the second (near ({:.6}, {:.6}))",
            z.re, z.im
        ));
    }
    let res = opts.resolution;
    let m1: Estimate = (&ring_modulus_extrapolated(g1, res)?).into();
    let m2: Estimate = (&ring_modulus_extrapolated(g2, res)?).into();
    let log_ratio = (big_r / r).ln();
    let radii = (min_radius(&out1), max_radius(&in2));
    let lo = r.ln() + m1.value;
    let hi = big_r.ln() - m2.value;
    let mut rep = ModulsatzReport::new(Form::Ring, m1, m2, Some(log_ratio), (lo, hi), radii);
    let deficit = rep.delta.value;
    if deficit < -(rep.delta.error + opts.tolerance) {
        rep.violations += 1;
        rep.notes.push(format!("M' + M'' exceeds log(R/r) by {}", -deficit));
    }
    let c1 = completed(&out1, At::Finite(ORIGIN), opts)?;
    let c2 = completed(&DomainSpec::complement_of(in2.clone()), At::Infinity, opts)?;
    for (name, c, bound, err) in [("M~' >= log r + M'", c1, lo, m1.error), ("M~'' >= M'' - log R", c2, -hi, m2.error)] {
        if c.value < bound - (c.error + err + opts.tolerance) {
            rep.violations += 1;
            rep.notes.push(format!("{name} fails: {} < {}", c.value, bound));
        }
    }
    rep.completed = Some((c1, c2));
    Ok(rep)
}

fn completed(d: &DomainSpec, at: At, opts: &ModulsatzOptions) -> Result<Estimate> {
    match (d, at) {
        (DomainSpec::Disk { center: [0.0, 0.0], radius }, At::Finite(_)) => Ok(Estimate::exact(radius.ln())),
        (DomainSpec::ComplementOf { of }, At::Infinity) => match **of {
            DomainSpec::Disk { radius, .. } => Ok(Estimate::exact(-radius.ln())),
            _ => reduced_at(d, at, opts),
        },
        _ => reduced_at(d, at, opts),
    }
}

/// Boundary of the image of the unit disk under `z + t z²`.
pub fn bump_curve(t: f64, n: usize) -> Vec<Point> {
    (0..n)
        .map(|k| {
            let z = Point::from_polar(1.0, TAU * k as f64 / n as f64);
            z + z * z * t
        })
        .collect()
}

/// Smallest circle enclosing `points`, for a point set symmetric about the
/// real axis (so the center is real). The enclosing radius is convex in the
/// center, so a ternary search suffices.
fn enclosing_circle(points: &[Point]) -> (Point, f64) {
    let reach = |c: f64| points.iter().map(|p| (p - Point::new(c, 0.0)).norm()).fold(0.0, f64::max);
    let (lo, hi) = points.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), p| (a.min(p.re), b.max(p.re)));
    let mut a = lo;
    let mut b = hi;
    for _ in 0..200 {
        let m1 = a + (b - a) / 3.0;
        let m2 = b - (b - a) / 3.0;
        if reach(m1) < reach(m2) {
            b = m2;
        } else {
            a = m1;
        }
    }
    let c = 0.5 * (a + b);
    (Point::new(c, 0.0), reach(c))
}

/// One rung of the bump family.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BumpRow {
    pub t: f64,
    /// Grid reduced module of the bump domain at 0; exactly 0 for the smooth domain.
    pub m1: Estimate,
    /// Reduced module of the exterior of the enlarged circle at ∞.
    pub m2: Estimate,
    pub delta: Estimate,
    /// `δ` from the exact values `M̃′ = 0` and `M̃″ = −log ρ`.
    pub delta_exact: f64,
    /// Logarithmic oscillation of the bump curve.
    pub epsilon: f64,
    /// Smallest `ε` for the containment of the special form.
    pub epsilon_observed: f64,
    /// `δ / (ε² / log(1/ε))`, undefined at `t = 0`.
    pub ratio: Option<f64>,
}

/// Bump family `𝔊′(t) = f_t(𝔻)`, `f_t(z) = z + t z²`, against the exterior of
/// its smallest enclosing circle enlarged by `1 + t²` about its center.
/// The ratio `δ / (ε²/log(1/ε))` is tabulated; the run passes when `δ ≥ 0`,
/// `ε` grows with `δ`, and the ratio stays within one decade.
pub fn bump_family_probe(t_values: &[f64], opts: &ModulsatzOptions) -> Result<Report> {
    if t_values.is_empty() {
        return invalid("no t values");
    }
    if let Some(t) = t_values.iter().find(|t| !(0.0..0.5).contains(*t)) {
        return invalid(format!("t = {t} outside [0, 1/2): z + t z^2 is not univalent on the disk"));
    }
    let rows: Vec<Result<BumpRow>> = par_map(t_values.len(), opts.jobs, |k| bump_row(t_values[k], opts));
    let rows = rows.into_iter().collect::<Result<Vec<_>>>()?;
    let mut rep = Report::new(
        "modulsatz bump probe",
        &["t", "M~'", "M~''", "delta", "delta error", "delta exact", "epsilon", "epsilon_observed", "ratio"],
    );
    for r in &rows {
        rep.push_row(vec![
            r.t.into(),
            r.m1.value.into(),
            r.m2.value.into(),
            r.delta.value.into(),
            r.delta.error.into(),
            r.delta_exact.into(),
            r.epsilon.into(),
            r.epsilon_observed.into(),
            r.ratio.map_or(Value::from("n/a"), Value::from),
        ]);
        rep.record_margin(r.delta.value, r.delta.error + opts.tolerance);
    }
    let mut by_delta: Vec<&BumpRow> = rows.iter().collect();
    by_delta.sort_by(|a, b| a.delta.value.total_cmp(&b.delta.value));
    let monotone = by_delta.windows(2).all(|w| w[0].epsilon <= w[1].epsilon);
    let ratios: Vec<f64> = rows.iter().filter_map(|r| r.ratio).collect();
    let (rmin, rmax) = ratios.iter().fold((f64::INFINITY, 0.0f64), |(a, b), &r| (a.min(r), b.max(r)));
    let spread = if ratios.len() >= 2 { rmax / rmin } else { 1.0 };
    let bounded = ratios.iter().all(|&r| r > 0.0) && spread < 10.0;
    rep.set("delta nonnegative", rep.violations == 0);
    rep.set("epsilon increases with delta", monotone);
    if !ratios.is_empty() {
        rep.set("ratio min", rmin);
        rep.set("ratio max", rmax);
        rep.set("ratio spread", spread);
    }
    rep.set("ratio within one decade", bounded);
    if !monotone {
        rep.errors.push("epsilon is not monotone in delta across the family".into());
    }
    if !bounded {
        rep.errors.push(format!("ratio spread {spread} is not within one decade"));
    }
    Ok(rep)
}

fn bump_row(t: f64, opts: &ModulsatzOptions) -> Result<BumpRow> {
    if t == 0.0 {
        let zero = Estimate::exact(0.0);
        return Ok(BumpRow { t, m1: zero, m2: zero, delta: zero, delta_exact: 0.0, epsilon: 0.0, epsilon_observed: 0.0, ratio: None });
    }
    let fine = bump_curve(t, 16 * CURVE_VERTICES);
    let (c, s) = enclosing_circle(&fine);
    let rho = s * (1.0 + t * t);
    let inner = DomainSpec::polygon(&bump_curve(t, CURVE_VERTICES));
    let outer = DomainSpec::complement_of(DomainSpec::disk(c, rho));
    let m1 = reduced_at(&inner, At::Finite(ORIGIN), opts)?;
    let m2 = reduced_at(&outer, At::Infinity, opts)?;
    let delta = Estimate::new(-(m1.value + m2.value), m1.error + m2.error);
    let epsilon = ((1.0 + t) / (1.0 - t)).ln();
    let lo = (1.0 - t).ln();
    let hi = (c.norm() + rho).ln();
    let epsilon_observed = (m1.value - lo).max(hi + m2.value).max(0.0);
    let ratio = delta.value / (epsilon * epsilon / (1.0 / epsilon).ln());
    Ok(BumpRow { t, m1, m2, delta, delta_exact: rho.ln(), epsilon, epsilon_observed, ratio: Some(ratio) })
}

/// Seeded pairs of disjoint domains about 0 and ∞, both omitting `−1`. Each
/// pair must satisfy `M̃′ + M̃″ ≤ 0` and `M̃′, M̃″ ≤ log 4`; the cloud of
/// points `(M̃′, M̃″)` is the table of the report.
pub fn region_b_sampler(trials: usize, seed: u64, opts: &SuiteOptions) -> VerifierReport {
    run_suite("region-b", trials, seed, opts, region_b_trial)
}

fn region_b_trial(i: usize, rng: &mut ChaCha8Rng, opts: &SuiteOptions) -> crate::invariants::TrialOutput {
    let n = 96;
    let mut a = StarCurve::random_scaled(rng, 0.5..1.5, 4, 0.5);
    let a_hi = a.bounds(n).1;
    a.center = Point::from_polar(a.bounds(n).0 * rng.gen_range(0.0..0.6), rng.gen_range(0.0..TAU));
    let reach = a.center.norm() + a_hi;
    let mut b = StarCurve::random(rng, 1.0, 4, 0.5);
    let (b_lo, _) = b.bounds(n);
    b.r0 = reach * rng.gen_range(0.01f64..1.0).exp() / b_lo;
    let (inner, outer) = if i % 4 == 0 {
        (DomainSpec::disk(a.center, a.r0), DomainSpec::complement_of(DomainSpec::disk(ORIGIN, b.r0)))
    } else {
        (a.polygon(n), DomainSpec::complement_of(b.polygon(n)))
    };
    // Rescale so that a point of the closed gap on the negative axis sits at −1.
    let gap_lo = ray_exit(&inner, PI);
    let gap_hi = ray_entry(&outer, PI, gap_lo);
    if !(gap_hi > gap_lo) {
        return Err(Error::HypothesisNotMet("no gap on the negative axis".into()));
    }
    let s = (gap_lo.ln() + rng.gen_range(0.0..1.0) * (gap_hi / gap_lo).ln()).exp();
    let inner = scale(&inner, 1.0 / s);
    let outer = scale(&outer, 1.0 / s);
    let m = Point::new(-1.0, 0.0);
    if inner.contains(m) || outer.contains(m) {
        return Err(Error::HypothesisNotMet("rescaled pair contains -1".into()));
    }
    let ro = ReducedOptions { resolution: opts.resolution, ..Default::default() };
    let m1: Estimate = (&reduced_modulus(&inner, At::Finite(ORIGIN), ro)?).into();
    let m2: Estimate = (&reduced_modulus(&outer, At::Infinity, ro)?).into();
    let log4 = Estimate::exact(4f64.ln());
    let inputs = format!("M~'={:.9} M~''={:.9}; inner {} at ({:.4}, {:.4}); outer {}; scale {:.6}", m1.value, m2.value, a.describe(), a.center.re, a.center.im, b.describe(), s);
    Ok((inputs, vec![check("M~' + M~'' <= 0", m1 + m2, Estimate::exact(0.0)), check("M~' <= log 4", m1, log4), check("M~'' <= log 4", m2, log4)]))
}

/// Distance from 0 at which the ray `arg z = θ` last leaves the closure of `d`.
fn ray_exit(d: &DomainSpec, theta: f64) -> f64 {
    let dir = Point::from_polar(1.0, theta);
    let far = 1.01 * d.finite_extent(ORIGIN).1;
    let n = 4096;
    (0..=n).rev().map(|k| far * k as f64 / n as f64).find(|&r| d.contains_closed(dir * r)).unwrap_or(0.0)
}

/// Distance from 0 beyond `from` at which the ray `arg z = θ` first meets the closure of `d`.
fn ray_entry(d: &DomainSpec, theta: f64, from: f64) -> f64 {
    let dir = Point::from_polar(1.0, theta);
    let far = 1.01 * d.finite_extent(ORIGIN).1;
    let n = 4096;
    (0..=n).map(|k| from + (far - from) * k as f64 / n as f64).find(|&r| r > from && d.contains_closed(dir * r)).unwrap_or(from)
}

fn scale(d: &DomainSpec, c: f64) -> DomainSpec {
    match d {
        DomainSpec::Disk { center, radius } => DomainSpec::Disk { center: [center[0] * c, center[1] * c], radius: radius * c },
        DomainSpec::Polygon { vertices } => DomainSpec::Polygon { vertices: vertices.iter().map(|v| [v[0] * c, v[1] * c]).collect() },
        DomainSpec::ComplementOf { of } => DomainSpec::complement_of(scale(of, c)),
        other => other.clone(),
    }
}

/// The cloud of `(M̃′, M̃″)` points from a sampler run, one per passing trial.
pub fn region_b_cloud(report: &VerifierReport) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    let mut last = None;
    for r in &report.records {
        if r.check == "M~' + M~'' <= 0" && last != Some(r.trial) {
            last = Some(r.trial);
            if let Some(p) = parse_point(&r.inputs) {
                out.push(p);
            }
        }
    }
    out
}

fn parse_point(inputs: &str) -> Option<(f64, f64)> {
    let grab = |key: &str| -> Option<f64> {
        let s = inputs.split(key).nth(1)?;
        s.split(|c: char| c == ' ' || c == ';').next()?.parse().ok()
    };
    Some((grab("M~'=")?, grab("M~''=")?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn opts() -> ModulsatzOptions {
        ModulsatzOptions::default()
    }

    #[test]
    fn concentric_disks_are_sharp() {
        let r = verify_special_modulsatz(&DomainSpec::disk(ORIGIN, 2.0), &DomainSpec::complement_of(DomainSpec::disk(ORIGIN, 2.0)), &opts()).unwrap();
        assert!(r.delta.value.abs() < 1e-6, "{r:?}");
        assert!(r.epsilon_observed < 1e-6, "{r:?}");
        assert!(r.passed());
    }

    #[test]
    fn off_center_disk_pair() {
        let g1 = DomainSpec::disk(Point::new(0.2, 0.0), 1.0);
        let g2 = DomainSpec::complement_of(DomainSpec::disk(ORIGIN, 1.5));
        let r = verify_special_modulsatz(&g1, &g2, &opts()).unwrap();
        let delta = -(0.96f64.ln()) + 1.5f64.ln();
        assert!((r.delta.value - delta).abs() <= r.delta.error, "{r:?}");
        assert!((r.epsilon_observed - 1.2f64.ln()).abs() < 1e-3, "{r:?}");
    }

    #[test]
    fn overlapping_disks_rejected() {
        let g1 = DomainSpec::disk(ORIGIN, 2.0);
        let g2 = DomainSpec::complement_of(DomainSpec::disk(ORIGIN, 1.5));
        assert!(matches!(verify_special_modulsatz(&g1, &g2, &opts()), Err(Error::InvalidDomain(_))));
    }

    #[test]
    fn concentric_subrings() {
        use std::f64::consts::E;
        let ring = RingDomainSpec::annulus(1.0, E.powi(3));
        let g1 = RingDomainSpec::annulus(1.0, E);
        let g2 = RingDomainSpec::annulus(E * E, E.powi(3));
        let r = verify_modulsatz(&ring, &g1, &g2, &opts()).unwrap();
        assert!((r.delta.value - 1.0).abs() < 1e-6, "{r:?}");
        assert!(r.epsilon_observed < 1e-6, "{r:?}");
        assert!(r.passed(), "{r:?}");
    }

    #[test]
    fn non_separating_subring_rejected() {
        let ring = RingDomainSpec::annulus(1.0, 20.0);
        let g1 = RingDomainSpec::between(DomainSpec::disk(Point::new(8.0, 0.0), 3.0), DomainSpec::disk(Point::new(8.0, 0.0), 1.0));
        let g2 = RingDomainSpec::annulus(15.0, 20.0);
        assert!(verify_modulsatz(&ring, &g1, &g2, &opts()).is_err());
    }

    #[test]
    fn bump_curve_oscillation() {
        let t = 0.1;
        let c = bump_curve(t, 4096);
        let (lo, hi) = c.iter().fold((f64::INFINITY, 0.0f64), |(a, b), z| (a.min(z.norm()), b.max(z.norm())));
        assert!((lo - 0.9).abs() < 1e-9 && (hi - 1.1).abs() < 1e-9);
        let (center, s) = enclosing_circle(&c);
        assert!(c.iter().all(|z| (z - center).norm() <= s + 1e-12));
        assert!(s > 1.0 && s < 1.1, "{s}");
    }

    #[test]
    fn bump_rejects_large_t() {
        assert!(bump_family_probe(&[0.5], &opts()).is_err());
    }

    #[test]
    fn round_bump_is_trivial() {
        let r = bump_row(0.0, &opts()).unwrap();
        assert_eq!((r.delta.value, r.epsilon), (0.0, 0.0));
    }
}
