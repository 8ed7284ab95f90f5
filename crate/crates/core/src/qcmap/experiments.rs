//! Distortion experiments: ring-module bounds under a map, type conditions,
//! image-circle asymptotics, and circularity of curve families.

use std::f64::consts::TAU;

use super::maps::{dilatation, Profile, QCMapSpec};
use crate::error::{Error, Result};
use crate::geometry::{curve_radii, polygon, CurveSamples, DomainSpec, Point, RingDomainSpec};
use crate::invariants::Estimate;
use crate::modsolver::ring_modulus_extrapolated;
use crate::parallel::par_map;
use crate::quadrature::integrate;
use crate::report::Report;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExperimentOptions {
    /// Points per sampled circle.
    pub samples: usize,
    /// Finest grid resolution for module solves.
    pub resolution: usize,
    /// Tolerance for convergence verdicts.
    pub tolerance: f64,
    pub jobs: usize,
}

impl Default for ExperimentOptions {
    fn default() -> Self {
        ExperimentOptions { samples: 512, resolution: 128, tolerance: 1e-3, jobs: 1 }
    }
}

/// Radial bound `C(r) ≥ 1` on the dilatation, valid for `r ≥ r_min`.
#[derive(Debug, Clone, PartialEq)]
pub struct DilatationProfile {
    pub c: Profile,
    pub r_min: f64,
}

impl DilatationProfile {
    pub fn parse(src: &str, r_min: f64) -> Result<DilatationProfile> {
        let c = Profile::parse(src)?;
        for k in 0..64 {
            let r = r_min.max(1e-12) * (1.0 + k as f64 * 0.25).powi(3);
            let v = c.at(r);
            if !(v >= 1.0 - 1e-12) {
                return Err(Error::InvalidArgument(format!("dilatation bound C({r}) = {v} is below 1")));
            }
        }
        Ok(DilatationProfile { c, r_min })
    }
}

pub(crate) fn golden_max(f: &impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = b - g * (b - a);
    let mut x2 = a + g * (b - a);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..60 {
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + g * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - g * (b - a);
            f1 = f(x1);
        }
    }
    f1.max(f2)
}

/// Angles of `n` equally spaced samples on `|z| = r`, with arcs of two sample
/// spacings removed around declared exceptional points.
fn circle_angles(map: &QCMapSpec, r: f64, n: usize) -> Vec<f64> {
    let ex = map.exceptional_points();
    let h = TAU * r / n as f64;
    (0..n)
        .map(|k| TAU * k as f64 / n as f64)
        .filter(|&t| ex.iter().all(|&p| (Point::from_polar(r, t) - p).norm() > h))
        .collect()
}

/// Largest dilatation on `|z| = r`, refined around the best sample.
pub fn max_dilatation_on_circle(map: &QCMapSpec, r: f64, samples: usize) -> Result<f64> {
    let ts = circle_angles(map, r, samples);
    let mut best = (f64::NEG_INFINITY, 0.0);
    for &t in &ts {
        let d = dilatation(map, Point::from_polar(r, t))?;
        if d > best.0 {
            best = (d, t);
        }
    }
    let step = TAU / samples as f64;
    let f = |t: f64| dilatation(map, Point::from_polar(r, t)).unwrap_or(best.0);
    Ok(best.0.max(golden_max(&f, best.1 - step, best.1 + step)))
}

/// Image of `|z| = e^λ` sampled at `samples` angles.
pub fn image_circle(map: &QCMapSpec, lambda: f64, samples: usize) -> Result<CurveSamples> {
    let r = lambda.exp();
    if r <= map.min_radius() {
        return Err(Error::InvalidArgument(format!("circle |z| = {r} is outside the map's domain")));
    }
    let pts = circle_angles(map, r, samples).into_iter().map(|t| map.apply(Point::from_polar(r, t))).collect::<Result<Vec<_>>>()?;
    Ok(CurveSamples::closed(pts))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CircleStats {
    pub r1: f64,
    pub r2: f64,
    pub omega: f64,
    /// `log r1 − λ`.
    pub shift1: f64,
    /// `log r2 − λ`.
    pub shift2: f64,
}

/// Extreme distances of the image of `|z| = e^λ` from the origin.
pub fn image_circle_stats(map: &QCMapSpec, lambda: f64, samples: usize) -> Result<CircleStats> {
    let curve = image_circle(map, lambda, samples)?;
    let (mut r1, mut r2, _) = curve_radii(&curve)?;
    let r = lambda.exp();
    let step = TAU / samples as f64;
    let modulus = |t: f64| map.apply(Point::from_polar(r, t)).map(|w| w.norm()).unwrap_or(f64::NAN);
    let (k1, k2) = extreme_indices(&curve.points);
    let ts = circle_angles(map, r, samples);
    r2 = r2.max(golden_max(&modulus, ts[k2] - step, ts[k2] + step));
    r1 = r1.min(-golden_max(&|t| -modulus(t), ts[k1] - step, ts[k1] + step));
    Ok(CircleStats { r1, r2, omega: (r2 / r1).ln(), shift1: r1.ln() - lambda, shift2: r2.ln() - lambda })
}

fn extreme_indices(pts: &[Point]) -> (usize, usize) {
    let mut lo = 0;
    let mut hi = 0;
    for (k, p) in pts.iter().enumerate() {
        if p.norm() < pts[lo].norm() {
            lo = k;
        }
        if p.norm() > pts[hi].norm() {
            hi = k;
        }
    }
    (lo, hi)
}

/// `(∫ dr/(C r), ∫ C dr/r)` over `[r1, r2]`, integrated in `log r`.
pub fn t3_bounds_with(c: impl Fn(f64) -> f64, r1: f64, r2: f64) -> Result<(f64, f64)> {
    if !(r1 > 0.0 && r1 < r2) {
        return Err(Error::InvalidArgument(format!("need 0 < r1 < r2, got {r1}, {r2}")));
    }
    let (a, b) = (r1.ln(), r2.ln());
    let lo = integrate(|s| 1.0 / c(s.exp()), a, b, 1e-12, 1e-11);
    let hi = integrate(|s| c(s.exp()), a, b, 1e-12, 1e-11);
    if !(lo.converged && hi.converged) {
        return Err(Error::Quadrature(lo.error.max(hi.error)));
    }
    Ok((lo.value, hi.value))
}

/// Bounds on the module of the image of `r1 < |z| < r2` under a map with
/// dilatation at most `C(|z|)`.
pub fn t3_bounds(profile: &DilatationProfile, r1: f64, r2: f64) -> Result<(f64, f64)> {
    if r1 < profile.r_min {
        return Err(Error::InvalidArgument(format!("profile is only declared for r >= {}", profile.r_min)));
    }
    t3_bounds_with(|r| profile.c.at(r), r1, r2)
}

/// Module of the image ring of `r1 < |z| < r2` against the bounds computed
/// from `C(r)` = largest dilatation on `|z| = r`.
pub fn verify_t3(map: &QCMapSpec, r1: f64, r2: f64, opts: &ExperimentOptions) -> Result<Report> {
    let inner = image_circle(map, r1.ln(), opts.samples)?;
    let outer = image_circle(map, r2.ln(), opts.samples)?;
    if !polygon::is_simple(&inner.points) || !polygon::is_simple(&outer.points) {
        return Err(Error::InvalidDomain("image curves self-intersect at the sampling resolution".into()));
    }
    let ring = RingDomainSpec::between(DomainSpec::polygon(&outer.points), DomainSpec::polygon(&inner.points));
    let m = ring_modulus_extrapolated(&ring, opts.resolution)?;
    let c = |r: f64| max_dilatation_on_circle(map, r, opts.samples).unwrap_or(f64::NAN);
    let (lower, upper) = t3_bounds_with(c, r1, r2)?;
    let slack = m.error_estimate + opts.tolerance;
    let mut rep = Report::new(format!("ring distortion bounds for {map}"), &["r", "C"]);
    for k in 0..=16 {
        let r = r1 * (r2 / r1).powf(k as f64 / 16.0);
        rep.push_row(vec![r.into(), c(r).into()]);
    }
    rep.set("r1", r1);
    rep.set("r2", r2);
    rep.set("lower", lower);
    rep.set("module", m.value);
    rep.set("module_error", m.error_estimate);
    rep.set("upper", upper);
    rep.record_margin(m.value - lower, slack);
    rep.record_margin(upper - m.value, slack);
    rep.set("holds", rep.violations == 0);
    rep.set("upper_attained", (upper - m.value).abs() <= slack);
    rep.set("lower_attained", (m.value - lower).abs() <= slack);
    Ok(rep)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// Punctured plane onto the unit disk: needs `∫^∞ dr/(r C) < ∞`.
    PlaneToDisk,
    /// Unit disk onto the punctured plane: needs `∫^1 C dr/r = ∞`.
    DiskToPlane,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TailVerdict {
    Convergent,
    Divergent,
    Inconclusive,
}

impl TailVerdict {
    pub fn as_str(self) -> &'static str {
        match self {
            TailVerdict::Convergent => "convergent",
            TailVerdict::Divergent => "divergent",
            TailVerdict::Inconclusive => "inconclusive",
        }
    }
}

/// Window integrals of `f` over `[S, 2S]`, `[2S, 4S]`, `[4S, 8S]`. The tail
/// counts as convergent when each window sum is at most 0.9 times the
/// previous one, divergent when neither decays, inconclusive otherwise.
pub fn tail_test(f: impl Fn(f64) -> f64, start: f64) -> (TailVerdict, [f64; 3]) {
    let w: Vec<f64> = (0..3)
        .map(|k| {
            let a = start * 2f64.powi(k);
            integrate(&f, a, 2.0 * a, 1e-14, 1e-10).value
        })
        .collect();
    let w = [w[0], w[1], w[2]];
    let tiny = |x: f64, width: f64| x.abs() <= 1e-13 * width;
    if tiny(w[0], start) && tiny(w[1], 2.0 * start) && tiny(w[2], 4.0 * start) {
        return (TailVerdict::Convergent, w);
    }
    let decays = |a: f64, b: f64| tiny(b, 1.0) || b <= 0.9 * a;
    let v = match (decays(w[0], w[1]), decays(w[1], w[2])) {
        (true, true) => TailVerdict::Convergent,
        (false, false) => TailVerdict::Divergent,
        _ => TailVerdict::Inconclusive,
    };
    (v, w)
}

/// Necessary conditions on the dilatation bound for the two type problems.
pub fn type_condition(profile: &DilatationProfile, direction: Direction) -> Result<Report> {
    let (verdict, w, needed, start) = match direction {
        Direction::PlaneToDisk => {
            let start = 4f64.max(2.0 * profile.r_min.max(1.0).ln());
            let (v, w) = tail_test(|s| 1.0 / profile.c.at(s.exp()), start);
            (v, w, TailVerdict::Convergent, start)
        }
        Direction::DiskToPlane => {
            let start = 4.0;
            let (v, w) = tail_test(
                |t| {
                    let e = (-t).exp();
                    profile.c.at(1.0 - e) * e / (1.0 - e)
                },
                start,
            );
            (v, w, TailVerdict::Divergent, start)
        }
    };
    let mut rep = Report::new(format!("type condition for C(r) = {}", profile.c.source), &["window_start", "window_end", "integral"]);
    for (k, wk) in w.iter().enumerate() {
        let a = start * 2f64.powi(k as i32);
        rep.push_row(vec![a.into(), (2.0 * a).into(), (*wk).into()]);
    }
    rep.set("direction", match direction {
        Direction::PlaneToDisk => "plane-to-disk",
        Direction::DiskToPlane => "disk-to-plane",
    });
    rep.set("variable", match direction {
        Direction::PlaneToDisk => "log r",
        Direction::DiskToPlane => "-log(1-r)",
    });
    rep.set("integral", verdict.as_str());
    let outcome = if verdict == TailVerdict::Inconclusive {
        "inconclusive"
    } else if verdict == needed {
        "not excluded"
    } else {
        "map excluded"
    };
    rep.set("verdict", outcome);
    Ok(rep)
}

fn ladder_spread(values: &[f64]) -> f64 {
    let tail = &values[values.len() - values.len().div_ceil(3)..];
    let (lo, hi) = tail.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &x| (a.min(x), b.max(x)));
    hi - lo
}

fn slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

fn check_ladder(lambdas: &[f64]) -> Result<()> {
    if lambdas.len() < 3 || lambdas.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidArgument("need an increasing ladder of at least three values".into()));
    }
    Ok(())
}

/// Evenly spaced ladder from `a` to `b` with `n` points.
pub fn ladder(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n).map(|k| a + (b - a) * k as f64 / (n - 1).max(1) as f64).collect()
}

/// Circularity at infinity: `C(e^λ)`, the tail integral `φ(λ) = ∫_λ^∞ (C − 1) ds`,
/// the shifts `log r_i(λ) − λ`, and the oscillation of image circles.
pub fn main_lemma_experiment(map: &QCMapSpec, lambdas: &[f64], opts: &ExperimentOptions) -> Result<Report> {
    check_ladder(lambdas)?;
    let c = |s: f64| max_dilatation_on_circle(map, s.exp(), opts.samples).unwrap_or(f64::NAN);
    let last = *lambdas.last().unwrap();
    let start = last.max(4.0);
    let (verdict, w) = tail_test(|s| c(s) - 1.0, start);
    let tail_beyond = match verdict {
        TailVerdict::Convergent if w[1] > 0.0 => {
            let q = (w[2] / w[1]).min(0.9);
            w[2] * q / (1.0 - q)
        }
        _ => 0.0,
    };
    let far = 8.0 * start;
    let rows = par_map(lambdas.len(), opts.jobs, |i| -> Result<[f64; 7]> {
        let lam = lambdas[i];
        let st = image_circle_stats(map, lam, opts.samples)?;
        let phi = if verdict == TailVerdict::Convergent {
            integrate(|s| c(s) - 1.0, lam, far, 1e-12, 1e-9).value + tail_beyond
        } else {
            f64::INFINITY
        };
        Ok([lam, c(lam), phi, st.shift1, st.shift2, st.omega, st.r2])
    });
    let rows = rows.into_iter().collect::<Result<Vec<_>>>()?;
    let mut rep = Report::new(format!("circularity at infinity for {map}"), &["lambda", "C", "phi", "shift1", "shift2", "omega"]);
    for r in &rows {
        rep.push_row(vec![r[0].into(), r[1].into(), r[2].into(), r[3].into(), r[4].into(), r[5].into()]);
    }
    let s1: Vec<f64> = rows.iter().map(|r| r[3]).collect();
    let s2: Vec<f64> = rows.iter().map(|r| r[4]).collect();
    let tail_n = rows.len().div_ceil(3);
    let spread = ladder_spread(&s1).max(ladder_spread(&s2)).max({
        let t1 = &s1[s1.len() - tail_n..];
        let t2 = &s2[s2.len() - tail_n..];
        t1.iter().zip(t2).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    });
    let converge = spread <= opts.tolerance;
    rep.set("hypothesis integral", verdict.as_str());
    rep.set("tail windows", format!("{:.6e} {:.6e} {:.6e}", w[0], w[1], w[2]));
    rep.set("shift spread", spread);
    rep.set("shifts converge", converge);
    if converge {
        let alpha = s1.iter().rev().take(tail_n).chain(s2.iter().rev().take(tail_n)).sum::<f64>() / (2 * tail_n) as f64;
        rep.set("alpha", alpha);
    }
    let lam: Vec<f64> = rows.iter().map(|r| r[0]).collect();
    rep.set("shift2 slope", slope(&lam, &s2));
    rep.set("final shift1", *s1.last().unwrap());
    rep.set("final shift2", *s2.last().unwrap());
    rep.set("final omega", rows.last().unwrap()[5]);
    rep.set("conclusion |w| ~ const |z|", converge);
    Ok(rep)
}

/// Behaviour of `w/z` along four rays: convergence of `|w/z|` (the
/// circularity conclusion) and of `arg(w/z)` (the asymptotic `w ~ const·z`).
pub fn twb_experiment(map: &QCMapSpec, lambdas: &[f64], opts: &ExperimentOptions) -> Result<Report> {
    check_ladder(lambdas)?;
    let rays = [0.0, 0.25, 0.5, 0.75].map(|f: f64| f * TAU);
    let mut rep = Report::new(format!("w/z along rays for {map}"), &["lambda", "ray", "abs_w_over_z", "arg_w_over_z"]);
    let mut moduli = Vec::new();
    let mut args = Vec::new();
    let mut traversal: f64 = 0.0;
    for &theta in &rays {
        let mut lm = Vec::new();
        let mut ar: Vec<f64> = Vec::new();
        for &lam in lambdas {
            let z = Point::from_polar(lam.exp(), theta);
            let q = map.apply(z)? / z;
            let mut a = q.arg();
            if let Some(&prev) = ar.last() {
                a += ((prev - a) / TAU).round() * TAU;
            }
            rep.push_row(vec![lam.into(), theta.into(), q.norm().into(), a.into()]);
            lm.push(q.norm().ln());
            ar.push(a);
        }
        let (lo, hi) = ar.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &x| (a.min(x), b.max(x)));
        traversal = traversal.max(hi - lo);
        moduli.push(lm);
        args.push(ar);
    }
    let tail = |v: &Vec<f64>| *v.last().unwrap();
    let cross = |vs: &[Vec<f64>]| {
        let l: Vec<f64> = vs.iter().map(tail).collect();
        l.iter().fold(f64::NEG_INFINITY, |a, &x| a.max(x)) - l.iter().fold(f64::INFINITY, |a, &x| a.min(x))
    };
    let mod_spread = moduli.iter().map(|v| ladder_spread(v)).fold(0.0, f64::max).max(cross(&moduli));
    let arg_spread = args.iter().map(|v| ladder_spread(v)).fold(0.0, f64::max).max(cross(&args));
    let mod_ok = mod_spread <= opts.tolerance;
    let arg_ok = arg_spread <= opts.tolerance;
    rep.set("log|w/z| spread", mod_spread);
    rep.set("arg(w/z) spread", arg_spread);
    rep.set("arg(w/z) traversal", traversal);
    rep.set("|w/z| converges", mod_ok);
    rep.set("arg(w/z) converges", arg_ok);
    if mod_ok && arg_ok {
        let lm = moduli.iter().map(tail).sum::<f64>() / rays.len() as f64;
        let la = args.iter().map(tail).sum::<f64>() / rays.len() as f64;
        let limit = Point::from_polar(lm.exp(), la);
        rep.set("limit re", limit.re);
        rep.set("limit im", limit.im);
    }
    let verdict = format!(
        "Main Lemma conclusion {}, w ~ const*z conclusion {}",
        if mod_ok { "holds" } else { "fails" },
        if mod_ok && arg_ok { "holds" } else { "fails" }
    );
    rep.set("verdict", verdict);
    Ok(rep)
}

/// Closed curves indexed by a log-radius parameter.
#[derive(Debug, Clone, PartialEq)]
pub enum CurveFamily {
    Circles,
    /// Images of `|z| = e^x`.
    Map(QCMapSpec),
    /// Concentric ellipses with semi-axes `e^x` and `e^x / ratio`.
    Ellipses { ratio: f64 },
}

impl CurveFamily {
    pub fn curve(&self, x: f64, samples: usize) -> Result<CurveSamples> {
        match self {
            CurveFamily::Circles => Ok(CurveSamples::circle(x.exp(), samples)),
            CurveFamily::Map(m) => image_circle(m, x, samples),
            CurveFamily::Ellipses { ratio } => {
                let a = x.exp();
                Ok(CurveSamples::from_fn(samples, |t| Point::new(a * t.cos(), a / ratio * t.sin())))
            }
        }
    }
}

/// Module of the ring between two curves of a family.
pub fn family_module(family: &CurveFamily, a: f64, b: f64, opts: &ExperimentOptions) -> Result<Estimate> {
    let inner = family.curve(a, opts.samples)?;
    let outer = family.curve(b, opts.samples)?;
    let ring = RingDomainSpec::between(DomainSpec::polygon(&outer.points), DomainSpec::polygon(&inner.points));
    ring.validate().map_err(|_| Error::InvalidDomain(format!("curves at {a} and {b} intersect")))?;
    Ok((&ring_modulus_extrapolated(&ring, opts.resolution)?).into())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Deficiency {
    pub value: f64,
    pub error: f64,
    pub outer: Estimate,
    pub lower: Estimate,
    pub upper: Estimate,
}

/// `M(χ, μ) − M(χ, λ) − M(λ, μ)`, nonnegative up to solver error.
pub fn circularity_criterion(family: &CurveFamily, chi: f64, lambda: f64, mu: f64, opts: &ExperimentOptions) -> Result<Deficiency> {
    if !(chi < lambda && lambda < mu) {
        return Err(Error::InvalidArgument(format!("need chi < lambda < mu, got {chi}, {lambda}, {mu}")));
    }
    let pairs = [(chi, mu), (chi, lambda), (lambda, mu)];
    let ms = par_map(3, opts.jobs, |i| family_module(family, pairs[i].0, pairs[i].1, opts));
    let ms = ms.into_iter().collect::<Result<Vec<_>>>()?;
    let value = ms[0].value - ms[1].value - ms[2].value;
    Ok(Deficiency { value, error: ms[0].error + ms[1].error + ms[2].error, outer: ms[0], lower: ms[1], upper: ms[2] })
}

/// Moduli between consecutive image curves compared with the ladder steps;
/// `φ(λ)` is the running supremum of the deviation beyond `λ`.
pub fn lemma_t2_check(map: &QCMapSpec, lambdas: &[f64], opts: &ExperimentOptions) -> Result<Report> {
    check_ladder(lambdas)?;
    let family = CurveFamily::Map(map.clone());
    let n = lambdas.len();
    let ms = par_map(n - 1, opts.jobs, |i| family_module(&family, lambdas[i], lambdas[i + 1], opts));
    let ms = ms.into_iter().collect::<Result<Vec<_>>>()?;
    let stats = lambdas.iter().map(|&l| image_circle_stats(map, l, opts.samples)).collect::<Result<Vec<_>>>()?;
    let dev: Vec<f64> = ms.iter().zip(lambdas.windows(2)).map(|(m, w)| (m.value - (w[1] - w[0])).abs()).collect();
    let mut phi = dev.clone();
    for i in (0..phi.len().saturating_sub(1)).rev() {
        phi[i] = phi[i].max(phi[i + 1]);
    }
    let mut rep = Report::new(format!("module ladder for {map}"), &["lambda", "mu", "module", "module_error", "deviation", "phi", "shift1", "shift2"]);
    for i in 0..n - 1 {
        rep.push_row(vec![
            lambdas[i].into(),
            lambdas[i + 1].into(),
            ms[i].value.into(),
            ms[i].error.into(),
            dev[i].into(),
            phi[i].into(),
            stats[i].shift1.into(),
            stats[i].shift2.into(),
        ]);
    }
    let max_step = lambdas.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max);
    let max_m = ms.iter().map(|m| m.value).fold(0.0, f64::max);
    let s1: Vec<f64> = stats.iter().map(|s| s.shift1).collect();
    let s2: Vec<f64> = stats.iter().map(|s| s.shift2).collect();
    let spread = ladder_spread(&s1).max(ladder_spread(&s2)).max((s1[n - 1] - s2[n - 1]).abs());
    let last_err = ms.last().unwrap().error;
    rep.set("largest consecutive module", max_m);
    rep.set("consecutive moduli bounded", max_m <= max_step + 1.0);
    rep.set("final phi", *phi.last().unwrap());
    rep.set("phi small", *phi.last().unwrap() <= opts.tolerance + last_err);
    rep.set("shift spread", spread);
    rep.set("shifts share a limit", spread <= opts.tolerance);
    let tail_n = n.div_ceil(3);
    let alpha = s1.iter().rev().take(tail_n).chain(s2.iter().rev().take(tail_n)).sum::<f64>() / (2 * tail_n) as f64;
    rep.set("alpha", alpha);
    Ok(rep)
}
