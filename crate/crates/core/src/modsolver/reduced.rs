//! Reduced module `lim (M_ρ + log ρ)` at a marked point.

use super::{error_floor, extrapolate_scene, Kind, ModulusResult};
use crate::error::{Error, Result};
use crate::geometry::{BoundaryLabel, DomainSpec, FrameSpec, Point, Scene};

/// Marked point of a simply connected domain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum At {
    Finite(Point),
    Infinity,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReducedOptions {
    pub resolution: usize,
    /// Log-radius margin used to cut off boundaries that reach infinity.
    pub truncation: f64,
}

impl Default for ReducedOptions {
    fn default() -> Self {
        ReducedOptions { resolution: 128, truncation: 10.0 }
    }
}

fn simply_connected(d: &DomainSpec) -> bool {
    match d {
        DomainSpec::Disk { .. } | DomainSpec::Polygon { .. } | DomainSpec::PlaneMinusSlits { .. } => true,
        DomainSpec::ComplementOf { of } => matches!(**of, DomainSpec::Disk { .. } | DomainSpec::Polygon { .. }),
        _ => false,
    }
}

fn contains_infinity(d: &DomainSpec) -> bool {
    match d {
        DomainSpec::ComplementOf { .. } => true,
        DomainSpec::PlaneMinusSlits { .. } => !d.has_rays(),
        _ => false,
    }
}

fn complement_center(d: &DomainSpec) -> Option<Point> {
    match d {
        DomainSpec::ComplementOf { of } => match &**of {
            DomainSpec::Disk { center, .. } => Some(Point::new(center[0], center[1])),
            DomainSpec::Polygon { .. } => crate::geometry::polygon::interior_point(&of.vertices()?),
            _ => None,
        },
        DomainSpec::PlaneMinusSlits { slits } => match &slits[0] {
            crate::geometry::Slit::Segment { from, to } => Some(Point::new(0.5 * (from[0] + to[0]), 0.5 * (from[1] + to[1]))),
            crate::geometry::Slit::Ray { from, .. } => Some(Point::new(from[0], from[1])),
        },
        _ => None,
    }
}

/// Frame about the marked point; the circle of radius `ρ` (in the
/// coordinate `w = z − a`, or `w = 1/(z − c)` at infinity) is the face `ξ = ln ρ`.
fn scene_for(domain: &DomainSpec, at: At, rho: f64, truncation: f64) -> Result<Scene> {
    let g = domain.clone();
    let align = frame_tip(domain, at);
    match at {
        At::Finite(a) => {
            let (_, ext) = domain.finite_extent(a);
            let (xi_max, far) = if domain.is_bounded() {
                (ext.ln() + 0.05, BoundaryLabel::One)
            } else if domain.has_rays() {
                (ext.max(rho).ln() + truncation, BoundaryLabel::One)
            } else {
                (ext.max(rho).ln() + truncation, BoundaryLabel::Neumann)
            };
            let far_len = 2.0 * xi_max.exp() + 2.0 * a.norm();
            Ok(Scene {
                pieces: domain.pieces(BoundaryLabel::One, far_len),
                frame: FrameSpec::LogPolar { center: a, sign: 1.0, xi_min: rho.ln(), xi_max, near: BoundaryLabel::Zero, far, align },
                region: Box::new(move |z| g.contains(z) && (z - a).norm() > rho),
            })
        }
        At::Infinity => {
            let c = complement_center(domain).ok_or_else(|| Error::InvalidDomain("no point in the complement".into()))?;
            let (dmin, dmax) = domain.finite_extent(c);
            let xi_max = if dmin > 1e-9 * dmax { -dmin.ln() + 0.05 } else { -dmax.ln() + truncation };
            Ok(Scene {
                pieces: domain.pieces(BoundaryLabel::One, 2.0 * dmax),
                frame: FrameSpec::LogPolar { center: c, sign: -1.0, xi_min: rho.ln(), xi_max, near: BoundaryLabel::Zero, far: BoundaryLabel::One, align },
                region: Box::new(move |z| g.contains(z) && (z - c).norm() < 1.0 / rho),
            })
        }
    }
}

/// Frame coordinates `(ξ, η)` of a slit tip, if the domain has one.
fn frame_tip(domain: &DomainSpec, at: At) -> Option<(f64, f64)> {
    let tip = domain.slit_tip()?;
    match at {
        At::Finite(a) => Some(((tip - a).norm().ln(), (tip - a).arg())),
        At::Infinity => {
            let c = complement_center(domain)?;
            let d = (tip - c).norm();
            (d > 0.0).then(|| (-d.ln(), (tip - c).arg()))
        }
    }
}

/// Snaps `ρ` so that `ln ρ` is a whole number of coarse cells from the slit tip.
fn snap_rho(rho: f64, tip: Option<(f64, f64)>) -> f64 {
    match tip {
        Some((t, _)) => {
            let coarse = std::f64::consts::TAU / 16.0;
            (t - ((t - rho.ln()) / coarse).round() * coarse).exp()
        }
        None => rho,
    }
}

/// Reduced module: `M_ρ + log ρ` on the ladder `ρ = d/8, d/16, d/32` (with `d`
/// the distance from the marked point to the boundary), extrapolated linearly
/// to `ρ = 0`. The error estimate combines the grid extrapolation error with
/// the gap between linear and quadratic extrapolants.
pub fn reduced_modulus(domain: &DomainSpec, at: At, opts: ReducedOptions) -> Result<ModulusResult> {
    domain.validate()?;
    if !simply_connected(domain) {
        return Err(Error::InvalidDomain(format!("{} is not simply connected", crate::geometry::kind_name(domain))));
    }
    let d = match at {
        At::Finite(a) => {
            if !domain.contains(a) {
                return Err(Error::InvalidArgument("marked point lies outside the domain".into()));
            }
            let d = domain.boundary_distance(a);
            if !(d > 0.0) {
                return Err(Error::InvalidArgument("marked point lies on the boundary".into()));
            }
            d
        }
        At::Infinity => {
            if !contains_infinity(domain) {
                return Err(Error::InvalidArgument("domain does not contain infinity".into()));
            }
            let c = complement_center(domain).unwrap();
            1.0 / domain.finite_extent(c).1
        }
    };
    let tip = frame_tip(domain, at);
    let rhos = [snap_rho(d / 8.0, tip), snap_rho(d / 16.0, tip), snap_rho(d / 32.0, tip)];
    let mut ms = Vec::new();
    let mut grid_err: f64 = 0.0;
    let mut levels = Vec::new();
    let mut energy = f64::NAN;
    for &rho in &rhos {
        let scene = scene_for(domain, at, rho, opts.truncation)?;
        let r = extrapolate_scene(&scene, opts.resolution, Kind::Ring)?;
        ms.push(r.value + rho.ln());
        grid_err = grid_err.max(r.error_estimate);
        levels.extend(r.levels.iter().copied());
        energy = r.energy;
    }
    let (lin, quad) = intercepts(&rhos, &ms);
    let mut diagnostics = Vec::new();
    let (d1, d2) = (ms[1] - ms[0], ms[2] - ms[1]);
    if d1 * d2 < 0.0 && d2.abs().min(d1.abs()) > 2.0 * grid_err {
        diagnostics.push("extrapolation unreliable: ladder values are not monotone".into());
    }
    let radius = lin.exp();
    let rho = rhos[2];
    if radius > 4.0 * rho {
        diagnostics.push(format!("a priori bound at smallest radius: {:.3e}", 2.0 * rho / (radius - 4.0 * rho)));
    }
    Ok(ModulusResult {
        value: lin,
        error_estimate: grid_err + (quad - lin).abs() + error_floor(lin),
        resolution: opts.resolution,
        energy,
        extrapolated: true,
        observed_order: None,
        levels,
        diagnostics,
    })
}

/// Intercepts at `x = 0` of the least-squares line and the interpolating parabola.
fn intercepts(xs: &[f64; 3], ys: &[f64]) -> (f64, f64) {
    let n = 3.0;
    let sx: f64 = xs.iter().sum();
    let sy: f64 = ys.iter().sum();
    let sxx: f64 = xs.iter().map(|x| x * x).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| x * y).sum();
    let slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    let lin = (sy - slope * sx) / n;
    let mut quad = 0.0;
    for i in 0..3 {
        let mut w = ys[i];
        for j in 0..3 {
            if i != j {
                w *= xs[j] / (xs[j] - xs[i]);
            }
        }
        quad += w;
    }
    (lin, quad)
}

/// `exp` of the reduced module, with its error propagated.
pub fn conformal_radius(domain: &DomainSpec, at: At, opts: ReducedOptions) -> Result<(f64, f64)> {
    let r = reduced_modulus(domain, at, opts)?;
    let v = r.value.exp();
    Ok((v, v * r.error_estimate))
}
