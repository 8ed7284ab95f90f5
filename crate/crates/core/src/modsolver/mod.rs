//! Conformal invariants from discrete Dirichlet energy.
//!
//! The potential `u` minimizes
//!
//! ```text
//! E(u) = Σ_links (u_i − u_j)² + Σ_cuts (u_i − g)² / t
//! ```
//!
//! over interior nodes, where a cut link ends on a Dirichlet boundary with
//! value `g` after the fraction `t` of its length. In log-polar frames the
//! energy is the Dirichlet integral in `(ln|z|, arg z)`, which equals the
//! planar one by conformal invariance. A ring has module `2π / E`; a
//! quadrilateral has extremal distance `1 / E` between its Dirichlet sides.

mod cg;
mod reduced;

pub use reduced::{conformal_radius, reduced_modulus, At, ReducedOptions};

use std::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::geometry::{rasterize, rasterize_scene, LabeledGrid, QuadrilateralSpec, RingDomainSpec, Scene};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    pub tolerance: f64,
    pub max_iterations: usize,
    pub record_energy: bool,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions { tolerance: 1e-10, max_iterations: 100_000, record_energy: false }
    }
}

#[derive(Debug, Clone)]
pub struct HarmonicSolution {
    pub grid: LabeledGrid,
    /// Potential per unknown, aligned with `grid.unknowns`.
    pub potential: Vec<f64>,
    pub residual: f64,
    pub iterations: usize,
    pub energy: f64,
    /// Energy after each solver iteration (only when recorded).
    pub energy_history: Vec<f64>,
}

impl HarmonicSolution {
    /// Whether all values lie in `[0, 1]` up to `slack`.
    pub fn maximum_principle_holds(&self, slack: f64) -> bool {
        self.potential.iter().all(|&u| (-slack..=1.0 + slack).contains(&u))
    }

    /// Potential at node `k` of the grid, if it is an unknown.
    pub fn at_node(&self, k: usize) -> Option<f64> {
        self.grid.unknowns.binary_search(&k).ok().map(|p| self.potential[p])
    }
}

/// Dirichlet energy of the potential `u` on the grid.
pub fn dirichlet_energy(grid: &LabeledGrid, u: &[f64]) -> f64 {
    let mut e = 0.0;
    for (p, (nb, w)) in grid.neighbors.iter().zip(&grid.weights).enumerate() {
        for k in 0..4 {
            let j = nb[k];
            if j != u32::MAX && (j as usize) > p {
                let d = u[p] - u[j as usize];
                e += w[k] * d * d;
            }
        }
    }
    for c in &grid.cuts {
        if let Some(g) = c.label.dirichlet_value() {
            let p = grid.unknowns.binary_search(&c.node).expect("cut from an interior node");
            let d = u[p] - g;
            e += c.w * d * d / c.t;
        }
    }
    e
}

pub fn solve(grid: LabeledGrid, opts: &SolverOptions) -> Result<HarmonicSolution> {
    let n = grid.unknowns.len();
    let mut x = vec![0.5; n];
    let (out, energy_history) = {
        let op = cg::Operator::new(&grid);
        let c: f64 = grid.cuts.iter().filter_map(|c| c.label.dirichlet_value().map(|g| c.w * g * g / c.t)).sum();
        let out = cg::pcg(&op, &mut x, opts.tolerance, opts.max_iterations, opts.record_energy);
        let hist = out.functional.iter().map(|j| j + c).collect();
        (out, hist)
    };
    if !out.converged {
        return Err(Error::NoConvergence { iterations: out.iterations, residual: out.residual });
    }
    let energy = dirichlet_energy(&grid, &x);
    Ok(HarmonicSolution { grid, potential: x, residual: out.residual, iterations: out.iterations, energy, energy_history })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModulusResult {
    pub value: f64,
    /// Estimated absolute error; infinite when only one resolution was solved.
    pub error_estimate: f64,
    pub resolution: usize,
    /// Dirichlet energy at the finest resolution.
    pub energy: f64,
    pub extrapolated: bool,
    /// Convergence order observed across the resolution ladder.
    pub observed_order: Option<f64>,
    /// `(resolution, value)` at each solved level.
    pub levels: Vec<(usize, f64)>,
    pub diagnostics: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Ring,
    Quad,
}

impl Kind {
    fn value(self, energy: f64) -> f64 {
        match self {
            Kind::Ring => TAU / energy,
            Kind::Quad => 1.0 / energy,
        }
    }
}

fn single(grid: LabeledGrid, kind: Kind) -> Result<(f64, f64)> {
    let sol = solve(grid, &SolverOptions::default())?;
    if !(sol.energy > 0.0) {
        return Err(Error::NotARing("zero Dirichlet energy".into()));
    }
    Ok((kind.value(sol.energy), sol.energy))
}

/// Module `2π/E` from a single grid.
pub fn ring_modulus(grid: LabeledGrid) -> Result<ModulusResult> {
    from_grid(grid, Kind::Ring)
}

/// Extremal distance `1/E` between the Dirichlet sides, from a single grid.
pub fn quad_modulus(grid: LabeledGrid) -> Result<ModulusResult> {
    from_grid(grid, Kind::Quad)
}

fn from_grid(grid: LabeledGrid, kind: Kind) -> Result<ModulusResult> {
    let res = grid.ny.max(grid.nx);
    let (value, energy) = single(grid, kind)?;
    Ok(ModulusResult {
        value,
        error_estimate: f64::INFINITY,
        resolution: res,
        energy,
        extrapolated: false,
        observed_order: None,
        levels: vec![(res, value)],
        diagnostics: Vec::new(),
    })
}

pub(crate) fn error_floor(v: f64) -> f64 {
    1e-9 * v.abs().max(1.0)
}

/// Richardson extrapolation over values at successively doubled resolutions.
/// The observed order is clamped to `[1, 2]`; with two levels first order is assumed.
/// The error estimate is the size of the applied correction, widened when the
/// observed order falls outside the clamp.
pub fn richardson(values: &[f64]) -> (f64, f64, Option<f64>) {
    match values {
        [] => (f64::NAN, f64::INFINITY, None),
        [v] => (*v, f64::INFINITY, None),
        [v0, v1] => {
            let d = v1 - v0;
            (v1 + d, d.abs() + error_floor(*v1), None)
        }
        _ => {
            let n = values.len();
            let (v0, v1, v2) = (values[n - 3], values[n - 2], values[n - 1]);
            let (d1, d2) = (v1 - v0, v2 - v1);
            if d2 == 0.0 {
                return (v2, error_floor(v2), None);
            }
            if d1 * d2 > 0.0 && d1.abs() > d2.abs() {
                let p = (d1 / d2).log2();
                let corr = d2 / (2f64.powf(p.clamp(1.0, 2.0)) - 1.0);
                // Outside [1, 2] the coarse level is not asymptotic; bound the
                // error by the correction of the less favorable order.
                let err = if p > 2.0 {
                    d2.abs()
                } else if p < 1.0 {
                    d2.abs() / (2f64.powf(p.max(0.25)) - 1.0)
                } else {
                    corr.abs()
                };
                (v2 + corr, err + error_floor(v2), Some(p))
            } else {
                (v2, d1.abs().max(d2.abs()) + error_floor(v2), None)
            }
        }
    }
}

/// Resolutions `N/4, N/2, N` (dropping levels below 16).
pub fn ladder(resolution: usize) -> Vec<usize> {
    [resolution / 4, resolution / 2, resolution].into_iter().filter(|&r| r >= 16).collect()
}

/// Solves a scene at each ladder level and extrapolates.
pub fn extrapolate_scene(scene: &Scene, resolution: usize, kind: Kind) -> Result<ModulusResult> {
    let mut levels = Vec::new();
    let mut energy = f64::NAN;
    for r in ladder(resolution) {
        let grid = rasterize_scene(scene, r)?;
        let (v, e) = single(grid, kind)?;
        levels.push((r, v));
        energy = e;
    }
    finish(levels, energy, resolution)
}

pub(crate) fn finish(levels: Vec<(usize, f64)>, energy: f64, resolution: usize) -> Result<ModulusResult> {
    let values: Vec<f64> = levels.iter().map(|l| l.1).collect();
    let (value, err, order) = richardson(&values);
    let mut diagnostics = Vec::new();
    if values.len() >= 3 && order.is_none() && err > error_floor(value) {
        diagnostics.push("non-monotone refinement; error estimate from level differences".into());
    }
    Ok(ModulusResult {
        value,
        error_estimate: err,
        resolution,
        energy,
        extrapolated: levels.len() > 1,
        observed_order: order,
        levels,
        diagnostics,
    })
}

/// Ring module with Richardson extrapolation over `N/4, N/2, N`.
pub fn ring_modulus_extrapolated(ring: &RingDomainSpec, resolution: usize) -> Result<ModulusResult> {
    let scene = ring.scene(Default::default())?;
    let r = extrapolate_scene(&scene, resolution, Kind::Ring)?;
    Ok(r)
}

/// Single-resolution ring module.
pub fn ring_modulus_at(ring: &RingDomainSpec, resolution: usize) -> Result<ModulusResult> {
    ring_modulus(rasterize(ring, resolution)?)
}

/// Quadrilateral extremal distance with Richardson extrapolation.
pub fn quad_modulus_extrapolated(quad: &QuadrilateralSpec, resolution: usize) -> Result<ModulusResult> {
    extrapolate_scene(&quad.scene()?, resolution, Kind::Quad)
}

pub fn quad_modulus_at(quad: &QuadrilateralSpec, resolution: usize) -> Result<ModulusResult> {
    quad_modulus(rasterize(quad, resolution)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{DomainSpec, Point};
    use std::f64::consts::E;

    #[test]
    fn annulus_is_exact() {
        let r = ring_modulus_at(&RingDomainSpec::annulus(1.0, E), 256).unwrap();
        assert!((r.value - 1.0).abs() < 1e-8, "{r:?}");
        assert!(r.error_estimate.is_infinite());
        let r = ring_modulus_extrapolated(&RingDomainSpec::annulus(0.3, 7.0), 64).unwrap();
        assert!((r.value - (7.0f64 / 0.3).ln()).abs() < 1e-8);
        assert!(r.error_estimate > 0.0 && r.extrapolated);
    }

    #[test]
    fn rectangles() {
        let sq = quad_modulus_at(&QuadrilateralSpec::rectangle(1.0, 1.0), 64).unwrap();
        assert!((sq.value - 1.0).abs() < 1e-8);
        let r = quad_modulus_at(&QuadrilateralSpec::rectangle(2.0, 1.0), 64).unwrap();
        assert!((r.value - 2.0).abs() < 1e-8);
        let c = quad_modulus_at(&QuadrilateralSpec::rectangle(2.0, 1.0).conjugate(), 64).unwrap();
        assert!((r.value * c.value - 1.0).abs() < 1e-8);
    }

    #[test]
    fn energy_decreases_and_maximum_principle() {
        let ring = RingDomainSpec::between(
            DomainSpec::disk(Point::new(0.3, 0.1), 3.0),
            DomainSpec::polygon(&[Point::new(-1.0, -0.5), Point::new(1.0, -0.5), Point::new(0.2, 1.0)]),
        );
        let grid = rasterize(&ring, 64).unwrap();
        let sol = solve(grid, &SolverOptions { record_energy: true, ..Default::default() }).unwrap();
        assert!(sol.energy_history.windows(2).all(|w| w[1] <= w[0] + 1e-12 * w[0].abs()));
        assert!((sol.energy_history.last().unwrap() - sol.energy).abs() < 1e-8 * sol.energy);
        assert!(sol.maximum_principle_holds(1e-9));
        assert!(sol.potential.iter().all(|&u| u > 0.0 && u < 1.0));
    }

    #[test]
    fn richardson_orders() {
        // v(h) = 1 + h²: exact after one step with observed order 2.
        let vals = [1.0 + 1.0 / 16.0, 1.0 + 1.0 / 64.0, 1.0 + 1.0 / 256.0];
        let (v, e, p) = richardson(&vals);
        assert!((v - 1.0).abs() < 1e-12 && (p.unwrap() - 2.0).abs() < 1e-12 && e < 5e-3);
        // v(h) = 1 + h: order 1.
        let vals = [1.25, 1.125, 1.0625];
        let (v, _, p) = richardson(&vals);
        assert!((v - 1.0).abs() < 1e-12 && (p.unwrap() - 1.0).abs() < 1e-12);
        // Apparent order 3: extrapolate at order 2 but keep the first-order error bound.
        let vals = [1.0 + 0.8, 1.0 + 0.1, 1.0 + 0.0125];
        let (v, e, p) = richardson(&vals);
        assert!((p.unwrap() - 3.0).abs() < 1e-12);
        assert!((v - (1.0125 - 0.0875 / 3.0)).abs() < 1e-12 && e >= 0.0875);
    }
}
