//! Domains, curves, and their rasterization.

mod curves;
pub mod grid;
pub mod polygon;
pub mod primitives;
mod spec;

pub use curves::{curve_radii, logarithmic_area, logarithmic_length, reduced_logarithmic_area, CurveSamples};
pub use grid::{rasterize_scene, CellLabel, Cut, Dir, Frame, FrameSpec, LabeledGrid, Scene};
pub use primitives::{BoundaryLabel, Piece, Shape};
pub use spec::{kind_name, DomainSpec, QuadrilateralSpec, RingDomainSpec, RingFrameOptions, Slit};

pub type Point = num_complex::Complex64;

/// Domains accepted by [`rasterize`].
pub enum Rasterizable<'a> {
    Ring(&'a RingDomainSpec),
    Quad(&'a QuadrilateralSpec),
}

impl<'a> From<&'a RingDomainSpec> for Rasterizable<'a> {
    fn from(r: &'a RingDomainSpec) -> Self {
        Rasterizable::Ring(r)
    }
}

impl<'a> From<&'a QuadrilateralSpec> for Rasterizable<'a> {
    fn from(q: &'a QuadrilateralSpec) -> Self {
        Rasterizable::Quad(q)
    }
}

/// Rings use the log-polar frame about the inner continuum; quadrilaterals a Cartesian box.
pub fn rasterize<'a>(domain: impl Into<Rasterizable<'a>>, resolution: usize) -> crate::Result<LabeledGrid> {
    match domain.into() {
        Rasterizable::Ring(r) => {
            let g = rasterize_scene(&r.scene(RingFrameOptions::default())?, resolution)?;
            if !g.has_label(BoundaryLabel::Zero) || !g.has_label(BoundaryLabel::One) {
                return Err(crate::Error::DegenerateRing("region does not touch both boundary continua".into()));
            }
            Ok(g)
        }
        Rasterizable::Quad(q) => rasterize_scene(&q.scene()?, resolution),
    }
}
