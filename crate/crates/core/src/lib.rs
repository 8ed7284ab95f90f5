//! Conformal invariants of plane domains computed two independent ways:
//! closed forms built on the arithmetic-geometric mean, and a cut-cell
//! finite-difference solver that minimizes Dirichlet energy on a grid.
//!
//! On top of these sit property suites for classical module inequalities,
//! distortion experiments for quasiconformal maps, strip-domain width
//! estimates, and Modulsatz probes.

pub mod elliptic;
pub mod error;
pub mod geometry;
pub mod invariants;
pub mod modsolver;
pub mod parallel;
pub mod modulsatz;
pub mod qcmap;
pub mod quadrature;
pub mod report;
pub mod strip;

pub use error::{Error, Result};
pub use geometry::{BoundaryLabel, CurveSamples, DomainSpec, Point, QuadrilateralSpec, RingDomainSpec};
pub use modsolver::ModulusResult;
pub use report::Report;
