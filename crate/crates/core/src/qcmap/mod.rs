//! Quasiconformal maps of the plane given by a small combinator grammar,
//! with exact dilatation and the distortion experiments built on them.

pub mod experiments;
pub mod expr;
pub mod maps;

pub use experiments::*;
pub use expr::Expr;
pub use maps::{dilatation, Jet, Profile, QCMapSpec};
