use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid domain: {0}")]
    InvalidDomain(String),
    #[error("degenerate ring: {0}")]
    DegenerateRing(String),
    #[error("not a ring: {0}")]
    NotARing(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("resolution too coarse: {0}")]
    TooCoarse(String),
    #[error("solver did not converge after {iterations} iterations (relative residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },
    #[error("quadrature did not converge: estimated error {0:e}")]
    Quadrature(f64),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("degenerate point: {0}")]
    DegeneratePoint(String),
    #[error("hypothesis not met: {0}")]
    HypothesisNotMet(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidArgument(msg.into()))
}
