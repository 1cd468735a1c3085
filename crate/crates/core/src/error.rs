use thiserror::Error;

use crate::operator::Provenance;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum WcoError {
    #[error("exponent p = {p} out of range: {expected}")]
    InvalidExponent { p: f64, expected: &'static str },

    #[error("Bergman parameter beta = {0} must satisfy beta > -1")]
    InvalidBeta(f64),

    #[error("angular grid of {m} points is too coarse for degree {degree} (need at least {required})")]
    GridTooCoarse {
        m: usize,
        degree: usize,
        required: usize,
    },

    #[error("radial rule order {0} must be at least 2")]
    RadialOrder(usize),

    #[error("H^{p} quadrature did not settle to 1e-9 by grid doubling (stopped at {m} points)")]
    NotConverged { p: f64, m: usize },

    #[error("self-map validation failed: {0}")]
    InvalidSelfMap(String),

    #[error("symbol has not been validated as a self-map of the disk")]
    UnvalidatedSymbol,

    #[error("horizon must be at least 1")]
    EmptyHorizon,

    #[error("iterate n = {n} is beyond the cached horizon {horizon}")]
    BeyondHorizon { n: usize, horizon: usize },

    #[error("decay test needs an upper-bound-valid sequence, got {0:?}")]
    UnsoundDecayProvenance(Provenance),

    #[error("threshold out of range: {0}")]
    InvalidThreshold(&'static str),

    #[error("empty norm sequence")]
    EmptySequence,

    #[error("fit window [{start}, {end}] is invalid for a sequence of length {len} (need at least 8 points)")]
    InvalidWindow { start: usize, end: usize, len: usize },

    #[error("nonpositive value {value} at n = {n} inside the fit window")]
    NonPositiveInWindow { n: usize, value: f64 },

    #[error("parameter a = {0} must lie in (0, 1)")]
    InvalidAffineParameter(f64),

    #[error("(1 - z)^s with s = {s} is not in {space}: need Re(s) > {bound}")]
    NotInSpace { s: String, space: String, bound: f64 },

    #[error("eigenfunction orbits need a symbol of the form a z + 1 - a with 0 < a < 1")]
    NotEigenSymbol,
}

pub type Result<T, E = WcoError> = std::result::Result<T, E>;
