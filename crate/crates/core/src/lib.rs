//! Numerical laboratory for weighted composition operators
//! `C_{w,phi} f = w (f o phi)` on Hardy spaces `H^p`, weighted Bergman spaces
//! `A^p_beta` and `H^infinity` of the unit disk.
//!
//! Functions are polynomials ([`AnalyticPoly`]); powers of the operator go
//! through the weight iterates `w^(n)` ([`WeightIterateCache`]); norm
//! sequences of orbits feed finite-horizon Li-Yorke and mean Li-Yorke
//! certificates ([`chaos`]).

pub mod chaos;
pub mod error;
pub mod operator;
pub mod quadrature;
pub mod series;
pub mod spaces;
pub mod symbols;
pub mod weights;

pub use chaos::{
    certify_li_yorke, certify_mean_li_yorke, eigen_residual, growth_rate_fit, irregular_witness,
    sequence_stats, ChaosKind, ChaosVerdict, SequenceStats,
};
pub use error::{Result, WcoError};
pub use operator::{
    eigen_orbit_norm_sequence, orbit_norm_sequence, weight_norm_sequence, weight_upper_sequence,
    EigenCandidate, NormSequence, Provenance, WeightedCompOp,
};
pub use series::{binomial_series, AnalyticPoly, C64};
pub use spaces::{BracketSide, Space, SpaceSpec};
pub use symbols::{SelfMap, Weight};
pub use weights::WeightIterateCache;
