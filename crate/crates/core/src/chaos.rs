//! Finite-horizon statistics and chaos certificates.
//!
//! A certificate never asserts a `liminf` or `limsup`. It records threshold
//! crossings inside the computed horizon: a decay witness (some norm below
//! `epsilon`) and a growth witness (some norm above `G` times the first one),
//! together with the indices needed to re-read them.
//!
//! Soundness bookkeeping: decay claims need sequences whose values bound the
//! true norms from above, growth claims need sequences that are not mere
//! upper bounds (see [`Provenance`](crate::operator::Provenance)).

use std::ops::RangeInclusive;

use serde::{Deserialize, Serialize};

use crate::error::{Result, WcoError};
use crate::operator::NormSequence;
use crate::series::{binomial_series, C64, ONE};
use crate::spaces::SpaceSpec;

pub const DEFAULT_EPSILON: f64 = 1e-10;
pub const DEFAULT_GROWTH: f64 = 1e3;
pub const DEFAULT_HORIZON: usize = 500;

/// Prefix statistics of a norm sequence. Index vectors are aligned with the
/// sequence: entry `i` describes `v_1..v_{i+1}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SequenceStats {
    pub running_min: Vec<f64>,
    pub running_max: Vec<f64>,
    /// `A_N = (1/N) sum_{j <= N} v_j`.
    pub cesaro: Vec<f64>,
    /// 1-based index of the first overall minimum.
    pub arg_min: usize,
    /// 1-based index of the first overall maximum.
    pub arg_max: usize,
}

impl SequenceStats {
    pub fn min(&self) -> f64 {
        *self.running_min.last().expect("nonempty")
    }

    pub fn max(&self) -> f64 {
        *self.running_max.last().expect("nonempty")
    }
}

pub fn sequence_stats(v: &NormSequence) -> SequenceStats {
    let values = v.values();
    let mut running_min = Vec::with_capacity(values.len());
    let mut running_max = Vec::with_capacity(values.len());
    let mut cesaro = Vec::with_capacity(values.len());
    let (mut lo, mut hi, mut sum) = (f64::INFINITY, f64::NEG_INFINITY, 0.0);
    let (mut arg_min, mut arg_max) = (1, 1);
    for (i, &x) in values.iter().enumerate() {
        if x < lo {
            lo = x;
            arg_min = i + 1;
        }
        if x > hi {
            hi = x;
            arg_max = i + 1;
        }
        sum += x;
        running_min.push(lo);
        running_max.push(hi);
        cesaro.push(sum / (i + 1) as f64);
    }
    SequenceStats {
        running_min,
        running_max,
        cesaro,
        arg_min,
        arg_max,
    }
}

/// The Cesàro means `A_1..A_T` as a sequence of their own. Means of exact
/// values, lower bounds or upper bounds keep that provenance.
pub fn cesaro_sequence(v: &NormSequence) -> NormSequence {
    NormSequence::new(sequence_stats(v).cesaro, *v.space(), v.provenance())
        .expect("input is nonempty")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ChaosKind {
    LiYorkeEvidence,
    MeanLiYorkeEvidence,
    NoEvidence,
    Inconclusive,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GrowthChannel {
    WeightNorm,
    Orbit,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecayWitness {
    pub n: usize,
    pub value: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GrowthWitness {
    pub channel: GrowthChannel,
    /// Position in the orbit list for the orbit channel.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub orbit_index: Option<usize>,
    pub n: usize,
    pub value: f64,
    /// Least-squares log-slope over the tail window, when it can be fitted.
    pub rate: Option<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Thresholds {
    pub epsilon: f64,
    pub growth: f64,
    pub horizon: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChaosVerdict {
    pub kind: ChaosKind,
    /// Which rule fired.
    pub citation: String,
    pub decay_witness: Option<DecayWitness>,
    pub growth_witness: Option<GrowthWitness>,
    pub thresholds: Thresholds,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Mode {
    Plain,
    Mean,
}

fn check_thresholds(epsilon: f64, growth: f64) -> Result<()> {
    if !(epsilon.is_finite() && epsilon > 0.0) {
        return Err(WcoError::InvalidThreshold("epsilon must be positive"));
    }
    if !(growth.is_finite() && growth > 1.0) {
        return Err(WcoError::InvalidThreshold("growth factor G must exceed 1"));
    }
    Ok(())
}

fn first_below(v: &NormSequence, epsilon: f64) -> Option<DecayWitness> {
    v.values()
        .iter()
        .position(|&x| x < epsilon)
        .map(|i| DecayWitness {
            n: i + 1,
            value: v.values()[i],
        })
}

fn first_above(v: &NormSequence, growth: f64) -> Option<(usize, f64)> {
    let bar = growth * v.values()[0];
    v.values()
        .iter()
        .position(|&x| x > bar)
        .map(|i| (i + 1, v.values()[i]))
}

/// `[T - floor(2T/5), T]`, or the whole sequence when that is shorter than
/// the 8 points a fit needs.
pub fn tail_window(len: usize) -> RangeInclusive<usize> {
    let start = len - (2 * len) / 5;
    if len - start + 1 >= 8 {
        start..=len
    } else {
        1..=len
    }
}

fn bounded_by(v: &NormSequence, growth: f64) -> bool {
    let bar = growth * v.values()[0];
    v.values().iter().all(|&x| x <= bar)
}

fn certify(weight: &NormSequence, orbits: &[NormSequence], epsilon: f64, growth: f64, mode: Mode) -> Result<ChaosVerdict> {
    check_thresholds(epsilon, growth)?;
    if !weight.provenance().bounds_above() {
        return Err(WcoError::UnsoundDecayProvenance(weight.provenance()));
    }
    let thresholds = Thresholds {
        epsilon,
        growth,
        horizon: weight.len(),
    };
    let decay = first_below(weight, epsilon);

    let fit = |v: &NormSequence| growth_rate_fit(v, tail_window(v.len())).ok();
    let weight_growth = weight
        .provenance()
        .supports_growth()
        .then(|| first_above(weight, growth))
        .flatten()
        .map(|(n, value)| GrowthWitness {
            channel: GrowthChannel::WeightNorm,
            orbit_index: None,
            n,
            value,
            rate: fit(weight),
        });
    let orbit_growth = || {
        orbits.iter().enumerate().find_map(|(i, o)| {
            if !o.provenance().supports_growth() {
                return None;
            }
            first_above(o, growth).map(|(n, value)| GrowthWitness {
                channel: GrowthChannel::Orbit,
                orbit_index: Some(i),
                n,
                value,
                rate: fit(o),
            })
        })
    };
    let growth_witness = weight_growth.or_else(orbit_growth);

    let (evidence, prefix) = match mode {
        Mode::Plain => (ChaosKind::LiYorkeEvidence, "li-yorke"),
        Mode::Mean => (ChaosKind::MeanLiYorkeEvidence, "mean-li-yorke"),
    };
    let all_bounded = bounded_by(weight, growth) && orbits.iter().all(|o| bounded_by(o, growth));
    let (kind, rule) = match (decay, growth_witness) {
        (Some(_), Some(g)) => {
            let rule = match (mode, g.channel) {
                (Mode::Plain, GrowthChannel::WeightNorm) => {
                    "weight norms decay below epsilon and grow beyond G (unbounded weight norms)"
                }
                (Mode::Plain, GrowthChannel::Orbit) => {
                    "weight norms decay below epsilon and an orbit grows beyond G (not power bounded)"
                }
                (Mode::Mean, GrowthChannel::WeightNorm) => {
                    "Cesaro means of weight norms decay below epsilon and grow beyond G"
                }
                (Mode::Mean, GrowthChannel::Orbit) => {
                    "Cesaro means of weight norms decay below epsilon and an orbit's Cesaro means grow beyond G (not absolutely Cesaro bounded)"
                }
            };
            (evidence, rule)
        }
        (None, _) if all_bounded => (
            ChaosKind::NoEvidence,
            "all sequences stay within G of their first value and weight norms stay above epsilon",
        ),
        (Some(_), None) => (ChaosKind::Inconclusive, "decay witness without growth witness"),
        (None, Some(_)) => (ChaosKind::Inconclusive, "growth witness without decay witness"),
        (None, None) => (
            ChaosKind::Inconclusive,
            "no admissible witness, but some sequence exceeds G times its first value",
        ),
    };
    Ok(ChaosVerdict {
        kind,
        citation: format!("{prefix}: {rule}"),
        decay_witness: decay,
        growth_witness,
        thresholds,
    })
}

/// Li-Yorke evidence: the weight norms fall below `epsilon` somewhere in the
/// horizon, and either the weight norms or some orbit rise above `G` times
/// their first value.
///
/// `weight` must bound the true weight norms from above
/// ([`Provenance::bounds_above`](crate::operator::Provenance::bounds_above)); orbits may be any provenance except pure
/// upper bounds, which are skipped for growth.
pub fn certify_li_yorke(weight: &NormSequence, orbits: &[NormSequence], epsilon: f64, growth: f64) -> Result<ChaosVerdict> {
    certify(weight, orbits, epsilon, growth, Mode::Plain)
}

/// Mean Li-Yorke evidence: the same test applied to Cesàro means. Witness
/// values are Cesàro means `A_N`.
pub fn certify_mean_li_yorke(
    weight: &NormSequence,
    orbits: &[NormSequence],
    epsilon: f64,
    growth: f64,
) -> Result<ChaosVerdict> {
    check_thresholds(epsilon, growth)?;
    if !weight.provenance().bounds_above() {
        return Err(WcoError::UnsoundDecayProvenance(weight.provenance()));
    }
    let weight_means = cesaro_sequence(weight);
    let orbit_means: Vec<NormSequence> = orbits.iter().map(cesaro_sequence).collect();
    certify(&weight_means, &orbit_means, epsilon, growth, Mode::Mean)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IrregularWitness {
    pub irregular: bool,
    pub arg_min: usize,
    pub arg_max: usize,
}

/// Finite-horizon surrogate for an irregular vector: `min v < epsilon` and
/// `max v > G v_1`.
pub fn irregular_witness(orbit: &NormSequence, epsilon: f64, growth: f64) -> Result<IrregularWitness> {
    check_thresholds(epsilon, growth)?;
    let stats = sequence_stats(orbit);
    let first = orbit.values()[0];
    Ok(IrregularWitness {
        irregular: stats.min() < epsilon && stats.max() > growth * first,
        arg_min: stats.arg_min,
        arg_max: stats.arg_max,
    })
}

/// Least-squares slope of `ln v_n` against `n` over a 1-based inclusive
/// window of at least 8 points.
pub fn growth_rate_fit(v: &NormSequence, window: RangeInclusive<usize>) -> Result<f64> {
    let (start, end) = (*window.start(), *window.end());
    if start == 0 || end > v.len() || end < start || end - start + 1 < 8 {
        return Err(WcoError::InvalidWindow {
            start,
            end,
            len: v.len(),
        });
    }
    let mut xs = Vec::with_capacity(end - start + 1);
    let mut ys = Vec::with_capacity(end - start + 1);
    for n in window {
        let value = v.values()[n - 1];
        if !(value > 0.0) || !value.is_finite() {
            return Err(WcoError::NonPositiveInWindow { n, value });
        }
        xs.push(n as f64);
        ys.push(value.ln());
    }
    let count = xs.len() as f64;
    let mean_x = xs.iter().sum::<f64>() / count;
    let mean_y = ys.iter().sum::<f64>() / count;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for (x, y) in xs.iter().zip(&ys) {
        sxy += (x - mean_x) * (y - mean_y);
        sxx += (x - mean_x) * (x - mean_x);
    }
    Ok(sxy / sxx)
}

/// `||C_{phi_a} g - a^s g|| / ||g||` for `g` the degree-`D` cut of `(1 - z)^s`,
/// with `a^s = exp(s ln a)`.
pub fn eigen_residual(a: f64, s: C64, spec: &SpaceSpec, degree: usize) -> Result<f64> {
    if !(a > 0.0 && a < 1.0) {
        return Err(WcoError::InvalidAffineParameter(a));
    }
    spec.validate()?;
    if !spec.space.contains_binomial(s) {
        return Err(WcoError::NotInSpace {
            s: s.to_string(),
            space: spec.space.to_string(),
            bound: spec.space.binomial_membership_bound(),
        });
    }
    let g = binomial_series(s, degree);
    let mapped = g.compose_affine(C64::new(a, 0.0), C64::new(1.0 - a, 0.0));
    let residual = &mapped - &g.scale(eigenvalue(a, s));
    Ok(spec.norm(&residual)? / spec.norm(&g)?)
}

/// `a^s` as used by [`eigen_residual`].
pub fn eigenvalue(a: f64, s: C64) -> C64 {
    if s == C64::new(0.0, 0.0) {
        return ONE;
    }
    (s * a.ln()).exp()
}
