//! From an [`ExperimentConfig`] to norm sequences and verdicts.

use anyhow::{anyhow, bail, Context, Result};
use serde::Serialize;
use wco_core::chaos::{tail_window, SequenceStats};
use wco_core::symbols::DEFAULT_VALIDATION_GRID;
use wco_core::{
    certify_li_yorke, certify_mean_li_yorke, eigen_orbit_norm_sequence, growth_rate_fit, orbit_norm_sequence,
    sequence_stats, weight_norm_sequence, weight_upper_sequence, AnalyticPoly, ChaosVerdict, EigenCandidate,
    NormSequence, Provenance, SelfMap, Space, WeightIterateCache, WeightedCompOp, C64,
};

use crate::config::{auto_exponent, CandidateSpec, ExperimentConfig, OrbitMode, WeightSpec};

/// A validated operator with its weight-iterate cache.
pub struct Prepared {
    pub config: ExperimentConfig,
    pub op: WeightedCompOp,
    pub cache: WeightIterateCache,
}

/// Validates the configuration and the symbol, then builds the cache.
pub fn prepare(config: &ExperimentConfig) -> Result<Prepared> {
    config.validate()?;
    let symbol = config
        .symbol
        .build()
        .validated(DEFAULT_VALIDATION_GRID)
        .context("symbol rejected")?;
    let op = WeightedCompOp::new(config.weight.build(), symbol)?;
    let cap = config.cap.or_else(|| default_cap(op.symbol(), config.degree));
    let cache = op.cache(config.horizon, cap)?;
    Ok(Prepared {
        config: config.clone(),
        op,
        cache,
    })
}

/// Non-affine symbols of degree > 1 make iterate degrees grow geometrically;
/// they are capped at the working degree unless the caller says otherwise.
fn default_cap(symbol: &SelfMap, degree: usize) -> Option<usize> {
    (!symbol.is_affine() && symbol.as_poly().trimmed_degree() > 1).then_some(degree)
}

/// A candidate with everything needed to compute its orbit.
#[derive(Clone, Debug, PartialEq)]
pub enum Resolved {
    Eigen(EigenCandidate),
    Poly(AnalyticPoly),
}

#[derive(Clone, Debug)]
pub struct LabeledSequence {
    pub label: String,
    pub sequence: NormSequence,
}

impl LabeledSequence {
    pub fn stats(&self) -> SequenceStats {
        sequence_stats(&self.sequence)
    }

    /// Log-slope over the tail window, if the window can be fitted.
    pub fn rate(&self) -> Option<f64> {
        fitted_rate(&self.sequence)
    }
}

pub fn fitted_rate(v: &NormSequence) -> Option<f64> {
    growth_rate_fit(v, tail_window(v.len())).ok()
}

/// `|lambda|` used by `s=auto`: the modulus of the weight at the fixed point
/// `z = 1` of `a z + 1 - a`.
fn auto_lambda(weight: &WeightSpec) -> f64 {
    match weight {
        WeightSpec::Linear { lambda } => lambda.norm(),
        WeightSpec::Coefficients { coeffs } => AnalyticPoly::new(coeffs.clone()).eval(C64::new(1.0, 0.0)).norm(),
    }
}

pub fn resolve_candidate(prepared: &Prepared, candidate: &CandidateSpec) -> Result<(String, Resolved)> {
    let cfg = &prepared.config;
    let label = candidate.label();
    let resolved = match *candidate {
        CandidateSpec::Monomial { k } => Resolved::Poly(AnalyticPoly::monomial(k, C64::new(1.0, 0.0))),
        CandidateSpec::Eigen { s, k } => Resolved::Eigen(EigenCandidate::new(s, k, cfg.degree)),
        CandidateSpec::AutoEigen { k } => {
            let a = prepared
                .op
                .symbol()
                .phi_a_parameter()
                .ok_or_else(|| anyhow!("candidate s=auto needs a symbol of the form a z + 1 - a"))?;
            let s = auto_exponent(auto_lambda(&cfg.weight), a, &cfg.space.space);
            Resolved::Eigen(EigenCandidate::new(C64::new(s, 0.0), k, cfg.degree))
        }
    };
    let label = match (&resolved, candidate) {
        (Resolved::Eigen(e), CandidateSpec::AutoEigen { .. }) => format!("{label}({})", e.s.re),
        _ => label,
    };
    Ok((label, resolved))
}

/// Orbit norms of one candidate, `n = 1..horizon`.
pub fn candidate_orbit(prepared: &Prepared, resolved: &Resolved) -> Result<NormSequence> {
    let cfg = &prepared.config;
    let use_eigen = |e: &EigenCandidate| -> Result<Option<EigenCandidate>> {
        match cfg.orbit_mode {
            OrbitMode::Truncated => Ok(None),
            OrbitMode::Eigen => {
                if prepared.op.symbol().phi_a_parameter().is_none() {
                    bail!("--mode eigen needs a symbol of the form a z + 1 - a");
                }
                Ok(Some(*e))
            }
            OrbitMode::Auto => Ok(prepared.op.symbol().phi_a_parameter().map(|_| *e)),
        }
    };
    let sequence = match resolved {
        Resolved::Eigen(e) => match use_eigen(e)? {
            Some(e) => eigen_orbit_norm_sequence(&prepared.cache, &e, &cfg.space, cfg.horizon)?,
            None => orbit_norm_sequence(&prepared.op, &prepared.cache, &e.truncated(), &cfg.space, cfg.horizon)?,
        },
        Resolved::Poly(f) => orbit_norm_sequence(&prepared.op, &prepared.cache, f, &cfg.space, cfg.horizon)?,
    };
    Ok(sequence)
}

pub fn candidate_orbits(prepared: &Prepared) -> Result<Vec<LabeledSequence>> {
    prepared
        .config
        .candidates
        .iter()
        .map(|c| {
            let (label, resolved) = resolve_candidate(prepared, c)?;
            let sequence = candidate_orbit(prepared, &resolved).with_context(|| format!("candidate {label}"))?;
            Ok(LabeledSequence { label, sequence })
        })
        .collect()
}

/// `||w^(n)||` as computed in the configured space.
pub fn weight_norms(prepared: &Prepared) -> Result<NormSequence> {
    Ok(weight_norm_sequence(&prepared.cache, &prepared.config.space)?)
}

#[derive(Clone, Debug)]
pub struct Classification {
    /// Upper bounds of `||w^(n)||`, the decay channel.
    pub weight_bounds: NormSequence,
    pub orbits: Vec<LabeledSequence>,
    pub li_yorke: ChaosVerdict,
    pub mean_li_yorke: ChaosVerdict,
}

pub fn classify_prepared(prepared: &Prepared) -> Result<Classification> {
    let cfg = &prepared.config;
    let weight_bounds = weight_upper_sequence(&prepared.cache, &cfg.space)?;
    if !weight_bounds.provenance().bounds_above() {
        bail!(
            "weight-norm bounds for {} are not guaranteed upper bounds (degree cap truncated the weight iterates); \
             raise --cap",
            cfg.space
        );
    }
    let orbits = candidate_orbits(prepared)?;
    let seqs: Vec<NormSequence> = orbits.iter().map(|o| o.sequence.clone()).collect();
    let li_yorke = certify_li_yorke(&weight_bounds, &seqs, cfg.epsilon, cfg.growth)?;
    let mean_li_yorke = certify_mean_li_yorke(&weight_bounds, &seqs, cfg.epsilon, cfg.growth)?;
    Ok(Classification {
        weight_bounds,
        orbits,
        li_yorke,
        mean_li_yorke,
    })
}

pub fn classify(config: &ExperimentConfig) -> Result<Classification> {
    classify_prepared(&prepare(config)?)
}

/// Summary of one orbit for verdict documents.
#[derive(Clone, Debug, Serialize)]
pub struct OrbitSummary {
    pub label: String,
    pub provenance: Provenance,
    pub first: f64,
    pub min: f64,
    pub max: f64,
    pub rate: Option<f64>,
}

impl From<&LabeledSequence> for OrbitSummary {
    fn from(o: &LabeledSequence) -> Self {
        let stats = o.stats();
        Self {
            label: o.label.clone(),
            provenance: o.sequence.provenance(),
            first: o.sequence.values()[0],
            min: stats.min(),
            max: stats.max(),
            rate: o.rate(),
        }
    }
}

/// `ln |lambda a^s|`, the growth rate of `(1 - z)^s` under `C_{lambda z, phi_a}`.
pub fn eigen_rate(lambda: f64, a: f64, s: f64) -> f64 {
    lambda.abs().ln() + s * a.ln()
}

/// Space label for tables: `(p, beta)` with `beta` empty outside Bergman
/// spaces and `p = inf` for `H^infinity`.
pub fn space_params(space: &Space) -> (String, String) {
    match *space {
        Space::Hardy { p } => (p.to_string(), String::new()),
        Space::Bergman { p, beta } => (p.to_string(), beta.to_string()),
        Space::Sup { .. } => ("inf".to_string(), String::new()),
    }
}
