//! The two worked examples of the `(lambda z, a z + 1 - a)` family.
//!
//! * weighted: `a^{1/2} < |lambda| < 1` gives decaying weight norms and a
//!   growing eigenfunction orbit;
//! * unweighted: `w = 1` has constant weight norms, yet `(1 - z)^{1/4} z^k`
//!   decays and `(1 - z)^{-1/12}` grows.

use anyhow::Result;
use serde::Serialize;
use wco_core::{
    eigen_orbit_norm_sequence, weight_norm_sequence, ChaosVerdict, EigenCandidate, NormSequence, SpaceSpec, C64,
};

use crate::config::{CandidateSpec, ExperimentConfig, OrbitMode, SymbolSpec, WeightSpec, SCHEMA_VERSION};
use crate::pipeline::{classify, eigen_rate, fitted_rate, prepare, OrbitSummary};

#[derive(Clone, Debug)]
pub struct WeightedParams {
    pub lambda: f64,
    pub a: f64,
    pub s: f64,
    pub space: SpaceSpec,
    pub degree: usize,
    pub horizon: usize,
    pub epsilon: f64,
    pub growth: f64,
}

impl Default for WeightedParams {
    fn default() -> Self {
        Self {
            lambda: 0.9,
            a: 0.25,
            s: -0.4,
            space: SpaceSpec::h2(),
            degree: 1024,
            horizon: 500,
            epsilon: wco_core::chaos::DEFAULT_EPSILON,
            growth: wco_core::chaos::DEFAULT_GROWTH,
        }
    }
}

impl WeightedParams {
    pub fn config(&self) -> ExperimentConfig {
        ExperimentConfig {
            weight: WeightSpec::Linear {
                lambda: C64::new(self.lambda, 0.0),
            },
            symbol: SymbolSpec::PhiA { a: self.a },
            space: self.space,
            degree: self.degree,
            horizon: self.horizon,
            epsilon: self.epsilon,
            growth: self.growth,
            candidates: vec![CandidateSpec::Eigen {
                s: C64::new(self.s, 0.0),
                k: 0,
            }],
            orbit_mode: OrbitMode::Auto,
            ..Default::default()
        }
    }
}

#[derive(Clone, Debug)]
pub struct WeightedReport {
    pub config: ExperimentConfig,
    pub weight_bounds: NormSequence,
    pub orbit: NormSequence,
    pub li_yorke: ChaosVerdict,
    pub mean_li_yorke: ChaosVerdict,
    pub rate: Option<f64>,
    /// `ln(|lambda| a^s)`.
    pub target_rate: f64,
}

#[derive(Serialize)]
struct WeightedSummary<'a> {
    schema_version: u32,
    preset: &'static str,
    li_yorke: &'a ChaosVerdict,
    mean_li_yorke: &'a ChaosVerdict,
    orbit: OrbitSummary,
    target_rate: f64,
    config: &'a ExperimentConfig,
}

impl WeightedReport {
    pub fn summary_json(&self) -> Result<String> {
        let orbit = crate::pipeline::LabeledSequence {
            label: self.config.candidates[0].label(),
            sequence: self.orbit.clone(),
        };
        crate::output::to_json(&WeightedSummary {
            schema_version: SCHEMA_VERSION,
            preset: "section5-weighted",
            li_yorke: &self.li_yorke,
            mean_li_yorke: &self.mean_li_yorke,
            orbit: OrbitSummary::from(&orbit),
            target_rate: self.target_rate,
            config: &self.config,
        })
    }
}

pub fn section5_weighted(params: &WeightedParams) -> Result<WeightedReport> {
    let config = params.config();
    let c = classify(&config)?;
    let orbit = c.orbits[0].sequence.clone();
    Ok(WeightedReport {
        rate: fitted_rate(&orbit),
        target_rate: eigen_rate(params.lambda, params.a, params.s),
        config,
        weight_bounds: c.weight_bounds,
        orbit,
        li_yorke: c.li_yorke,
        mean_li_yorke: c.mean_li_yorke,
    })
}

#[derive(Clone, Debug)]
pub struct UnweightedParams {
    pub a: f64,
    pub space: SpaceSpec,
    /// Multipliers `k` of the decaying vectors `(1 - z)^{1/4} z^k`.
    pub ks: Vec<usize>,
    pub decay_horizon: usize,
    pub decay_degree: usize,
    pub growth_s: f64,
    pub growth_degree: usize,
    pub growth_horizon: usize,
}

impl Default for UnweightedParams {
    fn default() -> Self {
        Self {
            a: 0.5,
            space: SpaceSpec::h2(),
            ks: vec![0, 1, 2],
            decay_horizon: 200,
            decay_degree: 1024,
            growth_s: -1.0 / 12.0,
            growth_degree: 2048,
            growth_horizon: 500,
        }
    }
}

pub const DECAY_EXPONENT: f64 = 0.25;

/// `a^{n/4} ||(1 - z)^{1/4}||_inf (a^n + 1)^k` with `||(1 - z)^{1/4}||_inf = 2^{1/4}`.
pub fn decay_bound(a: f64, n: usize, k: usize) -> f64 {
    let an = a.powi(n as i32);
    a.powf(n as f64 * DECAY_EXPONENT) * 2f64.powf(DECAY_EXPONENT) * (an + 1.0).powi(k as i32)
}

#[derive(Clone, Debug, Serialize)]
pub struct DecayCheck {
    pub k: usize,
    /// `max_n v_n / bound_n`.
    pub max_ratio: f64,
    pub last_value: f64,
}

#[derive(Clone, Debug)]
pub struct UnweightedReport {
    pub params: UnweightedParams,
    pub decay: Vec<(usize, NormSequence)>,
    pub checks: Vec<DecayCheck>,
    pub growth: NormSequence,
    pub rate: Option<f64>,
    /// `ln(a^s)` for the growing vector.
    pub target_rate: f64,
    pub weight_norms: NormSequence,
    /// `max_n |‖w^(n)‖ - 1|`.
    pub weight_norm_deviation: f64,
    pub li_yorke: ChaosVerdict,
}

#[derive(Serialize)]
struct UnweightedSummary<'a> {
    schema_version: u32,
    preset: &'static str,
    a: f64,
    space: SpaceSpec,
    decay: &'a [DecayCheck],
    growth_rate: Option<f64>,
    target_rate: f64,
    weight_norm_deviation: f64,
    li_yorke: &'a ChaosVerdict,
}

impl UnweightedReport {
    pub fn summary_json(&self) -> Result<String> {
        crate::output::to_json(&UnweightedSummary {
            schema_version: SCHEMA_VERSION,
            preset: "section5-unweighted",
            a: self.params.a,
            space: self.params.space,
            decay: &self.checks,
            growth_rate: self.rate,
            target_rate: self.target_rate,
            weight_norm_deviation: self.weight_norm_deviation,
            li_yorke: &self.li_yorke,
        })
    }

    /// `n, k<k>, bound_k<k>, ...` for the decaying vectors.
    pub fn decay_csv(&self) -> Result<String> {
        let mut out = csv::Writer::from_writer(Vec::new());
        let mut header = vec!["n".to_string()];
        for (k, _) in &self.decay {
            header.push(format!("k{k}"));
            header.push(format!("bound_k{k}"));
        }
        out.write_record(&header)?;
        for n in 1..=self.params.decay_horizon {
            let mut row = vec![n.to_string()];
            for (k, v) in &self.decay {
                row.push(v.values()[n - 1].to_string());
                row.push(decay_bound(self.params.a, n, *k).to_string());
            }
            out.write_record(&row)?;
        }
        Ok(String::from_utf8(out.into_inner()?)?)
    }
}

fn unweighted_config(params: &UnweightedParams, degree: usize, horizon: usize) -> ExperimentConfig {
    ExperimentConfig {
        weight: WeightSpec::Coefficients {
            coeffs: vec![C64::new(1.0, 0.0)],
        },
        symbol: SymbolSpec::PhiA { a: params.a },
        space: params.space,
        degree,
        horizon,
        candidates: vec![CandidateSpec::Eigen {
            s: C64::new(params.growth_s, 0.0),
            k: 0,
        }],
        ..Default::default()
    }
}

pub fn section5_unweighted(params: &UnweightedParams) -> Result<UnweightedReport> {
    let decay_prep = prepare(&unweighted_config(params, params.decay_degree, params.decay_horizon))?;
    let mut decay = Vec::new();
    let mut checks = Vec::new();
    for &k in &params.ks {
        let candidate = EigenCandidate::new(C64::new(DECAY_EXPONENT, 0.0), k, params.decay_degree);
        let v = eigen_orbit_norm_sequence(&decay_prep.cache, &candidate, &params.space, params.decay_horizon)?;
        let max_ratio = v
            .values()
            .iter()
            .enumerate()
            .map(|(i, x)| x / decay_bound(params.a, i + 1, k))
            .fold(0.0, f64::max);
        checks.push(DecayCheck {
            k,
            max_ratio,
            last_value: *v.values().last().expect("nonempty"),
        });
        decay.push((k, v));
    }

    let growth_cfg = unweighted_config(params, params.growth_degree, params.growth_horizon);
    let c = classify(&growth_cfg)?;
    let growth = c.orbits[0].sequence.clone();
    let growth_prep = prepare(&growth_cfg)?;
    let weight_norms = weight_norm_sequence(&growth_prep.cache, &params.space)?;
    let weight_norm_deviation = weight_norms.values().iter().map(|v| (v - 1.0).abs()).fold(0.0, f64::max);

    Ok(UnweightedReport {
        params: params.clone(),
        decay,
        checks,
        rate: fitted_rate(&growth),
        target_rate: params.growth_s * params.a.ln(),
        growth,
        weight_norms,
        weight_norm_deviation,
        li_yorke: c.li_yorke,
    })
}
