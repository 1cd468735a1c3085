//! Verdict tables over parameter grids.
//!
//! Cells are independent: each builds its own operator and cache, and the
//! pool may finish them in any order. Rows come back in grid order
//! (first axis outer, second axis inner).

use anyhow::{Context, Result};
use rayon::prelude::*;
use serde::Serialize;
use wco_core::symbols::DEFAULT_VALIDATION_GRID;
use wco_core::{ChaosKind, Space, SpaceSpec, C64};

use crate::config::{ExperimentConfig, SymbolSpec, WeightSpec};
use crate::pipeline::{classify, space_params};

pub const MAX_CELLS: usize = 10_000;

#[derive(Clone, Debug, PartialEq)]
pub enum SweepAxes {
    /// Weight `lambda z`, symbol `a z + 1 - a`.
    LambdaA { lambdas: Vec<f64>, a: Vec<f64> },
    /// `H^p`, or `A^p_beta` when `betas` is given.
    PBeta { ps: Vec<f64>, betas: Option<Vec<f64>> },
}

impl SweepAxes {
    fn cells(&self, base: &ExperimentConfig) -> Vec<ExperimentConfig> {
        let mut cells = Vec::new();
        match self {
            SweepAxes::LambdaA { lambdas, a } => {
                for &lambda in lambdas {
                    for &a in a {
                        let mut cfg = base.clone();
                        cfg.weight = WeightSpec::Linear {
                            lambda: C64::new(lambda, 0.0),
                        };
                        cfg.symbol = SymbolSpec::PhiA { a };
                        cells.push(cfg);
                    }
                }
            }
            SweepAxes::PBeta { ps, betas } => {
                for &p in ps {
                    let spaces: Vec<Space> = match betas {
                        Some(betas) => betas.iter().map(|&beta| Space::Bergman { p, beta }).collect(),
                        None => vec![Space::Hardy { p }],
                    };
                    for space in spaces {
                        let mut cfg = base.clone();
                        cfg.space = SpaceSpec { space, ..base.space };
                        cells.push(cfg);
                    }
                }
            }
        }
        cells
    }

    pub fn cell_count(&self) -> usize {
        match self {
            SweepAxes::LambdaA { lambdas, a } => lambdas.len() * a.len(),
            SweepAxes::PBeta { ps, betas } => ps.len() * betas.as_ref().map_or(1, Vec::len),
        }
    }
}

/// One verdict row. Thresholds and horizon are repeated so the table is
/// self-describing.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepRow {
    pub lambda: Option<f64>,
    pub a: Option<f64>,
    pub p: String,
    pub beta: String,
    pub candidates: String,
    pub kind: ChaosKind,
    pub mean_kind: ChaosKind,
    pub citation: String,
    pub decay_n: Option<usize>,
    pub decay_value: Option<f64>,
    pub growth_channel: Option<String>,
    pub growth_n: Option<usize>,
    pub growth_value: Option<f64>,
    pub rate: Option<f64>,
    pub epsilon: f64,
    pub growth: f64,
    pub horizon: usize,
}

pub const SWEEP_COLUMNS: [&str; 17] = [
    "lambda",
    "a",
    "p",
    "beta",
    "candidates",
    "kind",
    "mean_kind",
    "citation",
    "decay_n",
    "decay_value",
    "growth_channel",
    "growth_n",
    "growth_value",
    "rate",
    "epsilon",
    "growth",
    "horizon",
];

fn describe_cell(cfg: &ExperimentConfig) -> String {
    let mut parts = Vec::new();
    if let WeightSpec::Linear { lambda } = cfg.weight {
        parts.push(format!("lambda={}", crate::config::fmt_complex(lambda)));
    }
    if let SymbolSpec::PhiA { a } = cfg.symbol {
        parts.push(format!("a={a}"));
    }
    parts.push(format!("space={}", cfg.space));
    parts.join(" ")
}

fn run_cell(cfg: &ExperimentConfig) -> Result<SweepRow> {
    let c = classify(cfg).with_context(|| format!("sweep cell {}", describe_cell(cfg)))?;
    let v = &c.li_yorke;
    let (p, beta) = space_params(&cfg.space.space);
    let kind_name = |ch| match ch {
        wco_core::chaos::GrowthChannel::WeightNorm => "weight-norm".to_string(),
        wco_core::chaos::GrowthChannel::Orbit => "orbit".to_string(),
    };
    Ok(SweepRow {
        lambda: cfg.weight.lambda().map(|l| l.re),
        a: match cfg.symbol {
            SymbolSpec::PhiA { a } => Some(a),
            _ => None,
        },
        p,
        beta,
        candidates: c.orbits.iter().map(|o| o.label.as_str()).collect::<Vec<_>>().join(";"),
        kind: v.kind,
        mean_kind: c.mean_li_yorke.kind,
        citation: v.citation.clone(),
        decay_n: v.decay_witness.map(|d| d.n),
        decay_value: v.decay_witness.map(|d| d.value),
        growth_channel: v.growth_witness.map(|g| kind_name(g.channel)),
        growth_n: v.growth_witness.map(|g| g.n),
        growth_value: v.growth_witness.map(|g| g.value),
        rate: v.growth_witness.and_then(|g| g.rate),
        epsilon: v.thresholds.epsilon,
        growth: v.thresholds.growth,
        horizon: v.thresholds.horizon,
    })
}

pub fn sweep(base: &ExperimentConfig, axes: &SweepAxes) -> Result<Vec<SweepRow>> {
    let count = axes.cell_count();
    if count > MAX_CELLS {
        anyhow::bail!("sweep grid has {count} cells, more than the limit of {MAX_CELLS}");
    }
    let cells = axes.cells(base);
    // cheap checks first, in grid order, so the reported error is deterministic
    for cfg in &cells {
        cfg.validate().with_context(|| format!("sweep cell {}", describe_cell(cfg)))?;
        cfg.symbol
            .build()
            .validated(DEFAULT_VALIDATION_GRID)
            .with_context(|| format!("sweep cell {}", describe_cell(cfg)))?;
    }
    cells.par_iter().map(run_cell).collect()
}

pub fn sweep_csv(rows: &[SweepRow]) -> Result<String> {
    let mut out = csv::Writer::from_writer(Vec::new());
    out.write_record(SWEEP_COLUMNS)?;
    let opt = |x: Option<f64>| x.map(|v| v.to_string()).unwrap_or_default();
    let kind = |k: ChaosKind| serde_json::to_value(k).ok().and_then(|v| v.as_str().map(str::to_string)).unwrap_or_default();
    for r in rows {
        out.write_record([
            opt(r.lambda),
            opt(r.a),
            r.p.clone(),
            r.beta.clone(),
            r.candidates.clone(),
            kind(r.kind),
            kind(r.mean_kind),
            r.citation.clone(),
            r.decay_n.map(|n| n.to_string()).unwrap_or_default(),
            opt(r.decay_value),
            r.growth_channel.clone().unwrap_or_default(),
            r.growth_n.map(|n| n.to_string()).unwrap_or_default(),
            opt(r.growth_value),
            opt(r.rate),
            r.epsilon.to_string(),
            r.growth.to_string(),
            r.horizon.to_string(),
        ])?;
    }
    Ok(String::from_utf8(out.into_inner()?)?)
}
