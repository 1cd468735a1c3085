//! The `wco` command line.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use wco_core::{eigen_residual, SpaceSpec, C64};

use crate::config::{
    parse_candidates, parse_complex, parse_complex_list, parse_grid, parse_space, ExperimentConfig, OrbitMode,
    OutputFormat, OutputSpec, SymbolSpec, WeightSpec, DEFAULT_DEGREE, SCHEMA_VERSION,
};
use crate::output::{emit, labeled_sequences_csv, sequence_csv, to_json, Criterion, VerdictDocument};
use crate::pipeline::{candidate_orbits, classify_prepared, prepare, weight_norms, OrbitSummary};
use crate::presets::{section5_unweighted, section5_weighted, UnweightedParams, WeightedParams};
use crate::sweep::{sweep, sweep_csv, SweepAxes};

#[derive(Parser, Debug)]
#[command(name = "wco", version, about = "Orbits, norms and chaos certificates for weighted composition operators")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Norms of the weight iterates w^(n), n = 1..T, as a sequence table.
    Weights(ExperimentArgs),
    /// Orbit norms of the candidate vectors.
    Orbit(ExperimentArgs),
    /// Li-Yorke or mean Li-Yorke verdict as JSON.
    Classify {
        #[command(flatten)]
        args: ExperimentArgs,
        #[arg(long, value_enum, default_value_t = Criterion::LiYorke)]
        criterion: Criterion,
    },
    /// Verdict table over a (lambda, a) or (p, beta) grid.
    Sweep {
        #[command(flatten)]
        args: ExperimentArgs,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Relative residual of (1 - z)^s as an eigenvector of C_{phi_a}.
    Eigen(EigenArgs),
    /// Reproduce one of the worked examples.
    Preset(PresetArgs),
}

/// Flags shared by the experiment subcommands; each overrides the
/// corresponding field of `--config`.
#[derive(Args, Debug, Default, Clone)]
pub struct ExperimentArgs {
    /// JSON experiment configuration (schema_version 1).
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Weight: "0.9*z" for lambda z, or coefficients "c0,c1,...".
    #[arg(long = "w")]
    pub weight: Option<String>,
    /// Symbol a z + 1 - a.
    #[arg(long, group = "symbol", allow_hyphen_values = true)]
    pub phi_affine: Option<f64>,
    /// Polynomial symbol with coefficients "c0,c1,..." (grid-validated).
    #[arg(long, group = "symbol", allow_hyphen_values = true)]
    pub phi_poly: Option<String>,
    /// Rotation e^{i theta} z.
    #[arg(long, group = "symbol", allow_hyphen_values = true)]
    pub phi_rotation: Option<f64>,
    /// h2, h<p>, a2, a2:<beta>, bergman:<p>:<beta>, hinf, hinf-upper.
    #[arg(long)]
    pub space: Option<String>,
    /// Truncation degree D of eigenfunction candidates.
    #[arg(long)]
    pub degree: Option<usize>,
    /// Horizon T.
    #[arg(long)]
    pub horizon: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    pub epsilon: Option<f64>,
    /// Growth factor G.
    #[arg(long, allow_hyphen_values = true)]
    pub growth: Option<f64>,
    /// Degree cap for weight and symbol iterates.
    #[arg(long)]
    pub cap: Option<usize>,
    /// Angular grid size M for quadrature norms.
    #[arg(long)]
    pub grid: Option<usize>,
    /// Gauss-Jacobi order Q for Bergman norms.
    #[arg(long)]
    pub radial: Option<usize>,
    #[arg(long, value_enum)]
    pub mode: Option<OrbitMode>,
    /// Candidates "s=-0.4", "s=0.25:k=2", "k=3", "s=auto", comma-separated.
    #[arg(long, allow_hyphen_values = true)]
    pub candidates: Option<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<OutputFormat>,
}

impl ExperimentArgs {
    pub fn to_config(&self) -> Result<ExperimentConfig> {
        let mut cfg = match &self.config {
            Some(path) => {
                let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
                ExperimentConfig::from_json(&text).with_context(|| format!("config {}", path.display()))?
            }
            None => ExperimentConfig::default(),
        };
        if let Some(w) = &self.weight {
            cfg.weight = w.parse::<WeightSpec>()?;
        }
        if let Some(a) = self.phi_affine {
            cfg.symbol = SymbolSpec::PhiA { a };
        }
        if let Some(coeffs) = &self.phi_poly {
            cfg.symbol = SymbolSpec::Polynomial {
                coeffs: parse_complex_list(coeffs)?,
            };
        }
        if let Some(theta) = self.phi_rotation {
            cfg.symbol = SymbolSpec::Rotation { theta };
        }
        if let Some(space) = &self.space {
            cfg.space.space = parse_space(space)?;
        }
        if let Some(m) = self.grid {
            cfg.space.angular = Some(m);
        }
        if let Some(q) = self.radial {
            cfg.space.radial = q;
        }
        macro_rules! set {
            ($($field:ident),*) => {$(
                if let Some(v) = self.$field {
                    cfg.$field = v;
                }
            )*};
        }
        set!(degree, horizon, epsilon, growth);
        if self.cap.is_some() {
            cfg.cap = self.cap;
        }
        if let Some(mode) = self.mode {
            cfg.orbit_mode = mode;
        }
        if let Some(c) = &self.candidates {
            cfg.candidates = parse_candidates(c)?;
        }
        match (&self.out, &mut cfg.output) {
            (Some(path), Some(out)) => out.path = path.clone(),
            (Some(path), None) => {
                cfg.output = Some(OutputSpec {
                    path: path.clone(),
                    format: OutputFormat::default(),
                })
            }
            _ => {}
        }
        cfg.validate()?;
        Ok(cfg)
    }

    fn format(&self, cfg: &ExperimentConfig, default: OutputFormat) -> OutputFormat {
        self.format
            .or_else(|| self.config.as_ref().and(cfg.output.as_ref().map(|o| o.format)))
            .unwrap_or(default)
    }
}

fn out_path(cfg: &ExperimentConfig) -> Option<&Path> {
    cfg.output.as_ref().map(|o| o.path.as_path())
}

#[derive(Args, Debug, Clone)]
pub struct GridArgs {
    /// Weight parameters: "lo:hi:count" or "v1,v2,...".
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: Option<String>,
    /// Symbol parameters a.
    #[arg(long, allow_hyphen_values = true)]
    pub a: Option<String>,
    /// Space exponents p.
    #[arg(long)]
    pub p: Option<String>,
    /// Bergman weights beta (with --p).
    #[arg(long, allow_hyphen_values = true)]
    pub beta: Option<String>,
}

impl GridArgs {
    fn axes(&self, base: &ExperimentConfig) -> Result<SweepAxes> {
        let grid = |s: &Option<String>| s.as_deref().map(parse_grid).transpose();
        let (lambda, a, p, beta) = (grid(&self.lambda)?, grid(&self.a)?, grid(&self.p)?, grid(&self.beta)?);
        if lambda.is_some() || a.is_some() {
            if p.is_some() || beta.is_some() {
                bail!("sweep over either (--lambda, --a) or (--p, --beta), not both");
            }
            let lambdas = match lambda {
                Some(l) => l,
                None => vec![base
                    .weight
                    .lambda()
                    .context("--a alone needs a base weight of the form lambda*z")?
                    .re],
            };
            let a = match a {
                Some(a) => a,
                None => match base.symbol {
                    SymbolSpec::PhiA { a } => vec![a],
                    _ => bail!("--lambda alone needs a base symbol given by --phi-affine"),
                },
            };
            return Ok(SweepAxes::LambdaA { lambdas, a });
        }
        match p {
            Some(ps) => Ok(SweepAxes::PBeta { ps, betas: beta }),
            None if beta.is_some() => bail!("--beta needs --p"),
            None => bail!("sweep needs a grid: --lambda/--a or --p/--beta"),
        }
    }
}

#[derive(Args, Debug, Clone)]
pub struct EigenArgs {
    #[arg(long)]
    pub a: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub s: String,
    #[arg(long, default_value = "h2")]
    pub space: String,
    /// Truncation degrees, comma-separated.
    #[arg(long, default_value = "1024,2048,4096")]
    pub degrees: String,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
    pub format: OutputFormat,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum PresetName {
    #[value(name = "section5-weighted")]
    Section5Weighted,
    #[value(name = "section5-unweighted")]
    Section5Unweighted,
}

#[derive(Args, Debug, Clone)]
pub struct PresetArgs {
    #[arg(value_enum)]
    pub name: PresetName,
    #[arg(long)]
    pub a: Option<f64>,
    /// Weighted preset only.
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: Option<f64>,
    /// Weighted preset only: eigenfunction exponent.
    #[arg(long, allow_hyphen_values = true)]
    pub s: Option<f64>,
    #[arg(long)]
    pub space: Option<String>,
    #[arg(long)]
    pub degree: Option<usize>,
    #[arg(long)]
    pub horizon: Option<usize>,
    /// Directory for summary.json and the CSV tables; summary goes to
    /// stdout when absent.
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
}

pub fn run_command<I, T>(argv: I) -> Result<()>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(argv)?;
    run(cli.command)
}

pub fn run(command: Command) -> Result<()> {
    match command {
        Command::Weights(args) => {
            let cfg = args.to_config()?;
            let v = weight_norms(&prepare(&cfg)?)?;
            let text = match args.format(&cfg, OutputFormat::Csv) {
                OutputFormat::Csv => sequence_csv(&v)?,
                OutputFormat::Json => to_json(&v)?,
            };
            emit(out_path(&cfg), &text)
        }
        Command::Orbit(args) => {
            let mut cfg = args.to_config()?;
            if cfg.candidates.is_empty() {
                cfg.candidates = parse_candidates("k=0")?;
            }
            let orbits = candidate_orbits(&prepare(&cfg)?)?;
            let text = match args.format(&cfg, OutputFormat::Csv) {
                OutputFormat::Csv => {
                    let seqs: Vec<_> = orbits.iter().map(|o| (o.label.clone(), &o.sequence)).collect();
                    labeled_sequences_csv(&seqs)?
                }
                OutputFormat::Json => {
                    #[derive(Serialize)]
                    struct Entry<'a> {
                        label: &'a str,
                        sequence: &'a wco_core::NormSequence,
                    }
                    let entries: Vec<_> = orbits
                        .iter()
                        .map(|o| Entry {
                            label: &o.label,
                            sequence: &o.sequence,
                        })
                        .collect();
                    to_json(&entries)?
                }
            };
            emit(out_path(&cfg), &text)
        }
        Command::Classify { args, criterion } => {
            let cfg = args.to_config()?;
            let c = classify_prepared(&prepare(&cfg)?)?;
            let verdict = match criterion {
                Criterion::LiYorke => &c.li_yorke,
                Criterion::MeanLiYorke => &c.mean_li_yorke,
            };
            let orbits = c.orbits.iter().map(OrbitSummary::from).collect();
            let doc = VerdictDocument::new(criterion, verdict, orbits, &cfg);
            emit(out_path(&cfg), &to_json(&doc)?)
        }
        Command::Sweep { args, grid } => {
            let mut cfg = args.to_config()?;
            if cfg.candidates.is_empty() {
                cfg.candidates = parse_candidates("s=auto")?;
            }
            let axes = grid.axes(&cfg)?;
            let rows = sweep(&cfg, &axes)?;
            let text = match args.format(&cfg, OutputFormat::Csv) {
                OutputFormat::Csv => sweep_csv(&rows)?,
                OutputFormat::Json => to_json(&rows)?,
            };
            emit(out_path(&cfg), &text)
        }
        Command::Eigen(args) => run_eigen(&args),
        Command::Preset(args) => run_preset(&args),
    }
}

#[derive(Serialize)]
struct EigenRow {
    degree: usize,
    residual: f64,
}

#[derive(Serialize)]
struct EigenReport {
    schema_version: u32,
    a: f64,
    s: C64,
    space: SpaceSpec,
    residuals: Vec<EigenRow>,
    strictly_decreasing: bool,
}

fn run_eigen(args: &EigenArgs) -> Result<()> {
    let s = parse_complex(&args.s)?;
    let spec = SpaceSpec::new(parse_space(&args.space)?);
    let degrees: Vec<usize> = args
        .degrees
        .split(',')
        .map(|d| d.trim().parse().with_context(|| format!("degree {d:?}")))
        .collect::<Result<_>>()?;
    let residuals = degrees
        .iter()
        .map(|&degree| {
            Ok(EigenRow {
                degree,
                residual: eigen_residual(args.a, s, &spec, degree)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let strictly_decreasing = residuals.windows(2).all(|w| w[1].residual < w[0].residual);
    let text = match args.format {
        OutputFormat::Json => to_json(&EigenReport {
            schema_version: SCHEMA_VERSION,
            a: args.a,
            s,
            space: spec,
            residuals,
            strictly_decreasing,
        })?,
        OutputFormat::Csv => {
            let mut out = csv::Writer::from_writer(Vec::new());
            out.write_record(["degree", "residual"])?;
            for r in &residuals {
                out.write_record([r.degree.to_string(), r.residual.to_string()])?;
            }
            String::from_utf8(out.into_inner()?)?
        }
    };
    emit(args.out.as_deref(), &text)
}

fn run_preset(args: &PresetArgs) -> Result<()> {
    let space = args
        .space
        .as_deref()
        .map(parse_space)
        .transpose()?
        .map(SpaceSpec::new);
    let dir = args.out_dir.as_deref();
    match args.name {
        PresetName::Section5Weighted => {
            let d = WeightedParams::default();
            let params = WeightedParams {
                lambda: args.lambda.unwrap_or(d.lambda),
                a: args.a.unwrap_or(d.a),
                s: args.s.unwrap_or(d.s),
                space: space.unwrap_or(d.space),
                degree: args.degree.unwrap_or(DEFAULT_DEGREE),
                horizon: args.horizon.unwrap_or(d.horizon),
                ..d
            };
            let report = section5_weighted(&params)?;
            let summary = report.summary_json()?;
            match dir {
                Some(dir) => {
                    emit(Some(&dir.join("summary.json")), &summary)?;
                    emit(Some(&dir.join("weights.csv")), &sequence_csv(&report.weight_bounds)?)?;
                    emit(Some(&dir.join("orbit.csv")), &sequence_csv(&report.orbit)?)
                }
                None => emit(None, &summary),
            }
        }
        PresetName::Section5Unweighted => {
            if args.lambda.is_some() || args.s.is_some() {
                bail!("--lambda and --s apply to section5-weighted only");
            }
            let d = UnweightedParams::default();
            let params = UnweightedParams {
                a: args.a.unwrap_or(d.a),
                space: space.unwrap_or(d.space),
                growth_degree: args.degree.unwrap_or(d.growth_degree),
                growth_horizon: args.horizon.unwrap_or(d.growth_horizon),
                ..d
            };
            let report = section5_unweighted(&params)?;
            let summary = report.summary_json()?;
            match dir {
                Some(dir) => {
                    emit(Some(&dir.join("summary.json")), &summary)?;
                    emit(Some(&dir.join("decay.csv")), &report.decay_csv()?)?;
                    emit(Some(&dir.join("growth.csv")), &sequence_csv(&report.growth)?)?;
                    emit(Some(&dir.join("weights.csv")), &sequence_csv(&report.weight_norms)?)
                }
                None => {
                    emit(None, &summary)?;
                    emit(None, &report.decay_csv()?)
                }
            }
        }
    }
}
