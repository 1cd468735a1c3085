//! Experiment configuration, its JSON form and the flag-level parsers.

use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use wco_core::chaos::{DEFAULT_EPSILON, DEFAULT_GROWTH, DEFAULT_HORIZON};
use wco_core::{AnalyticPoly, BracketSide, SelfMap, Space, SpaceSpec, Weight, C64};

pub const SCHEMA_VERSION: u32 = 1;
pub const DEFAULT_DEGREE: usize = 1024;

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum ConfigError {
    #[error("unsupported schema_version {0} (expected {SCHEMA_VERSION})")]
    Schema(u32),
    #[error("cannot parse {what} from {input:?}: {reason}")]
    Parse {
        what: &'static str,
        input: String,
        reason: String,
    },
    #[error("{0}")]
    Range(String),
}

fn parse_err(what: &'static str, input: &str, reason: impl Into<String>) -> ConfigError {
    ConfigError::Parse {
        what,
        input: input.to_string(),
        reason: reason.into(),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum WeightSpec {
    /// `lambda z`.
    Linear { lambda: C64 },
    Coefficients { coeffs: Vec<C64> },
}

impl WeightSpec {
    pub fn build(&self) -> Weight {
        match self {
            WeightSpec::Linear { lambda } => Weight::linear(*lambda),
            WeightSpec::Coefficients { coeffs } => Weight::new(AnalyticPoly::new(coeffs.clone())),
        }
    }

    pub fn lambda(&self) -> Option<C64> {
        match self {
            WeightSpec::Linear { lambda } => Some(*lambda),
            WeightSpec::Coefficients { .. } => None,
        }
    }
}

impl FromStr for WeightSpec {
    type Err = ConfigError;

    /// `"0.9*z"`, `"z"`, `"0.5+0.1i*z"` for `lambda z`; otherwise a
    /// comma-separated coefficient list `c0,c1,...` (a single number is a
    /// constant weight).
    fn from_str(input: &str) -> Result<Self, ConfigError> {
        let text = input.trim();
        if text == "z" {
            return Ok(WeightSpec::Linear {
                lambda: C64::new(1.0, 0.0),
            });
        }
        if let Some(lambda) = text.strip_suffix("*z") {
            return Ok(WeightSpec::Linear {
                lambda: parse_complex(lambda).map_err(|e| parse_err("weight", input, e.to_string()))?,
            });
        }
        let coeffs = parse_complex_list(text).map_err(|e| parse_err("weight", input, e.to_string()))?;
        Ok(WeightSpec::Coefficients { coeffs })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SymbolSpec {
    /// `a z + 1 - a`.
    PhiA { a: f64 },
    Affine { alpha: C64, gamma: C64 },
    Rotation { theta: f64 },
    Polynomial { coeffs: Vec<C64> },
}

impl SymbolSpec {
    /// The symbol, not yet validated.
    pub fn build(&self) -> SelfMap {
        match self {
            SymbolSpec::PhiA { a } => SelfMap::phi_a(*a),
            SymbolSpec::Affine { alpha, gamma } => SelfMap::affine(*alpha, *gamma),
            SymbolSpec::Rotation { theta } => SelfMap::rotation(*theta),
            SymbolSpec::Polynomial { coeffs } => SelfMap::polynomial(AnalyticPoly::new(coeffs.clone())),
        }
    }
}

/// A candidate vector whose orbit is tracked.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum CandidateSpec {
    /// `(1 - z)^s z^k`.
    Eigen {
        s: C64,
        #[serde(default)]
        k: usize,
    },
    /// `z^k`.
    Monomial { k: usize },
    /// `(1 - z)^s z^k` with `s` chosen from the weight and symbol so that
    /// the orbit grows when that is possible (see [`auto_exponent`]).
    AutoEigen {
        #[serde(default)]
        k: usize,
    },
}

impl CandidateSpec {
    pub fn label(&self) -> String {
        match self {
            CandidateSpec::Eigen { s, k: 0 } => format!("s={}", fmt_complex(*s)),
            CandidateSpec::Eigen { s, k } => format!("s={}:k={k}", fmt_complex(*s)),
            CandidateSpec::Monomial { k } => format!("k={k}"),
            CandidateSpec::AutoEigen { k: 0 } => "s=auto".to_string(),
            CandidateSpec::AutoEigen { k } => format!("s=auto:k={k}"),
        }
    }
}

impl FromStr for CandidateSpec {
    type Err = ConfigError;

    /// `s=<complex>`, `s=<complex>:k=<int>`, `k=<int>`, `s=auto[:k=<int>]`.
    fn from_str(input: &str) -> Result<Self, ConfigError> {
        let mut s: Option<Option<C64>> = None;
        let mut k = 0usize;
        for part in input.trim().split(':') {
            let (key, value) = part
                .split_once('=')
                .ok_or_else(|| parse_err("candidate", input, "expected key=value"))?;
            match key.trim() {
                "s" if value.trim() == "auto" => s = Some(None),
                "s" => {
                    s = Some(Some(
                        parse_complex(value).map_err(|e| parse_err("candidate", input, e.to_string()))?,
                    ))
                }
                "k" => {
                    k = value
                        .trim()
                        .parse()
                        .map_err(|_| parse_err("candidate", input, "k must be a nonnegative integer"))?
                }
                other => return Err(parse_err("candidate", input, format!("unknown key {other:?}"))),
            }
        }
        Ok(match s {
            Some(Some(s)) => CandidateSpec::Eigen { s, k },
            Some(None) => CandidateSpec::AutoEigen { k },
            None => CandidateSpec::Monomial { k },
        })
    }
}

/// Comma-separated candidates.
pub fn parse_candidates(input: &str) -> Result<Vec<CandidateSpec>, ConfigError> {
    input
        .split(',')
        .filter(|p| !p.trim().is_empty())
        .map(CandidateSpec::from_str)
        .collect()
}

/// How orbits of eigenfunction candidates are computed.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum OrbitMode {
    /// Eigen-relation for `a z + 1 - a` symbols, truncated series otherwise.
    #[default]
    Auto,
    /// Always use the eigen-relation (fails for other symbols).
    Eigen,
    /// Iterate the degree-`D` polynomial cut of the candidate directly.
    Truncated,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    #[default]
    Json,
    Csv,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    pub path: PathBuf,
    #[serde(default)]
    pub format: OutputFormat,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub schema_version: u32,
    pub weight: WeightSpec,
    pub symbol: SymbolSpec,
    pub space: SpaceSpec,
    pub degree: usize,
    pub horizon: usize,
    pub epsilon: f64,
    pub growth: f64,
    #[serde(default)]
    pub candidates: Vec<CandidateSpec>,
    #[serde(default)]
    pub cap: Option<usize>,
    #[serde(default)]
    pub orbit_mode: OrbitMode,
    #[serde(default)]
    pub output: Option<OutputSpec>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            weight: WeightSpec::Coefficients {
                coeffs: vec![C64::new(1.0, 0.0)],
            },
            symbol: SymbolSpec::PhiA { a: 0.5 },
            space: SpaceSpec::h2(),
            degree: DEFAULT_DEGREE,
            horizon: DEFAULT_HORIZON,
            epsilon: DEFAULT_EPSILON,
            growth: DEFAULT_GROWTH,
            candidates: Vec::new(),
            cap: None,
            orbit_mode: OrbitMode::Auto,
            output: None,
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(ConfigError::Schema(self.schema_version));
        }
        self.space
            .validate()
            .map_err(|e| ConfigError::Range(format!("space: {e}")))?;
        if self.horizon == 0 {
            return Err(ConfigError::Range("horizon must be at least 1".into()));
        }
        if !(self.epsilon.is_finite() && self.epsilon > 0.0) {
            return Err(ConfigError::Range("epsilon must be positive".into()));
        }
        if !(self.growth.is_finite() && self.growth > 1.0) {
            return Err(ConfigError::Range("growth threshold G must exceed 1".into()));
        }
        match &self.weight {
            WeightSpec::Coefficients { coeffs } if coeffs.is_empty() => {
                return Err(ConfigError::Range("weight needs at least one coefficient".into()))
            }
            _ => {}
        }
        if let SymbolSpec::Polynomial { coeffs } = &self.symbol {
            if coeffs.is_empty() {
                return Err(ConfigError::Range("symbol needs at least one coefficient".into()));
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        let cfg: Self = serde_json::from_str(text).map_err(|e| parse_err("config", "<json>", e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }
}

/// `"0.5"`, `"-1e-3"`, `"0.3+0.4i"`, `"2i"`.
pub fn parse_complex(input: &str) -> Result<C64, ConfigError> {
    let text = input.trim();
    if let Ok(x) = text.parse::<f64>() {
        return Ok(C64::new(x, 0.0));
    }
    C64::from_str(text).map_err(|e| parse_err("complex number", input, e.to_string()))
}

pub fn parse_complex_list(input: &str) -> Result<Vec<C64>, ConfigError> {
    input.split(',').map(parse_complex).collect()
}

pub fn fmt_complex(c: C64) -> String {
    if c.im == 0.0 {
        format!("{}", c.re)
    } else {
        format!("{c}")
    }
}

/// `h2`, `h1`, `h<p>` or `h:<p>` for `H^p`; `a2` or `a2:<beta>` for
/// `A^2_beta`; `bergman:<p>:<beta>` or `a<p>:<beta>`; `hinf` (lower sup
/// bracket) and `hinf-upper`.
pub fn parse_space(input: &str) -> Result<Space, ConfigError> {
    let text = input.trim().to_ascii_lowercase();
    let num = |s: &str| -> Result<f64, ConfigError> {
        s.trim()
            .parse::<f64>()
            .map_err(|_| parse_err("space", input, format!("{s:?} is not a number")))
    };
    let space = match text.as_str() {
        "hinf" | "h-inf" | "sup" => Space::Sup {
            side: BracketSide::Lower,
        },
        "hinf-upper" | "sup-upper" => Space::Sup {
            side: BracketSide::Upper,
        },
        _ => {
            if let Some(rest) = text.strip_prefix("bergman:") {
                let (p, beta) = rest
                    .split_once(':')
                    .ok_or_else(|| parse_err("space", input, "expected bergman:<p>:<beta>"))?;
                Space::Bergman {
                    p: num(p)?,
                    beta: num(beta)?,
                }
            } else if let Some(rest) = text.strip_prefix('a') {
                let (p, beta) = rest.split_once(':').unwrap_or((rest, "0"));
                Space::Bergman {
                    p: num(p)?,
                    beta: num(beta)?,
                }
            } else if let Some(rest) = text.strip_prefix('h') {
                Space::Hardy {
                    p: num(rest.trim_start_matches(':'))?,
                }
            } else {
                return Err(parse_err("space", input, "unknown space"));
            }
        }
    };
    space
        .validate()
        .map_err(|e| parse_err("space", input, e.to_string()))?;
    Ok(space)
}

/// A one-dimensional parameter grid: `lo:hi:count` (inclusive linspace),
/// a comma list, or the empty string for an empty grid.
pub fn parse_grid(input: &str) -> Result<Vec<f64>, ConfigError> {
    let text = input.trim();
    if text.is_empty() {
        return Ok(Vec::new());
    }
    let parts: Vec<&str> = text.split(':').collect();
    if parts.len() == 3 {
        let lo: f64 = parts[0].trim().parse().map_err(|_| parse_err("grid", input, "bad lower end"))?;
        let hi: f64 = parts[1].trim().parse().map_err(|_| parse_err("grid", input, "bad upper end"))?;
        let count: usize = parts[2].trim().parse().map_err(|_| parse_err("grid", input, "bad count"))?;
        return Ok(match count {
            0 => Vec::new(),
            1 => vec![lo],
            _ => (0..count)
                .map(|i| lo + (hi - lo) * i as f64 / (count - 1) as f64)
                .collect(),
        });
    }
    text.split(',')
        .map(|v| v.trim().parse().map_err(|_| parse_err("grid", input, format!("{v:?} is not a number"))))
        .collect()
}

/// Exponent `s` for which `(1 - z)^s` lies in the space and
/// `|lambda| a^{Re s} > 1` when such `s` exists: the midpoint of
/// `(membership bound, ln|lambda| / ln(1/a))`. Falls back to the midpoint of
/// `(membership bound, 0)` when the interval is empty.
pub fn auto_exponent(lambda: f64, a: f64, space: &Space) -> f64 {
    let bound = space.binomial_membership_bound();
    let upper = lambda.abs().ln() / (1.0 / a).ln();
    if upper > bound {
        (bound + upper) / 2.0
    } else {
        bound / 2.0
    }
}
