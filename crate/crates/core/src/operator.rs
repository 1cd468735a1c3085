//! The weighted composition operator `C_{w,phi} f = w (f o phi)` and the
//! norm sequences of its orbits.
//!
//! Powers are never applied step by step: `(C_{w,phi})^n f` is computed as
//! `w^(n) (f o phi^n)` from a shared [`WeightIterateCache`], one composition
//! and one product per `n`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Result, WcoError};
use crate::series::{binomial_series, AnalyticPoly, C64};
use crate::spaces::SpaceSpec;
use crate::symbols::{SelfMap, Weight};
use crate::weights::WeightIterateCache;

/// How a norm value relates to the true norm of the vector it describes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    /// Exact (coefficient formula on an exact polynomial).
    ExactCoefficient,
    /// Quadrature approximation, neither bound guaranteed.
    Quadrature,
    /// Guaranteed lower bound.
    BracketLower,
    /// Guaranteed upper bound.
    BracketUpper,
}

impl Provenance {
    /// Usable for decay claims (the value is `>=` the true norm).
    pub fn bounds_above(self) -> bool {
        matches!(self, Provenance::ExactCoefficient | Provenance::BracketUpper)
    }

    /// Usable for growth claims. Upper bounds are excluded: large upper
    /// bounds say nothing about growth.
    pub fn supports_growth(self) -> bool {
        !matches!(self, Provenance::BracketUpper)
    }

    /// Provenance after the underlying vector was replaced by an exact
    /// coefficient section (a truncation of the true vector).
    fn of_section(self) -> Self {
        match self {
            Provenance::ExactCoefficient => Provenance::BracketLower,
            Provenance::BracketUpper => Provenance::Quadrature,
            other => other,
        }
    }
}

/// Finite sequence `v_1..v_T` of norms.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormSequence {
    values: Vec<f64>,
    space: SpaceSpec,
    provenance: Provenance,
}

impl NormSequence {
    pub fn new(values: Vec<f64>, space: SpaceSpec, provenance: Provenance) -> Result<Self> {
        if values.is_empty() {
            return Err(WcoError::EmptySequence);
        }
        assert!(
            values.iter().all(|v| *v >= 0.0),
            "norm values must be nonnegative"
        );
        Ok(Self {
            values,
            space,
            provenance,
        })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// `v_n`, 1-based.
    pub fn get(&self, n: usize) -> Option<f64> {
        n.checked_sub(1).and_then(|i| self.values.get(i).copied())
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn space(&self) -> &SpaceSpec {
        &self.space
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct WeightedCompOp {
    weight: Weight,
    symbol: SelfMap,
}

impl WeightedCompOp {
    pub fn new(weight: Weight, symbol: SelfMap) -> Result<Self> {
        if !symbol.is_validated() {
            return Err(WcoError::UnvalidatedSymbol);
        }
        Ok(Self { weight, symbol })
    }

    pub fn weight(&self) -> &Weight {
        &self.weight
    }

    pub fn symbol(&self) -> &SelfMap {
        &self.symbol
    }

    pub fn cache(&self, horizon: usize, cap: Option<usize>) -> Result<WeightIterateCache> {
        WeightIterateCache::build(&self.weight, &self.symbol, horizon, cap)
    }

    /// One application, `w (f o phi)`, exact for affine symbols.
    pub fn apply(&self, f: &AnalyticPoly) -> AnalyticPoly {
        let (composed, _) = self.symbol.compose_into(f, usize::MAX);
        self.weight.poly().mul_poly(&composed)
    }

    /// `(C_{w,phi})^n f = w^(n) (f o phi^n)`; `n = 0` returns `f`.
    pub fn apply_n(&self, f: &AnalyticPoly, n: usize, cache: &WeightIterateCache) -> Result<AnalyticPoly> {
        debug_assert!(cache.weight() == &self.weight && cache.symbol().form() == self.symbol.form());
        if n == 0 {
            return Ok(f.clone());
        }
        let w_n = cache.weight_iterate(n)?;
        let phi_n = cache.symbol_iterate(n)?;
        let limit = cache.cap().unwrap_or(usize::MAX);
        let (composed, _) = phi_n.compose_into(f, limit);
        Ok(w_n.mul_capped(&composed, limit))
    }
}

fn check_horizon(cache: &WeightIterateCache, horizon: usize) -> Result<()> {
    if horizon == 0 {
        return Err(WcoError::EmptyHorizon);
    }
    if horizon > cache.horizon() {
        return Err(WcoError::BeyondHorizon {
            n: horizon,
            horizon: cache.horizon(),
        });
    }
    Ok(())
}

/// `v_n = ||(C_{w,phi})^n f||`, `n = 1..horizon`.
pub fn orbit_norm_sequence(
    op: &WeightedCompOp,
    cache: &WeightIterateCache,
    f: &AnalyticPoly,
    spec: &SpaceSpec,
    horizon: usize,
) -> Result<NormSequence> {
    spec.validate()?;
    check_horizon(cache, horizon)?;
    let values = (1..=horizon)
        .into_par_iter()
        .map(|n| spec.norm(&op.apply_n(f, n, cache)?))
        .collect::<Result<Vec<_>>>()?;
    let provenance = if cache.is_truncated() || cache.symbol().is_approximate() {
        spec.provenance().of_section()
    } else {
        spec.provenance()
    };
    NormSequence::new(values, *spec, provenance)
}

/// `v_n = ||w^(n)|| = ||(C_{w,phi})^n 1||`.
pub fn weight_norm_sequence(cache: &WeightIterateCache, spec: &SpaceSpec) -> Result<NormSequence> {
    spec.validate()?;
    let values = cache
        .iterates()
        .par_iter()
        .map(|w| spec.norm(w))
        .collect::<Result<Vec<_>>>()?;
    let provenance = if cache.is_truncated() {
        spec.provenance().of_section()
    } else {
        spec.provenance()
    };
    NormSequence::new(values, *spec, provenance)
}

/// Guaranteed upper bounds for `||w^(n)||` in `spec` (see
/// [`SpaceSpec::upper_bound`]), suitable for decay tests.
pub fn weight_upper_sequence(cache: &WeightIterateCache, spec: &SpaceSpec) -> Result<NormSequence> {
    spec.validate()?;
    let bounds = cache
        .iterates()
        .par_iter()
        .map(|w| spec.upper_bound(w))
        .collect::<Result<Vec<_>>>()?;
    let mut provenance = bounds[0].1;
    if cache.is_truncated() {
        // a truncated iterate says nothing about the discarded tail
        provenance = Provenance::Quadrature;
    }
    NormSequence::new(bounds.into_iter().map(|b| b.0).collect(), *spec, provenance)
}

/// The vector `(1 - z)^s z^k`, represented for computation by its first
/// `degree + 1` Maclaurin coefficients.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EigenCandidate {
    pub s: C64,
    #[serde(default)]
    pub k: usize,
    pub degree: usize,
}

impl EigenCandidate {
    pub fn new(s: C64, k: usize, degree: usize) -> Self {
        Self { s, k, degree }
    }

    /// The polynomial `(1 - z)^s_D z^k` with the series cut at degree `D`.
    pub fn truncated(&self) -> AnalyticPoly {
        let g = binomial_series(self.s, self.degree);
        if self.k == 0 {
            g
        } else {
            g.mul_poly(&AnalyticPoly::monomial(self.k, C64::new(1.0, 0.0)))
        }
    }
}

/// Orbit norms of the genuine function `g = (1 - z)^s z^k` under
/// `C_{w, phi_a}`, using `C_{phi_a} (1 - z)^s = a^s (1 - z)^s`:
///
/// `(C_{w,phi_a})^n g = a^{ns} w^(n) (phi_a^n)^k (1 - z)^s`.
///
/// The coefficients of degree `<= D` of the product on the right depend only
/// on the first `D + 1` coefficients of `(1 - z)^s`, so they are computed
/// exactly. For `H^2` and `A^2_beta` the returned values are therefore
/// guaranteed lower bounds of `||(C_{w,phi_a})^n g||`
/// ([`Provenance::BracketLower`]); in other spaces they are approximations.
///
/// Truncating `g` before iterating would not do: `phi_a^n` pushes the
/// argument towards `z = 1`, where the cut series stays bounded, so the
/// truncated orbit stops tracking `g` after about `log D / log(1/a)` steps.
pub fn eigen_orbit_norm_sequence(
    cache: &WeightIterateCache,
    candidate: &EigenCandidate,
    spec: &SpaceSpec,
    horizon: usize,
) -> Result<NormSequence> {
    spec.validate()?;
    check_horizon(cache, horizon)?;
    let a = cache
        .symbol()
        .phi_a_parameter()
        .ok_or(WcoError::NotEigenSymbol)?;
    if !spec.space.contains_binomial(candidate.s) {
        return Err(WcoError::NotInSpace {
            s: candidate.s.to_string(),
            space: spec.space.to_string(),
            bound: spec.space.binomial_membership_bound(),
        });
    }
    let d = candidate.degree;
    let g = binomial_series(candidate.s, d);
    let log_a = a.ln();
    let values = (1..=horizon)
        .into_par_iter()
        .map(|n| {
            let w_n = cache.weight_iterate(n)?;
            let mut factor = w_n.clone();
            if candidate.k > 0 {
                let phi_n = cache.symbol_iterate(n)?.as_poly();
                factor = factor.mul_capped(&phi_n.pow_capped(candidate.k, d), d);
            }
            let section = factor.mul_capped(&g, d);
            // |a^{ns}| = exp(n Re(s) ln a)
            let modulus = (n as f64 * candidate.s.re * log_a).exp();
            Ok(modulus * spec.norm(&section)?)
        })
        .collect::<Result<Vec<_>>>()?;
    let provenance = match spec.provenance() {
        Provenance::ExactCoefficient => Provenance::BracketLower,
        _ => Provenance::Quadrature,
    };
    NormSequence::new(values, *spec, provenance)
}
