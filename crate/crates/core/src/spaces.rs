//! Norms on the Hardy spaces `H^p`, the weighted Bergman spaces `A^p_beta`
//! and `H^infinity`.
//!
//! Hilbert-space norms (`H^2`, `A^2_beta`) are computed from coefficients and
//! are exact for polynomials. The other `L^p` norms use a uniform trapezoid
//! rule in the angle and, for Bergman spaces, a Gauss-Jacobi rule in
//! `u = r^2` that absorbs the `(1 - u)^beta` endpoint factor. Hardy norms are
//! evaluated on the unit circle itself: a polynomial is continuous on the
//! closed disk and its integral means increase with the radius.
//!
//! The measures are normalized so that `||1|| = 1` in every space; with this
//! normalization `||f||_{A^2_beta} <= ||f||_{H^2}`.

use serde::{Deserialize, Serialize};

use crate::error::{Result, WcoError};
use crate::operator::Provenance;
use crate::quadrature::{circle_mean_abs_pow, circle_values, GaussJacobi01};
use crate::series::{AnalyticPoly, C64};

/// Relative change allowed between successive grid doublings.
pub const GRID_DOUBLING_TOL: f64 = 1e-9;
const MAX_GRID: usize = 1 << 22;
pub const DEFAULT_RADIAL_ORDER: usize = 128;
/// Boundary grid used for sup brackets when no finer grid is required.
pub const DEFAULT_SUP_GRID: usize = 1024;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BracketSide {
    Lower,
    Upper,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Space {
    Hardy { p: f64 },
    Bergman { p: f64, beta: f64 },
    /// `H^infinity`, represented by one side of the sup bracket.
    Sup { side: BracketSide },
}

impl Space {
    pub fn validate(&self) -> Result<()> {
        match *self {
            Space::Hardy { p } => {
                if !(p.is_finite() && p >= 1.0) {
                    return Err(WcoError::InvalidExponent {
                        p,
                        expected: "1 <= p < infinity",
                    });
                }
            }
            Space::Bergman { p, beta } => {
                if !(p.is_finite() && p > 1.0) {
                    return Err(WcoError::InvalidExponent {
                        p,
                        expected: "1 < p < infinity",
                    });
                }
                if !(beta.is_finite() && beta > -1.0) {
                    return Err(WcoError::InvalidBeta(beta));
                }
            }
            Space::Sup { .. } => {}
        }
        Ok(())
    }

    /// `(1 - z)^s` belongs to the space iff `Re(s)` exceeds this bound
    /// (`Re(s) >= 0` for `H^infinity`).
    pub fn binomial_membership_bound(&self) -> f64 {
        match *self {
            Space::Hardy { p } => -1.0 / p,
            Space::Bergman { p, beta } => -(beta + 2.0) / p,
            Space::Sup { .. } => 0.0,
        }
    }

    pub fn contains_binomial(&self, s: C64) -> bool {
        match self {
            Space::Sup { .. } => s.re >= 0.0,
            _ => s.re > self.binomial_membership_bound(),
        }
    }

    pub fn is_coefficient_exact(&self) -> bool {
        matches!(self, Space::Hardy { p } | Space::Bergman { p, .. } if *p == 2.0)
    }
}

impl std::fmt::Display for Space {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Space::Hardy { p } => write!(f, "H^{p}"),
            Space::Bergman { p, beta } => write!(f, "A^{p}_{beta}"),
            Space::Sup { side: BracketSide::Lower } => write!(f, "H^inf (lower bracket)"),
            Space::Sup { side: BracketSide::Upper } => write!(f, "H^inf (upper bracket)"),
        }
    }
}

/// A space together with its quadrature parameters.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpaceSpec {
    pub space: Space,
    /// Angular grid size; `None` picks the smallest admissible power of two.
    #[serde(default)]
    pub angular: Option<usize>,
    /// Gauss-Jacobi order for Bergman norms.
    #[serde(default = "default_radial")]
    pub radial: usize,
}

fn default_radial() -> usize {
    DEFAULT_RADIAL_ORDER
}

impl SpaceSpec {
    pub fn new(space: Space) -> Self {
        Self {
            space,
            angular: None,
            radial: DEFAULT_RADIAL_ORDER,
        }
    }

    pub fn hardy(p: f64) -> Self {
        Self::new(Space::Hardy { p })
    }

    pub fn h2() -> Self {
        Self::hardy(2.0)
    }

    pub fn bergman(p: f64, beta: f64) -> Self {
        Self::new(Space::Bergman { p, beta })
    }

    pub fn sup(side: BracketSide) -> Self {
        Self::new(Space::Sup { side })
    }

    pub fn with_angular(mut self, m: usize) -> Self {
        self.angular = Some(m);
        self
    }

    pub fn with_radial(mut self, q: usize) -> Self {
        self.radial = q;
        self
    }

    pub fn validate(&self) -> Result<()> {
        self.space.validate()?;
        if matches!(self.space, Space::Bergman { p, .. } if p != 2.0) && self.radial < 2 {
            return Err(WcoError::RadialOrder(self.radial));
        }
        Ok(())
    }

    /// What kind of number [`Self::norm`] returns.
    pub fn provenance(&self) -> Provenance {
        match self.space {
            s if s.is_coefficient_exact() => Provenance::ExactCoefficient,
            Space::Sup { side: BracketSide::Lower } => Provenance::BracketLower,
            Space::Sup { side: BracketSide::Upper } => Provenance::BracketUpper,
            _ => Provenance::Quadrature,
        }
    }

    fn grid_for(&self, f: &AnalyticPoly, min_points: usize) -> usize {
        let required = min_points.max(4 * f.trimmed_degree() + 1);
        match self.angular {
            Some(m) if m >= required => m,
            _ => required.next_power_of_two(),
        }
    }

    pub fn norm(&self, f: &AnalyticPoly) -> Result<f64> {
        self.validate()?;
        match self.space {
            Space::Hardy { p } if p == 2.0 => Ok(coeff_norm_h2(f)),
            Space::Bergman { p, beta } if p == 2.0 => coeff_norm_bergman2(f, beta),
            Space::Hardy { p } => {
                let m = self.grid_for(f, (p.ceil() as usize) * f.trimmed_degree() + 1);
                if p.fract() == 0.0 && (p as usize) % 2 == 0 {
                    // |f|^p is a trigonometric polynomial of degree p * deg f
                    quad_norm_hp(f, p, m)
                } else {
                    quad_norm_hp_converged(f, p, m).map(|(v, _)| v)
                }
            }
            Space::Bergman { p, beta } => {
                let m = self.grid_for(f, 0);
                quad_norm_bergman_p(f, p, beta, self.radial, m)
            }
            Space::Sup { side } => {
                let m = self.grid_for(f, DEFAULT_SUP_GRID);
                let b = sup_norm_bracket(f, m);
                Ok(match side {
                    BracketSide::Lower => b.lower,
                    BracketSide::Upper => b.upper,
                })
            }
        }
    }

    /// A value guaranteed to be `>= ||f||` in this space, with its provenance.
    ///
    /// Hilbert norms are returned as is. For `p < 2` the `p = 2` norm of the
    /// same (probability) measure dominates; otherwise the coefficient sum,
    /// which bounds `||f||_infinity` and hence every normalized `L^p` norm.
    pub fn upper_bound(&self, f: &AnalyticPoly) -> Result<(f64, Provenance)> {
        self.validate()?;
        Ok(match self.space {
            s if s.is_coefficient_exact() => (self.norm(f)?, Provenance::ExactCoefficient),
            Space::Hardy { p } if p < 2.0 => (coeff_norm_h2(f), Provenance::BracketUpper),
            Space::Bergman { p, beta } if p < 2.0 => {
                (coeff_norm_bergman2(f, beta)?, Provenance::BracketUpper)
            }
            _ => (coeff_abs_sum(f), Provenance::BracketUpper),
        })
    }
}

impl std::fmt::Display for SpaceSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.space.fmt(f)
    }
}

/// `sqrt(sum |c_k|^2)`, the `H^2` norm.
pub fn coeff_norm_h2(f: &AnalyticPoly) -> f64 {
    f.coeffs().iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
}

/// Weights `||z^k||^2` in `A^2_beta`, `k = 0..len`, from
/// `g_0 = 1`, `g_{k+1} = g_k (k + 1) / (k + 2 + beta)`.
pub fn bergman_weights(beta: f64, len: usize) -> impl Iterator<Item = f64> {
    (0..len).scan(1.0, move |g, k| {
        let current = *g;
        *g *= (k as f64 + 1.0) / (k as f64 + 2.0 + beta);
        Some(current)
    })
}

/// `sqrt(sum g_k(beta) |c_k|^2)`, the `A^2_beta` norm.
pub fn coeff_norm_bergman2(f: &AnalyticPoly, beta: f64) -> Result<f64> {
    if !(beta.is_finite() && beta > -1.0) {
        return Err(WcoError::InvalidBeta(beta));
    }
    Ok(f.coeffs()
        .iter()
        .zip(bergman_weights(beta, f.coeffs().len()))
        .map(|(c, g)| g * c.norm_sqr())
        .sum::<f64>()
        .sqrt())
}

/// `sum |c_k|`, an upper bound for `||f||_infinity`.
pub fn coeff_abs_sum(f: &AnalyticPoly) -> f64 {
    f.coeffs().iter().map(|c| c.norm()).sum()
}

fn check_hardy_exponent(p: f64) -> Result<()> {
    Space::Hardy { p }.validate()
}

/// `((1/m) sum_k |f(e^{2 pi i k/m})|^p)^{1/p}` on an `m`-point grid,
/// `m >= 4 deg f + 1`.
pub fn quad_norm_hp(f: &AnalyticPoly, p: f64, m: usize) -> Result<f64> {
    check_hardy_exponent(p)?;
    let degree = f.trimmed_degree();
    let required = 4 * degree + 1;
    if m < required {
        return Err(WcoError::GridTooCoarse {
            m,
            degree,
            required,
        });
    }
    Ok(circle_mean_abs_pow(f, p, m, 1.0).powf(1.0 / p))
}

/// [`quad_norm_hp`] starting at `m` and doubling the grid until successive
/// values agree to [`GRID_DOUBLING_TOL`]. Returns the value and final grid.
pub fn quad_norm_hp_converged(f: &AnalyticPoly, p: f64, m: usize) -> Result<(f64, usize)> {
    let mut m = m;
    let mut prev = quad_norm_hp(f, p, m)?;
    while m < MAX_GRID {
        m *= 2;
        let next = quad_norm_hp(f, p, m)?;
        if (next - prev).abs() <= GRID_DOUBLING_TOL * next.abs() {
            return Ok((next, m));
        }
        prev = next;
    }
    Err(WcoError::NotConverged { p, m })
}

/// `A^p_beta` norm: `(beta+1) int_0^1 (1-u)^beta Phi(sqrt u) du` with `Phi(r)`
/// the angular mean of `|f|^p` at radius `r`, by a `q`-node Gauss-Jacobi rule
/// and an `m`-point trapezoid rule.
pub fn quad_norm_bergman_p(f: &AnalyticPoly, p: f64, beta: f64, q: usize, m: usize) -> Result<f64> {
    Space::Bergman { p, beta }.validate()?;
    let rule = GaussJacobi01::new(q, beta)?;
    Ok(bergman_with_rule(f, p, &rule, m).powf(1.0 / p))
}

/// `||f||^p` in `A^p_beta` with a prebuilt radial rule.
pub(crate) fn bergman_with_rule(f: &AnalyticPoly, p: f64, rule: &GaussJacobi01, m: usize) -> f64 {
    rule.integrate(|u| circle_mean_abs_pow(f, p, m, u.sqrt()))
}

/// Two-sided estimate of `||f||_infinity`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SupBracket {
    /// Maximum of `|f|` over the boundary grid.
    pub lower: f64,
    /// `sum |c_k|`.
    pub upper: f64,
}

/// `lower <= ||f||_infinity <= upper`; grids below 64 points are raised to 64.
pub fn sup_norm_bracket(f: &AnalyticPoly, m: usize) -> SupBracket {
    let m = m.max(64);
    let lower = circle_values(f, m, 1.0)
        .iter()
        .map(|v| v.norm())
        .fold(0.0, f64::max);
    let upper = coeff_abs_sum(f);
    // the grid max is a sum of the same terms, but rounding could push it past
    SupBracket {
        lower: lower.min(upper),
        upper,
    }
}
