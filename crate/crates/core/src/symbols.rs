//! Self-maps of the unit disk and bounded weights.
//!
//! Affine symbols `alpha z + gamma` are stored exactly and iterate in closed
//! form. General polynomial symbols iterate by repeated composition under a
//! caller-supplied degree cap and are flagged approximate once the cap
//! discards anything.
//!
//! Self-map validation is a finite boundary-grid test, not a proof: the map
//! passes if `|phi| <= 1 + 1e-12` on the grid and `|phi(0)| < 1`. The slack
//! lets boundary-touching maps such as `a z + 1 - a` (which sends 1 to 1)
//! through.

use serde::{Deserialize, Serialize};

use crate::error::{Result, WcoError};
use crate::quadrature::circle_values;
use crate::series::{AnalyticPoly, C64, ONE, ZERO};
use crate::spaces::{sup_norm_bracket, SupBracket, DEFAULT_SUP_GRID};

pub const BOUNDARY_SLACK: f64 = 1e-12;
pub const MIN_VALIDATION_GRID: usize = 64;
pub const DEFAULT_VALIDATION_GRID: usize = 4096;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SymbolForm {
    Affine { alpha: C64, gamma: C64 },
    Polynomial { poly: AnalyticPoly },
}

/// An analytic self-map `phi` of the disk.
#[derive(Clone, Debug, PartialEq)]
pub struct SelfMap {
    form: SymbolForm,
    validated: bool,
    approximate: bool,
}

impl SelfMap {
    pub fn affine(alpha: C64, gamma: C64) -> Self {
        Self::from_form(SymbolForm::Affine { alpha, gamma })
    }

    /// `a z + 1 - a`.
    pub fn phi_a(a: f64) -> Self {
        Self::affine(C64::new(a, 0.0), C64::new(1.0 - a, 0.0))
    }

    /// `e^{i theta} z`.
    pub fn rotation(theta: f64) -> Self {
        Self::affine(C64::from_polar(1.0, theta), ZERO)
    }

    pub fn identity() -> Self {
        Self::affine(ONE, ZERO)
    }

    pub fn polynomial(poly: AnalyticPoly) -> Self {
        Self::from_form(SymbolForm::Polynomial { poly })
    }

    pub fn from_form(form: SymbolForm) -> Self {
        Self {
            form,
            validated: false,
            approximate: false,
        }
    }

    pub fn form(&self) -> &SymbolForm {
        &self.form
    }

    pub fn is_validated(&self) -> bool {
        self.validated
    }

    /// True when a degree cap truncated this symbol's coefficients.
    pub fn is_approximate(&self) -> bool {
        self.approximate
    }

    pub fn is_affine(&self) -> bool {
        matches!(self.form, SymbolForm::Affine { .. })
    }

    /// `(alpha, gamma)` for affine symbols.
    pub fn affine_coeffs(&self) -> Option<(C64, C64)> {
        match self.form {
            SymbolForm::Affine { alpha, gamma } => Some((alpha, gamma)),
            SymbolForm::Polynomial { .. } => None,
        }
    }

    /// `a` when the symbol is exactly `a z + 1 - a` with real `0 < a < 1`.
    pub fn phi_a_parameter(&self) -> Option<f64> {
        let (alpha, gamma) = self.affine_coeffs()?;
        let a = alpha.re;
        (alpha.im == 0.0 && gamma.im == 0.0 && a > 0.0 && a < 1.0 && gamma.re == 1.0 - a)
            .then_some(a)
    }

    pub fn as_poly(&self) -> AnalyticPoly {
        match &self.form {
            SymbolForm::Affine { alpha, gamma } => AnalyticPoly::linear(*gamma, *alpha),
            SymbolForm::Polynomial { poly } => poly.clone(),
        }
    }

    pub fn eval(&self, z: C64) -> C64 {
        match &self.form {
            SymbolForm::Affine { alpha, gamma } => alpha * z + gamma,
            SymbolForm::Polynomial { poly } => poly.eval(z),
        }
    }

    /// Grid test of the self-map property without marking the symbol.
    pub fn check(&self, m: usize) -> bool {
        let m = m.max(MIN_VALIDATION_GRID);
        if self.eval(ZERO).norm() >= 1.0 {
            return false;
        }
        let max_boundary = match &self.form {
            SymbolForm::Affine { alpha, gamma } => (0..m)
                .map(|k| {
                    let z = C64::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / m as f64);
                    (alpha * z + gamma).norm()
                })
                .fold(0.0, f64::max),
            SymbolForm::Polynomial { poly } => circle_values(poly, m, 1.0)
                .iter()
                .map(|v| v.norm())
                .fold(0.0, f64::max),
        };
        max_boundary <= 1.0 + BOUNDARY_SLACK
    }

    /// Grid test on `m` boundary points (at least 64); marks the symbol
    /// validated on success.
    pub fn validate(&mut self, m: usize) -> bool {
        self.validated = self.check(m);
        self.validated
    }

    /// Consuming form of [`Self::validate`] for builder-style use.
    pub fn validated(mut self, m: usize) -> Result<Self> {
        if self.validate(m) {
            Ok(self)
        } else {
            Err(WcoError::InvalidSelfMap(format!(
                "{} does not map the closed disk into itself on a {}-point boundary grid",
                self.describe(),
                m.max(MIN_VALIDATION_GRID)
            )))
        }
    }

    pub fn describe(&self) -> String {
        match &self.form {
            SymbolForm::Affine { alpha, gamma } => format!("phi(z) = ({alpha})z + ({gamma})"),
            SymbolForm::Polynomial { poly } => format!("phi(z) = {poly}"),
        }
    }

    /// `self o inner`, i.e. `z -> self(inner(z))`.
    pub fn compose(&self, inner: &SelfMap, cap: usize) -> SelfMap {
        let mut out = match (&self.form, &inner.form) {
            (
                SymbolForm::Affine { alpha: a1, gamma: g1 },
                SymbolForm::Affine { alpha: a2, gamma: g2 },
            ) => SelfMap::affine(a1 * a2, a1 * g2 + g1),
            _ => {
                let (poly, lost) = self.as_poly().compose_poly(&inner.as_poly(), cap);
                let mut s = SelfMap::polynomial(poly);
                s.approximate = lost;
                s
            }
        };
        out.validated = self.validated && inner.validated;
        out.approximate |= self.approximate || inner.approximate;
        out
    }

    /// The `n`-fold iterate `phi^n` (`phi^0` is the identity).
    ///
    /// Affine symbols use closed forms: `a^n z + 1 - a^n` for `a z + 1 - a`,
    /// `alpha^n z + gamma (1 - alpha^n) / (1 - alpha)` otherwise, and repeated
    /// composition when `alpha = 1`. Polynomial symbols are composed `n`
    /// times keeping degrees `<= cap`.
    pub fn iterate(&self, n: usize, cap: usize) -> SelfMap {
        let mut out = match &self.form {
            SymbolForm::Affine { alpha, gamma } => {
                let (alpha, gamma) = (*alpha, *gamma);
                if n == 0 {
                    SelfMap::identity()
                } else if n == 1 {
                    SelfMap::affine(alpha, gamma)
                } else if gamma == ONE - alpha {
                    let an = alpha.powu(exponent(n));
                    SelfMap::affine(an, ONE - an)
                } else if alpha == ONE {
                    let mut acc = SelfMap::identity();
                    for _ in 0..n {
                        acc = self.compose(&acc, cap);
                    }
                    acc
                } else {
                    let an = alpha.powu(exponent(n));
                    SelfMap::affine(an, gamma * (ONE - an) / (ONE - alpha))
                }
            }
            SymbolForm::Polynomial { .. } => {
                let mut acc = SelfMap::identity();
                for _ in 0..n {
                    acc = self.compose(&acc, cap);
                }
                acc
            }
        };
        out.validated = self.validated;
        out.approximate |= self.approximate;
        out
    }

    /// `f o phi`, with a degree cap for polynomial symbols. The flag reports
    /// whether the cap discarded nonzero coefficients.
    pub fn compose_into(&self, f: &AnalyticPoly, cap: usize) -> (AnalyticPoly, bool) {
        match &self.form {
            SymbolForm::Affine { alpha, gamma } => {
                let mut g = f.compose_affine(*alpha, *gamma);
                let lost = g.truncate(cap);
                (g, lost)
            }
            SymbolForm::Polynomial { poly } => f.compose_poly(poly, cap),
        }
    }
}

fn exponent(n: usize) -> u32 {
    u32::try_from(n).expect("iterate index exceeds u32")
}

/// A bounded analytic weight `w` (a polynomial) with its sup-norm bracket.
#[derive(Clone, Debug, PartialEq)]
pub struct Weight {
    poly: AnalyticPoly,
    bracket: SupBracket,
}

impl Weight {
    pub fn new(poly: AnalyticPoly) -> Self {
        let m = DEFAULT_SUP_GRID.max((4 * poly.trimmed_degree() + 1).next_power_of_two());
        let bracket = sup_norm_bracket(&poly, m);
        Self { poly, bracket }
    }

    /// `lambda z`.
    pub fn linear(lambda: C64) -> Self {
        Self::new(AnalyticPoly::monomial(1, lambda))
    }

    pub fn one() -> Self {
        Self::new(AnalyticPoly::one())
    }

    pub fn poly(&self) -> &AnalyticPoly {
        &self.poly
    }

    pub fn sup_bracket(&self) -> SupBracket {
        self.bracket
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn re(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    #[test]
    fn phi_half_cubed() {
        let phi = SelfMap::phi_a(0.5);
        assert_eq!(phi.iterate(3, usize::MAX).affine_coeffs(), Some((re(0.125), re(0.875))));
        // three hand compositions
        let by_hand = phi.compose(&phi.compose(&phi, usize::MAX), usize::MAX);
        assert_eq!(by_hand.affine_coeffs(), Some((re(0.125), re(0.875))));
    }

    #[test]
    fn iterate_zero_and_one() {
        let phi = SelfMap::affine(C64::new(0.3, 0.1), C64::new(0.2, -0.2));
        assert_eq!(phi.iterate(0, 8).affine_coeffs(), Some((ONE, ZERO)));
        assert_eq!(phi.iterate(1, 8).affine_coeffs(), phi.affine_coeffs());
    }

    #[test]
    fn general_affine_closed_form_matches_composition() {
        let phi = SelfMap::affine(C64::new(0.3, 0.4), C64::new(0.1, -0.2));
        let mut acc = SelfMap::identity();
        for n in 0..15 {
            let (a1, g1) = phi.iterate(n, usize::MAX).affine_coeffs().unwrap();
            let (a2, g2) = acc.affine_coeffs().unwrap();
            assert!((a1 - a2).norm() < 1e-15 && (g1 - g2).norm() < 1e-15, "n={n}");
            acc = phi.compose(&acc, usize::MAX);
        }
    }

    #[test]
    fn translation_iterates_by_composition() {
        let phi = SelfMap::affine(ONE, re(0.25));
        assert_eq!(phi.iterate(4, usize::MAX).affine_coeffs(), Some((ONE, re(1.0))));
    }

    #[test]
    fn validation_examples() {
        assert!(SelfMap::phi_a(0.5).validate(64));
        assert!(!SelfMap::affine(re(2.0), ZERO).validate(64));
        assert!(SelfMap::rotation(1.0).validate(64));
        assert!(!SelfMap::phi_a(1.2).validate(4096));
        assert!(!SelfMap::phi_a(0.0).validate(64), "constant map 1 has |phi(0)| = 1");
        let inner = SelfMap::polynomial(AnalyticPoly::from_real(&[0.0, 0.5, 0.5]));
        assert!(inner.check(256));
        let outer = SelfMap::polynomial(AnalyticPoly::from_real(&[0.5, 0.4, 0.2]));
        assert!(!outer.check(256));
    }

    #[test]
    fn validated_builder_names_the_failure() {
        let err = SelfMap::phi_a(1.2).validated(4096).unwrap_err();
        assert!(matches!(err, WcoError::InvalidSelfMap(_)));
        assert!(err.to_string().contains("self-map validation failed"));
        assert!(SelfMap::phi_a(0.25).validated(64).unwrap().is_validated());
    }

    #[test]
    fn phi_a_parameter_detection() {
        assert_eq!(SelfMap::phi_a(0.25).phi_a_parameter(), Some(0.25));
        assert_eq!(SelfMap::rotation(0.3).phi_a_parameter(), None);
        assert_eq!(SelfMap::affine(re(0.5), re(0.4)).phi_a_parameter(), None);
        assert_eq!(SelfMap::phi_a(0.5).iterate(7, 0).phi_a_parameter(), Some(0.5f64.powi(7)));
    }

    #[test]
    fn polynomial_iterate_with_cap_is_flagged() {
        let phi = SelfMap::polynomial(AnalyticPoly::from_real(&[0.0, 0.5, 0.5]))
            .validated(256)
            .unwrap();
        let exact = phi.iterate(2, usize::MAX);
        assert!(!exact.is_approximate());
        assert_eq!(exact.as_poly().degree(), 4);
        let capped = phi.iterate(3, 5);
        assert!(capped.is_approximate());
        assert!(capped.is_validated());
        let full = phi.iterate(3, usize::MAX).as_poly();
        for k in 0..=5 {
            assert!((capped.as_poly().coeff(k) - full.coeff(k)).norm() < 1e-15);
        }
    }

    #[test]
    fn weight_brackets() {
        let w = Weight::linear(re(0.6));
        assert!((w.sup_bracket().lower - 0.6).abs() < 1e-15);
        assert!((w.sup_bracket().upper - 0.6).abs() < 1e-15);
        let w = Weight::new(AnalyticPoly::from_real(&[0.5, -0.5]));
        assert!(w.sup_bracket().lower <= w.sup_bracket().upper);
        assert!((w.sup_bracket().lower - 1.0).abs() < 1e-12, "max at z = -1");
    }
}
