//! Truncated Maclaurin series with complex coefficients.
//!
//! Every analytic function handled by this crate is an [`AnalyticPoly`]:
//! the finite coefficient list `c_0, ..., c_d` of `f(z) = sum c_k z^k`.
//! Arithmetic is exact polynomial arithmetic (up to floating-point rounding
//! of the individual coefficient operations); nothing is truncated unless an
//! operation takes an explicit degree cap.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Complex scalar used throughout the crate.
pub type C64 = Complex64;

pub(crate) const ZERO: C64 = C64::new(0.0, 0.0);
pub(crate) const ONE: C64 = C64::new(1.0, 0.0);

/// A polynomial `c_0 + c_1 z + ... + c_d z^d` with complex coefficients.
///
/// The coefficient vector is never empty; the zero function is `[0]`.
/// Equality ignores trailing zero coefficients.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(from = "Vec<C64>", into = "Vec<C64>")]
pub struct AnalyticPoly {
    coeffs: Vec<C64>,
}

impl AnalyticPoly {
    pub fn new(coeffs: Vec<C64>) -> Self {
        if coeffs.is_empty() {
            Self { coeffs: vec![ZERO] }
        } else {
            Self { coeffs }
        }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&c| C64::new(c, 0.0)).collect())
    }

    pub fn zero() -> Self {
        Self { coeffs: vec![ZERO] }
    }

    pub fn one() -> Self {
        Self::constant(ONE)
    }

    pub fn constant(c: C64) -> Self {
        Self { coeffs: vec![c] }
    }

    /// `c * z^k`.
    pub fn monomial(k: usize, c: C64) -> Self {
        let mut coeffs = vec![ZERO; k + 1];
        coeffs[k] = c;
        Self { coeffs }
    }

    /// The identity map `z`.
    pub fn identity() -> Self {
        Self::monomial(1, ONE)
    }

    /// `c_0 + c_1 z`.
    pub fn linear(c0: C64, c1: C64) -> Self {
        Self {
            coeffs: vec![c0, c1],
        }
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<C64> {
        self.coeffs
    }

    /// Coefficient of `z^k`, zero beyond the stored length.
    pub fn coeff(&self, k: usize) -> C64 {
        self.coeffs.get(k).copied().unwrap_or(ZERO)
    }

    /// Stored degree, `len - 1`. May count trailing zeros; see [`Self::trimmed_degree`].
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Degree after discarding trailing zero coefficients (0 for the zero polynomial).
    pub fn trimmed_degree(&self) -> usize {
        self.coeffs
            .iter()
            .rposition(|c| *c != ZERO)
            .unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| *c == ZERO)
    }

    /// Drop trailing zero coefficients in place.
    pub fn trim(&mut self) {
        let len = self.trimmed_degree() + 1;
        self.coeffs.truncate(len);
    }

    pub fn trimmed(mut self) -> Self {
        self.trim();
        self
    }

    /// Keep the coefficients of degree `<= cap`. Returns whether anything
    /// nonzero was discarded.
    pub fn truncate(&mut self, cap: usize) -> bool {
        if cap >= self.coeffs.len() - 1 {
            return false;
        }
        let lost = self.coeffs[cap + 1..].iter().any(|c| *c != ZERO);
        self.coeffs.truncate(cap + 1);
        lost
    }

    pub fn scale(&self, c: C64) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|&x| x * c).collect(),
        }
    }

    pub fn scale_real(&self, c: f64) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|&x| x * c).collect(),
        }
    }

    /// Cauchy product, degree `deg f + deg g`.
    pub fn mul_poly(&self, other: &Self) -> Self {
        self.mul_capped(other, usize::MAX)
    }

    /// Cauchy product keeping only the coefficients of degree `<= cap`.
    /// The kept coefficients are exactly those of the full product.
    pub fn mul_capped(&self, other: &Self, cap: usize) -> Self {
        let (a, b) = (&self.coeffs, &other.coeffs);
        let full = a.len() + b.len() - 1;
        let len = full.min(cap.saturating_add(1));
        let mut out = vec![ZERO; len];
        for (i, &x) in a.iter().enumerate() {
            if i >= len {
                break;
            }
            if x == ZERO {
                continue;
            }
            let upto = b.len().min(len - i);
            for (o, &y) in out[i..i + upto].iter_mut().zip(&b[..upto]) {
                *o += x * y;
            }
        }
        Self::new(out)
    }

    /// `f^k` by repeated multiplication, optionally capped.
    pub fn pow_capped(&self, k: usize, cap: usize) -> Self {
        let mut acc = Self::one();
        for _ in 0..k {
            acc = acc.mul_capped(self, cap);
        }
        acc
    }

    /// Horner evaluation at `z`.
    pub fn eval(&self, z: C64) -> C64 {
        self.coeffs.iter().rev().fold(ZERO, |acc, &c| acc * z + c)
    }

    /// The polynomial `f(alpha z + gamma)`, via the Horner recurrence
    /// `p <- p * (alpha z + gamma) + c_k` from the top coefficient down.
    /// `O(d^2)` scalar operations; `O(d)` when `gamma == 0`.
    pub fn compose_affine(&self, alpha: C64, gamma: C64) -> Self {
        if alpha == ONE && gamma == ZERO {
            return self.clone();
        }
        if gamma == ZERO {
            let mut power = ONE;
            let coeffs = self
                .coeffs
                .iter()
                .map(|&c| {
                    let out = c * power;
                    power *= alpha;
                    out
                })
                .collect();
            return Self { coeffs };
        }
        let d = self.degree();
        let mut acc = vec![ZERO; d + 1];
        acc[0] = self.coeffs[d];
        // after processing coefficient k, acc holds a polynomial of degree d - k
        for (step, &c) in self.coeffs[..d].iter().rev().enumerate() {
            let top = step + 1;
            acc[top] = alpha * acc[top - 1];
            for j in (1..top).rev() {
                acc[j] = gamma * acc[j] + alpha * acc[j - 1];
            }
            acc[0] = gamma * acc[0] + c;
        }
        Self { coeffs: acc }
    }

    /// The polynomial `f(g(z))` by Horner's scheme with polynomial
    /// accumulators, keeping degrees `<= cap`. Returns the composition and
    /// whether the cap discarded nonzero coefficients.
    pub fn compose_poly(&self, inner: &Self, cap: usize) -> (Self, bool) {
        let mut acc = Self::constant(self.coeffs[self.degree()]);
        let mut lost = false;
        for &c in self.coeffs[..self.degree()].iter().rev() {
            // acc has degree <= cap, so the full product costs O(cap * deg inner)
            let mut next = acc.mul_poly(inner);
            lost |= next.truncate(cap);
            acc = next;
            acc.coeffs[0] += c;
        }
        (acc, lost)
    }
}

/// Maclaurin coefficients `d_0..d_D` of `(1 - z)^s` from the recurrence
/// `d_0 = 1`, `d_{k+1} = d_k (k - s) / (k + 1)`.
pub fn binomial_series(s: C64, degree: usize) -> AnalyticPoly {
    let mut coeffs = Vec::with_capacity(degree + 1);
    let mut d = ONE;
    coeffs.push(d);
    for k in 0..degree {
        let kf = k as f64;
        d = d * (C64::new(kf, 0.0) - s) / (kf + 1.0);
        coeffs.push(d);
    }
    AnalyticPoly { coeffs }
}

impl From<Vec<C64>> for AnalyticPoly {
    fn from(coeffs: Vec<C64>) -> Self {
        Self::new(coeffs)
    }
}

impl From<AnalyticPoly> for Vec<C64> {
    fn from(p: AnalyticPoly) -> Self {
        p.coeffs
    }
}

impl PartialEq for AnalyticPoly {
    fn eq(&self, other: &Self) -> bool {
        let n = self.coeffs.len().max(other.coeffs.len());
        (0..n).all(|k| self.coeff(k) == other.coeff(k))
    }
}

impl fmt::Display for AnalyticPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if *c == ZERO && !(first && k == self.degree()) {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "({c})")?,
                1 => write!(f, "({c})z")?,
                _ => write!(f, "({c})z^{k}")?,
            }
        }
        Ok(())
    }
}

impl Add for &AnalyticPoly {
    type Output = AnalyticPoly;

    fn add(self, rhs: &AnalyticPoly) -> AnalyticPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        AnalyticPoly {
            coeffs: (0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect(),
        }
    }
}

impl Sub for &AnalyticPoly {
    type Output = AnalyticPoly;

    fn sub(self, rhs: &AnalyticPoly) -> AnalyticPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        AnalyticPoly {
            coeffs: (0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect(),
        }
    }
}

impl Mul for &AnalyticPoly {
    type Output = AnalyticPoly;

    fn mul(self, rhs: &AnalyticPoly) -> AnalyticPoly {
        self.mul_poly(rhs)
    }
}

impl Neg for &AnalyticPoly {
    type Output = AnalyticPoly;

    fn neg(self) -> AnalyticPoly {
        self.scale_real(-1.0)
    }
}

impl Add for AnalyticPoly {
    type Output = AnalyticPoly;

    fn add(self, rhs: AnalyticPoly) -> AnalyticPoly {
        &self + &rhs
    }
}

impl Sub for AnalyticPoly {
    type Output = AnalyticPoly;

    fn sub(self, rhs: AnalyticPoly) -> AnalyticPoly {
        &self - &rhs
    }
}

impl Mul for AnalyticPoly {
    type Output = AnalyticPoly;

    fn mul(self, rhs: AnalyticPoly) -> AnalyticPoly {
        self.mul_poly(&rhs)
    }
}
