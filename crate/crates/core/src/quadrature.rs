//! Quadrature rules: uniform trapezoid sums on the unit circle (evaluated
//! with an FFT) and Gauss-Jacobi rules for `(1 - u)^beta` on `[0, 1]`.

use nalgebra::{DMatrix, SymmetricEigen};
use rustfft::FftPlanner;

use crate::error::{Result, WcoError};
use crate::series::{AnalyticPoly, C64, ZERO};

/// Values `f(r e^{2 pi i k / m})` for `k = 0..m`.
///
/// Coefficients of degree `>= m` are folded onto their residue class, so the
/// result is exact (up to rounding) for any degree.
pub fn circle_values(f: &AnalyticPoly, m: usize, radius: f64) -> Vec<C64> {
    assert!(m > 0, "grid size must be positive");
    let mut buf = vec![ZERO; m];
    let mut scale = 1.0;
    for (k, &c) in f.coeffs().iter().enumerate() {
        buf[k % m] += c * scale;
        if radius != 1.0 {
            scale *= radius;
        }
    }
    // inverse transform computes sum_j x_j exp(+2 pi i j k / m), unnormalized
    let fft = FftPlanner::new().plan_fft_inverse(m);
    fft.process(&mut buf);
    buf
}

/// Trapezoid-rule mean of `|f|^p` over the circle of the given radius.
pub fn circle_mean_abs_pow(f: &AnalyticPoly, p: f64, m: usize, radius: f64) -> f64 {
    let values = circle_values(f, m, radius);
    let sum: f64 = if p == 2.0 {
        values.iter().map(|v| v.norm_sqr()).sum()
    } else {
        values.iter().map(|v| v.norm().powf(p)).sum()
    };
    sum / m as f64
}

/// Gauss-Jacobi rule for `int_0^1 (1 - u)^beta g(u) du`, weights normalized
/// to sum to one, i.e. it integrates against the probability measure
/// `(beta + 1)(1 - u)^beta du`.
#[derive(Clone, Debug)]
pub struct GaussJacobi01 {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    beta: f64,
}

impl GaussJacobi01 {
    /// Golub-Welsch on the Jacobi matrix of the weight `(1 - x)^beta` on
    /// `[-1, 1]`; nodes mapped by `u = (x + 1) / 2`. The normalized weights are
    /// the squared first components of the eigenvectors.
    pub fn new(order: usize, beta: f64) -> Result<Self> {
        if order < 2 {
            return Err(WcoError::RadialOrder(order));
        }
        if !(beta.is_finite() && beta > -1.0) {
            return Err(WcoError::InvalidBeta(beta));
        }
        let a = beta; // exponent of (1 - x)
        let b = 0.0; // exponent of (1 + x)
        let mut jacobi = DMatrix::<f64>::zeros(order, order);
        for n in 0..order {
            let nf = n as f64;
            let diag = if n == 0 {
                (b - a) / (a + b + 2.0)
            } else {
                let t = 2.0 * nf + a + b;
                (b * b - a * a) / (t * (t + 2.0))
            };
            jacobi[(n, n)] = diag;
            if n + 1 < order {
                let m = nf + 1.0;
                let t = 2.0 * m + a + b;
                let off = (4.0 * m * (m + a) * (m + b) * (m + a + b)
                    / (t * t * (t + 1.0) * (t - 1.0)))
                    .sqrt();
                jacobi[(n, n + 1)] = off;
                jacobi[(n + 1, n)] = off;
            }
        }
        let eig = SymmetricEigen::new(jacobi);
        let mut pairs: Vec<(f64, f64)> = (0..order)
            .map(|i| {
                let v0 = eig.eigenvectors[(0, i)];
                ((eig.eigenvalues[i] + 1.0) / 2.0, v0 * v0)
            })
            .collect();
        pairs.sort_by(|x, y| x.0.total_cmp(&y.0));
        let total: f64 = pairs.iter().map(|p| p.1).sum();
        Ok(Self {
            nodes: pairs.iter().map(|p| p.0).collect(),
            weights: pairs.iter().map(|p| p.1 / total).collect(),
            beta,
        })
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// `(beta + 1) int_0^1 (1 - u)^beta g(u) du`.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut g: F) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&u, &w)| w * g(u))
            .sum()
    }
}
