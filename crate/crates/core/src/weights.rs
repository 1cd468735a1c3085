//! The weight iterates `w^(n) = (w o phi^{n-1}) ... (w o phi) w`, which
//! satisfy `(C_{w,phi})^n f = w^(n) (f o phi^n)`.
//!
//! Built incrementally as `w^(n+1) = w^(n) (w o phi^n)`: one composition and
//! one product per step. For an affine symbol with no cap every stored
//! iterate is exact and `deg w^(n) = n deg w`.

use crate::error::{Result, WcoError};
use crate::series::AnalyticPoly;
use crate::symbols::{SelfMap, Weight};

#[derive(Clone, Debug)]
pub struct WeightIterateCache {
    weight: Weight,
    symbol: SelfMap,
    /// `iterates[n]` is `w^(n)`; `iterates[0] = 1`.
    iterates: Vec<AnalyticPoly>,
    /// `symbol_iterates[n]` is `phi^n`; index 0 is the identity.
    symbol_iterates: Vec<SelfMap>,
    cap: Option<usize>,
    truncated: bool,
}

impl WeightIterateCache {
    /// Iterates `w^(1) .. w^(horizon)` and `phi^0 .. phi^horizon`.
    pub fn build(weight: &Weight, symbol: &SelfMap, horizon: usize, cap: Option<usize>) -> Result<Self> {
        if !symbol.is_validated() {
            return Err(WcoError::UnvalidatedSymbol);
        }
        if horizon == 0 {
            return Err(WcoError::EmptyHorizon);
        }
        let limit = cap.unwrap_or(usize::MAX);
        let symbol_iterates: Vec<SelfMap> = if symbol.is_affine() {
            (0..=horizon).map(|n| symbol.iterate(n, limit)).collect()
        } else {
            let mut out = Vec::with_capacity(horizon + 1);
            out.push(SelfMap::identity().validated(64)?);
            for n in 0..horizon {
                let next = symbol.compose(&out[n], limit);
                out.push(next);
            }
            out
        };
        let mut truncated = symbol_iterates.iter().any(SelfMap::is_approximate);

        let mut iterates = Vec::with_capacity(horizon + 1);
        iterates.push(AnalyticPoly::one());
        let mut first = weight.poly().clone();
        truncated |= first.truncate(limit);
        iterates.push(first);
        for n in 1..horizon {
            let (w_phi_n, lost) = symbol_iterates[n].compose_into(weight.poly(), limit);
            let mut next = iterates[n].mul_poly(&w_phi_n);
            truncated |= lost | next.truncate(limit);
            iterates.push(next);
        }

        Ok(Self {
            weight: weight.clone(),
            symbol: symbol.clone(),
            iterates,
            symbol_iterates,
            cap,
            truncated,
        })
    }

    pub fn horizon(&self) -> usize {
        self.iterates.len() - 1
    }

    pub fn weight(&self) -> &Weight {
        &self.weight
    }

    pub fn symbol(&self) -> &SelfMap {
        &self.symbol
    }

    pub fn cap(&self) -> Option<usize> {
        self.cap
    }

    /// True when the degree cap discarded nonzero coefficients anywhere.
    pub fn is_truncated(&self) -> bool {
        self.truncated
    }

    /// `w^(n)` for `0 <= n <= horizon`.
    pub fn weight_iterate(&self, n: usize) -> Result<&AnalyticPoly> {
        self.iterates.get(n).ok_or(WcoError::BeyondHorizon {
            n,
            horizon: self.horizon(),
        })
    }

    /// `phi^n` for `0 <= n <= horizon`.
    pub fn symbol_iterate(&self, n: usize) -> Result<&SelfMap> {
        self.symbol_iterates.get(n).ok_or(WcoError::BeyondHorizon {
            n,
            horizon: self.horizon(),
        })
    }

    /// `w^(1) .. w^(horizon)`.
    pub fn iterates(&self) -> &[AnalyticPoly] {
        &self.iterates[1..]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::C64;

    fn re(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    fn phi(a: f64) -> SelfMap {
        SelfMap::phi_a(a).validated(64).unwrap()
    }

    #[test]
    fn unit_weight_iterates_are_one() {
        let cache = WeightIterateCache::build(&Weight::one(), &phi(0.5), 20, None).unwrap();
        for w in cache.iterates() {
            assert_eq!(*w, AnalyticPoly::one());
        }
    }

    #[test]
    fn second_iterate_of_linear_weight() {
        // (w o phi) w = lambda (a z + 1 - a) lambda z
        let (lambda, a) = (0.7, 0.25);
        let cache = WeightIterateCache::build(&Weight::linear(re(lambda)), &phi(a), 2, None).unwrap();
        let expected = AnalyticPoly::from_real(&[0.0, lambda * lambda * (1.0 - a), lambda * lambda * a]);
        let got = cache.weight_iterate(2).unwrap();
        for k in 0..3 {
            assert!((got.coeff(k) - expected.coeff(k)).norm() < 1e-16);
        }
        assert_eq!(got.degree(), 2);
    }

    #[test]
    fn first_iterate_is_weight() {
        let w = Weight::new(AnalyticPoly::from_real(&[0.2, -0.3, 0.1]));
        let cache = WeightIterateCache::build(&w, &phi(0.5), 3, None).unwrap();
        assert_eq!(cache.weight_iterate(1).unwrap(), w.poly());
        assert_eq!(*cache.weight_iterate(0).unwrap(), AnalyticPoly::one());
        assert_eq!(cache.weight_iterate(3).unwrap().degree(), 6);
    }

    #[test]
    fn rejects_unvalidated_symbol_and_empty_horizon() {
        let raw = SelfMap::phi_a(0.5);
        assert_eq!(
            WeightIterateCache::build(&Weight::one(), &raw, 3, None).unwrap_err(),
            WcoError::UnvalidatedSymbol
        );
        assert_eq!(
            WeightIterateCache::build(&Weight::one(), &phi(0.5), 0, None).unwrap_err(),
            WcoError::EmptyHorizon
        );
    }

    #[test]
    fn beyond_horizon_lookup() {
        let cache = WeightIterateCache::build(&Weight::one(), &phi(0.5), 4, None).unwrap();
        assert_eq!(
            cache.weight_iterate(5).unwrap_err(),
            WcoError::BeyondHorizon { n: 5, horizon: 4 }
        );
        assert!(cache.symbol_iterate(4).is_ok());
    }

    #[test]
    fn value_at_one_is_lambda_power() {
        let cache = WeightIterateCache::build(&Weight::linear(re(0.9)), &phi(0.25), 60, None).unwrap();
        for (i, w) in cache.iterates().iter().enumerate() {
            let n = i as i32 + 1;
            let v = w.eval(re(1.0)).norm();
            assert!((v - 0.9f64.powi(n)).abs() <= 1e-13 * 0.9f64.powi(n), "n={n}");
        }
    }

    #[test]
    fn cap_is_recorded() {
        let cache = WeightIterateCache::build(&Weight::linear(re(0.9)), &phi(0.5), 10, Some(4)).unwrap();
        assert!(cache.is_truncated());
        assert!(cache.iterates().iter().all(|w| w.degree() <= 4));
        let exact = WeightIterateCache::build(&Weight::linear(re(0.9)), &phi(0.5), 10, None).unwrap();
        assert!(!exact.is_truncated());
        for n in 1..=10 {
            let (c, e) = (cache.weight_iterate(n).unwrap(), exact.weight_iterate(n).unwrap());
            for k in 0..=4 {
                assert_eq!(c.coeff(k), e.coeff(k), "n={n} k={k}");
            }
        }
    }

    #[test]
    fn polynomial_symbol_iterates() {
        let sym = SelfMap::polynomial(AnalyticPoly::from_real(&[0.0, 0.5, 0.5]))
            .validated(256)
            .unwrap();
        let w = Weight::new(AnalyticPoly::from_real(&[0.5, 0.5]));
        let cache = WeightIterateCache::build(&w, &sym, 3, None).unwrap();
        assert!(!cache.is_truncated());
        // w^(2) = (w o phi) w
        let expected = sym.compose_into(w.poly(), usize::MAX).0.mul_poly(w.poly());
        assert_eq!(*cache.weight_iterate(2).unwrap(), expected);
    }
}
