//! Polarization-weight family: plain PW, higher-order PW and extended PW.
//!
//! All three are β-expansions of the index: each set bit `j` of `i`
//! contributes a fixed amount that depends only on `j` (and, for gated
//! extended terms, on one other bit of `i`). Since bits at or above the
//! code width are zero, the weight of `i` does not depend on the code length
//! and every sequence in the family is nested.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::reliability::{check_index, WeightTable};

/// `2^(1/4)`, the customary PW base.
pub const DEFAULT_BETA: f64 = 1.189_207_115_002_721;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PwParams {
    pub beta: f64,
}

impl PwParams {
    pub fn new(beta: f64) -> Result<Self> {
        if !(beta.is_finite() && beta > 1.0) {
            return Err(invalid(format!(
                "PW base must be finite and > 1, got {beta}"
            )));
        }
        Ok(Self { beta })
    }
}

impl Default for PwParams {
    fn default() -> Self {
        Self { beta: DEFAULT_BETA }
    }
}

/// Higher-order PW: bit `j` contributes `Σ_ξ w_ξ · β^(j / 4^ξ)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HpwParams {
    pub beta: f64,
    pub orders: Vec<i32>,
    pub order_weights: Vec<f64>,
}

impl HpwParams {
    pub fn new(beta: f64, orders: Vec<i32>, order_weights: Vec<f64>) -> Result<Self> {
        PwParams::new(beta)?;
        if orders.is_empty() {
            return Err(invalid("HPW needs at least one order"));
        }
        if orders.len() != order_weights.len() {
            return Err(invalid(format!(
                "HPW has {} orders but {} weights",
                orders.len(),
                order_weights.len()
            )));
        }
        if let Some(w) = order_weights.iter().find(|w| !w.is_finite()) {
            return Err(invalid(format!("HPW order weight {w} is not finite")));
        }
        Ok(Self {
            beta,
            orders,
            order_weights,
        })
    }

    fn bit_contribution(&self, j: u32) -> f64 {
        self.orders
            .iter()
            .zip(&self.order_weights)
            .map(|(&xi, &w)| w * self.beta.powf(f64::from(j) / 4f64.powi(xi)))
            .sum()
    }
}

impl Default for HpwParams {
    /// Orders {0, 1} with the 1st-order base weighted by 1/4.
    fn default() -> Self {
        Self {
            beta: DEFAULT_BETA,
            orders: vec![0, 1],
            order_weights: vec![1.0, 0.25],
        }
    }
}

/// One `factor · base^j` term of an extended PW, optionally gated on a bit
/// of the index itself.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EpwTerm {
    pub factor: f64,
    pub base: f64,
    pub breaking_bit: Option<u32>,
}

impl EpwTerm {
    pub const fn new(factor: f64, base: f64) -> Self {
        Self {
            factor,
            base,
            breaking_bit: None,
        }
    }

    pub const fn gated(factor: f64, base: f64, bit: u32) -> Self {
        Self {
            factor,
            base,
            breaking_bit: Some(bit),
        }
    }
}

/// Generalized β-expansion. Covers plain PW (one term), the two-base
/// extension and the symmetry-broken form with gated terms.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpwTermList {
    terms: Vec<EpwTerm>,
}

impl EpwTermList {
    pub fn new(terms: Vec<EpwTerm>) -> Result<Self> {
        if terms.is_empty() {
            return Err(invalid("EPW needs at least one term"));
        }
        for t in &terms {
            if !t.factor.is_finite() || !(t.base.is_finite() && t.base > 0.0) {
                return Err(invalid(format!(
                    "EPW term ({}, {}) needs a finite factor and a positive base",
                    t.factor, t.base
                )));
            }
            if t.breaking_bit.is_some_and(|c| c >= 63) {
                return Err(invalid("EPW breaking bit out of range"));
            }
        }
        Ok(Self { terms })
    }

    /// The published two-breaking-point instance.
    pub fn reference() -> Self {
        Self {
            terms: vec![
                EpwTerm::new(1.0, 1.1892),
                EpwTerm::new(0.2210, 0.9889),
                EpwTerm::gated(-0.0371, 0.5759, 8),
                EpwTerm::gated(-0.0470, 0.4433, 7),
            ],
        }
    }

    /// Same list with every gated term dropped.
    pub fn without_breaking_terms(&self) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .copied()
                .filter(|t| t.breaking_bit.is_none())
                .collect(),
        }
    }

    pub fn terms(&self) -> &[EpwTerm] {
        &self.terms
    }

    fn bit_contribution(&self, j: u32, index: usize) -> f64 {
        self.terms
            .iter()
            .filter(|t| t.breaking_bit.is_none_or(|c| (index >> c) & 1 == 1))
            .map(|t| t.factor * t.base.powf(f64::from(j)))
            .sum()
    }
}

impl Default for EpwTermList {
    fn default() -> Self {
        Self::reference()
    }
}

fn set_bits(index: usize) -> impl Iterator<Item = u32> {
    (0..usize::BITS).filter(move |&j| (index >> j) & 1 == 1)
}

/// `W_i = Σ_j B_j β^j`.
pub fn pw_weight(index: usize, n: u32, params: &PwParams) -> Result<f64> {
    check_index(index, n)?;
    Ok(set_bits(index)
        .map(|j| params.beta.powf(f64::from(j)))
        .sum())
}

pub fn hpw_weight(index: usize, n: u32, params: &HpwParams) -> Result<f64> {
    check_index(index, n)?;
    Ok(set_bits(index).map(|j| params.bit_contribution(j)).sum())
}

/// Gated terms contribute only when their breaking bit is set in `index`.
/// A breaking bit at or above `n` is never set, which keeps the weights of
/// short codes identical to those of long ones.
pub fn epw_weight(index: usize, n: u32, terms: &EpwTermList) -> Result<f64> {
    check_index(index, n)?;
    Ok(set_bits(index)
        .map(|j| terms.bit_contribution(j, index))
        .sum())
}

pub(crate) fn table_from(n: u32, weight: impl Fn(usize) -> Result<f64>) -> Result<WeightTable> {
    let len = 1usize
        .checked_shl(n)
        .filter(|_| n < 40)
        .ok_or_else(|| invalid(format!("width {n} too large")))?;
    let weights = (0..len).map(weight).collect::<Result<Vec<_>>>()?;
    WeightTable::new(n, weights)
}

pub fn pw_table(n: u32, params: &PwParams) -> Result<WeightTable> {
    table_from(n, |i| pw_weight(i, n, params))
}

pub fn hpw_table(n: u32, params: &HpwParams) -> Result<WeightTable> {
    table_from(n, |i| hpw_weight(i, n, params))
}

pub fn epw_table(n: u32, terms: &EpwTermList) -> Result<WeightTable> {
    table_from(n, |i| epw_weight(i, n, terms))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pw_published_values() {
        let p = PwParams::default();
        assert!((pw_weight(3, 6, &p).unwrap() - 2.189).abs() < 5e-4);
        assert!((pw_weight(32, 6, &p).unwrap() - 2.378).abs() < 5e-4);
        assert_eq!(pw_weight(0, 6, &p).unwrap(), 0.0);
        assert_eq!(pw_weight(0, 6, &PwParams::new(1.7).unwrap()).unwrap(), 0.0);
    }

    #[test]
    #[allow(clippy::approx_constant)]
    fn pw_table_n3() {
        let t = pw_table(3, &PwParams::default()).unwrap();
        let expected = [0.0, 1.0, 1.1892, 2.1892, 1.4142, 2.4142, 2.6034, 3.6034];
        for (w, e) in t.weights().iter().zip(expected) {
            assert!((w - e).abs() < 1e-4, "{w} vs {e}");
        }
        assert_eq!(pw_table(0, &PwParams::default()).unwrap().weights(), &[0.0]);
    }

    #[test]
    fn rejects_bad_params() {
        assert!(PwParams::new(1.0).is_err());
        assert!(PwParams::new(f64::NAN).is_err());
        assert!(HpwParams::new(1.2, vec![], vec![]).is_err());
        assert!(HpwParams::new(1.2, vec![0, 1], vec![1.0]).is_err());
        assert!(EpwTermList::new(vec![]).is_err());
        assert!(EpwTermList::new(vec![EpwTerm::new(1.0, 0.0)]).is_err());
        assert!(pw_weight(8, 3, &PwParams::default()).is_err());
    }

    #[test]
    fn index_zero_is_zero_for_all_forms() {
        assert_eq!(hpw_weight(0, 10, &HpwParams::default()).unwrap(), 0.0);
        assert_eq!(epw_weight(0, 10, &EpwTermList::reference()).unwrap(), 0.0);
    }

    #[test]
    fn negative_orders_are_accepted() {
        let p = HpwParams::new(DEFAULT_BETA, vec![-1], vec![1.0]).unwrap();
        // β^(j·4) for j = 1.
        assert!((hpw_weight(2, 2, &p).unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn breaking_bit_beyond_width_is_inactive() {
        let terms = EpwTermList::reference();
        let plain = terms.without_breaking_terms();
        for i in 0..64 {
            assert_eq!(
                epw_weight(i, 6, &terms).unwrap(),
                epw_weight(i, 6, &plain).unwrap()
            );
        }
    }
}
