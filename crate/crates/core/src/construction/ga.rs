//! Gaussian-approximation construction.
//!
//! Tracks the mean LLR of every synthesized sub-channel under the assumption
//! that LLRs stay Gaussian with variance twice the mean. A check-node
//! combination maps a mean `m` to `φ⁻¹(1 − (1 − φ(m))²)`; a variable-node
//! combination doubles it.
//!
//! `φ` uses the usual two-segment fit. The first segment is the power-law
//! fit `exp(−0.4527·x^0.86)`, the second the asymptotic form
//! `√(π/x)·e^(−x/4)·(1 − 10/(7x))`, scaled so the two meet at `x = 10`.
//! That keeps `φ` continuous, strictly decreasing and equal to one at zero.
//! Values are evaluated in the log domain above the switch point so that
//! means of several thousand do not underflow.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::reliability::WeightTable;

const ALPHA: f64 = 0.4527;
const GAMMA: f64 = 0.86;
const SWITCH: f64 = 10.0;
/// Absolute tolerance of the bisection used on the second segment.
const BISECT_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaParams {
    /// Design Es/N0 in dB.
    pub design_snr_db: f64,
}

impl GaParams {
    pub fn new(design_snr_db: f64) -> Result<Self> {
        if !design_snr_db.is_finite() {
            return Err(invalid(format!(
                "GA design SNR {design_snr_db} is not finite"
            )));
        }
        Ok(Self { design_snr_db })
    }

    /// Mean of the channel LLR at the design point.
    ///
    /// QPSK carries one bit per dimension with amplitude `1/√2` and noise
    /// variance `σ² = 1/(2·Es/N0)` per dimension, so the demodulated LLR has
    /// mean `2·Es/N0`; equivalently `2/σ_u²` with `σ_u² = 1/(Es/N0)` the noise
    /// variance seen by a unit-amplitude antipodal signal.
    pub fn root_mean(&self) -> f64 {
        2.0 * 10f64.powf(self.design_snr_db / 10.0)
    }
}

fn ln_phi_tail_raw(x: f64) -> f64 {
    0.5 * (std::f64::consts::PI / x).ln() - x / 4.0 + (1.0 - 10.0 / (7.0 * x)).ln()
}

/// `ln c` where `c` scales the tail so it meets the first segment at the switch.
fn ln_tail_scale() -> f64 {
    -ALPHA * SWITCH.powf(GAMMA) - ln_phi_tail_raw(SWITCH)
}

/// `ln φ(x)` for `x ≥ 0`.
fn ln_phi(x: f64) -> f64 {
    if x <= SWITCH {
        -ALPHA * x.powf(GAMMA)
    } else {
        ln_phi_tail_raw(x) + ln_tail_scale()
    }
}

/// The two-segment check-node degradation function, `φ(0) = 1`.
pub fn ga_phi(x: f64) -> Result<f64> {
    if !(x >= 0.0) {
        return Err(invalid(format!("φ is defined for x ≥ 0, got {x}")));
    }
    Ok(ln_phi(x).exp())
}

/// Inverse of `φ` given `ln y` for `y ∈ (0, 1]`.
fn phi_inv_ln(ln_y: f64) -> f64 {
    if ln_y >= 0.0 {
        return 0.0;
    }
    if ln_y >= ln_phi(SWITCH) {
        return (-ln_y / ALPHA).powf(1.0 / GAMMA);
    }
    let (mut lo, mut hi) = (SWITCH, 2.0 * SWITCH);
    while ln_phi(hi) > ln_y {
        lo = hi;
        hi *= 2.0;
    }
    while hi - lo > BISECT_TOL {
        let mid = 0.5 * (lo + hi);
        if ln_phi(mid) > ln_y {
            lo = mid;
        } else {
            hi = mid;
        }
        if mid == lo && mid == hi {
            break;
        }
    }
    0.5 * (lo + hi)
}

/// `φ⁻¹(y)` for `y ∈ (0, 1]`.
pub fn ga_phi_inv(y: f64) -> Result<f64> {
    if !(y > 0.0 && y <= 1.0) {
        return Err(invalid(format!("φ⁻¹ is defined on (0, 1], got {y}")));
    }
    Ok(phi_inv_ln(y.ln()))
}

/// Mean of the worse child of a sub-channel with mean `m`.
fn check_node_mean(m: f64) -> f64 {
    if m <= 0.0 {
        return 0.0;
    }
    if m <= SWITCH {
        // 1 − y = (1 − φ)², with 1 − φ computed without cancellation.
        let s = -(-ALPHA * m.powf(GAMMA)).exp_m1();
        let ln_y = (-(s * s)).ln_1p();
        if ln_y >= ln_phi(SWITCH) {
            // First-segment closed form, accurate even for tiny means.
            return (-ln_y / ALPHA).powf(1.0 / GAMMA);
        }
        return phi_inv_ln(ln_y);
    }
    let ln_p = ln_phi(m);
    let ln_y = ln_p + (2.0 - ln_p.exp()).ln();
    phi_inv_ln(ln_y)
}

/// Result of a GA construction.
#[derive(Debug, Clone, PartialEq)]
pub struct GaTable {
    pub table: WeightTable,
    /// Set when some mean collapsed to zero and was clamped.
    pub underflow: bool,
}

/// Mean LLRs of all `2^n` sub-channels. The index bit consumed first (at
/// the channel side) is the most significant one; a one bit selects the
/// doubled (better) child.
pub fn ga_table(n: u32, params: &GaParams) -> Result<GaTable> {
    if n >= 40 {
        return Err(invalid(format!("width {n} too large")));
    }
    let root = params.root_mean();
    if !root.is_finite() {
        return Err(Error::NonFinite(0));
    }
    let mut means = vec![root];
    let mut underflow = false;
    for _ in 0..n {
        let mut next = Vec::with_capacity(means.len() * 2);
        for &m in &means {
            let mut worse = check_node_mean(m);
            if !(worse > f64::MIN_POSITIVE) {
                underflow |= m > 0.0 || worse != 0.0;
                worse = 0.0;
            }
            next.push(worse);
            next.push(2.0 * m);
        }
        means = next;
    }
    if means.iter().any(|m| !m.is_finite()) {
        return Err(invalid(format!(
            "GA means overflow at design SNR {} dB",
            params.design_snr_db
        )));
    }
    Ok(GaTable {
        table: WeightTable::new(n, means)?,
        underflow,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn phi_basics() {
        assert_eq!(ga_phi(0.0).unwrap(), 1.0);
        assert!(ga_phi(-1.0).is_err());
        assert!(ga_phi(f64::NAN).is_err());
        let grid: Vec<f64> = (0..4000).map(|k| k as f64 * 0.01).collect();
        for w in grid.windows(2) {
            assert!(ga_phi(w[0]).unwrap() > ga_phi(w[1]).unwrap(), "{w:?}");
        }
        // Continuous at the switch point.
        let below = ga_phi(SWITCH).unwrap();
        let above = ga_phi(SWITCH + 1e-9).unwrap();
        assert!((below - above).abs() < 1e-9);
    }

    #[test]
    fn phi_matches_first_segment_fit() {
        assert!((ga_phi(1.0).unwrap() - (-ALPHA).exp()).abs() < 1e-15);
    }

    #[test]
    fn inverse_domain() {
        assert!(ga_phi_inv(0.0).is_err());
        assert!(ga_phi_inv(1.5).is_err());
        assert_eq!(ga_phi_inv(1.0).unwrap(), 0.0);
    }

    #[test]
    fn recursion_base_cases() {
        let p = GaParams::new(2.0).unwrap();
        let t0 = ga_table(0, &p).unwrap();
        assert_eq!(t0.table.weights(), &[p.root_mean()]);
        let t1 = ga_table(1, &p).unwrap();
        assert_eq!(t1.table.weights()[1], 2.0 * p.root_mean());
        assert!(t1.table.weights()[0] < p.root_mean());
    }

    #[test]
    fn large_means_stay_finite() {
        let m = check_node_mean(5000.0);
        assert!(m.is_finite() && m < 5000.0 && m > 4990.0);
    }

    #[test]
    fn low_design_snr_flags_underflow() {
        let t = ga_table(12, &GaParams::new(-30.0).unwrap()).unwrap();
        assert!(t.underflow);
        assert!(t.table.weights().iter().all(|&m| m >= 0.0));
        let t = ga_table(10, &GaParams::new(0.0).unwrap()).unwrap();
        assert!(!t.underflow);
    }
}
