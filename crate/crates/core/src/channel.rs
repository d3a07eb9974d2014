//! Gray-mapped QPSK over AWGN.
//!
//! Symbols have unit energy; each dimension carries one bit at amplitude
//! `±1/√2` and receives independent Gaussian noise.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

const AMP: f64 = std::f64::consts::FRAC_1_SQRT_2;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelParams {
    esn0_db: f64,
    sigma_per_dim: f64,
}

impl ChannelParams {
    pub fn from_esn0_db(esn0_db: f64) -> Result<Self> {
        if esn0_db.is_nan() {
            return Err(invalid("Es/N0 is NaN"));
        }
        let sigma = (1.0 / (2.0 * 10f64.powf(esn0_db / 10.0))).sqrt();
        Ok(Self {
            esn0_db,
            sigma_per_dim: sigma,
        })
    }

    /// A channel without noise.
    pub fn noiseless() -> Self {
        Self {
            esn0_db: f64::INFINITY,
            sigma_per_dim: 0.0,
        }
    }

    pub fn esn0_db(&self) -> f64 {
        self.esn0_db
    }

    pub fn sigma_per_dim(&self) -> f64 {
        self.sigma_per_dim
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Symbol {
    pub i: f64,
    pub q: f64,
}

impl Symbol {
    pub fn energy(&self) -> f64 {
        self.i * self.i + self.q * self.q
    }
}

/// Bit pairs `(b0, b1)` map to `((1−2b0)/√2, (1−2b1)/√2)`.
pub fn qpsk_modulate(bits: &[u8]) -> Result<Vec<Symbol>> {
    if !bits.len().is_multiple_of(2) {
        return Err(invalid(format!(
            "QPSK needs an even number of bits, got {}",
            bits.len()
        )));
    }
    let level = |b: u8| if b == 0 { AMP } else { -AMP };
    Ok(bits
        .chunks_exact(2)
        .map(|p| Symbol {
            i: level(p[0]),
            q: level(p[1]),
        })
        .collect())
}

/// Adds noise in place, drawing in-phase then quadrature for every symbol.
pub fn awgn_add<R: Rng + ?Sized>(symbols: &mut [Symbol], params: &ChannelParams, rng: &mut R) {
    let sigma = params.sigma_per_dim;
    if sigma == 0.0 {
        return;
    }
    for s in symbols {
        let ni: f64 = rng.sample(StandardNormal);
        let nq: f64 = rng.sample(StandardNormal);
        s.i += sigma * ni;
        s.q += sigma * nq;
    }
}

/// Per-dimension LLR `√2·y/σ²`, positive favouring bit 0.
pub fn qpsk_llr(received: &[Symbol], params: &ChannelParams) -> Result<Vec<f64>> {
    let sigma = params.sigma_per_dim;
    if !(sigma > 0.0) {
        return Err(invalid("LLR demodulation needs σ > 0"));
    }
    let scale = 2.0 * AMP / (sigma * sigma);
    Ok(received
        .iter()
        .flat_map(|s| [scale * s.i, scale * s.q])
        .collect())
}

/// `Eb/N0 = Es/N0 − 10·log10(bits_per_symbol · rate)`.
pub fn esn0_to_ebn0(esn0_db: f64, rate: f64, bits_per_symbol: u32) -> Result<f64> {
    if !(rate > 0.0 && rate <= 1.0) {
        return Err(invalid(format!("code rate {rate} outside (0, 1]")));
    }
    Ok(esn0_db - 10.0 * (f64::from(bits_per_symbol) * rate).log10())
}

pub fn ebn0_to_esn0(ebn0_db: f64, rate: f64, bits_per_symbol: u32) -> Result<f64> {
    if !(rate > 0.0 && rate <= 1.0) {
        return Err(invalid(format!("code rate {rate} outside (0, 1]")));
    }
    Ok(ebn0_db + 10.0 * (f64::from(bits_per_symbol) * rate).log10())
}
