//! Bhattacharyya-parameter construction for the binary erasure channel.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::reliability::WeightTable;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BecParams {
    pub epsilon: f64,
}

impl BecParams {
    pub fn new(epsilon: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&epsilon) {
            return Err(invalid(format!(
                "erasure probability {epsilon} outside [0, 1]"
            )));
        }
        Ok(Self { epsilon })
    }
}

impl Default for BecParams {
    fn default() -> Self {
        Self { epsilon: 0.5 }
    }
}

/// Bhattacharyya parameters `Z_i`, with `Z⁻ = 2Z − Z²` and `Z⁺ = Z²`.
pub fn bhattacharyya(n: u32, params: &BecParams) -> Result<Vec<f64>> {
    if n >= 40 {
        return Err(invalid(format!("width {n} too large")));
    }
    let mut z = vec![params.epsilon];
    for _ in 0..n {
        z = z.iter().flat_map(|&z| [2.0 * z - z * z, z * z]).collect();
    }
    Ok(z)
}

/// Weights `−Z_i`, so larger stays more reliable.
pub fn bec_table(n: u32, params: &BecParams) -> Result<WeightTable> {
    let z = bhattacharyya(n, params)?;
    WeightTable::new(n, z.into_iter().map(|z| -z).collect())
}
