//! Bit-serial CRC over message bits, most significant coefficient first.

use crate::error::{invalid, Result};

/// Generator polynomial of degree `width`. The leading `x^width`
/// coefficient is implicit; `low` holds the coefficients of
/// `x^(width-1) … x^0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CrcSpec {
    width: usize,
    low: u64,
}

/// The 19 low-order coefficients used for CRC-aided list decoding.
pub const TABLE_I_CRC19: &str = "1010001010110111001";

impl CrcSpec {
    /// `coefficients` lists the low-order coefficients, highest degree first.
    pub fn from_bits(coefficients: &str) -> Result<Self> {
        let width = coefficients.len();
        if width == 0 || width > 63 {
            return Err(invalid(format!("CRC width {width} outside 1..=63")));
        }
        let mut low = 0u64;
        for c in coefficients.chars() {
            let bit = match c {
                '0' => 0,
                '1' => 1,
                _ => return Err(invalid(format!("CRC pattern has non-binary digit `{c}`"))),
            };
            low = (low << 1) | bit;
        }
        Ok(Self { width, low })
    }

    /// The 19-bit CRC, read as `x^19` plus the printed pattern.
    pub fn table_i() -> Self {
        Self::from_bits(TABLE_I_CRC19).expect("constant pattern is valid")
    }

    pub fn width(&self) -> usize {
        self.width
    }

    /// Low-order coefficients, highest degree first.
    pub fn coefficient_bits(&self) -> Vec<u8> {
        (0..self.width)
            .rev()
            .map(|k| ((self.low >> k) & 1) as u8)
            .collect()
    }

    /// Full generator as an integer, including the leading term.
    pub fn generator(&self) -> u64 {
        (1 << self.width) | self.low
    }

    fn remainder(&self, bits: &[u8]) -> u64 {
        let top = 1u64 << (self.width - 1);
        let mask = (1u64 << self.width) - 1;
        let mut reg = 0u64;
        for &b in bits {
            let feedback = (reg & top != 0) ^ (b & 1 == 1);
            reg = (reg << 1) & mask;
            if feedback {
                reg ^= self.low;
            }
        }
        reg
    }

    /// Parity bits: remainder of `message · x^width` modulo the generator.
    pub fn encode(&self, message: &[u8]) -> Vec<u8> {
        let reg = self.remainder(message);
        (0..self.width)
            .rev()
            .map(|k| ((reg >> k) & 1) as u8)
            .collect()
    }

    /// `message ∥ parity`.
    pub fn attach(&self, message: &[u8]) -> Vec<u8> {
        let mut out = message.to_vec();
        out.extend(self.encode(message));
        out
    }

    /// True when `payload` (message followed by parity) divides evenly.
    pub fn check(&self, payload: &[u8]) -> Result<bool> {
        if payload.len() <= self.width {
            return Err(invalid(format!(
                "CRC check needs more than {} bits, got {}",
                self.width,
                payload.len()
            )));
        }
        let (message, parity) = payload.split_at(payload.len() - self.width);
        Ok(self.encode(message) == parity)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pattern_matches() {
        let crc = CrcSpec::table_i();
        assert_eq!(crc.width(), 19);
        let printed: Vec<u8> = TABLE_I_CRC19.bytes().map(|b| b - b'0').collect();
        assert_eq!(crc.coefficient_bits(), printed);
        assert_eq!(crc.generator(), 0b1_1010001010110111001);
    }

    #[test]
    fn zero_message() {
        let crc = CrcSpec::table_i();
        for len in [1, 7, 40] {
            assert!(crc.encode(&vec![0; len]).iter().all(|&b| b == 0));
        }
    }

    #[test]
    fn single_one_gives_low_coefficients() {
        // 1 · x^19 mod g = g − x^19.
        let crc = CrcSpec::table_i();
        assert_eq!(crc.encode(&[1]), crc.coefficient_bits());
    }

    #[test]
    fn check_round_trip_and_flip() {
        let crc = CrcSpec::table_i();
        let msg = [1, 0, 1, 1, 0, 0, 1, 0, 1, 1, 1];
        let mut payload = crc.attach(&msg);
        assert!(crc.check(&payload).unwrap());
        payload[3] ^= 1;
        assert!(!crc.check(&payload).unwrap());
        assert!(crc.check(&[0; 19]).is_err());
    }

    #[test]
    fn bad_patterns() {
        assert!(CrcSpec::from_bits("").is_err());
        assert!(CrcSpec::from_bits("10a1").is_err());
    }
}
