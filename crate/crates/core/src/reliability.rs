//! Shared domain types: sub-channel indices, weight tables, reliability
//! sequences and code specifications.
//!
//! Reliability is always "larger weight = more reliable". Sequences list
//! sub-channels in ascending reliability, so the `K` most reliable
//! sub-channels of a length-`N` code are the last `K` entries below `N`.

use serde::{Deserialize, Serialize};

use crate::codec::CrcSpec;
use crate::error::{invalid, Error, Result};

/// Width in bits of a power-of-two length, or an error for anything else.
pub fn log2_exact(len: usize) -> Result<u32> {
    if len.is_power_of_two() {
        Ok(len.trailing_zeros())
    } else {
        Err(Error::NotPowerOfTwo(len))
    }
}

/// Binary expansion of a sub-channel index, least-significant bit first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexBits {
    index: usize,
    width: u32,
    bits: Vec<u8>,
}

impl IndexBits {
    pub fn index(&self) -> usize {
        self.index
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    /// `bits()[j]` is the coefficient of `2^j`.
    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    /// Bit positions holding a one, ascending.
    pub fn set_positions(&self) -> impl Iterator<Item = u32> + '_ {
        self.bits
            .iter()
            .enumerate()
            .filter(|(_, &b)| b == 1)
            .map(|(j, _)| j as u32)
    }
}

pub fn index_bits(index: usize, width: u32) -> Result<IndexBits> {
    check_index(index, width)?;
    let bits = (0..width).map(|j| ((index >> j) & 1) as u8).collect();
    Ok(IndexBits { index, width, bits })
}

pub(crate) fn check_index(index: usize, width: u32) -> Result<()> {
    if width >= usize::BITS || index >> width != 0 {
        return Err(Error::IndexOutOfRange { index, width });
    }
    Ok(())
}

/// Per-sub-channel reliability scores for a length `2^n` code.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightTable {
    n: u32,
    weights: Vec<f64>,
}

impl WeightTable {
    pub fn new(n: u32, weights: Vec<f64>) -> Result<Self> {
        let expected = 1usize
            .checked_shl(n)
            .ok_or_else(|| invalid(format!("width {n} too large")))?;
        if weights.len() != expected {
            return Err(Error::LengthMismatch {
                expected,
                actual: weights.len(),
            });
        }
        if let Some(pos) = weights.iter().position(|w| !w.is_finite()) {
            return Err(Error::NonFinite(pos));
        }
        Ok(Self { n, weights })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn get(&self, index: usize) -> Option<f64> {
        self.weights.get(index).copied()
    }
}

/// Sub-channel indices in ascending reliability.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReliabilitySequence {
    n: u32,
    order: Vec<usize>,
}

impl ReliabilitySequence {
    /// Validates that `order` is a permutation of `0..2^n`.
    pub fn new(n: u32, order: Vec<usize>) -> Result<Self> {
        let len = 1usize
            .checked_shl(n)
            .ok_or_else(|| invalid(format!("width {n} too large")))?;
        if order.len() != len {
            return Err(Error::LengthMismatch {
                expected: len,
                actual: order.len(),
            });
        }
        let mut seen = vec![false; len];
        for &i in &order {
            if i >= len || std::mem::replace(&mut seen[i], true) {
                return Err(invalid(format!(
                    "sequence is not a permutation of 0..{len} (offending entry {i})"
                )));
            }
        }
        Ok(Self { n, order })
    }

    /// Builds a sequence from any length that is a power of two.
    pub fn from_order(order: Vec<usize>) -> Result<Self> {
        let n = log2_exact(order.len())?;
        Self::new(n, order)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    /// `ranks()[i]` is the position of sub-channel `i` in the order.
    pub fn ranks(&self) -> Vec<usize> {
        let mut ranks = vec![0; self.order.len()];
        for (r, &i) in self.order.iter().enumerate() {
            ranks[i] = r;
        }
        ranks
    }

    pub fn into_order(self) -> Vec<usize> {
        self.order
    }
}

/// Orders indices by ascending weight; equal weights keep ascending index.
pub fn rank_by_weight(table: &WeightTable) -> Result<ReliabilitySequence> {
    if let Some(pos) = table.weights.iter().position(|w| !w.is_finite()) {
        return Err(Error::NonFinite(pos));
    }
    let w = &table.weights;
    let mut order: Vec<usize> = (0..w.len()).collect();
    order.sort_by(|&a, &b| w[a].total_cmp(&w[b]).then(a.cmp(&b)));
    Ok(ReliabilitySequence { n: table.n, order })
}

/// Keeps the entries below `len`, preserving their order.
pub fn extract_nested(seq: &ReliabilitySequence, len: usize) -> Result<ReliabilitySequence> {
    let n = log2_exact(len)?;
    if len > seq.len() {
        return Err(invalid(format!(
            "cannot extract length {len} from a sequence of length {}",
            seq.len()
        )));
    }
    let order = seq.order.iter().copied().filter(|&i| i < len).collect();
    Ok(ReliabilitySequence { n, order })
}

/// Picks the `k` most reliable sub-channels of a length-`len` code.
pub fn select_code(seq: &ReliabilitySequence, len: usize, k: usize) -> Result<CodeSpec> {
    if k > len {
        return Err(invalid(format!("K = {k} exceeds N = {len}")));
    }
    let nested = extract_nested(seq, len)?;
    let info = nested.order[len - k..].to_vec();
    CodeSpec::new(len, info)
}

/// An `(N, K, I)` polar code with its frozen complement.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodeSpec {
    block_length: usize,
    info: Vec<usize>,
    frozen: Vec<usize>,
    is_frozen: Vec<bool>,
    crc: Option<CrcSpec>,
}

impl CodeSpec {
    /// `info` may be given in any order; it is stored ascending.
    pub fn new(block_length: usize, info: impl IntoIterator<Item = usize>) -> Result<Self> {
        log2_exact(block_length)?;
        let mut is_frozen = vec![true; block_length];
        let mut info_set = Vec::new();
        for i in info {
            if i >= block_length {
                return Err(invalid(format!(
                    "information index {i} outside 0..{block_length}"
                )));
            }
            if !std::mem::replace(&mut is_frozen[i], false) {
                return Err(invalid(format!("duplicate information index {i}")));
            }
            info_set.push(i);
        }
        info_set.sort_unstable();
        let frozen = (0..block_length).filter(|&i| is_frozen[i]).collect();
        Ok(Self {
            block_length,
            info: info_set,
            frozen,
            is_frozen,
            crc: None,
        })
    }

    /// Attaches a CRC whose parity occupies the last `crc.width()`
    /// information positions.
    pub fn with_crc(mut self, crc: CrcSpec) -> Result<Self> {
        if self.info.len() <= crc.width() {
            return Err(invalid(format!(
                "K = {} leaves no payload room for a {}-bit CRC",
                self.info.len(),
                crc.width()
            )));
        }
        self.crc = Some(crc);
        Ok(self)
    }

    pub fn block_length(&self) -> usize {
        self.block_length
    }

    pub fn n(&self) -> u32 {
        self.block_length.trailing_zeros()
    }

    /// Number of information positions, CRC parity included.
    pub fn info_length(&self) -> usize {
        self.info.len()
    }

    /// Message bits carried per block, i.e. info length minus CRC parity.
    pub fn payload_length(&self) -> usize {
        self.info.len() - self.crc.as_ref().map_or(0, CrcSpec::width)
    }

    pub fn info_set(&self) -> &[usize] {
        &self.info
    }

    pub fn frozen_set(&self) -> &[usize] {
        &self.frozen
    }

    pub fn is_frozen(&self, i: usize) -> bool {
        self.is_frozen[i]
    }

    pub fn frozen_mask(&self) -> &[bool] {
        &self.is_frozen
    }

    pub fn crc(&self) -> Option<&CrcSpec> {
        self.crc.as_ref()
    }
}

/// Pairs `(a, b)` with `a < b` whose relative order differs between two
/// sequences restricted to `0..len`.
pub fn discordant_pairs(
    a: &ReliabilitySequence,
    b: &ReliabilitySequence,
    len: usize,
) -> Result<Vec<(usize, usize)>> {
    let ra = extract_nested(a, len)?.ranks();
    let rb = extract_nested(b, len)?.ranks();
    let mut pairs = Vec::new();
    for i in 0..len {
        for j in i + 1..len {
            if (ra[i] < ra[j]) != (rb[i] < rb[j]) {
                pairs.push((i, j));
            }
        }
    }
    Ok(pairs)
}

/// Aligned blocks of length `period` whose two halves are ordered
/// differently (second half shifted down by `period / 2`).
///
/// Returns the block numbers `k` for blocks starting at `k * period`.
pub fn half_order_violations(seq: &ReliabilitySequence, period: usize) -> Result<Vec<usize>> {
    log2_exact(period)?;
    if period < 2 || period > seq.len() {
        return Err(invalid(format!(
            "period {period} must lie in 2..={}",
            seq.len()
        )));
    }
    let half = period / 2;
    let blocks = seq.len() / period;
    let mut first: Vec<Vec<usize>> = vec![Vec::with_capacity(half); blocks];
    let mut second: Vec<Vec<usize>> = vec![Vec::with_capacity(half); blocks];
    for &i in &seq.order {
        let (block, offset) = (i / period, i % period);
        if offset < half {
            first[block].push(offset);
        } else {
            second[block].push(offset - half);
        }
    }
    Ok((0..blocks).filter(|&k| first[k] != second[k]).collect())
}
