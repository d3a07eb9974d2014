use crate::error::{invalid, Error, Result};
use crate::reliability::{check_index, CodeSpec};

/// Entry `(row, col)` of the `n`-fold Kronecker power of `[[1, 1], [0, 1]]`:
/// one exactly when the set bits of `row` are a subset of those of `col`.
pub fn generator_entry(row: usize, col: usize, n: u32) -> Result<u8> {
    check_index(row, n)?;
    check_index(col, n)?;
    Ok(u8::from(row & !col == 0))
}

/// In-place butterfly network, `log2 N` stages of `N/2` XORs.
///
/// Computes `x = G·d`, i.e. `x_i = ⊕_{j ⊇ i} d_j`, with `G` the matrix of
/// [`generator_entry`]. Sub-channel 0 is then the one decided first by a
/// successive-cancellation decoder and the least reliable. The transform
/// is its own inverse.
pub fn polar_transform(bits: &mut [u8]) {
    let len = bits.len();
    debug_assert!(len.is_power_of_two());
    let mut half = 1;
    while half < len {
        for block in bits.chunks_exact_mut(2 * half) {
            let (lo, hi) = block.split_at_mut(half);
            for (a, &b) in lo.iter_mut().zip(hi.iter()) {
                *a ^= b;
            }
        }
        half *= 2;
    }
}

/// Places `u` on the information positions (ascending index), zeros on the
/// frozen ones, and transforms.
pub fn encode(spec: &CodeSpec, u: &[u8]) -> Result<Vec<u8>> {
    if u.len() != spec.info_length() {
        return Err(Error::LengthMismatch {
            expected: spec.info_length(),
            actual: u.len(),
        });
    }
    if let Some(&b) = u.iter().find(|&&b| b > 1) {
        return Err(invalid(format!("bit value {b} is not 0 or 1")));
    }
    let mut d = vec![0u8; spec.block_length()];
    for (&pos, &bit) in spec.info_set().iter().zip(u) {
        d[pos] = bit;
    }
    polar_transform(&mut d);
    Ok(d)
}

/// Appends CRC parity (if the code carries one) and encodes.
pub fn encode_message(spec: &CodeSpec, message: &[u8]) -> Result<Vec<u8>> {
    match spec.crc() {
        Some(crc) => {
            if message.len() != spec.payload_length() {
                return Err(Error::LengthMismatch {
                    expected: spec.payload_length(),
                    actual: message.len(),
                });
            }
            encode(spec, &crc.attach(message))
        }
        None => encode(spec, message),
    }
}
