//! Bit vectors as hex strings: first bit is the most significant bit of the
//! first digit, the last digit is zero-padded.

pub fn encode_bits(bits: &[u8]) -> String {
    bits.chunks(4)
        .map(|c| {
            let v = c
                .iter()
                .enumerate()
                .fold(0u32, |acc, (k, &b)| acc | (u32::from(b) << (3 - k)));
            char::from_digit(v, 16).expect("nibble")
        })
        .collect()
}

pub fn decode_bits(text: &str, len: usize) -> Result<Vec<u8>, String> {
    let digits = len.div_ceil(4);
    let text = text.trim();
    let text = text.strip_prefix("0x").unwrap_or(text);
    if text.len() != digits {
        return Err(format!(
            "expected {digits} hex digits for {len} bits, got {}",
            text.len()
        ));
    }
    let mut bits = Vec::with_capacity(digits * 4);
    for ch in text.chars() {
        let v = ch
            .to_digit(16)
            .ok_or_else(|| format!("`{ch}` is not a hex digit"))?;
        bits.extend((0..4).rev().map(|k| ((v >> k) & 1) as u8));
    }
    if bits[len..].iter().any(|&b| b != 0) {
        return Err("padding bits must be zero".into());
    }
    bits.truncate(len);
    Ok(bits)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let bits = [1, 0, 1, 1, 0, 1];
        assert_eq!(encode_bits(&bits), "b4");
        assert_eq!(decode_bits("b4", 6).unwrap(), bits);
        assert_eq!(decode_bits("B4", 6).unwrap(), bits);
        assert!(decode_bits("b5", 6).is_err());
        assert!(decode_bits("b", 6).is_err());
        assert!(decode_bits("g4", 6).is_err());
        assert_eq!(encode_bits(&[]), "");
    }
}
