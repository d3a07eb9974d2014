//! Information-length grid for a codeword length.

/// `floor(5N/6 − crc)`, or `None` when negative.
pub fn k_max(len: usize, crc_bits: usize) -> Option<usize> {
    let num = 5 * len as i64 - 6 * crc_bits as i64;
    (num >= 0).then_some((num / 6) as usize)
}

/// Where the rate-1/8 floor applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RateFloor {
    /// Drop every K with `K/N < 1/8`.
    #[default]
    WholeGrid,
    /// Drop only second-segment entries below the floor.
    SecondSegment,
}

/// `8:1:min(200, K_max)` followed by `min(200, K_max):24:K_max`, ascending
/// and deduplicated, with rates below 1/8 removed per `floor`.
pub fn k_grid(len: usize, crc_bits: usize, floor: RateFloor) -> Vec<usize> {
    let Some(kmax) = k_max(len, crc_bits) else {
        return Vec::new();
    };
    if kmax < 8 {
        return Vec::new();
    }
    let knee = kmax.min(200);
    let below_floor = |k: usize| 8 * k < len;
    let first = (8..=knee).filter(|&k| floor == RateFloor::SecondSegment || !below_floor(k));
    let second = (knee..=kmax).step_by(24).filter(|&k| !below_floor(k));
    let mut grid: Vec<usize> = first.chain(second).collect();
    grid.sort_unstable();
    grid.dedup();
    grid
}
