//! Required-SNR interpolation.

use std::fmt;

use super::BlerPoint;

/// Why no required SNR could be derived.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Unbracketed(pub String);

impl fmt::Display for Unbracketed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Unbracketed {}

/// SNR at which the BLER curve crosses `target`, interpolating linearly in
/// `(SNR dB, log10 BLER)`.
///
/// Points must be sorted by SNR. When the curve crosses the target more
/// than once the last downward crossing is used; zero-error points carry no
/// usable level and are skipped.
pub fn required_snr(points: &[BlerPoint], target: f64) -> Result<f64, Unbracketed> {
    if !(target > 0.0 && target < 1.0) {
        return Err(Unbracketed(format!("target BLER {target} outside (0, 1)")));
    }
    let usable: Vec<&BlerPoint> = points.iter().filter(|p| p.block_errors > 0).collect();
    if usable.is_empty() {
        return Err(Unbracketed("no point with block errors".into()));
    }
    for k in (0..usable.len()).rev() {
        let hi = usable[k];
        if hi.bler == target {
            return Ok(hi.snr_db);
        }
        if k == 0 {
            break;
        }
        let lo = usable[k - 1];
        if lo.bler > target && hi.bler < target {
            let (y0, y1, yt) = (lo.bler.log10(), hi.bler.log10(), target.log10());
            return Ok(lo.snr_db + (yt - y0) / (y1 - y0) * (hi.snr_db - lo.snr_db));
        }
    }
    let best = usable.iter().map(|p| p.bler).fold(f64::INFINITY, f64::min);
    let worst = usable.iter().map(|p| p.bler).fold(0.0, f64::max);
    Err(Unbracketed(format!(
        "target {target:e} not bracketed by measured BLER range [{best:e}, {worst:e}]"
    )))
}
