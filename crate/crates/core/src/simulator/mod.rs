//! Monte-Carlo BLER evaluation over QPSK/AWGN.
//!
//! Every simulated block draws its message and noise from its own
//! ChaCha stream, keyed by the master seed, the SNR grid index and the block
//! index. Blocks run in parallel batches but are tallied in block order, so
//! the stop rule fires at the same block whatever the thread count and
//! results are a pure function of the configuration.

mod interp;
mod kgrid;
mod output;

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use interp::{required_snr, Unbracketed};
pub use kgrid::{k_grid, k_max, RateFloor};
pub use output::{comparison_csv, format_db, format_sig6, parse_config, sweep_csv};

use crate::channel::{awgn_add, qpsk_llr, qpsk_modulate, ChannelParams};
use crate::codec::{decode, encode_message, CrcSpec, DecoderKind};
use crate::construction::Method;
use crate::error::{invalid, Error, Result};
use crate::reliability::{log2_exact, select_code, CodeSpec};

/// Decoder selection for a simulation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum DecoderSpec {
    Sc,
    Scl {
        list: usize,
    },
    CaScl {
        list: usize,
        check: usize,
    },
    /// Deterministic stand-in whose BLER is exactly `10^(−snr_db)`; used to
    /// exercise the sweep machinery.
    Synthetic,
}

impl DecoderSpec {
    pub fn kind(&self) -> Option<DecoderKind> {
        match *self {
            DecoderSpec::Sc => Some(DecoderKind::Sc),
            DecoderSpec::Scl { list } => Some(DecoderKind::Scl { list }),
            DecoderSpec::CaScl { list, check } => Some(DecoderKind::CaScl { list, check }),
            DecoderSpec::Synthetic => None,
        }
    }
}

impl fmt::Display for DecoderSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DecoderSpec::Sc => f.write_str("sc"),
            DecoderSpec::Scl { list } => write!(f, "scl{list}"),
            DecoderSpec::CaScl { list, check } => write!(f, "ca-scl{list}/{check}"),
            DecoderSpec::Synthetic => f.write_str("stub"),
        }
    }
}

impl FromStr for DecoderSpec {
    type Err = Error;

    /// `sc`, `scl<L>`, `ca-scl<L>/<T>` or `stub`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase();
        let bad = || {
            invalid(format!(
                "unknown decoder `{s}` (expected sc, sclL, ca-sclL/T or stub)"
            ))
        };
        let num = |t: &str| t.parse::<usize>().map_err(|_| bad());
        match s.as_str() {
            "sc" => Ok(DecoderSpec::Sc),
            "stub" => Ok(DecoderSpec::Synthetic),
            _ => {
                if let Some(rest) = s.strip_prefix("ca-scl") {
                    let (l, t) = rest.split_once('/').ok_or_else(bad)?;
                    Ok(DecoderSpec::CaScl {
                        list: num(l)?,
                        check: num(t)?,
                    })
                } else if let Some(l) = s.strip_prefix("scl") {
                    Ok(DecoderSpec::Scl { list: num(l)? })
                } else {
                    Err(bad())
                }
            }
        }
    }
}

impl From<DecoderSpec> for String {
    fn from(d: DecoderSpec) -> String {
        d.to_string()
    }
}

impl TryFrom<String> for DecoderSpec {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

/// Inclusive SNR grid in dB.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SnrGrid {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl SnrGrid {
    pub fn single(snr_db: f64) -> Self {
        Self {
            start: snr_db,
            stop: snr_db,
            step: 0.1,
        }
    }

    pub fn points(&self) -> Vec<f64> {
        let count = ((self.stop - self.start) / self.step + 1e-9).floor();
        let count = if count >= 0.0 { count as usize + 1 } else { 0 };
        (0..count)
            .map(|k| {
                // Snap to 1e-9 dB so accumulated steps print cleanly.
                let x = self.start + self.step * k as f64;
                (x * 1e9).round() / 1e9
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    /// Codeword length `N`.
    pub n: usize,
    /// Message bits per block, CRC parity excluded.
    pub k: usize,
    /// Construction method descriptor.
    pub method: String,
    pub crc: bool,
    pub decoder: DecoderSpec,
    pub snr: SnrGrid,
    pub min_errors: u64,
    pub max_blocks: u64,
    pub seed: u64,
    pub target_bler: f64,
    pub early_exit: EarlyExit,
}

/// When a sweep may stop before the end of its grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EarlyExit {
    /// Run every grid point.
    Off,
    /// Stop after two consecutive points below `target_bler / 10`.
    #[default]
    Decade,
    /// Stop at the first point below the target once a point above it has
    /// been seen.
    Crossing,
}

impl FromStr for EarlyExit {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "off" | "false" | "no" => Ok(EarlyExit::Off),
            "decade" | "true" | "yes" => Ok(EarlyExit::Decade),
            "crossing" => Ok(EarlyExit::Crossing),
            other => Err(invalid(format!(
                "unknown early-exit rule `{other}` (expected off, decade or crossing)"
            ))),
        }
    }
}

impl fmt::Display for EarlyExit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EarlyExit::Off => "off",
            EarlyExit::Decade => "decade",
            EarlyExit::Crossing => "crossing",
        })
    }
}

/// Error blocks per point used with `paper_fidelity`.
pub const FIDELITY_MIN_ERRORS: u64 = 2000;
pub const DESK_MIN_ERRORS: u64 = 200;
pub const DESK_MAX_BLOCKS: u64 = 1_000_000;

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            n: 64,
            k: 32,
            method: "pw".into(),
            crc: false,
            decoder: DecoderSpec::Sc,
            snr: SnrGrid {
                start: 0.0,
                stop: 6.0,
                step: 0.1,
            },
            min_errors: DESK_MIN_ERRORS,
            max_blocks: DESK_MAX_BLOCKS,
            seed: 0,
            target_bler: 1e-3,
            early_exit: EarlyExit::Decade,
        }
    }
}

impl SimConfig {
    /// Full-precision stop rules: 2000 error blocks, 0.1 dB step, no early exit.
    pub fn paper_fidelity(mut self) -> Self {
        self.min_errors = FIDELITY_MIN_ERRORS;
        self.max_blocks = u64::MAX;
        self.snr.step = 0.1;
        self.early_exit = EarlyExit::Off;
        self
    }

    pub fn validate(&self) -> Result<()> {
        log2_exact(self.n)?;
        if !(self.snr.step > 0.0) || !self.snr.start.is_finite() || !self.snr.stop.is_finite() {
            return Err(invalid("SNR grid needs finite bounds and a positive step"));
        }
        if self.min_errors < 1 {
            return Err(invalid("min_errors must be at least 1"));
        }
        if self.max_blocks < 1 {
            return Err(invalid("max_blocks must be at least 1"));
        }
        if !(self.target_bler > 0.0 && self.target_bler < 1.0) {
            return Err(invalid("target_bler must lie in (0, 1)"));
        }
        match self.decoder {
            DecoderSpec::Scl { list } if list < 1 => {
                return Err(invalid("list size must be at least 1"))
            }
            DecoderSpec::CaScl { list, check } => {
                if check < 1 || check > list {
                    return Err(invalid(format!("need L ≥ T ≥ 1, got L={list}, T={check}")));
                }
                if !self.crc {
                    return Err(invalid("CRC-aided decoding needs crc enabled"));
                }
            }
            _ => {}
        }
        let total = self.k + if self.crc { crc_spec().width() } else { 0 };
        if total > self.n {
            return Err(invalid(format!(
                "K = {} (+CRC) does not fit in N = {}",
                self.k, self.n
            )));
        }
        if self.crc && self.k == 0 {
            return Err(invalid("CRC needs at least one message bit"));
        }
        Ok(())
    }

    pub fn method(&self) -> Result<Method> {
        self.method.parse()
    }

    /// Code selected by the configured method, with CRC attached if enabled.
    pub fn code_spec(&self) -> Result<CodeSpec> {
        let method = self.method()?;
        let seq = method.sequence(log2_exact(self.n)?)?;
        let crc_bits = if self.crc { crc_spec().width() } else { 0 };
        let code = select_code(&seq, self.n, self.k + crc_bits)?;
        if self.crc {
            code.with_crc(crc_spec())
        } else {
            Ok(code)
        }
    }
}

fn crc_spec() -> CrcSpec {
    CrcSpec::table_i()
}

/// Monte-Carlo outcome at one SNR.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlerPoint {
    pub snr_db: f64,
    pub blocks: u64,
    pub block_errors: u64,
    pub bler: f64,
    /// The block cap ended the run before the error target was reached.
    #[serde(default)]
    pub saturated: bool,
}

impl BlerPoint {
    pub fn new(snr_db: f64, blocks: u64, block_errors: u64) -> Self {
        assert!(block_errors <= blocks);
        let bler = if blocks == 0 {
            0.0
        } else {
            block_errors as f64 / blocks as f64
        };
        Self {
            snr_db,
            blocks,
            block_errors,
            bler,
            saturated: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub config: SimConfig,
    pub points: Vec<BlerPoint>,
    pub required_snr_db: Option<f64>,
    /// Why `required_snr_db` is absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Generator for block `block` at grid index `snr_index`.
pub fn block_rng(seed: u64, snr_index: u64, block: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(splitmix64(seed ^ splitmix64(snr_index)));
    rng.set_stream(block);
    rng
}

/// Evaluates one SNR point.
pub trait PointSource: Sync {
    fn run_point(&self, snr_index: usize, snr_db: f64) -> Result<BlerPoint>;
}

/// The real encode–transmit–decode loop.
pub struct MonteCarlo {
    config: SimConfig,
    code: CodeSpec,
    kind: DecoderKind,
}

const FIRST_BATCH: u64 = 256;
const MAX_BATCH: u64 = 1 << 15;

impl MonteCarlo {
    pub fn new(config: SimConfig) -> Result<Self> {
        config.validate()?;
        let kind = config
            .decoder
            .kind()
            .ok_or_else(|| invalid("the synthetic decoder has no Monte-Carlo loop"))?;
        let code = config.code_spec()?;
        Ok(Self { config, code, kind })
    }

    pub fn code(&self) -> &CodeSpec {
        &self.code
    }

    /// True when the block decodes to a wrong message.
    fn block_in_error(&self, channel: &ChannelParams, rng: &mut ChaCha8Rng) -> Result<bool> {
        let k = self.code.payload_length();
        let mut message = vec![0u8; k];
        for chunk in message.chunks_mut(64) {
            let word: u64 = rng.random();
            for (j, b) in chunk.iter_mut().enumerate() {
                *b = ((word >> j) & 1) as u8;
            }
        }
        let x = encode_message(&self.code, &message)?;
        let mut symbols = qpsk_modulate(&x)?;
        awgn_add(&mut symbols, channel, rng);
        let llr = if channel.sigma_per_dim() > 0.0 {
            qpsk_llr(&symbols, channel)?
        } else {
            x.iter().map(|&b| if b == 0 { 1e3 } else { -1e3 }).collect()
        };
        let result = decode(&llr, &self.code, self.kind)?;
        Ok(result.selected.payload(&self.code) != message.as_slice())
    }
}

impl PointSource for MonteCarlo {
    fn run_point(&self, snr_index: usize, snr_db: f64) -> Result<BlerPoint> {
        let channel = ChannelParams::from_esn0_db(snr_db)?;
        let (min_errors, cap) = (self.config.min_errors, self.config.max_blocks);
        let (mut blocks, mut errors) = (0u64, 0u64);
        let mut batch = FIRST_BATCH;
        'outer: while blocks < cap {
            let end = blocks + batch.min(cap - blocks);
            let outcomes: Vec<Result<bool>> = (blocks..end)
                .into_par_iter()
                .map(|b| {
                    let mut rng = block_rng(self.config.seed, snr_index as u64, b);
                    self.block_in_error(&channel, &mut rng)
                })
                .collect();
            for outcome in outcomes {
                blocks += 1;
                errors += u64::from(outcome?);
                if errors >= min_errors {
                    break 'outer;
                }
            }
            batch = (batch * 2).min(MAX_BATCH);
        }
        let mut point = BlerPoint::new(snr_db, blocks, errors);
        point.saturated = errors < min_errors;
        Ok(point)
    }
}

/// Point source with `BLER = 10^(−snr_db)` reported over `10^12` blocks.
pub struct SyntheticCurve;

impl PointSource for SyntheticCurve {
    fn run_point(&self, _snr_index: usize, snr_db: f64) -> Result<BlerPoint> {
        const BLOCKS: u64 = 1_000_000_000_000;
        let bler = 10f64.powf(-snr_db).clamp(0.0, 1.0);
        let errors = (bler * BLOCKS as f64).round() as u64;
        Ok(BlerPoint::new(snr_db, BLOCKS, errors))
    }
}

/// Point source matching the configured decoder.
pub fn point_source(config: &SimConfig) -> Result<Box<dyn PointSource>> {
    match config.decoder {
        DecoderSpec::Synthetic => {
            config.validate()?;
            Ok(Box::new(SyntheticCurve))
        }
        _ => Ok(Box::new(MonteCarlo::new(config.clone())?)),
    }
}

/// Runs the grid in ascending SNR and attaches the interpolated required
/// SNR at `config.target_bler`.
pub fn run_sweep_with(config: &SimConfig, source: &dyn PointSource) -> Result<SweepResult> {
    config.validate()?;
    let floor = config.target_bler / 10.0;
    let mut points: Vec<BlerPoint> = Vec::new();
    for (idx, snr) in config.snr.points().into_iter().enumerate() {
        let point = source.run_point(idx, snr)?;
        let below = point.bler < config.target_bler;
        points.push(point);
        let stop = match config.early_exit {
            EarlyExit::Off => false,
            EarlyExit::Decade => {
                let tail = &points[points.len().saturating_sub(2)..];
                tail.len() == 2 && tail.iter().all(|p| p.bler < floor)
            }
            EarlyExit::Crossing => below && points.iter().any(|p| p.bler > config.target_bler),
        };
        if stop {
            break;
        }
    }
    let (required_snr_db, note) = match required_snr(&points, config.target_bler) {
        Ok(v) => (Some(v), None),
        Err(e) => (None, Some(e.0)),
    };
    Ok(SweepResult {
        config: config.clone(),
        points,
        required_snr_db,
        note,
    })
}

pub fn run_sweep(config: &SimConfig) -> Result<SweepResult> {
    run_sweep_with(config, point_source(config)?.as_ref())
}

/// Single-point run at the first grid SNR.
pub fn run_point(config: &SimConfig, snr_db: f64) -> Result<BlerPoint> {
    point_source(config)?.run_point(0, snr_db)
}

/// Required SNR per (K, method).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub n: usize,
    pub methods: Vec<String>,
    pub ks: Vec<usize>,
    /// `required[row][col]` for `ks[row]`, `methods[col]`.
    pub required: Vec<Vec<Option<f64>>>,
}

/// Sweeps every `(K, method)` cell with `base` as template.
pub fn compare_methods(base: &SimConfig, ks: &[usize], methods: &[String]) -> Result<Comparison> {
    let mut required = Vec::with_capacity(ks.len());
    for &k in ks {
        let mut row = Vec::with_capacity(methods.len());
        for m in methods {
            let cfg = SimConfig {
                k,
                method: m.clone(),
                ..base.clone()
            };
            row.push(run_sweep(&cfg)?.required_snr_db);
        }
        required.push(row);
    }
    Ok(Comparison {
        n: base.n,
        methods: methods.to_vec(),
        ks: ks.to_vec(),
        required,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> SimConfig {
        SimConfig {
            n: 16,
            k: 8,
            min_errors: 20,
            max_blocks: 5000,
            seed: 3,
            ..SimConfig::default()
        }
    }

    #[test]
    fn decoder_spec_strings() {
        for s in ["sc", "scl16", "ca-scl16/8", "stub"] {
            assert_eq!(s.parse::<DecoderSpec>().unwrap().to_string(), s);
        }
        assert!("scl".parse::<DecoderSpec>().is_err());
        assert!("list8".parse::<DecoderSpec>().is_err());
    }

    #[test]
    fn grid_points() {
        let g = SnrGrid {
            start: 1.0,
            stop: 2.0,
            step: 0.1,
        };
        let p = g.points();
        assert_eq!(p.len(), 11);
        assert_eq!(p[3], 1.3);
        assert_eq!(SnrGrid::single(2.5).points(), vec![2.5]);
    }

    #[test]
    fn validation() {
        assert!(cfg().validate().is_ok());
        let mut c = cfg();
        c.decoder = DecoderSpec::CaScl { list: 4, check: 8 };
        c.crc = true;
        assert!(c.validate().is_err());
        let mut c = cfg();
        c.decoder = DecoderSpec::CaScl { list: 8, check: 4 };
        assert!(c.validate().is_err(), "CA-SCL without CRC");
        let mut c = cfg();
        c.min_errors = 0;
        assert!(c.validate().is_err());
        let mut c = cfg();
        c.n = 12;
        assert!(c.validate().is_err());
        let mut c = cfg();
        c.k = 17;
        assert!(c.validate().is_err());
    }

    #[test]
    fn noiseless_limit_has_no_errors() {
        let c = SimConfig {
            max_blocks: 2000,
            ..cfg()
        };
        let p = run_point(&c, 40.0).unwrap();
        assert_eq!(p.block_errors, 0);
        assert_eq!(p.blocks, 2000);
        assert!(p.saturated);
    }

    #[test]
    fn all_frozen_code_never_errs() {
        let c = SimConfig {
            k: 0,
            max_blocks: 500,
            ..cfg()
        };
        let p = run_point(&c, -5.0).unwrap();
        assert_eq!((p.blocks, p.block_errors, p.bler), (500, 0, 0.0));
    }

    #[test]
    fn stop_rule_hits_error_target() {
        let p = run_point(&cfg(), 0.0).unwrap();
        assert_eq!(p.block_errors, 20);
        assert!(!p.saturated);
        assert!(p.blocks >= 20);
    }

    #[test]
    fn stream_keys_differ() {
        let a: u64 = block_rng(1, 0, 0).random();
        let b: u64 = block_rng(1, 0, 1).random();
        let c: u64 = block_rng(1, 1, 0).random();
        let a2: u64 = block_rng(1, 0, 0).random();
        assert_eq!(a, a2);
        assert!(a != b && a != c && b != c);
    }

    #[test]
    fn single_point_sweep() {
        let c = SimConfig {
            snr: SnrGrid::single(1.0),
            ..cfg()
        };
        let r = run_sweep(&c).unwrap();
        assert_eq!(r.points.len(), 1);
        assert!(r.required_snr_db.is_none());
        assert!(r.note.is_some());
    }

    #[test]
    fn synthetic_curve_interpolates_to_three() {
        let c = SimConfig {
            decoder: DecoderSpec::Synthetic,
            snr: SnrGrid {
                start: 0.0,
                stop: 6.0,
                step: 0.25,
            },
            ..cfg()
        };
        let r = run_sweep(&c).unwrap();
        assert!((r.required_snr_db.unwrap() - 3.0).abs() < 1e-6);
        // Two points below 1e-4 end the sweep: 4.25 and 4.5 dB.
        assert_eq!(r.points.last().unwrap().snr_db, 4.5);

        let r = run_sweep(&SimConfig {
            early_exit: EarlyExit::Crossing,
            ..c.clone()
        })
        .unwrap();
        assert_eq!(r.points.last().unwrap().snr_db, 3.25);
        assert!((r.required_snr_db.unwrap() - 3.0).abs() < 1e-6);

        let r = run_sweep(&SimConfig {
            early_exit: EarlyExit::Off,
            ..c
        })
        .unwrap();
        assert_eq!(r.points.len(), 25);
    }
}
