//! Successive-cancellation decoding with min-sum LLR arithmetic.
//!
//! LLRs are positive for bit 0. The path metric adds `|λ|` whenever a
//! decision (frozen or not) contradicts the sign of its leaf LLR `λ`.

use std::cmp::Ordering;

use crate::error::{invalid, Error, Result};
use crate::reliability::CodeSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DecoderKind {
    Sc,
    Scl { list: usize },
    CaScl { list: usize, check: usize },
}

impl std::fmt::Display for DecoderKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            DecoderKind::Sc => f.write_str("SC"),
            DecoderKind::Scl { list } => write!(f, "SCL-{list}"),
            DecoderKind::CaScl { list, check } => write!(f, "CA-SCL-{list}/{check}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecodeCandidate {
    /// Decoded source word `d`, frozen positions zero.
    pub source_word: Vec<u8>,
    /// `d` restricted to the information set, CRC parity included.
    pub info_bits: Vec<u8>,
    pub path_metric: f64,
    pub crc_pass: Option<bool>,
}

impl DecodeCandidate {
    /// Message part of the information bits (parity stripped).
    pub fn payload(&self, spec: &CodeSpec) -> &[u8] {
        &self.info_bits[..spec.payload_length()]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecodeResult {
    pub selected: DecodeCandidate,
    /// Ascending path metric.
    pub candidates: Vec<DecodeCandidate>,
    pub decoder_kind: DecoderKind,
}

/// Check-node update, `sign(a)·sign(b)·min(|a|, |b|)`.
#[inline]
pub fn f_minsum(a: f64, b: f64) -> f64 {
    let m = a.abs().min(b.abs());
    if (a < 0.0) != (b < 0.0) {
        -m
    } else {
        m
    }
}

/// Variable-node update given the partial sum `u` of the upper branch.
#[inline]
pub fn g_update(a: f64, b: f64, u: u8) -> f64 {
    if u == 0 {
        b + a
    } else {
        b - a
    }
}

#[inline]
fn hard(llr: f64) -> u8 {
    u8::from(llr < 0.0)
}

/// Metric increment for deciding `bit` against leaf LLR `llr`.
#[inline]
pub fn penalty(llr: f64, bit: u8) -> f64 {
    if bit == hard(llr) {
        0.0
    } else {
        llr.abs()
    }
}

#[inline]
fn level_offset(s: u32) -> usize {
    (1usize << s) - 1
}

/// One decoding path: the LLRs and partial sums of the current root-to-leaf
/// branch, stored level by level (level `s` holds `2^s` entries).
#[derive(Debug, Clone)]
struct Path {
    n: u32,
    alpha: Vec<f64>,
    left_sums: Vec<u8>,
    decisions: Vec<u8>,
    metric: f64,
}

impl Path {
    fn new(n: u32) -> Self {
        let inner = (1usize << n) - 1;
        Self {
            n,
            alpha: vec![0.0; inner],
            left_sums: vec![0; inner],
            decisions: Vec::with_capacity(1 << n),
            metric: 0.0,
        }
    }

    /// LLR of leaf `i`. Leaves must be visited in order.
    fn leaf_llr(&mut self, i: usize, channel: &[f64]) -> f64 {
        let n = self.n;
        if n == 0 {
            return channel[0];
        }
        let start = if i == 0 { n - 1 } else { i.trailing_zeros() };
        for s in (0..=start).rev() {
            let half = 1usize << s;
            let right = (i >> s) & 1 == 1;
            let (lo, hi) = self.alpha.split_at_mut(level_offset(s + 1));
            let parent: &[f64] = if s + 1 == n { channel } else { &hi[..2 * half] };
            let child = &mut lo[level_offset(s)..level_offset(s) + half];
            let (pa, pb) = parent.split_at(half);
            if right {
                let sums = &self.left_sums[level_offset(s)..level_offset(s) + half];
                for k in 0..half {
                    child[k] = g_update(pa[k], pb[k], sums[k]);
                }
            } else {
                for k in 0..half {
                    child[k] = f_minsum(pa[k], pb[k]);
                }
            }
        }
        self.alpha[0]
    }

    /// Records decision `bit` for leaf `i` and propagates partial sums.
    fn commit(&mut self, i: usize, bit: u8, scratch: &mut [u8]) {
        self.decisions.push(bit);
        let n = self.n;
        if n == 0 {
            return;
        }
        scratch[0] = bit;
        let mut s = 0u32;
        while s < n && (i >> s) & 1 == 1 {
            let half = 1usize << s;
            let left = &self.left_sums[level_offset(s)..level_offset(s) + half];
            for k in 0..half {
                let right = scratch[k];
                scratch[k + half] = right;
                scratch[k] = left[k] ^ right;
            }
            s += 1;
        }
        if s < n {
            let half = 1usize << s;
            self.left_sums[level_offset(s)..level_offset(s) + half]
                .copy_from_slice(&scratch[..half]);
        }
    }

    fn into_candidate(self, spec: &CodeSpec) -> DecodeCandidate {
        let info_bits = spec.info_set().iter().map(|&p| self.decisions[p]).collect();
        DecodeCandidate {
            source_word: self.decisions,
            info_bits,
            path_metric: self.metric,
            crc_pass: None,
        }
    }
}

fn check_llr(llr: &[f64], spec: &CodeSpec) -> Result<()> {
    if llr.len() != spec.block_length() {
        return Err(Error::LengthMismatch {
            expected: spec.block_length(),
            actual: llr.len(),
        });
    }
    if let Some(pos) = llr.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFinite(pos));
    }
    Ok(())
}

/// Plain successive cancellation: frozen leaves take 0, information leaves
/// the hard decision of their LLR.
pub fn sc_decode(llr: &[f64], spec: &CodeSpec) -> Result<DecodeResult> {
    check_llr(llr, spec)?;
    let mut path = Path::new(spec.n());
    let mut scratch = vec![0u8; spec.block_length()];
    for i in 0..spec.block_length() {
        let lambda = path.leaf_llr(i, llr);
        let bit = if spec.is_frozen(i) { 0 } else { hard(lambda) };
        path.metric += penalty(lambda, bit);
        path.commit(i, bit, &mut scratch);
    }
    let selected = path.into_candidate(spec);
    Ok(DecodeResult {
        candidates: vec![selected.clone()],
        selected,
        decoder_kind: DecoderKind::Sc,
    })
}

/// Lower metric first; equal metrics prefer the lexicographically smaller
/// decision history.
fn rank(a: (f64, &[u8], u8), b: (f64, &[u8], u8)) -> Ordering {
    a.0.total_cmp(&b.0)
        .then_with(|| a.1.cmp(b.1))
        .then(a.2.cmp(&b.2))
}

fn list_decode(llr: &[f64], spec: &CodeSpec, list: usize) -> Vec<Path> {
    let len = spec.block_length();
    let mut scratch = vec![0u8; len];
    let mut paths = vec![Path::new(spec.n())];
    let mut leaf = Vec::with_capacity(list);
    let mut forks: Vec<(f64, usize, u8)> = Vec::with_capacity(2 * list);
    for i in 0..len {
        leaf.clear();
        leaf.extend(paths.iter_mut().map(|p| p.leaf_llr(i, llr)));
        if spec.is_frozen(i) {
            for (p, &lambda) in paths.iter_mut().zip(&leaf) {
                p.metric += penalty(lambda, 0);
                p.commit(i, 0, &mut scratch);
            }
            continue;
        }
        forks.clear();
        for (k, (p, &lambda)) in paths.iter().zip(&leaf).enumerate() {
            for bit in [0u8, 1] {
                forks.push((p.metric + penalty(lambda, bit), k, bit));
            }
        }
        forks.sort_by(|a, b| {
            rank(
                (a.0, &paths[a.1].decisions, a.2),
                (b.0, &paths[b.1].decisions, b.2),
            )
        });
        forks.truncate(list);

        let mut kept: Vec<[bool; 2]> = vec![[false; 2]; paths.len()];
        for &(_, k, bit) in &forks {
            kept[k][bit as usize] = true;
        }
        let mut slots: Vec<Option<Path>> = paths.drain(..).map(Some).collect();
        let mut next = Vec::with_capacity(forks.len());
        for &(metric, k, bit) in &forks {
            let mut p = if kept[k] == [true, true] {
                // The other branch takes the original later (or already did).
                kept[k][bit as usize] = false;
                slots[k].as_ref().expect("parent still present").clone()
            } else {
                slots[k].take().expect("each parent moved once")
            };
            p.metric = metric;
            p.commit(i, bit, &mut scratch);
            next.push(p);
        }
        paths = next;
    }
    paths.sort_by(|a, b| rank((a.metric, &a.decisions, 0), (b.metric, &b.decisions, 0)));
    paths
}

/// List decoding keeping the `list` best paths at every information leaf.
pub fn scl_decode(llr: &[f64], spec: &CodeSpec, list: usize) -> Result<DecodeResult> {
    if list < 1 {
        return Err(invalid("list size must be at least 1"));
    }
    check_llr(llr, spec)?;
    let candidates: Vec<DecodeCandidate> = list_decode(llr, spec, list)
        .into_iter()
        .map(|p| p.into_candidate(spec))
        .collect();
    Ok(DecodeResult {
        selected: candidates[0].clone(),
        candidates,
        decoder_kind: DecoderKind::Scl { list },
    })
}

/// CRC-aided list decoding: the first of the `check` best paths whose
/// information bits pass the CRC is selected; if none passes, the best
/// path is returned with `crc_pass = Some(false)`.
pub fn ca_scl_decode(
    llr: &[f64],
    spec: &CodeSpec,
    list: usize,
    check: usize,
) -> Result<DecodeResult> {
    let crc = spec
        .crc()
        .ok_or_else(|| invalid("CRC-aided decoding needs a code with a CRC"))?;
    if spec.info_length() <= crc.width() {
        return Err(invalid(format!(
            "K = {} leaves no payload room for a {}-bit CRC",
            spec.info_length(),
            crc.width()
        )));
    }
    if check < 1 || check > list {
        return Err(invalid(format!(
            "check depth {check} must lie in 1..={list}"
        )));
    }
    let mut result = scl_decode(llr, spec, list)?;
    let mut chosen = None;
    for (rank, cand) in result.candidates.iter_mut().take(check).enumerate() {
        let pass = crc.check(&cand.info_bits)?;
        cand.crc_pass = Some(pass);
        if pass && chosen.is_none() {
            chosen = Some(rank);
        }
    }
    result.selected = match chosen {
        Some(r) => result.candidates[r].clone(),
        None => DecodeCandidate {
            crc_pass: Some(false),
            ..result.candidates[0].clone()
        },
    };
    result.decoder_kind = DecoderKind::CaScl { list, check };
    Ok(result)
}

/// Dispatches on `kind`.
pub fn decode(llr: &[f64], spec: &CodeSpec, kind: DecoderKind) -> Result<DecodeResult> {
    match kind {
        DecoderKind::Sc => sc_decode(llr, spec),
        DecoderKind::Scl { list } => scl_decode(llr, spec, list),
        DecoderKind::CaScl { list, check } => ca_scl_decode(llr, spec, list, check),
    }
}
