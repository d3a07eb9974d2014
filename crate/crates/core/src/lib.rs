//! Polar code construction with the polarization-weight family.
//!
//! The crate covers the whole path from reliability estimation to measured
//! block error rates:
//!
//! * [`reliability`]: sub-channel indices, weight tables, reliability
//!   sequences and code specifications.
//! * [`construction`]: PW, higher-order PW, extended PW, Gaussian
//!   approximation and BEC Bhattacharyya weights.
//! * [`codec`]: butterfly encoder, the 19-bit CRC, SC / SCL / CRC-aided SCL
//!   decoding with min-sum LLR arithmetic.
//! * [`channel`]: QPSK over AWGN with LLR demodulation.
//! * [`simulator`]: Monte-Carlo BLER points, SNR sweeps, required-SNR
//!   interpolation and the K grid.
//!
//! ```
//! use pwpolar::construction::Method;
//! use pwpolar::reliability::select_code;
//!
//! let seq = Method::pw_default().sequence(6).unwrap();
//! let code = select_code(&seq, 64, 57).unwrap();
//! assert_eq!(code.frozen_set(), &[0, 1, 2, 3, 4, 8, 16]);
//! ```

// `!(x > 0.0)` style guards are deliberate: they reject NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod channel;
pub mod codec;
pub mod construction;
pub mod error;
pub mod reliability;
pub mod seqfile;
pub mod simulator;

pub use channel::{ChannelParams, Symbol};
pub use codec::{CrcSpec, DecodeCandidate, DecodeResult, DecoderKind};
pub use construction::Method;
pub use error::{Error, Result};
pub use reliability::{CodeSpec, IndexBits, ReliabilitySequence, WeightTable};
pub use simulator::{BlerPoint, SimConfig, SweepResult};
