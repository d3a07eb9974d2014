//! Polar encoding, CRC attachment and SC-family decoding.

mod crc;
mod decoder;
mod encoder;

pub use crc::{CrcSpec, TABLE_I_CRC19};
pub use decoder::{
    ca_scl_decode, decode, f_minsum, g_update, penalty, sc_decode, scl_decode, DecodeCandidate,
    DecodeResult, DecoderKind,
};
pub use encoder::{encode, encode_message, generator_entry, polar_transform};
