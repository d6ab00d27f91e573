//! Backscatter frames and modulo-2 differential coding.
//!
//! A frame is `P` pilot bits followed by `I − P` data bits. Bit `b⁽ⁱ⁾` is
//! sent as the tag state `e⁽ⁱ⁾ = e⁽ⁱ⁻¹⁾ ⊕ b⁽ⁱ⁾`, starting from the
//! reference state `e⁽⁰⁾ = 1`. No channel coding is applied.

use alloc::vec::Vec;

use crate::{Error, Result};

/// Reference tag state preceding the first symbol of a frame.
pub const REFERENCE_SYMBOL: u8 = 1;

fn check_binary(xs: &[u8]) -> Result<()> {
    match xs.iter().position(|&x| x > 1) {
        Some(index) => Err(Error::NonBinary {
            index,
            value: xs[index],
        }),
        None => Ok(()),
    }
}

pub fn diff_encode(bits: &[u8], e0: u8) -> Result<Vec<u8>> {
    check_binary(bits)?;
    check_binary(&[e0])?;
    let mut state = e0;
    Ok(bits
        .iter()
        .map(|&b| {
            state ^= b;
            state
        })
        .collect())
}

pub fn diff_decode(encoded: &[u8], e0: u8) -> Result<Vec<u8>> {
    check_binary(encoded)?;
    check_binary(&[e0])?;
    let mut prev = e0;
    Ok(encoded
        .iter()
        .map(|&e| {
            let b = e ^ prev;
            prev = e;
            b
        })
        .collect())
}

/// Fixed pilot block: `P/2` zeros then `P/2` ones.
pub fn pilot_pattern(pilot_bits: usize) -> Result<Vec<u8>> {
    if pilot_bits % 2 != 0 {
        return Err(Error::Frame("pilot count must be even"));
    }
    let half = pilot_bits / 2;
    Ok(core::iter::repeat(0).take(half).chain(core::iter::repeat(1).take(half)).collect())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BackscatterFrame {
    /// Original bits `b`, pilots first.
    pub bits: Vec<u8>,
    pub pilot_count: usize,
    /// Tag states `e`, encoded from [`REFERENCE_SYMBOL`].
    pub encoded: Vec<u8>,
}

impl BackscatterFrame {
    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn data_bits(&self) -> &[u8] {
        &self.bits[self.pilot_count..]
    }

    pub fn pilot_encoded(&self) -> &[u8] {
        &self.encoded[..self.pilot_count]
    }

    /// Tag state immediately before the first data symbol; the receiver knows
    /// it because the pilots are known.
    pub fn data_reference(&self) -> u8 {
        if self.pilot_count == 0 {
            REFERENCE_SYMBOL
        } else {
            self.encoded[self.pilot_count - 1]
        }
    }
}

/// Builds a frame from data bits and `pilot_bits` pilots, then encodes it.
pub fn make_frame(data_bits: &[u8], pilot_bits: usize) -> Result<BackscatterFrame> {
    let mut bits = pilot_pattern(pilot_bits)?;
    check_binary(data_bits)?;
    bits.extend_from_slice(data_bits);
    let encoded = diff_encode(&bits, REFERENCE_SYMBOL)?;
    Ok(BackscatterFrame {
        bits,
        pilot_count: pilot_bits,
        encoded,
    })
}

/// Like [`make_frame`], additionally checking the data length against `I − P`.
pub fn make_frame_for(cfg: &crate::channel::SystemConfig, data_bits: &[u8]) -> Result<BackscatterFrame> {
    if data_bits.len() != cfg.data_bits() {
        return Err(Error::Frame("data length must equal frame bits minus pilot bits"));
    }
    make_frame(data_bits, cfg.pilot_bits)
}
