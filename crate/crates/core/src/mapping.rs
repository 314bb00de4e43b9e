//! Bit sources and bit-to-symbol mapping.

use alloc::vec::Vec;

use rand_chacha::ChaCha12Rng;
use rand_core::{RngCore, SeedableRng};

use crate::{Constellation4D, Error, Point4, Result};

/// Deterministic pseudo-random bits (0/1 bytes) from a ChaCha12 stream.
pub fn generate_bits(seed: u64, count: usize) -> Result<Vec<u8>> {
    if count == 0 {
        return Err(Error::InvalidParameter {
            name: "count",
            reason: "must be positive",
        });
    }
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut bits = Vec::with_capacity(count);
    while bits.len() < count {
        let word = rng.next_u64();
        let take = (count - bits.len()).min(64);
        bits.extend((0..take).map(|k| ((word >> k) & 1) as u8));
    }
    Ok(bits)
}

/// Mapped symbols: row indices into the constellation and the points.
#[derive(Debug, Clone, PartialEq)]
pub struct MappedSymbols {
    pub indices: Vec<usize>,
    pub points: Vec<Point4>,
}

/// Maps consecutive `m`-bit groups (first bit is `b1`) through the labeling.
pub fn map_bits_to_symbols(bits: &[u8], c: &Constellation4D) -> Result<MappedSymbols> {
    let m = c.bits_per_symbol() as usize;
    if !bits.len().is_multiple_of(m) {
        return Err(Error::BitCount {
            len: bits.len(),
            bits_per_symbol: m as u32,
        });
    }
    let indices: Vec<usize> = bits
        .chunks_exact(m)
        .map(|group| {
            let label = group.iter().fold(0u32, |acc, &b| (acc << 1) | (b & 1) as u32);
            c.row_of_label(label)
        })
        .collect();
    let points = indices.iter().map(|&i| c.points()[i]).collect();
    Ok(MappedSymbols { indices, points })
}

/// Inverse of [`map_bits_to_symbols`] for one row.
pub fn label_bits(c: &Constellation4D, row: usize) -> Vec<u8> {
    (0..c.bits_per_symbol()).map(|k| c.bit(row, k)).collect()
}
