use alloc::vec::Vec;

use crate::{Error, Point4, Result};

/// Aligned transmitted and received 4D symbols of one channel under test.
#[derive(Debug, Clone, PartialEq)]
pub struct SymbolBatch {
    /// `Ns * m` transmitted bits, `b1` first within each symbol.
    pub tx_bits: Vec<u8>,
    pub tx_indices: Vec<usize>,
    pub tx_points: Vec<Point4>,
    pub rx_points: Vec<Point4>,
}

impl SymbolBatch {
    pub fn new(
        tx_bits: Vec<u8>,
        tx_indices: Vec<usize>,
        tx_points: Vec<Point4>,
        rx_points: Vec<Point4>,
    ) -> Result<Self> {
        let ns = tx_indices.len();
        for len in [tx_points.len(), rx_points.len()] {
            if len != ns {
                return Err(Error::LengthMismatch {
                    expected: ns,
                    actual: len,
                });
            }
        }
        if ns == 0 || !tx_bits.len().is_multiple_of(ns) {
            return Err(Error::LengthMismatch {
                expected: ns,
                actual: tx_bits.len(),
            });
        }
        Ok(Self {
            tx_bits,
            tx_indices,
            tx_points,
            rx_points,
        })
    }

    pub fn len(&self) -> usize {
        self.tx_indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tx_indices.is_empty()
    }

    pub fn bits_per_symbol(&self) -> usize {
        self.tx_bits.len() / self.len()
    }
}
