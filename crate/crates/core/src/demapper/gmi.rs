use super::llr::LlrBatch;
use crate::math::{self, LN_2};
use crate::{Error, Result};

/// `log2(1 + exp(-(1-2b)·L))` for transmitted bit `b`.
#[inline]
pub fn bit_penalty(bit: u8, llr: f64) -> f64 {
    let signed = if bit == 0 { -llr } else { llr };
    math::softplus(signed) / LN_2
}

/// Monte-Carlo GMI in bit per symbol:
/// `m − (1/Ns) Σ_k Σ_j log2(1 + exp(-(1-2b_kj)·L_kj))`.
pub fn gmi_from_llrs(batch: &LlrBatch, bits_per_symbol: usize) -> Result<f64> {
    if batch.bits_per_symbol != bits_per_symbol {
        return Err(Error::LengthMismatch {
            expected: bits_per_symbol,
            actual: batch.bits_per_symbol,
        });
    }
    let ns = batch.symbols();
    if ns == 0 {
        return Err(Error::TooFewSymbols {
            required: 1,
            actual: 0,
        });
    }
    let penalty: f64 = batch
        .bits
        .iter()
        .zip(&batch.llrs)
        .map(|(&b, &l)| bit_penalty(b, l))
        .sum();
    Ok(bits_per_symbol as f64 - penalty / ns as f64)
}
