//! Soft demapping under Gaussian channel laws and GMI estimation.
//!
//! LLRs use `L = ln(P[set with bit 0] / P[set with bit 1])`. The GMI
//! penalty for a transmitted bit `b` is `log2(1 + exp(-(1-2b)·L))`, which
//! is small when the LLR favours the transmitted bit.

mod awgn;
mod gmi;
mod llr;
mod noise;
pub mod quadrature;

pub use awgn::{awgn_gmi_reference, sigma2_for_snr_db, snr_db_for_sigma2, AwgnMethod};
pub use gmi::{bit_penalty, gmi_from_llrs};
pub use llr::{compute_llrs, compute_llrs_clamped, gaussian_logpdf, LlrBatch, DEFAULT_LLR_CLAMP};
pub use noise::{
    estimate_iid_sigma2, estimate_point_covariances, NoiseModel, NoiseVariance, DemapperKind,
    DEFAULT_MIN_OCCURRENCES, MIN_SYMBOLS_FOR_VARIANCE,
};
