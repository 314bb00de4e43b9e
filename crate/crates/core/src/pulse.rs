//! Root-raised-cosine pulse.

use alloc::vec::Vec;

use crate::math::{self, PI};
use crate::{Error, Result};

/// Unit-energy root-raised-cosine taps, `span_symbols * sps + 1` long.
///
/// Tap `k` samples the pulse at `t = (k - span_symbols*sps/2) / sps` symbol
/// periods, so the filter delay is `span_symbols / 2` symbols.
pub fn rrc_taps(sps: usize, rolloff: f64, span_symbols: usize) -> Result<Vec<f64>> {
    if sps < 2 {
        return Err(Error::InvalidParameter {
            name: "sps",
            reason: "need at least 2 samples per symbol",
        });
    }
    if !(rolloff > 0.0 && rolloff <= 1.0) {
        return Err(Error::InvalidParameter {
            name: "rolloff",
            reason: "must lie in (0, 1]",
        });
    }
    if span_symbols == 0 || !span_symbols.is_multiple_of(2) {
        return Err(Error::InvalidParameter {
            name: "span_symbols",
            reason: "must be even and positive",
        });
    }
    let half = (span_symbols * sps / 2) as isize;
    let mut taps: Vec<f64> = (-half..=half)
        .map(|k| rrc_value(k as f64 / sps as f64, rolloff))
        .collect();
    // mirror explicitly so the filter is symmetric to the last bit
    let len = taps.len();
    for k in 0..len / 2 {
        taps[len - 1 - k] = taps[k];
    }
    let energy: f64 = taps.iter().map(|t| t * t).sum();
    let scale = 1.0 / math::sqrt(energy);
    taps.iter_mut().for_each(|t| *t *= scale);
    Ok(taps)
}

/// Continuous RRC impulse response at `t` symbol periods (unnormalized).
fn rrc_value(t: f64, beta: f64) -> f64 {
    if t == 0.0 {
        return 1.0 - beta + 4.0 * beta / PI;
    }
    let singular = 1.0 / (4.0 * beta);
    if math::abs(math::abs(t) - singular) < 1e-12 {
        let a = PI / (4.0 * beta);
        return beta / math::sqrt(2.0)
            * ((1.0 + 2.0 / PI) * math::sin(a) + (1.0 - 2.0 / PI) * math::cos(a));
    }
    let num = math::sin(PI * t * (1.0 - beta)) + 4.0 * beta * t * math::cos(PI * t * (1.0 + beta));
    let den = PI * t * (1.0 - (4.0 * beta * t) * (4.0 * beta * t));
    num / den
}
