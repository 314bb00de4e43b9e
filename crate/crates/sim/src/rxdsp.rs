//! Channel selection, matched filtering and genie-aided recovery.

use prs4d_core::genie::{apply_scale, compensate_phase, PhaseWindow, ScaleEstimator};
use prs4d_core::pulse::rrc_taps;
use prs4d_core::{Point4, SymbolBatch};

use crate::error::{Result, SimError};
use crate::signal::{shift_spectrum, snap_to_bin, SampledSignal, Spectral};
use crate::txdsp::{filter_circular, resample_spectrum, TxFrame, SHAPING_SPS};

/// Receiver settings shared by every channel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RxParams {
    pub baud_hz: f64,
    pub rolloff: f64,
    pub rrc_span: usize,
    pub phase_window: PhaseWindow,
    pub scale: ScaleEstimator,
}

/// Shifts the channel at `offset_hz` to baseband, low-passes it down to
/// [`SHAPING_SPS`], applies the matched RRC and samples one point per
/// symbol with the transmitter and receiver filter delays removed.
/// Values stay in √W.
pub fn channel_select(signal: &SampledSignal, offset_hz: f64, baud_hz: f64, rolloff: f64, rrc_span: usize) -> Result<Vec<Point4>> {
    let rel = offset_hz - signal.f_center;
    if rel.abs() + 0.5 * (1.0 + rolloff) * baud_hz > 0.5 * signal.fs {
        return Err(SimError::OutOfBand { offset_hz });
    }
    let n_symbols_f = signal.len() as f64 * baud_hz / signal.fs;
    let n_symbols = n_symbols_f.round() as usize;
    if n_symbols == 0 || (n_symbols_f - n_symbols as f64).abs() > 1e-6 {
        return Err(SimError::Shape("burst is not a whole number of symbols".into()));
    }
    let len_out = n_symbols * SHAPING_SPS;
    let (bins, _) = snap_to_bin(rel, signal.len(), signal.fs);
    let mut big = Spectral::new(signal.len());
    let mut small = Spectral::new(len_out);
    let gain = len_out as f64 / signal.len() as f64;
    let mut pols = [signal.x.clone(), signal.y.clone()];
    for pol in pols.iter_mut() {
        big.forward(pol);
        let mut spec = resample_spectrum(&shift_spectrum(pol, -bins), len_out);
        small.inverse(&mut spec);
        spec.iter_mut().for_each(|v| *v *= gain);
        *pol = spec;
    }
    let [x, y] = pols;
    let mut base = SampledSignal::new(x, y, SHAPING_SPS as f64 * baud_hz)?;
    filter_circular(&mut base, &rrc_taps(SHAPING_SPS, rolloff, rrc_span)?);
    // TX delay is rrc_span/2 symbols; the matched filter adds as much again.
    let delay = rrc_span * SHAPING_SPS;
    Ok((0..n_symbols)
        .map(|k| {
            let i = (k * SHAPING_SPS + delay) % len_out;
            [base.x[i].re, base.x[i].im, base.y[i].re, base.y[i].im]
        })
        .collect())
}

/// Full receiver for channel `index` of `frame`: selection, genie phase,
/// genie scale. Output is on the constellation scale.
pub fn receive(signal: &SampledSignal, frame: &TxFrame, index: usize, p: &RxParams) -> Result<SymbolBatch> {
    let offset = *frame
        .offsets_hz
        .get(index)
        .ok_or_else(|| SimError::Shape(format!("no channel {index}")))?;
    let raw = channel_select(signal, offset, p.baud_hz, p.rolloff, p.rrc_span)?;
    let tx = &frame.symbols[index];
    if raw.len() != tx.len() {
        return Err(SimError::Shape(format!("received {} symbols, sent {}", raw.len(), tx.len())));
    }
    let rotated = compensate_phase(&raw, tx, p.phase_window)?;
    let scaled = apply_scale(&rotated, tx, p.scale)?;
    Ok(SymbolBatch::new(
        frame.bits[index].clone(),
        frame.indices[index].clone(),
        tx.clone(),
        scaled,
    )?)
}

/// `10·log10(Σ‖e‖² / Σ‖tx‖²)` of an aligned batch.
pub fn evm_db(rx: &[Point4], tx: &[Point4]) -> f64 {
    let err: f64 = rx
        .iter()
        .zip(tx)
        .map(|(r, t)| r.iter().zip(t).map(|(a, b)| (a - b) * (a - b)).sum::<f64>())
        .sum();
    let reference: f64 = tx.iter().map(|t| t.iter().map(|v| v * v).sum::<f64>()).sum();
    10.0 * (err / reference).log10()
}

