//! Pulse shaping and WDM multiplexing.
//!
//! Waveforms are periodic in the burst length: filtering is circular and
//! frequency shifts are whole FFT-bin rotations, so every channel stays
//! exactly periodic and channels on distinct bins are exactly orthogonal
//! over the burst.

use log::warn;
use num_complex::Complex64;
use prs4d_core::constellation::Constellation4D;
use prs4d_core::mapping::{generate_bits, map_bits_to_symbols};
use prs4d_core::pulse::rrc_taps;
use prs4d_core::seed::derive_seed;
use prs4d_core::Point4;

use crate::error::{invalid, Result, SimError};
use crate::signal::{shift_spectrum, snap_to_bin, taps_spectrum, SampledSignal, Spectral};

/// Samples per symbol used while shaping each channel, before the
/// composite is resampled to the simulation rate.
pub const SHAPING_SPS: usize = 2;

/// Relative headroom kept between the occupied WDM band and the sample rate.
pub const BAND_GUARD: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TxParams {
    pub n_channels: usize,
    pub n_symbols: usize,
    pub baud_hz: f64,
    pub rolloff: f64,
    pub spacing_hz: f64,
    pub rrc_span: usize,
    /// Simulation samples per symbol.
    pub sps: usize,
    /// Per-channel launch power.
    pub launch_dbm: f64,
    pub seed: u64,
}

/// Everything the transmitter produced for one run.
#[derive(Debug, Clone)]
pub struct TxFrame {
    pub bits: Vec<Vec<u8>>,
    pub indices: Vec<Vec<usize>>,
    pub symbols: Vec<Vec<Point4>>,
    pub seed: u64,
    pub baud_hz: f64,
    pub rolloff: f64,
    /// Realized (bin-snapped) channel offsets, ascending.
    pub offsets_hz: Vec<f64>,
    pub launch_dbm: f64,
}

pub fn dbm_to_watts(dbm: f64) -> f64 {
    1e-3 * 10f64.powf(dbm / 10.0)
}

pub fn watts_to_dbm(w: f64) -> f64 {
    10.0 * (w / 1e-3).log10()
}

/// Width of the band occupied by `n_channels` channels.
pub fn occupied_band(n_channels: usize, spacing_hz: f64, baud_hz: f64, rolloff: f64) -> f64 {
    (n_channels.saturating_sub(1)) as f64 * spacing_hz + (1.0 + rolloff) * baud_hz
}

/// Smallest power-of-two oversampling whose sample rate covers the WDM band
/// with [`BAND_GUARD`] headroom.
pub fn auto_sps(n_channels: usize, spacing_hz: f64, baud_hz: f64, rolloff: f64) -> usize {
    let needed = occupied_band(n_channels, spacing_hz, baud_hz, rolloff) * (1.0 + BAND_GUARD);
    let mut sps = 2;
    while (sps as f64) * baud_hz < needed {
        sps *= 2;
    }
    sps
}

/// Nominal channel offsets `(k − (n−1)/2)·spacing`.
pub fn channel_offsets(n_channels: usize, spacing_hz: f64) -> Vec<f64> {
    let mid = (n_channels as f64 - 1.0) / 2.0;
    (0..n_channels).map(|k| (k as f64 - mid) * spacing_hz).collect()
}

fn to_pols(symbols: &[Point4]) -> (Vec<Complex64>, Vec<Complex64>) {
    symbols
        .iter()
        .map(|p| (Complex64::new(p[0], p[1]), Complex64::new(p[2], p[3])))
        .unzip()
}

/// Circular convolution of both polarizations with real `taps`.
pub(crate) fn filter_circular(signal: &mut SampledSignal, taps: &[f64]) {
    let mut fft = Spectral::new(signal.len());
    let h = taps_spectrum(taps, signal.len(), &mut fft);
    for pol in [&mut signal.x, &mut signal.y] {
        fft.forward(pol);
        pol.iter_mut().zip(&h).for_each(|(v, g)| *v *= g);
        fft.inverse(pol);
    }
}

/// Upsamples by `sps` and filters each polarization with a unit-energy RRC.
/// The output carries a delay of `span_symbols / 2` symbols.
pub fn rrc_shape(symbols: &[Point4], baud_hz: f64, sps: usize, rolloff: f64, span_symbols: usize) -> Result<SampledSignal> {
    if sps < 2 {
        return Err(SimError::Aliasing {
            fs_hz: sps as f64 * baud_hz,
            needed_hz: (1.0 + rolloff) * baud_hz,
        });
    }
    let taps = rrc_taps(sps, rolloff, span_symbols)?;
    let (xs, ys) = to_pols(symbols);
    let zero = Complex64::new(0.0, 0.0);
    let mut x = vec![zero; xs.len() * sps];
    let mut y = vec![zero; ys.len() * sps];
    for (k, (a, b)) in xs.iter().zip(&ys).enumerate() {
        x[k * sps] = *a;
        y[k * sps] = *b;
    }
    let mut signal = SampledSignal::new(x, y, sps as f64 * baud_hz)?;
    filter_circular(&mut signal, &taps);
    signal.delay_samples = span_symbols * sps / 2;
    Ok(signal)
}

/// Band-limited resampling of a periodic spectrum onto `len_out` bins;
/// both lengths must be even. Shrinking acts as an ideal low-pass filter.
pub(crate) fn resample_spectrum(spec: &[Complex64], len_out: usize) -> Vec<Complex64> {
    let n = spec.len();
    let mut out = vec![Complex64::new(0.0, 0.0); len_out];
    let half = n.min(len_out) / 2;
    out[0] = spec[0];
    for k in 1..half {
        out[k] = spec[k];
        out[len_out - k] = spec[n - k];
    }
    // The Nyquist bin of the shorter grid is shared by both band edges.
    if n < len_out {
        out[half] = spec[half] * 0.5;
        out[len_out - half] = spec[half] * 0.5;
    } else {
        out[half] = spec[half] + spec[n - half];
    }
    out
}

/// Resamples a periodic signal to `fs_out`; the burst duration is kept.
pub fn resample(signal: &SampledSignal, fs_out: f64) -> Result<SampledSignal> {
    let ratio = fs_out / signal.fs;
    let len_out = (signal.len() as f64 * ratio).round() as usize;
    if len_out == 0 || ((len_out as f64) - signal.len() as f64 * ratio).abs() > 1e-9 * len_out as f64 {
        return Err(invalid("fs", "resampling must map the burst onto a whole number of samples"));
    }
    if len_out % 2 == 1 || signal.len() % 2 == 1 {
        return Err(invalid("fs", "resampling needs even sample counts"));
    }
    if len_out == signal.len() {
        return Ok(signal.clone());
    }
    let mut fin = Spectral::new(signal.len());
    let mut fout = Spectral::new(len_out);
    let gain = len_out as f64 / signal.len() as f64;
    let mut pols = [signal.x.clone(), signal.y.clone()];
    for pol in pols.iter_mut() {
        fin.forward(pol);
        let mut spec = resample_spectrum(pol, len_out);
        fout.inverse(&mut spec);
        spec.iter_mut().for_each(|v| *v *= gain);
        *pol = spec;
    }
    let [x, y] = pols;
    Ok(SampledSignal {
        x,
        y,
        fs: fs_out,
        f_center: signal.f_center,
        delay_samples: (signal.delay_samples as f64 * ratio).round() as usize,
    })
}

/// Layout of the composite WDM waveform.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WdmPlan {
    pub spacing_hz: f64,
    pub fs_out: f64,
    /// Spectral width of one channel, `(1 + rolloff)·baud`.
    pub channel_band_hz: f64,
    /// Power given to every channel, W.
    pub launch_w: f64,
}

/// Resamples every baseband channel to `plan.fs_out`, scales it to the
/// launch power, shifts it to its bin-snapped offset and sums in channel
/// order. Returns the composite and the realized offsets.
pub fn wdm_mux(channels: &[SampledSignal], plan: &WdmPlan) -> Result<(SampledSignal, Vec<f64>)> {
    let n = channels.len();
    if n == 0 {
        return Err(invalid("n_channels", "at least one channel is required"));
    }
    let needed = occupied_band(n, plan.spacing_hz, plan.channel_band_hz, 0.0);
    if plan.fs_out < needed {
        return Err(SimError::Aliasing {
            fs_hz: plan.fs_out,
            needed_hz: needed,
        });
    }
    if n > 1 && plan.spacing_hz < plan.channel_band_hz {
        warn!(
            "channel spacing {:.3e} Hz is narrower than the channel band {:.3e} Hz; spectra overlap",
            plan.spacing_hz, plan.channel_band_hz
        );
    }
    let first = resample(&channels[0], plan.fs_out)?;
    let len = first.len();
    let mut fft = Spectral::new(len);
    let zero = Complex64::new(0.0, 0.0);
    let mut acc = [vec![zero; len], vec![zero; len]];
    let mut offsets = Vec::with_capacity(n);
    for (k, (ch, nominal)) in channels.iter().zip(channel_offsets(n, plan.spacing_hz)).enumerate() {
        let mut sig = if k == 0 { first.clone() } else { resample(ch, plan.fs_out)? };
        if sig.len() != len || sig.delay_samples != first.delay_samples {
            return Err(SimError::Shape("channels differ in length or delay".into()));
        }
        let power = sig.power();
        if power > 0.0 {
            sig.scale((plan.launch_w / power).sqrt());
        }
        let (bins, realized) = snap_to_bin(nominal, len, plan.fs_out);
        offsets.push(realized);
        for (dst, src) in acc.iter_mut().zip([&mut sig.x, &mut sig.y]) {
            fft.forward(src);
            let shifted = shift_spectrum(src, bins);
            dst.iter_mut().zip(&shifted).for_each(|(a, b)| *a += b);
        }
    }
    let [mut x, mut y] = acc;
    fft.inverse(&mut x);
    fft.inverse(&mut y);
    let mut out = SampledSignal::new(x, y, plan.fs_out)?;
    out.delay_samples = first.delay_samples;
    Ok((out, offsets))
}

/// Generates, maps and shapes every channel and multiplexes the result.
/// Channel `k` draws its bits from `derive_seed(seed, [k])`.
pub fn transmit(c: &Constellation4D, p: &TxParams) -> Result<(TxFrame, SampledSignal)> {
    if p.n_channels == 0 || p.n_symbols == 0 {
        return Err(invalid("n_channels", "channels and symbols must be positive"));
    }
    let m = c.bits_per_symbol() as usize;
    let mut frame = TxFrame {
        bits: Vec::with_capacity(p.n_channels),
        indices: Vec::with_capacity(p.n_channels),
        symbols: Vec::with_capacity(p.n_channels),
        seed: p.seed,
        baud_hz: p.baud_hz,
        rolloff: p.rolloff,
        offsets_hz: Vec::new(),
        launch_dbm: p.launch_dbm,
    };
    let mut shaped = Vec::with_capacity(p.n_channels);
    for k in 0..p.n_channels {
        let bits = generate_bits(derive_seed(p.seed, &[k as u64]), p.n_symbols * m)?;
        let mapped = map_bits_to_symbols(&bits, c)?;
        shaped.push(rrc_shape(&mapped.points, p.baud_hz, SHAPING_SPS, p.rolloff, p.rrc_span)?);
        frame.bits.push(bits);
        frame.indices.push(mapped.indices);
        frame.symbols.push(mapped.points);
    }
    let plan = WdmPlan {
        spacing_hz: p.spacing_hz,
        fs_out: p.sps as f64 * p.baud_hz,
        channel_band_hz: (1.0 + p.rolloff) * p.baud_hz,
        launch_w: dbm_to_watts(p.launch_dbm),
    };
    let (signal, offsets) = wdm_mux(&shaped, &plan)?;
    frame.offsets_hz = offsets;
    Ok((frame, signal))
}
