use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Result, SimError};

/// Dual-polarization complex baseband field, samples in √W.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledSignal {
    pub x: Vec<Complex64>,
    pub y: Vec<Complex64>,
    /// Sample rate in Hz.
    pub fs: f64,
    /// Centre frequency relative to the reference carrier, Hz.
    pub f_center: f64,
    /// Pulse-shaping delay carried by the waveform, in samples.
    pub delay_samples: usize,
}

impl SampledSignal {
    pub fn new(x: Vec<Complex64>, y: Vec<Complex64>, fs: f64) -> Result<Self> {
        if x.is_empty() || x.len() != y.len() {
            return Err(SimError::Shape(format!(
                "polarizations have {} and {} samples",
                x.len(),
                y.len()
            )));
        }
        if !(fs > 0.0) {
            return Err(crate::error::invalid("fs", "sample rate must be positive"));
        }
        Ok(Self {
            x,
            y,
            fs,
            f_center: 0.0,
            delay_samples: 0,
        })
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    /// Mean of `|x|² + |y|²` in W.
    pub fn power(&self) -> f64 {
        let total: f64 = self
            .x
            .iter()
            .zip(&self.y)
            .map(|(a, b)| a.norm_sqr() + b.norm_sqr())
            .sum();
        total / self.len() as f64
    }

    pub fn scale(&mut self, factor: f64) {
        self.x.iter_mut().chain(self.y.iter_mut()).for_each(|v| *v *= factor);
    }
}

/// Forward/inverse FFT pair of one length; the inverse is normalized.
pub struct Spectral {
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    scratch: Vec<Complex64>,
    len: usize,
}

impl Spectral {
    pub fn new(len: usize) -> Self {
        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft_forward(len);
        let inverse = planner.plan_fft_inverse(len);
        let scratch_len = forward
            .get_inplace_scratch_len()
            .max(inverse.get_inplace_scratch_len());
        Self {
            forward,
            inverse,
            scratch: vec![Complex64::new(0.0, 0.0); scratch_len],
            len,
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn forward(&mut self, data: &mut [Complex64]) {
        self.forward.process_with_scratch(data, &mut self.scratch);
    }

    pub fn inverse(&mut self, data: &mut [Complex64]) {
        self.inverse.process_with_scratch(data, &mut self.scratch);
        let norm = 1.0 / self.len as f64;
        data.iter_mut().for_each(|v| *v *= norm);
    }
}

/// Signed frequency of each FFT bin, Hz.
pub fn bin_frequencies(len: usize, fs: f64) -> Vec<f64> {
    let df = fs / len as f64;
    (0..len)
        .map(|k| {
            let k = if k < len.div_ceil(2) { k as f64 } else { k as f64 - len as f64 };
            k * df
        })
        .collect()
}

/// Nearest FFT bin to `offset_hz` and the frequency it represents.
pub fn snap_to_bin(offset_hz: f64, len: usize, fs: f64) -> (isize, f64) {
    let df = fs / len as f64;
    let bins = (offset_hz / df).round() as isize;
    (bins, bins as f64 * df)
}

/// Circularly shifts a spectrum up by `bins` (a frequency shift of the
/// underlying periodic waveform).
pub fn shift_spectrum(spec: &[Complex64], bins: isize) -> Vec<Complex64> {
    let n = spec.len() as isize;
    let mut out = vec![Complex64::new(0.0, 0.0); spec.len()];
    for (k, v) in spec.iter().enumerate() {
        let dst = (k as isize + bins).rem_euclid(n) as usize;
        out[dst] = *v;
    }
    out
}

/// Spectrum of `taps` laid out circularly from index 0 on a grid of `len`.
pub fn taps_spectrum(taps: &[f64], len: usize, fft: &mut Spectral) -> Vec<Complex64> {
    let mut buf = vec![Complex64::new(0.0, 0.0); len];
    for (k, &t) in taps.iter().enumerate() {
        buf[k % len] += t;
    }
    fft.forward(&mut buf);
    buf
}
