//! Split-step propagation over amplified, dispersion-managed spans.

use log::warn;
use num_complex::Complex64;
use prs4d_core::seed::derive_seed;
use rand_chacha::ChaCha8Rng;
use rand_core::SeedableRng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{invalid, Result};
use crate::signal::{bin_frequencies, SampledSignal, Spectral};

pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;
pub const PLANCK: f64 = 6.626_070_15e-34;
/// Manakov averaging factor for the Kerr term.
pub const MANAKOV_FACTOR: f64 = 8.0 / 9.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FiberParams {
    pub alpha_db_km: f64,
    pub disp_ps_nm_km: f64,
    pub gamma_w_km: f64,
    pub length_km: f64,
    pub ref_wavelength_nm: f64,
}

impl Default for FiberParams {
    /// 80 km of large effective area fibre.
    fn default() -> Self {
        FiberParams {
            alpha_db_km: 0.219,
            disp_ps_nm_km: 4.255,
            gamma_w_km: 1.464,
            length_km: 80.0,
            ref_wavelength_nm: 1550.0,
        }
    }
}

impl FiberParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.alpha_db_km >= 0.0) {
            return Err(invalid("alpha_db_km", "attenuation must be non-negative"));
        }
        if !(self.length_km > 0.0) {
            return Err(invalid("span_km", "span length must be positive"));
        }
        if !(self.gamma_w_km >= 0.0) {
            return Err(invalid("gamma_w_km", "nonlinear coefficient must be non-negative"));
        }
        if !self.disp_ps_nm_km.is_finite() {
            return Err(invalid("disp_ps_nm_km", "dispersion must be finite"));
        }
        if !(self.ref_wavelength_nm > 0.0) {
            return Err(invalid("ref_wavelength_nm", "wavelength must be positive"));
        }
        Ok(())
    }

    /// Field attenuation coefficient in 1/km (power decays as `e^{−αz}`).
    pub fn alpha_per_km(&self) -> f64 {
        self.alpha_db_km * std::f64::consts::LN_10 / 10.0
    }

    /// `β2 = −Dλ²/(2πc)` in s²/km.
    pub fn beta2(&self) -> f64 {
        beta2_from_dispersion(self.disp_ps_nm_km, self.ref_wavelength_nm)
    }

    pub fn span_loss_db(&self) -> f64 {
        self.alpha_db_km * self.length_km
    }

    /// Accumulated dispersion of one span, ps/nm.
    pub fn span_dispersion_ps_nm(&self) -> f64 {
        self.disp_ps_nm_km * self.length_km
    }
}

pub fn beta2_from_dispersion(disp_ps_nm_km: f64, wavelength_nm: f64) -> f64 {
    // ps/(nm·km) → s/(m·km)
    let d = disp_ps_nm_km * 1e-3;
    let lambda = wavelength_nm * 1e-9;
    -d * lambda * lambda / (2.0 * std::f64::consts::PI * SPEED_OF_LIGHT)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkConfig {
    pub span: FiberParams,
    pub n_spans: usize,
    pub step_km: f64,
    pub edfa_nf_db: f64,
    pub inline_cdc: bool,
    pub ase_enabled: bool,
    /// Use `n_sp = (F·G − 1) / (2(G − 1))` instead of `F/2`.
    pub exact_nsp: bool,
    pub seed: u64,
}

impl LinkConfig {
    pub fn validate(&self) -> Result<()> {
        self.span.validate()?;
        if self.n_spans == 0 {
            return Err(invalid("n_spans", "at least one span is required"));
        }
        if !(self.step_km > 0.0 && self.step_km <= self.span.length_km) {
            return Err(invalid("step_km", "step must lie in (0, span_km]"));
        }
        if !self.edfa_nf_db.is_finite() {
            return Err(invalid("nf_db", "noise figure must be finite"));
        }
        Ok(())
    }

    pub fn distance_km(&self) -> f64 {
        self.n_spans as f64 * self.span.length_km
    }
}

fn angular_frequencies(signal: &SampledSignal) -> Vec<f64> {
    bin_frequencies(signal.len(), signal.fs)
        .into_iter()
        .map(|f| 2.0 * std::f64::consts::PI * (f + signal.f_center))
        .collect()
}

fn dispersion_phase(omega: &[f64], beta2: f64, dz: f64) -> Vec<Complex64> {
    omega
        .iter()
        .map(|w| Complex64::from_polar(1.0, 0.5 * beta2 * w * w * dz))
        .collect()
}

/// Multiplies both spectra by `exp(j·β2/2·ω²·dz)`.
pub fn dispersion_step(signal: &mut SampledSignal, beta2: f64, dz: f64) {
    let h = dispersion_phase(&angular_frequencies(signal), beta2, dz);
    let mut fft = Spectral::new(signal.len());
    apply_spectral(signal, &h, &mut fft);
}

fn apply_spectral(signal: &mut SampledSignal, h: &[Complex64], fft: &mut Spectral) {
    for pol in [&mut signal.x, &mut signal.y] {
        fft.forward(pol);
        pol.iter_mut().zip(h).for_each(|(v, g)| *v *= g);
        fft.inverse(pol);
    }
}

/// Kerr phase `(8/9)·γ·(|x|² + |y|²)·dz_eff` on both polarizations.
pub fn nonlinear_step(signal: &mut SampledSignal, gamma: f64, dz_eff: f64) {
    nonlinear_step_with_loss(signal, MANAKOV_FACTOR * gamma * dz_eff, 1.0);
}

fn nonlinear_step_with_loss(signal: &mut SampledSignal, k: f64, amplitude: f64) {
    if k == 0.0 && amplitude == 1.0 {
        return;
    }
    for (a, b) in signal.x.iter_mut().zip(signal.y.iter_mut()) {
        let rot = Complex64::from_polar(amplitude, k * (a.norm_sqr() + b.norm_sqr()));
        *a *= rot;
        *b *= rot;
    }
}

/// Effective length `(1 − e^{−αdz})/α` of a lossy step.
pub fn effective_length(alpha_per_km: f64, dz: f64) -> f64 {
    if alpha_per_km == 0.0 {
        dz
    } else {
        -(-alpha_per_km * dz).exp_m1() / alpha_per_km
    }
}

/// Symmetric split-step over one span.
///
/// Each step is half dispersion, Kerr rotation over the effective length
/// evaluated at the power entering the step, the step loss, and half
/// dispersion. Adjacent half steps of equal length are merged. A shorter
/// final step absorbs any remainder of the span.
pub fn ssfm_span(signal: &mut SampledSignal, fiber: &FiberParams, step_km: f64) -> Result<()> {
    fiber.validate()?;
    if !(step_km > 0.0) {
        return Err(invalid("step_km", "step must be positive"));
    }
    let step_km = step_km.min(fiber.length_km);
    let n_full = (fiber.length_km / step_km).floor() as usize;
    let rest = fiber.length_km - n_full as f64 * step_km;
    let rest = if rest > 1e-9 * step_km { rest } else { 0.0 };
    let mut steps = vec![step_km; n_full];
    if rest > 0.0 {
        steps.push(rest);
    }
    let alpha = fiber.alpha_per_km();
    let beta2 = fiber.beta2();
    let k_of = |dz: f64| MANAKOV_FACTOR * fiber.gamma_w_km * effective_length(alpha, dz);
    let omega = angular_frequencies(signal);
    let mut fft = Spectral::new(signal.len());

    let half = dispersion_phase(&omega, beta2, 0.5 * step_km);
    let full = dispersion_phase(&omega, beta2, step_km);
    let mut linear = |signal: &mut SampledSignal, dz: f64| {
        if dz == step_km {
            apply_spectral(signal, &full, &mut fft);
        } else if dz == 0.5 * step_km {
            apply_spectral(signal, &half, &mut fft);
        } else {
            apply_spectral(signal, &dispersion_phase(&omega, beta2, dz), &mut fft);
        }
    };
    linear(signal, 0.5 * steps[0]);
    for (i, &dz) in steps.iter().enumerate() {
        nonlinear_step_with_loss(signal, k_of(dz), (-0.5 * alpha * dz).exp());
        let next = steps.get(i + 1).map_or(0.0, |d| 0.5 * d);
        linear(signal, 0.5 * dz + next);
    }
    Ok(())
}

/// Ideal lossless compensation of `accumulated_ps_nm` of dispersion.
pub fn inline_cdc(signal: &mut SampledSignal, accumulated_ps_nm: f64, ref_wavelength_nm: f64) {
    let beta2_total = beta2_from_dispersion(accumulated_ps_nm, ref_wavelength_nm);
    dispersion_step(signal, beta2_total, -1.0);
}

/// Photon energy at `wavelength_nm`, J.
pub fn photon_energy(wavelength_nm: f64) -> f64 {
    PLANCK * SPEED_OF_LIGHT / (wavelength_nm * 1e-9)
}

/// Spontaneous emission factor for noise figure `nf_db` and gain `gain_lin`.
pub fn spontaneous_emission_factor(nf_db: f64, gain_lin: f64, exact: bool) -> f64 {
    let f = 10f64.powf(nf_db / 10.0);
    if exact && gain_lin > 1.0 {
        (f * gain_lin - 1.0) / (2.0 * (gain_lin - 1.0))
    } else {
        f / 2.0
    }
}

/// ASE power added per polarization over the full simulation bandwidth, W.
pub fn ase_power(nf_db: f64, gain_db: f64, wavelength_nm: f64, fs: f64, exact: bool) -> f64 {
    let g = 10f64.powf(gain_db / 10.0);
    spontaneous_emission_factor(nf_db, g, exact) * photon_energy(wavelength_nm) * (g - 1.0) * fs
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EdfaParams {
    pub gain_db: f64,
    pub nf_db: f64,
    pub wavelength_nm: f64,
    pub ase_enabled: bool,
    pub exact_nsp: bool,
}

/// Amplifies by `G` and adds white circular Gaussian ASE on each polarization.
pub fn edfa(signal: &mut SampledSignal, p: &EdfaParams, rng: &mut ChaCha8Rng) -> Result<()> {
    signal.scale(10f64.powf(p.gain_db / 20.0));
    if !p.ase_enabled {
        return Ok(());
    }
    if !(p.gain_db > 0.0) {
        return Err(invalid("gain_db", "gain must be positive when ASE is enabled"));
    }
    if p.nf_db < 3.0 && !p.exact_nsp {
        warn!("noise figure {} dB is below the 3 dB quantum limit; n_sp < 1", p.nf_db);
    }
    let power = ase_power(p.nf_db, p.gain_db, p.wavelength_nm, signal.fs, p.exact_nsp);
    let sd = (0.5 * power).sqrt();
    for v in signal.x.iter_mut().chain(signal.y.iter_mut()) {
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        *v += Complex64::new(sd * re, sd * im);
    }
    Ok(())
}

/// Span by span: fiber, optional inline compensation, then an amplifier
/// restoring the span loss. Span `k` draws ASE from `derive_seed(seed, [k])`.
pub fn propagate_link(signal: &mut SampledSignal, link: &LinkConfig) -> Result<()> {
    link.validate()?;
    let amp = EdfaParams {
        gain_db: link.span.span_loss_db(),
        nf_db: link.edfa_nf_db,
        wavelength_nm: link.span.ref_wavelength_nm,
        ase_enabled: link.ase_enabled,
        exact_nsp: link.exact_nsp,
    };
    for k in 0..link.n_spans {
        ssfm_span(signal, &link.span, link.step_km)?;
        if link.inline_cdc {
            inline_cdc(signal, link.span.span_dispersion_ps_nm(), link.span.ref_wavelength_nm);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(link.seed, &[k as u64]));
        edfa(signal, &amp, &mut rng)?;
    }
    Ok(())
}
