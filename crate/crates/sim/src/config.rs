//! Flat key-value experiment configuration.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use prs4d_core::constellation::{Format, PrsParams, DEFAULT_2A8PSK_RING_RATIO};
use prs4d_core::genie::{PhaseWindow, ScaleEstimator};
use toml::Value;

use crate::channel::{FiberParams, LinkConfig};
use crate::error::{invalid, Result, SimError};

/// Which soft demappers to run on each received batch.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DemapperChoice {
    Iid,
    Cg,
    Both,
}

impl FromStr for DemapperChoice {
    type Err = SimError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "iid" => Ok(Self::Iid),
            "cg" => Ok(Self::Cg),
            "both" => Ok(Self::Both),
            _ => Err(invalid("demapper", "expected iid, cg or both")),
        }
    }
}

impl fmt::Display for DemapperChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Iid => "iid",
            Self::Cg => "cg",
            Self::Both => "both",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub format: Format,
    pub prs_rho: f64,
    pub prs_theta: f64,
    pub ring_ratio: f64,
    pub n_channels: usize,
    pub spacing_ghz: f64,
    pub baud_gbd: f64,
    pub rolloff: f64,
    pub n_symbols: usize,
    pub seed: u64,
    pub n_spans: usize,
    pub span_km: f64,
    pub step_km: f64,
    pub alpha_db_km: f64,
    pub disp_ps_nm_km: f64,
    pub gamma_w_km: f64,
    pub nf_db: f64,
    /// Per-channel launch powers.
    pub launch_dbm: Vec<f64>,
    pub demapper: DemapperChoice,
    /// Genie phase window in symbols; 0 estimates one phase per burst.
    pub phase_window: usize,
    /// Samples per symbol; 0 picks the smallest power of two that fits.
    pub sps: usize,
    /// CG covariance regularization, relative to the IID noise variance.
    pub epsilon_reg: f64,
    pub rrc_span: usize,
    pub ase_enabled: bool,
    pub inline_cdc: bool,
    pub exact_nsp: bool,
    pub ref_wavelength_nm: f64,
    pub scale_estimator: ScaleEstimator,
    /// Write wall-clock runtimes to CSV (breaks byte-identical reruns).
    pub record_runtime: bool,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        let fiber = FiberParams::default();
        ExperimentConfig {
            format: Format::Prs64,
            prs_rho: PrsParams::DEFAULT.rho,
            prs_theta: PrsParams::DEFAULT.theta,
            ring_ratio: DEFAULT_2A8PSK_RING_RATIO,
            n_channels: 11,
            spacing_ghz: 50.0,
            baud_gbd: 45.0,
            rolloff: 0.1,
            n_symbols: 1 << 16,
            seed: 1,
            n_spans: 30,
            span_km: fiber.length_km,
            step_km: 0.1,
            alpha_db_km: fiber.alpha_db_km,
            disp_ps_nm_km: fiber.disp_ps_nm_km,
            gamma_w_km: fiber.gamma_w_km,
            nf_db: 5.0,
            launch_dbm: vec![0.0],
            demapper: DemapperChoice::Both,
            phase_window: 128,
            sps: 0,
            epsilon_reg: 1e-6,
            rrc_span: 64,
            ase_enabled: true,
            inline_cdc: true,
            exact_nsp: false,
            ref_wavelength_nm: fiber.ref_wavelength_nm,
            scale_estimator: ScaleEstimator::ChannelGain,
            record_runtime: false,
        }
    }
}

pub const KEYS: &[&str] = &[
    "format",
    "prs_rho",
    "prs_theta",
    "ring_ratio",
    "n_channels",
    "spacing_ghz",
    "baud_gbd",
    "rolloff",
    "n_symbols",
    "seed",
    "n_spans",
    "span_km",
    "step_km",
    "alpha_db_km",
    "disp_ps_nm_km",
    "gamma_w_km",
    "nf_db",
    "launch_dbm",
    "demapper",
    "phase_window",
    "sps",
    "epsilon_reg",
    "rrc_span",
    "ase_enabled",
    "inline_cdc",
    "exact_nsp",
    "ref_wavelength_nm",
    "scale_estimator",
    "record_runtime",
];

fn as_f64(key: &str, v: &Value) -> Result<f64> {
    match v {
        Value::Float(f) => Ok(*f),
        Value::Integer(i) => Ok(*i as f64),
        _ => Err(invalid(key, "expected a number")),
    }
}

fn as_usize(key: &str, v: &Value) -> Result<usize> {
    match v {
        Value::Integer(i) if *i >= 0 => Ok(*i as usize),
        _ => Err(invalid(key, "expected a non-negative integer")),
    }
}

fn as_bool(key: &str, v: &Value) -> Result<bool> {
    v.as_bool().ok_or_else(|| invalid(key, "expected true or false"))
}

fn as_str<'a>(key: &str, v: &'a Value) -> Result<&'a str> {
    v.as_str().ok_or_else(|| invalid(key, "expected a string"))
}

impl ExperimentConfig {
    /// Reads a flat TOML file; `overrides` are `key=value` pairs applied last.
    pub fn load(path: Option<&Path>, overrides: &[String]) -> Result<Self> {
        let mut cfg = ExperimentConfig::default();
        if let Some(path) = path {
            let text = std::fs::read_to_string(path)?;
            cfg.apply_toml(&text)?;
        }
        for item in overrides {
            cfg.apply_override(item)?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn apply_toml(&mut self, text: &str) -> Result<()> {
        let table: toml::Table = text.parse().map_err(|e: toml::de::Error| SimError::Parse(e.to_string()))?;
        for (key, value) in &table {
            self.set(key, value)?;
        }
        Ok(())
    }

    /// Applies one `key=value`; bare words are taken as strings.
    pub fn apply_override(&mut self, item: &str) -> Result<()> {
        let (key, raw) = item
            .split_once('=')
            .ok_or_else(|| SimError::Parse(format!("override `{item}` is not key=value")))?;
        let (key, raw) = (key.trim(), raw.trim());
        let value = format!("v = {raw}")
            .parse::<toml::Table>()
            .ok()
            .and_then(|mut t| t.remove("v"))
            .unwrap_or_else(|| Value::String(raw.to_string()));
        self.set(key, &value)
    }

    pub fn set(&mut self, key: &str, v: &Value) -> Result<()> {
        match key {
            "format" => self.format = as_str(key, v)?.parse().map_err(|_| invalid(key, "expected pm8qam, 6b4d_2a8psk or 4d64prs"))?,
            "prs_rho" => self.prs_rho = as_f64(key, v)?,
            "prs_theta" => self.prs_theta = as_f64(key, v)?,
            "ring_ratio" => self.ring_ratio = as_f64(key, v)?,
            "n_channels" => self.n_channels = as_usize(key, v)?,
            "spacing_ghz" => self.spacing_ghz = as_f64(key, v)?,
            "baud_gbd" => self.baud_gbd = as_f64(key, v)?,
            "rolloff" => self.rolloff = as_f64(key, v)?,
            "n_symbols" => self.n_symbols = as_usize(key, v)?,
            "seed" => self.seed = as_usize(key, v)? as u64,
            "n_spans" => self.n_spans = as_usize(key, v)?,
            "span_km" => self.span_km = as_f64(key, v)?,
            "step_km" => self.step_km = as_f64(key, v)?,
            "alpha_db_km" => self.alpha_db_km = as_f64(key, v)?,
            "disp_ps_nm_km" => self.disp_ps_nm_km = as_f64(key, v)?,
            "gamma_w_km" => self.gamma_w_km = as_f64(key, v)?,
            "nf_db" => self.nf_db = as_f64(key, v)?,
            "launch_dbm" => {
                self.launch_dbm = match v {
                    Value::Array(items) => items.iter().map(|x| as_f64(key, x)).collect::<Result<_>>()?,
                    other => vec![as_f64(key, other)?],
                }
            }
            "demapper" => self.demapper = as_str(key, v)?.parse()?,
            "phase_window" => self.phase_window = as_usize(key, v)?,
            "sps" => self.sps = as_usize(key, v)?,
            "epsilon_reg" => self.epsilon_reg = as_f64(key, v)?,
            "rrc_span" => self.rrc_span = as_usize(key, v)?,
            "ase_enabled" => self.ase_enabled = as_bool(key, v)?,
            "inline_cdc" => self.inline_cdc = as_bool(key, v)?,
            "exact_nsp" => self.exact_nsp = as_bool(key, v)?,
            "ref_wavelength_nm" => self.ref_wavelength_nm = as_f64(key, v)?,
            "scale_estimator" => {
                self.scale_estimator = match as_str(key, v)? {
                    "gain" => ScaleEstimator::ChannelGain,
                    "lmmse" => ScaleEstimator::Lmmse,
                    _ => return Err(invalid(key, "expected gain or lmmse")),
                }
            }
            "record_runtime" => self.record_runtime = as_bool(key, v)?,
            _ => {
                return Err(SimError::UnknownKey {
                    key: key.to_string(),
                    valid: KEYS.join(", "),
                })
            }
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        if self.format == Format::Prs64 {
            PrsParams::new(self.prs_rho, self.prs_theta).map_err(|_| {
                if self.prs_rho > 0.0 {
                    invalid("prs_theta", "must lie in (0, π/4)")
                } else {
                    invalid("prs_rho", "must be positive")
                }
            })?;
        }
        if !(self.ring_ratio > 0.0) {
            return Err(invalid("ring_ratio", "must be positive"));
        }
        if self.n_channels == 0 {
            return Err(invalid("n_channels", "must be at least 1"));
        }
        if !(self.spacing_ghz > 0.0) {
            return Err(invalid("spacing_ghz", "must be positive"));
        }
        if !(self.baud_gbd > 0.0) {
            return Err(invalid("baud_gbd", "must be positive"));
        }
        if !(self.rolloff > 0.0 && self.rolloff <= 1.0) {
            return Err(invalid("rolloff", "must lie in (0, 1]"));
        }
        if self.n_symbols < 2 * self.rrc_span.max(1) {
            return Err(invalid("n_symbols", "must be at least twice rrc_span"));
        }
        if self.rrc_span == 0 || self.rrc_span % 2 == 1 {
            return Err(invalid("rrc_span", "must be even and positive"));
        }
        if self.launch_dbm.is_empty() || self.launch_dbm.iter().any(|p| !p.is_finite()) {
            return Err(invalid("launch_dbm", "must be a non-empty list of finite values"));
        }
        if self.sps == 1 || (self.sps > 0 && !self.sps.is_power_of_two()) {
            return Err(invalid("sps", "must be 0 (auto) or a power of two ≥ 2"));
        }
        if !(self.epsilon_reg >= 0.0) {
            return Err(invalid("epsilon_reg", "must be non-negative"));
        }
        self.link(0).validate()
    }

    pub fn fiber(&self) -> FiberParams {
        FiberParams {
            alpha_db_km: self.alpha_db_km,
            disp_ps_nm_km: self.disp_ps_nm_km,
            gamma_w_km: self.gamma_w_km,
            length_km: self.span_km,
            ref_wavelength_nm: self.ref_wavelength_nm,
        }
    }

    pub fn link(&self, seed: u64) -> LinkConfig {
        LinkConfig {
            span: self.fiber(),
            n_spans: self.n_spans,
            step_km: self.step_km,
            edfa_nf_db: self.nf_db,
            inline_cdc: self.inline_cdc,
            ase_enabled: self.ase_enabled,
            exact_nsp: self.exact_nsp,
            seed,
        }
    }

    pub fn phase_window(&self) -> PhaseWindow {
        match self.phase_window {
            0 => PhaseWindow::Burst,
            w => PhaseWindow::Symbols(w),
        }
    }

    pub fn prs_params(&self) -> PrsParams {
        PrsParams {
            rho: self.prs_rho,
            theta: self.prs_theta,
        }
    }
}
