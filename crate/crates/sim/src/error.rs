use thiserror::Error;

pub type Result<T> = std::result::Result<T, SimError>;

#[derive(Debug, Error)]
pub enum SimError {
    #[error(transparent)]
    Core(#[from] prs4d_core::Error),
    #[error("invalid `{field}`: {reason}")]
    InvalidConfig { field: String, reason: String },
    #[error("unknown config key `{key}`; valid keys: {valid}")]
    UnknownKey { key: String, valid: String },
    #[error("sample rate {fs_hz:.4e} Hz cannot hold a band of {needed_hz:.4e} Hz")]
    Aliasing { fs_hz: f64, needed_hz: f64 },
    #[error("channel offset {offset_hz:.4e} Hz lies outside the simulated band")]
    OutOfBand { offset_hz: f64 },
    #[error("signal length mismatch: {0}")]
    Shape(String),
    #[error("config parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub(crate) fn invalid(field: &str, reason: impl Into<String>) -> SimError {
    SimError::InvalidConfig {
        field: field.to_string(),
        reason: reason.into(),
    }
}
