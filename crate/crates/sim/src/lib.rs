//! Dual-polarization WDM link simulation around the `prs4d-core` formats
//! and demappers: transmitter, split-step fiber channel, receiver, sweeps
//! and result files.

pub mod channel;
pub mod config;
pub mod error;
pub mod export;
pub mod harness;
pub mod plot;
pub mod report;
pub mod rxdsp;
pub mod signal;
pub mod txdsp;

pub use config::ExperimentConfig;
pub use error::{Result, SimError};
pub use harness::{run_point, sweep_channels, sweep_distance, sweep_power, ResultRecord};
pub use signal::SampledSignal;
