//! Pure algorithmic building blocks for evaluating four-dimensional optical
//! modulation formats: constellation construction (4D-64PRS, PM-8QAM,
//! 6b4D-2A8PSK), mismatched Gaussian soft demapping, GMI estimation, the
//! AWGN reference, and the data-aided receiver corrections used before
//! demapping.
//!
//! The crate is `no_std` and only needs `alloc`. Waveform generation, fiber
//! propagation and all IO live in the `prs4d` companion crate.
#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod batch;
pub mod constellation;
pub mod demapper;
mod error;
pub mod genie;
pub mod linalg;
pub mod mapping;
pub mod math;
pub mod optimize;
pub mod pulse;
pub mod reach;
pub mod seed;

pub use batch::SymbolBatch;
pub use constellation::{Constellation4D, PrsParams, RingRule};
pub use demapper::{LlrBatch, NoiseModel};
pub use error::{Error, Result};

/// Number of real dimensions of a dual-polarization symbol.
pub const DIMS: usize = 4;

/// A dual-polarization symbol as `[Re X, Im X, Re Y, Im Y]`.
pub type Point4 = [f64; DIMS];
