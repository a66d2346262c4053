//! Verification and simulation workbench for bit-interleaved coded multiple
//! beamforming (BICMB).
//!
//! The crate is organised around four layers:
//!
//! * [`convcode`]: feed-forward rate-1/n convolutional codes, their trellis,
//!   a soft-input Viterbi decoder and exhaustive error-event enumeration.
//! * [`interleaver`]: periodic bit-to-(stream, symbol, slot, subcarrier) maps,
//!   per-stream error counts and the design-criteria verifiers and search.
//! * [`mimo_phy`]: Rayleigh channel sampling, SVD beamforming and Gray-labelled
//!   constellations with max-log bit metrics.
//! * [`simulator`]: the Monte Carlo link, SNR sweeps and diversity fitting.
//!
//! Numeric code is generic over [`Real`] (`f32` or `f64`); the aliases below
//! fix the double precision types used by the command line tool.

pub mod config;
pub mod convcode;
pub mod interleaver;
pub mod mimo_phy;
pub mod num;
pub mod simulator;

pub use num::{PathMetric, Real};

/// Tool version embedded in every report.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub type Complex64 = num_complex::Complex<f64>;
pub type ChannelRealization64 = mimo_phy::ChannelRealization<f64>;
pub type SvdResult64 = mimo_phy::SvdResult<f64>;
pub type Constellation64 = mimo_phy::Constellation<f64>;
pub type ChannelRealization32 = mimo_phy::ChannelRealization<f32>;
pub type SvdResult32 = mimo_phy::SvdResult<f32>;
pub type Constellation32 = mimo_phy::Constellation<f32>;
