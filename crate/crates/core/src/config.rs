//! JSON run configuration for the command line tool.
//!
//! ```json
//! {
//!   "code": {"constraint_length": 7, "generators": ["133", "171"]},
//!   "interleaver": {"streams": 2, "bits_per_symbol": 2, "mode": "sc", "period": 4, "kind": "round-robin"},
//!   "phy": {"constellation": "qpsk", "nt": 2, "nr": 2, "streams": 2, "channel": "rayleigh"},
//!   "sim": {"snr_db": [6, 8, 10], "info_bits_per_frame": 1024, "max_frames": 100000, "target_bit_errors": 500}
//! }
//! ```
//!
//! `code: null` sends bits uncoded. Unknown keys are rejected, and the
//! serialized form always spells out every default.

use serde::{Deserialize, Serialize};

use crate::convcode::CodeSpec;
use crate::interleaver::InterleaverSpec;
use crate::mimo_phy::ConstellationName;
use crate::simulator::{ChannelModel, SimConfig, SimError, SnrDb, FIT_ERROR_FLOOR};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub code: Option<CodeSpec>,
    pub interleaver: InterleaverSpec,
    pub phy: PhyConfig,
    pub sim: SimSection,
    /// Filled from `--seed`; a conflicting value in the file is an error.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhyConfig {
    pub constellation: ConstellationName,
    pub nt: usize,
    pub nr: usize,
    pub streams: usize,
    #[serde(default = "default_channel")]
    pub channel: ChannelModel,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimSection {
    pub snr_db: Vec<SnrDb>,
    #[serde(default = "default_info_bits")]
    pub info_bits_per_frame: usize,
    pub max_frames: u64,
    #[serde(default = "default_target_errors")]
    pub target_bit_errors: u64,
    /// Inclusive SNR range of the diversity fit; all finite points when absent.
    #[serde(default)]
    pub fit_window_db: Option<(f64, f64)>,
    #[serde(default = "default_fit_floor")]
    pub fit_error_floor: u64,
    /// Second interleaver simulated on the same channels for comparison.
    #[serde(default)]
    pub compare_interleaver: Option<InterleaverSpec>,
}

fn default_channel() -> ChannelModel {
    ChannelModel::Rayleigh
}

fn default_info_bits() -> usize {
    1024
}

fn default_target_errors() -> u64 {
    500
}

fn default_fit_floor() -> u64 {
    FIT_ERROR_FLOOR
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("config serializes")
    }

    /// Link configuration for `interleaver` (the primary one or the comparison).
    pub fn sim_config(&self, interleaver: &InterleaverSpec, seed: u64) -> Result<SimConfig, SimError> {
        let cfg = SimConfig {
            code: self.code.clone(),
            interleaver: interleaver.clone(),
            constellation: self.phy.constellation,
            num_tx: self.phy.nt,
            num_rx: self.phy.nr,
            num_streams: self.phy.streams,
            channel: self.phy.channel,
            snr_db: self.sim.snr_db.clone(),
            info_bits_per_frame: self.sim.info_bits_per_frame,
            max_frames: self.sim.max_frames,
            target_bit_errors: self.sim.target_bit_errors,
            master_seed: seed,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Fit window, defaulting to the span of finite SNR points.
    pub fn fit_window(&self) -> (f64, f64) {
        self.sim.fit_window_db.unwrap_or_else(|| {
            let finite: Vec<f64> = self
                .sim
                .snr_db
                .iter()
                .filter(|s| !s.is_noiseless())
                .map(|s| s.0)
                .collect();
            let lo = finite.iter().copied().fold(f64::INFINITY, f64::min);
            let hi = finite.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            (lo, hi)
        })
    }
}
