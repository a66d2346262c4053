use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::SimError;
use crate::convcode::CodeSpec;
use crate::interleaver::{build_map, InterleaverSpec};
use crate::mimo_phy::ConstellationName;

/// SNR in dB; `+inf` is the noiseless sentinel and is written as `"inf"`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct SnrDb(pub f64);

impl SnrDb {
    pub const NOISELESS: SnrDb = SnrDb(f64::INFINITY);

    pub fn is_noiseless(self) -> bool {
        self.0 == f64::INFINITY
    }

    /// Per-stream noise variance for `num_streams` unit-energy streams:
    /// `SNR = num_streams / N0`.
    pub fn noise_variance(self, num_streams: usize) -> f64 {
        if self.is_noiseless() {
            0.0
        } else {
            num_streams as f64 / 10f64.powf(self.0 / 10.0)
        }
    }
}

impl fmt::Display for SnrDb {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_noiseless() {
            f.write_str("inf")
        } else {
            write!(f, "{}", self.0)
        }
    }
}

impl Serialize for SnrDb {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if self.is_noiseless() {
            s.serialize_str("inf")
        } else {
            s.serialize_f64(self.0)
        }
    }
}

impl<'de> Deserialize<'de> for SnrDb {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Number(f64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Number(x) if x.is_finite() => Ok(SnrDb(x)),
            Raw::Text(t) if t == "inf" => Ok(SnrDb::NOISELESS),
            _ => Err(serde::de::Error::custom("SNR must be a finite number or \"inf\"")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ChannelModel {
    /// Quasi-static i.i.d. Rayleigh channel; stream gains are its singular values.
    Rayleigh,
    /// Every stream gain forced to 1 (AWGN).
    Bypass,
}

/// Everything needed to reproduce a BER sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    /// `None` sends the information bits uncoded.
    pub code: Option<CodeSpec>,
    pub interleaver: InterleaverSpec,
    pub constellation: ConstellationName,
    pub num_tx: usize,
    pub num_rx: usize,
    pub num_streams: usize,
    pub channel: ChannelModel,
    pub snr_db: Vec<SnrDb>,
    pub info_bits_per_frame: usize,
    pub max_frames: u64,
    pub target_bit_errors: u64,
    pub master_seed: u64,
}

impl SimConfig {
    /// Coded bits per frame, tail included.
    pub fn coded_bits_per_frame(&self) -> usize {
        match &self.code {
            Some(code) => code.n_out() * (self.info_bits_per_frame + code.tail_len()),
            None => self.info_bits_per_frame,
        }
    }

    pub fn validate(&self) -> Result<(), SimError> {
        let bad = |msg: String| Err(SimError::Config(msg));
        if self.num_tx == 0 || self.num_rx == 0 {
            return bad("Nt and Nr must be at least 1".into());
        }
        if self.num_streams == 0 || self.num_streams > self.num_tx.min(self.num_rx) {
            return bad(format!(
                "S={} must be between 1 and min(Nt, Nr)={}",
                self.num_streams,
                self.num_tx.min(self.num_rx)
            ));
        }
        let il = &self.interleaver;
        if il.num_streams != self.num_streams {
            return bad(format!(
                "interleaver has S={}, link has S={}",
                il.num_streams, self.num_streams
            ));
        }
        if il.bits_per_symbol != self.constellation.bits_per_symbol() {
            return bad(format!(
                "interleaver has B={}, {} carries {} bits per symbol",
                il.bits_per_symbol,
                self.constellation,
                self.constellation.bits_per_symbol()
            ));
        }
        if il.mode.is_ofdm() {
            return bad("the link simulator is single-carrier only".into());
        }
        let map = build_map(il)?;
        if !map.fills_grid() {
            return bad("interleaver period does not fill a complete stream x symbol grid".into());
        }
        if self.info_bits_per_frame == 0 {
            return bad("info_bits_per_frame must be at least 1".into());
        }
        let coded = self.coded_bits_per_frame();
        if !coded.is_multiple_of(il.period) {
            return bad(format!(
                "{coded} coded bits per frame is not a whole number of interleaver periods (P={})",
                il.period
            ));
        }
        if self.snr_db.is_empty() {
            return bad("snr_db list is empty".into());
        }
        if self.snr_db.windows(2).any(|w| w[0].0 >= w[1].0) {
            return bad("snr_db list must be strictly ascending".into());
        }
        if self.max_frames == 0 || self.target_bit_errors == 0 {
            return bad("max_frames and target_bit_errors must be at least 1".into());
        }
        Ok(())
    }
}
