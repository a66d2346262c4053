use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::{ChannelModel, SimConfig, SimError, SnrDb};
use crate::convcode::{build_trellis, encode, viterbi_decode, Trellis};
use crate::interleaver::build_map;
use crate::mimo_phy::{sample_channel, svd_decompose, Constellation};
use crate::num::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct FrameResult {
    pub bit_errors: u64,
    pub frame_error: bool,
}

/// A validated configuration with its trellis, constellation and
/// interleaver tables precomputed.
#[derive(Debug, Clone)]
pub struct Link<T> {
    cfg: SimConfig,
    trellis: Option<Trellis>,
    constellation: Constellation<T>,
    /// Transmit-grid position of coded bit `i`: `((stream * times) + time) * B + bit`.
    positions: Vec<usize>,
}

impl<T: Real> Link<T> {
    pub fn new(cfg: &SimConfig) -> Result<Self, SimError> {
        cfg.validate()?;
        let map = build_map(&cfg.interleaver)?;
        let coded = cfg.coded_bits_per_frame();
        let times = coded / cfg.interleaver.period * map.time_span();
        let b = cfg.interleaver.bits_per_symbol;
        let positions = (0..coded)
            .map(|i| {
                let slot = map.slot(i);
                (slot.stream * times + slot.symbol_time) * b + slot.bit_slot
            })
            .collect();
        Ok(Self {
            cfg: cfg.clone(),
            trellis: cfg.code.as_ref().map(build_trellis),
            constellation: Constellation::new(cfg.constellation),
            positions,
        })
    }

    pub fn config(&self) -> &SimConfig {
        &self.cfg
    }

    /// Simulates one codeword. The channel is drawn once and held for the
    /// whole frame; all randomness comes from `(master_seed, snr_db, frame_index)`.
    pub fn run_frame(&self, snr_db: SnrDb, frame_index: u64) -> Result<FrameResult, SimError> {
        self.frame(snr_db, frame_index).map_err(|source| SimError::Frame {
            snr_db,
            frame_index,
            source: Box::new(source),
        })
    }

    fn frame(&self, snr_db: SnrDb, frame_index: u64) -> Result<FrameResult, SimError> {
        let cfg = &self.cfg;
        let mut rng = frame_rng(cfg.master_seed, snr_db, frame_index);

        let info: Vec<u8> = (0..cfg.info_bits_per_frame)
            .map(|_| u8::from(rng.random::<bool>()))
            .collect();
        let coded = match &cfg.code {
            Some(code) => encode(code, &info, true)?,
            None => info.clone(),
        };

        let mut grid = vec![0u8; coded.len()];
        for (&pos, &bit) in self.positions.iter().zip(&coded) {
            grid[pos] = bit;
        }

        let gains: Vec<T> = match cfg.channel {
            ChannelModel::Rayleigh => {
                let channel = sample_channel::<T, _>(cfg.num_tx, cfg.num_rx, &mut rng)?;
                let mut sigma = svd_decompose(&channel)?.sigma;
                sigma.truncate(cfg.num_streams);
                sigma
            }
            ChannelModel::Bypass => vec![T::one(); cfg.num_streams],
        };

        let n0 = snr_db.noise_variance(cfg.num_streams);
        let noise_std = (n0 / 2.0).sqrt();
        let b = self.constellation.bits_per_symbol();
        let times = coded.len() / (b * cfg.num_streams);
        let mut grid_metrics = vec![[T::zero(); 2]; coded.len()];
        for (s, &gain) in gains.iter().enumerate() {
            for t in 0..times {
                let base = (s * times + t) * b;
                let x = self.constellation.point_for(&grid[base..base + b]);
                let mut y = x * gain;
                if n0 > 0.0 {
                    let re: f64 = rng.sample(StandardNormal);
                    let im: f64 = rng.sample(StandardNormal);
                    y = y + Complex::new(T::lit(re * noise_std), T::lit(im * noise_std));
                }
                self.constellation
                    .bit_metrics_into(y, gain, &mut grid_metrics[base..base + b]);
            }
        }

        let metrics: Vec<[T; 2]> = self.positions.iter().map(|&pos| grid_metrics[pos]).collect();
        let decoded = match &self.trellis {
            Some(trellis) => viterbi_decode(trellis, &metrics)?,
            None => metrics.iter().map(|m| u8::from(m[1] < m[0])).collect(),
        };
        let bit_errors = decoded.iter().zip(&info).filter(|(a, b)| a != b).count() as u64;
        Ok(FrameResult {
            bit_errors,
            frame_error: bit_errors > 0,
        })
    }
}

/// One-shot frame simulation; builds the link tables on every call.
pub fn run_frame<T: Real>(cfg: &SimConfig, snr_db: SnrDb, frame_index: u64) -> Result<FrameResult, SimError> {
    Link::<T>::new(cfg)?.run_frame(snr_db, frame_index)
}

/// Per-frame generator: key from `(master_seed, snr_db)`, stream = frame index.
fn frame_rng(master_seed: u64, snr_db: SnrDb, frame_index: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&master_seed.to_le_bytes());
    key[8..16].copy_from_slice(&snr_db.0.to_bits().to_le_bytes());
    let mut rng = ChaCha8Rng::from_seed(key);
    rng.set_stream(frame_index);
    rng
}
