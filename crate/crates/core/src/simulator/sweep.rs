use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{FrameResult, Link, SimConfig, SimError, SnrDb};
use crate::num::Real;

/// Frames simulated per parallel batch. Results do not depend on it.
pub const DEFAULT_BATCH_FRAMES: u64 = 64;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BerPoint {
    pub snr_db: SnrDb,
    pub bits: u64,
    pub bit_errors: u64,
    pub frames: u64,
    pub frame_errors: u64,
    pub ber: f64,
    pub fer: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BerCurve {
    pub points: Vec<BerPoint>,
}

impl BerCurve {
    pub const CSV_HEADER: &'static str = "snr_db,bits,bit_errors,frames,frame_errors,ber,fer";

    pub fn to_csv(&self) -> String {
        let mut out = String::from(Self::CSV_HEADER);
        out.push('\n');
        for p in &self.points {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{:e},{:e}",
                p.snr_db, p.bits, p.bit_errors, p.frames, p.frame_errors, p.ber, p.fer
            );
        }
        out
    }
}

/// Runs every SNR point until `target_bit_errors` or `max_frames`.
///
/// Frames are simulated in parallel batches on `workers` threads and then
/// accumulated strictly in frame order, stopping at the first frame that
/// meets the target, so the curve is the same for any worker count.
pub fn sweep_snr<T: Real>(cfg: &SimConfig, workers: usize) -> Result<BerCurve, SimError> {
    let link = Link::<T>::new(cfg)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| SimError::Pool(e.to_string()))?;
    let bits_per_frame = cfg.info_bits_per_frame as u64;

    let points = cfg
        .snr_db
        .iter()
        .map(|&snr| {
            let (mut frames, mut bit_errors, mut frame_errors) = (0u64, 0u64, 0u64);
            'point: while frames < cfg.max_frames && bit_errors < cfg.target_bit_errors {
                let end = (frames + DEFAULT_BATCH_FRAMES).min(cfg.max_frames);
                let batch: Vec<FrameResult> = pool.install(|| {
                    (frames..end)
                        .into_par_iter()
                        .map(|f| link.run_frame(snr, f))
                        .collect::<Result<_, _>>()
                })?;
                for r in batch {
                    frames += 1;
                    bit_errors += r.bit_errors;
                    frame_errors += u64::from(r.frame_error);
                    if bit_errors >= cfg.target_bit_errors {
                        break 'point;
                    }
                }
            }
            let bits = frames * bits_per_frame;
            Ok(BerPoint {
                snr_db: snr,
                bits,
                bit_errors,
                frames,
                frame_errors,
                ber: bit_errors as f64 / bits as f64,
                fer: frame_errors as f64 / frames as f64,
            })
        })
        .collect::<Result<Vec<_>, SimError>>()?;
    Ok(BerCurve { points })
}
