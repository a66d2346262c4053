//! Monte Carlo BICMB link: encode, interleave, modulate, beamform over a
//! quasi-static Rayleigh channel, max-log demap, deinterleave and decode.

mod config;
mod diversity;
mod link;
mod sweep;

use thiserror::Error;

use crate::convcode::CodeError;
use crate::interleaver::InterleaverError;
use crate::mimo_phy::PhyError;

pub use config::{ChannelModel, SimConfig, SnrDb};
pub use diversity::{
    estimate_diversity, estimate_diversity_default, least_squares, DiversityEstimate, LineFit, MIN_FIT_POINTS,
};
pub use link::{run_frame, FrameResult, Link};
pub use sweep::{sweep_snr, BerCurve, BerPoint, DEFAULT_BATCH_FRAMES};

/// Bit errors a point needs before it is used in a diversity fit.
pub const FIT_ERROR_FLOOR: u64 = 100;

#[derive(Debug, Error)]
pub enum SimError {
    #[error("invalid simulation config: {0}")]
    Config(String),
    #[error(transparent)]
    Code(#[from] CodeError),
    #[error(transparent)]
    Interleaver(#[from] InterleaverError),
    #[error(transparent)]
    Phy(#[from] PhyError),
    #[error("frame {frame_index} at SNR {snr_db} dB: {source}")]
    Frame {
        snr_db: SnrDb,
        frame_index: u64,
        #[source]
        source: Box<SimError>,
    },
    #[error("diversity fit needs at least {needed} points with >= {floor} bit errors in the window, found {found}")]
    InsufficientPoints { needed: usize, floor: u64, found: usize },
    #[error("could not start worker pool: {0}")]
    Pool(String),
}
