//! Beamformed MIMO channel: Rayleigh channel matrices, their SVD, and
//! Gray-labelled constellations with max-log bit metrics.

mod channel;
mod constellation;
mod svd;

use thiserror::Error;

pub use channel::{sample_channel, CMatrix, ChannelRealization};
pub use constellation::{Constellation, ConstellationName};
pub use svd::{svd_decompose, SvdResult, JACOBI_MAX_SWEEPS, JACOBI_TOLERANCE};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PhyError {
    #[error("matrix dimensions must be at least 1x1, got {rows}x{cols}")]
    Dimension { rows: usize, cols: usize },
    #[error("expected {expected} matrix entries, got {got}")]
    EntryCount { expected: usize, got: usize },
    #[error("matrix has a non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
    #[error("Jacobi SVD did not converge within {sweeps} sweeps")]
    NoConvergence { sweeps: usize },
    #[error("{len} bits is not a multiple of {bits_per_symbol} bits per symbol")]
    BitLength { len: usize, bits_per_symbol: usize },
    #[error("unknown constellation `{0}` (bpsk|qpsk|qam16)")]
    UnknownConstellation(String),
}
