//! Periodic bit interleavers for multi-stream transmission and the design
//! criteria they must meet.
//!
//! A coded bit `i` is placed on a [`Slot`]: a stream, a symbol time, a bit
//! position inside the symbol label and, for OFDM, a subcarrier. An error
//! event can start at any offset (phase) of the period, so every criterion is
//! checked at all `P` phases.

mod criteria;
mod map;
mod search;
mod spec;

use thiserror::Error;

pub use criteria::{
    structural_argument, verify, verify_ofdm, verify_single_carrier, CriteriaReport, Criterion, CriterionVerdict,
    Violation, Witness,
};
pub use map::{alpha_vector, build_map, AlphaVector, InterleaverMap, Slot};
pub use search::{search_interleaver, SearchFailure, SearchOutcome, SearchSuccess};
pub use spec::{CarrierMode, InterleaverKind, InterleaverSpec};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InterleaverError {
    #[error("invalid interleaver: {0}")]
    Invalid(String),
    #[error("cannot parse interleaver description: {0}")]
    Parse(String),
    #[error("custom table has {got} entries, period is {expected}")]
    TableLength { expected: usize, got: usize },
    #[error("custom table entry {index} reuses slot {slot}")]
    DuplicateSlot { index: usize, slot: Slot },
    #[error("custom table entry {index} ({slot}) is outside the configured streams/slots/subcarriers")]
    SlotOutOfRange { index: usize, slot: Slot },
    #[error("{operation} needs a {expected} map, got {got}")]
    ModeMismatch {
        operation: &'static str,
        expected: &'static str,
        got: &'static str,
    },
    #[error("interleaver search needs a nonempty event set")]
    NoEvents,
    #[error("interleaver search budget must be at least 1 candidate")]
    ZeroBudget,
}
