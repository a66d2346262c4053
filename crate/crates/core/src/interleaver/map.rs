use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::{CarrierMode, InterleaverError, InterleaverKind, InterleaverSpec};
use crate::convcode::ErrorEvent;

/// Transmission position of one coded bit. `stream` is zero-based here and
/// one-based in every text rendering.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Slot {
    pub stream: usize,
    pub symbol_time: usize,
    pub bit_slot: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subcarrier: Option<usize>,
}

impl Slot {
    pub fn new(stream: usize, symbol_time: usize, bit_slot: usize, subcarrier: Option<usize>) -> Self {
        Self {
            stream,
            symbol_time,
            bit_slot,
            subcarrier,
        }
    }

    /// The modulation symbol this bit belongs to: `(stream, time, subcarrier)`.
    pub fn symbol(&self) -> (usize, usize, Option<usize>) {
        (self.stream, self.symbol_time, self.subcarrier)
    }
}

impl fmt::Display for Slot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.stream + 1, self.symbol_time, self.bit_slot)?;
        if let Some(c) = self.subcarrier {
            write!(f, ":{c}")?;
        }
        Ok(())
    }
}

/// One period of slots, extended periodically: bit `i` maps like `i mod P`
/// with its symbol time shifted by `(i / P) * time_span`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InterleaverMap {
    spec: InterleaverSpec,
    slots: Vec<Slot>,
    time_span: usize,
}

impl InterleaverMap {
    pub fn spec(&self) -> &InterleaverSpec {
        &self.spec
    }

    pub fn num_streams(&self) -> usize {
        self.spec.num_streams
    }

    pub fn bits_per_symbol(&self) -> usize {
        self.spec.bits_per_symbol
    }

    pub fn mode(&self) -> CarrierMode {
        self.spec.mode
    }

    pub fn period(&self) -> usize {
        self.spec.period
    }

    /// Symbol times occupied by one period.
    pub fn time_span(&self) -> usize {
        self.time_span
    }

    /// The slots of one period.
    pub fn period_slots(&self) -> &[Slot] {
        &self.slots
    }

    pub fn slot(&self, index: usize) -> Slot {
        let period = self.spec.period;
        let mut slot = self.slots[index % period];
        slot.symbol_time += (index / period) * self.time_span;
        slot
    }

    pub fn stream_of(&self, index: usize) -> usize {
        self.slots[index % self.spec.period].stream
    }

    /// True when the period fills every `(stream, time, bit[, subcarrier])`
    /// position of its `time_span`, i.e. it describes a complete transmit grid.
    pub fn fills_grid(&self) -> bool {
        let grid = self.spec.num_streams * self.spec.bits_per_symbol * self.spec.mode.subcarriers() * self.time_span;
        grid == self.spec.period
    }

    /// Same assignment written out as an explicit table.
    pub fn to_custom_spec(&self) -> InterleaverSpec {
        self.spec.with_kind(InterleaverKind::Custom(self.slots.clone()))
    }

    /// Rebuilds a map from explicit slots, validating the bijection.
    pub(crate) fn from_table(spec: &InterleaverSpec, table: Vec<Slot>) -> Result<Self, InterleaverError> {
        build_map(&spec.with_kind(InterleaverKind::Custom(table)))
    }
}

pub fn build_map(spec: &InterleaverSpec) -> Result<InterleaverMap, InterleaverError> {
    spec.validate()?;
    let s = spec.num_streams;
    let per_stream = spec.period / s;
    let slots: Vec<Slot> = match &spec.kind {
        InterleaverKind::RoundRobin => (0..spec.period).map(|i| fill_slot(spec, i % s, i / s)).collect(),
        InterleaverKind::Block => (0..spec.period)
            .map(|i| fill_slot(spec, i / per_stream, i % per_stream))
            .collect(),
        InterleaverKind::Custom(table) => {
            let nc = spec.mode.subcarriers();
            let mut seen = HashSet::with_capacity(table.len());
            for (index, slot) in table.iter().enumerate() {
                let carrier_ok = match (spec.mode, slot.subcarrier) {
                    (CarrierMode::SingleCarrier, None) => true,
                    (CarrierMode::Ofdm { .. }, Some(c)) => c < nc,
                    _ => false,
                };
                if slot.stream >= s || slot.bit_slot >= spec.bits_per_symbol || !carrier_ok {
                    return Err(InterleaverError::SlotOutOfRange { index, slot: *slot });
                }
                if !seen.insert(*slot) {
                    return Err(InterleaverError::DuplicateSlot { index, slot: *slot });
                }
            }
            table.clone()
        }
    };
    let time_span = slots.iter().map(|sl| sl.symbol_time + 1).max().unwrap_or(1);
    Ok(InterleaverMap {
        spec: spec.clone(),
        slots,
        time_span,
    })
}

/// Slot of the `k`-th bit carried by `stream`: `B` bits per symbol, and in
/// OFDM mode subcarriers are filled before symbol times advance.
fn fill_slot(spec: &InterleaverSpec, stream: usize, k: usize) -> Slot {
    let b = spec.bits_per_symbol;
    let symbol = k / b;
    match spec.mode {
        CarrierMode::SingleCarrier => Slot::new(stream, symbol, k % b, None),
        CarrierMode::Ofdm { num_subcarriers } => {
            Slot::new(stream, symbol / num_subcarriers, k % b, Some(symbol % num_subcarriers))
        }
    }
}

/// Per-stream count of the event's nonzero coded bits (`alpha_s`).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct AlphaVector(pub Vec<u32>);

impl AlphaVector {
    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Zero-based index of the first stream with no errored bit.
    pub fn first_zero(&self) -> Option<usize> {
        self.0.iter().position(|&a| a == 0)
    }

    pub fn covers_all_streams(&self) -> bool {
        self.first_zero().is_none()
    }
}

impl fmt::Display for AlphaVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{a}")?;
        }
        f.write_str(")")
    }
}

/// `alpha[s]` counts the coded bits equal to 1 in `event` that land on
/// stream `s` when the event's first coded bit sits at `phase`.
pub fn alpha_vector(map: &InterleaverMap, event: &ErrorEvent, phase: usize) -> AlphaVector {
    debug_assert!(phase < map.period());
    let mut alpha = vec![0u32; map.num_streams()];
    for (j, &bit) in event.coded_bits.iter().enumerate() {
        if bit != 0 {
            alpha[map.stream_of(phase + j)] += 1;
        }
    }
    AlphaVector(alpha)
}
