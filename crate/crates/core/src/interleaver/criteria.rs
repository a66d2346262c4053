use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{alpha_vector, AlphaVector, CarrierMode, InterleaverError, InterleaverMap, Slot};
use crate::convcode::{CodeSpec, ErrorEvent, EventEnumeration};

/// The interleaver design criteria, applied per error event and phase.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Criterion {
    /// Consecutive coded bits land on different modulation symbols.
    DistinctSymbols,
    /// Consecutive coded bits land on different OFDM subcarriers.
    DistinctSubcarriers,
    /// Every stream carries at least one nonzero bit of the event (`alpha_s >= 1`).
    StreamCoverage,
}

impl Criterion {
    /// Criterion number in the list for the given mode.
    pub fn number(self, mode: CarrierMode) -> u8 {
        match (self, mode.is_ofdm()) {
            (Criterion::DistinctSymbols, _) => 1,
            (Criterion::DistinctSubcarriers, _) => 2,
            (Criterion::StreamCoverage, false) => 2,
            (Criterion::StreamCoverage, true) => 3,
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            Criterion::DistinctSymbols => "consecutive coded bits mapped over different symbols",
            Criterion::DistinctSubcarriers => "consecutive coded bits on different subcarriers",
            Criterion::StreamCoverage => "alpha_s >= 1 for every stream s",
        }
    }

    fn for_mode(mode: CarrierMode) -> &'static [Criterion] {
        if mode.is_ofdm() {
            &[
                Criterion::DistinctSymbols,
                Criterion::DistinctSubcarriers,
                Criterion::StreamCoverage,
            ]
        } else {
            &[Criterion::DistinctSymbols, Criterion::StreamCoverage]
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum Witness {
    /// Coded bits `offset` and `offset + 1` of the event collide.
    ConsecutiveBits { offset: usize, first: Slot, second: Slot },
    /// The event's per-stream counts, with at least one zero entry.
    Alpha { alpha: AlphaVector },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    /// Index into the checked enumeration.
    pub event_id: usize,
    pub phase: usize,
    pub criterion: u8,
    pub witness: Witness,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CriterionVerdict {
    pub criterion: u8,
    pub name: Criterion,
    pub description: String,
    pub pass: bool,
    pub violations: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CriteriaReport {
    pub mode: String,
    pub pass: bool,
    pub criteria: Vec<CriterionVerdict>,
    /// Sorted by `(event_id, phase, criterion)`.
    pub violations: Vec<Violation>,
    pub events_checked: usize,
    pub phases_checked: usize,
    pub complete_to_weight: u32,
    pub warnings: Vec<String>,
    /// Facts that hold beyond the bounded check, each labelled with its basis.
    pub notes: Vec<String>,
}

impl CriteriaReport {
    pub fn violation_count(&self) -> usize {
        self.violations.len()
    }

    pub fn first_violation(&self, criterion: u8) -> Option<&Violation> {
        self.violations.iter().find(|v| v.criterion == criterion)
    }

    /// Human-readable summary, listing at most `max_rows` violations.
    pub fn to_table(&self, events: &EventEnumeration, max_rows: usize) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "mode: {}", self.mode);
        let _ = writeln!(
            out,
            "events checked: {}  phases per event: {}  complete to d_H <= {}",
            self.events_checked, self.phases_checked, self.complete_to_weight
        );
        let _ = writeln!(
            out,
            "{:<4} {:<54} {:<6} {:>10}",
            "#", "criterion", "result", "violations"
        );
        for c in &self.criteria {
            let _ = writeln!(
                out,
                "{:<4} {:<54} {:<6} {:>10}",
                c.criterion,
                c.description,
                if c.pass { "PASS" } else { "FAIL" },
                c.violations
            );
        }
        if !self.violations.is_empty() {
            let _ = writeln!(
                out,
                "\n{:<6} {:<6} {:<4} {:<5} witness",
                "event", "phase", "crit", "d_H"
            );
            for v in self.violations.iter().take(max_rows) {
                let weight = events.events.get(v.event_id).map_or(0, |e| e.weight);
                let witness = match &v.witness {
                    Witness::ConsecutiveBits { offset, first, second } => {
                        format!("bits {offset},{} -> {first} / {second}", offset + 1)
                    }
                    Witness::Alpha { alpha } => format!("alpha = {alpha}"),
                };
                let _ = writeln!(
                    out,
                    "{:<6} {:<6} {:<4} {:<5} {witness}",
                    v.event_id, v.phase, v.criterion, weight
                );
            }
            if self.violations.len() > max_rows {
                let _ = writeln!(out, "... {} more", self.violations.len() - max_rows);
            }
        }
        for w in &self.warnings {
            let _ = writeln!(out, "warning: {w}");
        }
        for n in &self.notes {
            let _ = writeln!(out, "note: {n}");
        }
        let _ = writeln!(out, "overall: {}", if self.pass { "PASS" } else { "FAIL" });
        out
    }
}

/// Checks the single-carrier criteria (distinct symbols, `alpha_s >= 1`).
pub fn verify_single_carrier(
    map: &InterleaverMap,
    events: &EventEnumeration,
) -> Result<CriteriaReport, InterleaverError> {
    if map.mode().is_ofdm() {
        return Err(InterleaverError::ModeMismatch {
            operation: "single-carrier verification",
            expected: "single-carrier",
            got: "ofdm",
        });
    }
    Ok(check(map, events))
}

/// Checks the OFDM criteria (distinct symbols, distinct subcarriers, `alpha_s >= 1`).
pub fn verify_ofdm(map: &InterleaverMap, events: &EventEnumeration) -> Result<CriteriaReport, InterleaverError> {
    if !map.mode().is_ofdm() {
        return Err(InterleaverError::ModeMismatch {
            operation: "OFDM verification",
            expected: "ofdm",
            got: "single-carrier",
        });
    }
    Ok(check(map, events))
}

/// Dispatches on the map's carrier mode.
pub fn verify(map: &InterleaverMap, events: &EventEnumeration) -> CriteriaReport {
    check(map, events)
}

fn check(map: &InterleaverMap, events: &EventEnumeration) -> CriteriaReport {
    let mode = map.mode();
    let period = map.period();
    let mut violations: Vec<Violation> = events
        .events
        .par_iter()
        .enumerate()
        .flat_map_iter(|(event_id, event)| {
            (0..period).flat_map(move |phase| check_alignment(map, event, event_id, phase))
        })
        .collect();
    violations.sort_by_key(|v| (v.event_id, v.phase, v.criterion));

    let criteria: Vec<CriterionVerdict> = Criterion::for_mode(mode)
        .iter()
        .map(|&c| {
            let number = c.number(mode);
            let count = violations.iter().filter(|v| v.criterion == number).count();
            CriterionVerdict {
                criterion: number,
                name: c,
                description: c.description().to_string(),
                pass: count == 0,
                violations: count,
            }
        })
        .collect();

    let mut warnings = Vec::new();
    if events.events.is_empty() {
        warnings.push("no error events were checked; the pass verdict is vacuous".to_string());
    }
    if events.complete_to_weight < events.bounds.max_weight {
        warnings.push(format!(
            "enumeration is complete only to d_H <= {} (requested {})",
            events.complete_to_weight, events.bounds.max_weight
        ));
    }
    let mut notes = Vec::new();
    if map.num_streams() == 1 {
        notes.push("single stream: alpha_1 = d_H >= 1 for every event, so stream coverage holds trivially".to_string());
    }

    CriteriaReport {
        mode: mode.name().to_string(),
        pass: violations.is_empty(),
        criteria,
        violations,
        events_checked: events.events.len(),
        phases_checked: period,
        complete_to_weight: events.complete_to_weight,
        warnings,
        notes,
    }
}

fn check_alignment(map: &InterleaverMap, event: &ErrorEvent, event_id: usize, phase: usize) -> Vec<Violation> {
    let mode = map.mode();
    let mut found = Vec::new();
    let pairs =
        || (0..event.coded_bits.len().saturating_sub(1)).map(|j| (j, map.slot(phase + j), map.slot(phase + j + 1)));
    if let Some((offset, first, second)) = pairs().find(|(_, a, b)| a.symbol() == b.symbol()) {
        found.push(Violation {
            event_id,
            phase,
            criterion: Criterion::DistinctSymbols.number(mode),
            witness: Witness::ConsecutiveBits { offset, first, second },
        });
    }
    if mode.is_ofdm() {
        if let Some((offset, first, second)) = pairs().find(|(_, a, b)| a.subcarrier == b.subcarrier) {
            found.push(Violation {
                event_id,
                phase,
                criterion: Criterion::DistinctSubcarriers.number(mode),
                witness: Witness::ConsecutiveBits { offset, first, second },
            });
        }
    }
    let alpha = alpha_vector(map, event, phase);
    if !alpha.covers_all_streams() {
        found.push(Violation {
            event_id,
            phase,
            criterion: Criterion::StreamCoverage.number(mode),
            witness: Witness::Alpha { alpha },
        });
    }
    found
}

/// Argument that extends a pass to *all* error events for single-carrier maps
/// that assign bit `i` to stream `i mod S` when `S` divides `n_out`.
///
/// Coded bit `j` of an event comes from generator `j mod n_out`, so at any
/// phase each stream carries the complete output sequences of `n_out / S`
/// generators. The output of a nonzero generator for a nonzero finite input
/// is a nonzero polynomial product over GF(2), hence every stream sees at
/// least one nonzero bit. Consecutive bits always go to different streams
/// (`S >= 2`) or, with `S = 1` and `B = 1`, to different symbol times.
pub fn structural_argument(code: &CodeSpec, map: &InterleaverMap) -> Option<String> {
    let s = map.num_streams();
    let stream_round_robin = map
        .period_slots()
        .iter()
        .enumerate()
        .all(|(i, slot)| slot.stream == i % s);
    let symbols_ok = s >= 2 || map.bits_per_symbol() == 1;
    if map.mode().is_ofdm() || !stream_round_robin || !code.n_out().is_multiple_of(s) || !symbols_ok {
        return None;
    }
    Some(format!(
        "structural argument (all error events, not only the enumerated ones): stream assignment i mod {s} \
         sends the complete output of {} generator(s) of {code} to each stream at every phase; a nonzero \
         generator never annihilates a nonzero finite input, so alpha_s >= 1, and consecutive bits always \
         occupy different symbols",
        code.n_out() / s
    ))
}
