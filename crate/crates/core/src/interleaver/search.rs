use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::criteria::{structural_argument, verify};
use super::{build_map, CriteriaReport, InterleaverError, InterleaverMap, InterleaverSpec, Slot};
use crate::convcode::{CodeSpec, EventEnumeration};

#[derive(Debug, Clone, Serialize)]
pub struct SearchSuccess {
    #[serde(skip)]
    pub map: InterleaverMap,
    /// The winning map in the interleaver text format.
    pub interleaver: String,
    pub candidates_tried: usize,
    pub report: CriteriaReport,
}

#[derive(Debug, Clone, Serialize)]
pub struct SearchFailure {
    #[serde(skip)]
    pub best_map: InterleaverMap,
    pub best_interleaver: String,
    pub best_violations: usize,
    pub candidates_tried: usize,
    pub best_report: CriteriaReport,
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "outcome", rename_all = "kebab-case")]
pub enum SearchOutcome {
    Found(SearchSuccess),
    Exhausted(SearchFailure),
}

impl SearchOutcome {
    pub fn is_found(&self) -> bool {
        matches!(self, SearchOutcome::Found(_))
    }
}

/// Looks for a map meeting every criterion on all `events` and phases.
///
/// Candidate 0 is the template itself; candidate `c >= 1` keeps the
/// template's stream assignment and shuffles each stream's slots with a
/// ChaCha8 generator seeded from `seed`, so the search order is reproducible.
pub fn search_interleaver(
    code: &CodeSpec,
    template: &InterleaverSpec,
    events: &EventEnumeration,
    budget: usize,
    seed: u64,
) -> Result<SearchOutcome, InterleaverError> {
    if events.events.is_empty() {
        return Err(InterleaverError::NoEvents);
    }
    if budget == 0 {
        return Err(InterleaverError::ZeroBudget);
    }
    let base = build_map(template)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: Option<(InterleaverMap, CriteriaReport)> = None;

    for candidate in 0..budget {
        let map = if candidate == 0 {
            base.clone()
        } else {
            shuffled_fill(&base, &mut rng)?
        };
        let mut report = verify(&map, events);
        if report.pass {
            report.notes.extend(structural_argument(code, &map));
            let interleaver = text_of(&map, candidate);
            return Ok(SearchOutcome::Found(SearchSuccess {
                map,
                interleaver,
                candidates_tried: candidate + 1,
                report,
            }));
        }
        let better = best
            .as_ref()
            .is_none_or(|(_, r)| report.violation_count() < r.violation_count());
        if better {
            best = Some((map, report));
        }
    }

    let (best_map, best_report) = best.expect("budget >= 1");
    let best_index = usize::from(best_map != base);
    Ok(SearchOutcome::Exhausted(SearchFailure {
        best_interleaver: text_of(&best_map, best_index),
        best_violations: best_report.violation_count(),
        best_map,
        candidates_tried: budget,
        best_report,
    }))
}

fn text_of(map: &InterleaverMap, candidate: usize) -> String {
    if candidate == 0 {
        map.spec().to_string()
    } else {
        map.to_custom_spec().to_string()
    }
}

/// Randomly permutes which of a stream's slots each of its bits occupies.
fn shuffled_fill(base: &InterleaverMap, rng: &mut ChaCha8Rng) -> Result<InterleaverMap, InterleaverError> {
    let slots = base.period_slots();
    let mut table: Vec<Slot> = slots.to_vec();
    for stream in 0..base.num_streams() {
        let positions: Vec<usize> = (0..slots.len()).filter(|&i| slots[i].stream == stream).collect();
        let mut targets: Vec<Slot> = positions.iter().map(|&i| slots[i]).collect();
        targets.shuffle(rng);
        for (&i, slot) in positions.iter().zip(targets) {
            table[i] = slot;
        }
    }
    InterleaverMap::from_table(base.spec(), table)
}
