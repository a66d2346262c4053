use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashSet};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::{bits_to_string, CodeError, Trellis};

/// Default cap on the number of enumerated events.
pub const DEFAULT_EVENT_CAP: usize = 1_000_000;

/// Extra weight above `d_free` covered by the default enumeration bound.
const DEFAULT_WEIGHT_MARGIN: u32 = 4;

/// A trellis path that leaves the all-zero state at step 0 and first
/// returns to it after `length` steps.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ErrorEvent {
    /// Input bits along the path, `length` of them; the last `K-1` are zero.
    pub input_bits: Vec<u8>,
    /// `n_out * length` coded bits.
    pub coded_bits: Vec<u8>,
    pub length: usize,
    /// Hamming weight of `coded_bits` (`d_H`).
    pub weight: u32,
}

impl ErrorEvent {
    pub fn input_weight(&self) -> u32 {
        self.input_bits.iter().map(|&b| u32::from(b)).sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EventBounds {
    pub max_weight: u32,
    pub max_length: usize,
}

/// All error events within `bounds`, sorted by `(weight, length, coded_bits)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EventEnumeration {
    pub bounds: EventBounds,
    pub events: Vec<ErrorEvent>,
    /// Every event with `d_H <= complete_to_weight` is in `events`, whatever its length.
    pub complete_to_weight: u32,
}

impl EventEnumeration {
    pub fn min_weight(&self) -> Option<u32> {
        self.events.first().map(|e| e.weight)
    }

    pub fn longest(&self) -> Option<usize> {
        self.events.iter().map(|e| e.length).max()
    }

    /// Events with exactly `weight`.
    pub fn count_at_weight(&self, weight: u32) -> usize {
        self.events.iter().filter(|e| e.weight == weight).count()
    }

    /// CSV with columns `event_id,d_H,L,input_bits,coded_bits`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("event_id,d_H,L,input_bits,coded_bits\n");
        for (id, e) in self.events.iter().enumerate() {
            let _ = writeln!(
                out,
                "{id},{},{},{},{}",
                e.weight,
                e.length,
                bits_to_string(&e.input_bits),
                bits_to_string(&e.coded_bits)
            );
        }
        out
    }
}

/// Enumerates every error event with `d_H <= max_weight` and `L <= max_length`.
pub fn enumerate_error_events(
    trellis: &Trellis,
    max_weight: u32,
    max_length: usize,
) -> Result<EventEnumeration, CodeError> {
    enumerate_error_events_capped(trellis, max_weight, max_length, DEFAULT_EVENT_CAP)
}

pub fn enumerate_error_events_capped(
    trellis: &Trellis,
    max_weight: u32,
    max_length: usize,
    cap: usize,
) -> Result<EventEnumeration, CodeError> {
    if max_weight < 1 || max_length < 1 {
        return Err(CodeError::Bounds(format!(
            "max_dH and max_L must be at least 1 (got {max_weight}, {max_length})"
        )));
    }
    let to_zero_weight = weight_to_zero(trellis);
    let n_out = trellis.n_out();

    struct Frame {
        state: usize,
        weight: u32,
        depth: usize,
        next_input: u8,
    }

    let mut events = Vec::new();
    let mut inputs: Vec<u8> = Vec::with_capacity(max_length);
    let mut coded: Vec<u8> = Vec::with_capacity(max_length * n_out);

    // Depth-first over input sequences starting with 1; a branch is cut as
    // soon as no continuation can remerge within the bounds.
    let first_state = trellis.next_state(0, 1);
    let first_weight = trellis.output_weight(0, 1);
    inputs.push(1);
    coded.extend(trellis.output_bits(0, 1));
    let mut stack = vec![Frame {
        state: first_state,
        weight: first_weight,
        depth: 1,
        next_input: 0,
    }];
    let viable = |state: usize, weight: u32, depth: usize| {
        weight.saturating_add(to_zero_weight[state]) <= max_weight && depth + steps_to_zero(state) <= max_length
    };
    if !viable(first_state, first_weight, 1) {
        stack.clear();
    }

    while let Some(frame) = stack.last_mut() {
        if frame.next_input > 1 {
            stack.pop();
            inputs.pop();
            coded.truncate(coded.len() - n_out);
            continue;
        }
        let input = frame.next_input;
        frame.next_input += 1;
        let (state, weight, depth) = (frame.state, frame.weight, frame.depth);
        let next = trellis.next_state(state, input);
        let next_weight = weight + trellis.output_weight(state, input);
        if !viable(next, next_weight, depth + 1) {
            continue;
        }
        inputs.push(input);
        coded.extend(trellis.output_bits(state, input));
        if next == 0 {
            if events.len() == cap {
                return Err(CodeError::TooManyEvents { cap });
            }
            events.push(ErrorEvent {
                input_bits: inputs.clone(),
                coded_bits: coded.clone(),
                length: depth + 1,
                weight: next_weight,
            });
            inputs.pop();
            coded.truncate(coded.len() - n_out);
        } else {
            stack.push(Frame {
                state: next,
                weight: next_weight,
                depth: depth + 1,
                next_input: 0,
            });
        }
    }
    let mut seen = HashSet::with_capacity(events.len());
    for e in &events {
        if !seen.insert(e.coded_bits.as_slice()) {
            return Err(CodeError::DuplicateEvent {
                coded: bits_to_string(&e.coded_bits),
            });
        }
    }
    events.sort_by(|a, b| (a.weight, a.length, &a.coded_bits).cmp(&(b.weight, b.length, &b.coded_bits)));

    let longer_bound = min_unmerged_weight(trellis, max_length);
    let complete_to_weight = max_weight.min(longer_bound.saturating_sub(1));
    Ok(EventEnumeration {
        bounds: EventBounds { max_weight, max_length },
        events,
        complete_to_weight,
    })
}

/// Minimum coded weight over paths that leave state 0 and stay out of it
/// for `steps` steps. Any error event longer than `steps` weighs at least this.
pub fn min_unmerged_weight(trellis: &Trellis, steps: usize) -> u32 {
    let num_states = trellis.num_states();
    let mut best = vec![u32::MAX; num_states];
    if steps == 0 {
        return 0;
    }
    best[trellis.next_state(0, 1)] = trellis.output_weight(0, 1);
    for _ in 1..steps {
        let mut next = vec![u32::MAX; num_states];
        for (state, &w) in best.iter().enumerate() {
            if w == u32::MAX {
                continue;
            }
            for input in 0..2 {
                let ns = trellis.next_state(state, input);
                if ns != 0 {
                    let cand = w + trellis.output_weight(state, input);
                    next[ns] = next[ns].min(cand);
                }
            }
        }
        best = next;
    }
    best.into_iter().min().unwrap_or(u32::MAX)
}

/// Rejects codes with a zero-output cycle through nonzero states.
pub fn check_catastrophic(trellis: &Trellis) -> Result<(), CodeError> {
    let num_states = trellis.num_states();
    // Kahn's algorithm on the zero-output subgraph restricted to nonzero states.
    let mut indegree = vec![0usize; num_states];
    for state in 1..num_states {
        for input in 0..2 {
            let ns = trellis.next_state(state, input);
            if ns != 0 && trellis.output_mask(state, input) == 0 {
                indegree[ns] += 1;
            }
        }
    }
    let mut queue: Vec<usize> = (1..num_states).filter(|&s| indegree[s] == 0).collect();
    let mut removed = 0;
    while let Some(state) = queue.pop() {
        removed += 1;
        for input in 0..2 {
            let ns = trellis.next_state(state, input);
            if ns != 0 && trellis.output_mask(state, input) == 0 {
                indegree[ns] -= 1;
                if indegree[ns] == 0 {
                    queue.push(ns);
                }
            }
        }
    }
    if removed == num_states - 1 {
        Ok(())
    } else {
        let state = (1..num_states).find(|&s| indegree[s] > 0).unwrap_or(0);
        Err(CodeError::Catastrophic { state })
    }
}

/// Minimum `d_H` over all error events, by Dijkstra over output weights.
pub fn free_distance(trellis: &Trellis) -> Result<u32, CodeError> {
    check_catastrophic(trellis)?;
    let num_states = trellis.num_states();
    let mut dist = vec![u32::MAX; num_states];
    let start = trellis.next_state(0, 1);
    let mut heap = BinaryHeap::new();
    dist[start] = trellis.output_weight(0, 1);
    heap.push(Reverse((dist[start], start)));
    let mut best = u32::MAX;
    while let Some(Reverse((d, state))) = heap.pop() {
        if d > dist[state] || d >= best {
            continue;
        }
        for input in 0..2 {
            let ns = trellis.next_state(state, input);
            let nd = d + trellis.output_weight(state, input);
            if ns == 0 {
                best = best.min(nd);
            } else if nd < dist[ns] {
                dist[ns] = nd;
                heap.push(Reverse((nd, ns)));
            }
        }
    }
    Ok(best)
}

/// Default "error paths of interest": `d_H <= d_free + 4`, with the length
/// bound just long enough that the enumeration is complete at that weight.
pub fn default_bounds(trellis: &Trellis) -> Result<EventBounds, CodeError> {
    let max_weight = free_distance(trellis)? + DEFAULT_WEIGHT_MARGIN;
    Ok(EventBounds {
        max_weight,
        max_length: length_for_completeness(trellis, max_weight),
    })
}

/// Smallest length `L` such that every event longer than `L` weighs more than `weight`.
pub fn length_for_completeness(trellis: &Trellis, weight: u32) -> usize {
    let mut steps = 1;
    while min_unmerged_weight(trellis, steps) <= weight {
        steps += 1;
    }
    steps
}

/// Minimum output weight of any path from each state back to state 0.
fn weight_to_zero(trellis: &Trellis) -> Vec<u32> {
    let num_states = trellis.num_states();
    let mut dist = vec![u32::MAX; num_states];
    dist[0] = 0;
    // Bellman-Ford style relaxation; every state reaches 0 in K-1 zero inputs.
    loop {
        let mut changed = false;
        for state in 0..num_states {
            for input in 0..2 {
                let ns = trellis.next_state(state, input);
                if dist[ns] == u32::MAX {
                    continue;
                }
                let cand = dist[ns] + trellis.output_weight(state, input);
                if cand < dist[state] {
                    dist[state] = cand;
                    changed = true;
                }
            }
        }
        if !changed {
            return dist;
        }
    }
}

/// Zero inputs needed to flush `state` (its register bit length).
fn steps_to_zero(state: usize) -> usize {
    (usize::BITS - state.leading_zeros()) as usize
}
