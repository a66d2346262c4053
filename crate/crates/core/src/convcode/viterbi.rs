use super::{CodeError, Trellis};
use crate::num::PathMetric;

/// Maximum-likelihood sequence decoding over a zero-terminated trellis.
///
/// `branch_metrics[i] = [cost of coded bit i being 0, cost of it being 1]`,
/// one entry per coded bit, `n_out` entries per trellis step. Returns the
/// information bits with the `K-1` tail bits stripped.
pub fn viterbi_decode<M: PathMetric>(trellis: &Trellis, branch_metrics: &[[M; 2]]) -> Result<Vec<u8>, CodeError> {
    viterbi_decode_with_cost(trellis, branch_metrics).map(|(bits, _)| bits)
}

/// As [`viterbi_decode`], also returning the total cost of the chosen path.
///
/// Ties are broken deterministically: every state has exactly two
/// predecessors, both reached by the same input bit, and on equal cost the
/// survivor is the lower-indexed predecessor.
pub fn viterbi_decode_with_cost<M: PathMetric>(
    trellis: &Trellis,
    branch_metrics: &[[M; 2]],
) -> Result<(Vec<u8>, M), CodeError> {
    let n_out = trellis.n_out();
    if !branch_metrics.len().is_multiple_of(n_out) {
        return Err(CodeError::MetricLength {
            len: branch_metrics.len(),
            n_out,
        });
    }
    if let Some(index) = branch_metrics
        .iter()
        .position(|m| !(m[0].is_finite_metric() && m[1].is_finite_metric()))
    {
        return Err(CodeError::NonFiniteMetric { index });
    }
    let steps = branch_metrics.len() / n_out;
    let tail = trellis.constraint_length() as usize - 1;
    if steps < tail + 1 {
        return Err(CodeError::TooFewSteps {
            needed: tail + 1,
            got: steps,
        });
    }

    let num_states = trellis.num_states();
    let mut metric = vec![M::zero(); num_states];
    let mut reached = vec![false; num_states];
    reached[0] = true;
    let mut next_metric = metric.clone();
    let mut next_reached = reached.clone();
    let mut decisions = vec![0u8; steps * num_states];
    let mut per_mask = vec![M::zero(); 1 << n_out];

    for (step, chunk) in branch_metrics.chunks_exact(n_out).enumerate() {
        for (mask, cost) in per_mask.iter_mut().enumerate() {
            *cost = chunk
                .iter()
                .enumerate()
                .fold(M::zero(), |acc, (j, m)| acc + m[(mask >> j) & 1]);
        }
        let row = &mut decisions[step * num_states..(step + 1) * num_states];
        for state in 0..num_states {
            let input = trellis.input_into(state);
            let [p0, p1] = trellis.predecessors(state);
            let c0 = reached[p0].then(|| metric[p0] + per_mask[trellis.output_mask(p0, input) as usize]);
            let c1 = reached[p1].then(|| metric[p1] + per_mask[trellis.output_mask(p1, input) as usize]);
            let (choice, best) = match (c0, c1) {
                (Some(a), Some(b)) if b < a => (1, Some(b)),
                (Some(a), _) => (0, Some(a)),
                (None, b) => (1, b),
            };
            row[state] = choice;
            next_reached[state] = best.is_some();
            next_metric[state] = best.unwrap_or_else(M::zero);
        }
        std::mem::swap(&mut metric, &mut next_metric);
        std::mem::swap(&mut reached, &mut next_reached);
    }

    let cost = metric[0];
    let mut inputs = vec![0u8; steps];
    let mut state = 0usize;
    for step in (0..steps).rev() {
        inputs[step] = trellis.input_into(state);
        let choice = decisions[step * num_states + state] as usize;
        state = trellis.predecessors(state)[choice];
    }
    debug_assert_eq!(state, 0);
    inputs.truncate(steps - tail);
    Ok((inputs, cost))
}
