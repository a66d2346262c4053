//! Reference implementations used by the integration tests. They share no
//! code with the library: their own shift register, their own state
//! numbering (newest bit in the LSB) and brute force wherever it is cheap.
#![allow(dead_code)]

use statrs::function::erf::erfc;

/// Rate-1/n feed-forward codes with K <= 4 used for oracle comparisons.
pub const SMALL_CODES: &[(u32, &[u32])] = &[
    (2, &[3, 1]),
    (2, &[3, 2]),
    (3, &[5, 7]),
    (3, &[7, 5]),
    (3, &[7, 6]),
    (3, &[5, 7, 7]),
    (4, &[0o13, 0o17]),
    (4, &[0o15, 0o17]),
    (4, &[0o13, 0o15, 0o17]),
];

/// Output bits of one step. `history[0]` is the current input, `history[i]`
/// the input `i` steps ago; tap `i` is bit `K-1-i` of each generator.
fn step_outputs(k: u32, gens: &[u32], history: &[u8]) -> Vec<u8> {
    gens.iter()
        .map(|&g| {
            (0..k as usize).fold(0u8, |acc, i| {
                let tap = (g >> (k as usize - 1 - i)) & 1;
                acc ^ (tap as u8 & history[i])
            })
        })
        .collect()
}

/// Encodes `input` from the zero state without appending a tail.
pub fn shift_register_encode(k: u32, gens: &[u32], input: &[u8]) -> Vec<u8> {
    let mut out = Vec::with_capacity(input.len() * gens.len());
    for t in 0..input.len() {
        let history: Vec<u8> = (0..k as usize).map(|i| if t >= i { input[t - i] } else { 0 }).collect();
        out.extend(step_outputs(k, gens, &history));
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct OracleEvent {
    pub weight: u32,
    pub length: usize,
    pub coded: Vec<u8>,
    pub input: Vec<u8>,
}

/// Every input sequence of length `L <= max_len` that starts with 1, ends
/// with `K-1` zeros and holds a nonzero register until the last step.
pub fn brute_force_events(k: u32, gens: &[u32], max_weight: u32, max_len: usize) -> Vec<OracleEvent> {
    let m = (k - 1) as usize;
    let mut events = Vec::new();
    for length in (m + 1)..=max_len {
        let free = length - m - 1;
        for pattern in 0u64..(1 << free) {
            let mut input = vec![0u8; length];
            input[0] = 1;
            for (j, bit) in input[1..=free].iter_mut().enumerate() {
                *bit = ((pattern >> j) & 1) as u8;
            }
            // The register is zero once m consecutive zeros have been shifted in.
            let remerges_early = (m..length - 1).any(|t| input[t + 1 - m..=t].iter().all(|&b| b == 0));
            if remerges_early {
                continue;
            }
            let coded = shift_register_encode(k, gens, &input);
            let weight = coded.iter().map(|&b| u32::from(b)).sum();
            if weight <= max_weight {
                events.push(OracleEvent {
                    weight,
                    length,
                    coded,
                    input,
                });
            }
        }
    }
    events.sort();
    events
}

/// Free distance by Bellman-Ford over register contents (newest bit in the LSB).
pub fn free_distance_oracle(k: u32, gens: &[u32]) -> u32 {
    let m = (k - 1) as usize;
    let states = 1usize << m;
    let step = |state: usize, input: u8| -> (usize, u32) {
        let mut history = vec![input];
        history.extend((0..m).map(|i| ((state >> i) & 1) as u8));
        let weight = step_outputs(k, gens, &history).iter().map(|&b| u32::from(b)).sum();
        let next = ((state << 1) | input as usize) & (states - 1);
        (next, weight)
    };
    let mut dist = vec![u32::MAX; states];
    let (first, w) = step(0, 1);
    let mut best = u32::MAX;
    if first == 0 {
        return w;
    }
    dist[first] = w;
    for _ in 0..states * 4 {
        for s in 1..states {
            if dist[s] == u32::MAX {
                continue;
            }
            for input in 0..2 {
                let (ns, w) = step(s, input);
                let cand = dist[s] + w;
                if ns == 0 {
                    best = best.min(cand);
                } else if cand < dist[ns] {
                    dist[ns] = cand;
                }
            }
        }
    }
    best
}

/// Minimum of `sum_i metric[i][coded_i]` over every terminated codeword
/// with `info_len` information bits, found by trying them all.
pub fn exhaustive_min_cost(k: u32, gens: &[u32], info_len: usize, metrics: &[[i64; 2]]) -> i64 {
    let m = (k - 1) as usize;
    (0u64..(1 << info_len))
        .map(|pattern| {
            let mut input: Vec<u8> = (0..info_len).map(|j| ((pattern >> j) & 1) as u8).collect();
            input.extend(std::iter::repeat_n(0, m));
            codeword_cost(&shift_register_encode(k, gens, &input), metrics)
        })
        .min()
        .expect("at least one codeword")
}

pub fn codeword_cost(coded: &[u8], metrics: &[[i64; 2]]) -> i64 {
    coded.iter().zip(metrics).map(|(&b, m)| m[b as usize]).sum()
}

/// Eigenvalues of `H^H H` for a 2x2 complex `H` given as `[[re, im]; 4]`
/// row-major, largest first.
pub fn gram_eigenvalues_2x2(h: &[[f64; 2]; 4]) -> (f64, f64) {
    let abs2 = |z: [f64; 2]| z[0] * z[0] + z[1] * z[1];
    let trace = h.iter().map(|&z| abs2(z)).sum::<f64>();
    // det(H^H H) = |det H|^2
    let det_re = h[0][0] * h[3][0] - h[0][1] * h[3][1] - (h[1][0] * h[2][0] - h[1][1] * h[2][1]);
    let det_im = h[0][0] * h[3][1] + h[0][1] * h[3][0] - (h[1][0] * h[2][1] + h[1][1] * h[2][0]);
    let det = det_re * det_re + det_im * det_im;
    let disc = (trace * trace - 4.0 * det).max(0.0).sqrt();
    let large = 0.5 * (trace + disc);
    let small = if large > 0.0 { det / large } else { 0.0 };
    (large, small)
}

/// Gaussian tail probability.
pub fn q_function(x: f64) -> f64 {
    0.5 * erfc(x / std::f64::consts::SQRT_2)
}

/// Uncoded BPSK bit error rate at `Eb/N0 = 10^(snr_db/10)`.
pub fn bpsk_ber(snr_db: f64) -> f64 {
    q_function((2.0 * 10f64.powf(snr_db / 10.0)).sqrt())
}

/// Stream carrying coded bit `index` for the built-in fills.
pub fn stream_of_builtin(kind_is_block: bool, streams: usize, period: usize, index: usize) -> usize {
    let i = index % period;
    if kind_is_block {
        i / (period / streams)
    } else {
        i % streams
    }
}

/// Hard-decision-free Viterbi over real-valued bit costs, with its own
/// state numbering (newest bit in the LSB). Returns the information bits.
pub fn reference_viterbi(k: u32, gens: &[u32], costs: &[[f64; 2]]) -> Vec<u8> {
    let m = (k - 1) as usize;
    let n = gens.len();
    let states = 1usize << m;
    let steps = costs.len() / n;
    let mut metric = vec![f64::INFINITY; states];
    metric[0] = 0.0;
    let mut back: Vec<Vec<(usize, u8)>> = Vec::with_capacity(steps);
    for t in 0..steps {
        let mut next = vec![f64::INFINITY; states];
        let mut choice = vec![(0usize, 0u8); states];
        for (s, &here) in metric.iter().enumerate() {
            if here.is_infinite() {
                continue;
            }
            for input in 0..2u8 {
                let mut history = vec![input];
                history.extend((0..m).map(|i| ((s >> i) & 1) as u8));
                let out = step_outputs(k, gens, &history);
                let branch: f64 = out.iter().enumerate().map(|(j, &b)| costs[t * n + j][b as usize]).sum();
                let ns = ((s << 1) | input as usize) & (states - 1);
                if here + branch < next[ns] {
                    next[ns] = here + branch;
                    choice[ns] = (s, input);
                }
            }
        }
        metric = next;
        back.push(choice);
    }
    let mut state = 0;
    let mut bits = vec![0u8; steps];
    for t in (0..steps).rev() {
        let (prev, input) = back[t][state];
        bits[t] = input;
        state = prev;
    }
    bits.truncate(steps - m);
    bits
}
