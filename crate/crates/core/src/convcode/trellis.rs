use super::{CodeError, CodeSpec};

/// State-transition graph of a feed-forward convolutional code.
///
/// Transition `(state, input)` is stored at index `2 * state + input`. Output
/// bits are packed into a mask where bit `j` is the output of generator `j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trellis {
    constraint_length: u32,
    n_out: usize,
    next: Vec<u32>,
    outputs: Vec<u32>,
}

impl Trellis {
    pub fn constraint_length(&self) -> u32 {
        self.constraint_length
    }

    pub fn n_out(&self) -> usize {
        self.n_out
    }

    pub fn num_states(&self) -> usize {
        1 << (self.constraint_length - 1)
    }

    pub fn num_transitions(&self) -> usize {
        self.next.len()
    }

    pub fn next_state(&self, state: usize, input: u8) -> usize {
        self.next[2 * state + input as usize] as usize
    }

    /// Output mask of a transition, bit `j` holding generator `j`'s output.
    pub fn output_mask(&self, state: usize, input: u8) -> u32 {
        self.outputs[2 * state + input as usize]
    }

    pub fn output_bits(&self, state: usize, input: u8) -> impl Iterator<Item = u8> + '_ {
        let mask = self.output_mask(state, input);
        (0..self.n_out).map(move |j| ((mask >> j) & 1) as u8)
    }

    pub fn output_weight(&self, state: usize, input: u8) -> u32 {
        self.output_mask(state, input).count_ones()
    }

    /// The input bit that leads into `state` (its newest register bit).
    pub fn input_into(&self, state: usize) -> u8 {
        (state >> (self.constraint_length - 2)) as u8
    }

    /// Both predecessors of `state`, lower-indexed first.
    pub fn predecessors(&self, state: usize) -> [usize; 2] {
        let base = (state << 1) & (self.num_states() - 1);
        [base, base | 1]
    }
}

pub fn build_trellis(spec: &CodeSpec) -> Trellis {
    let k = spec.constraint_length();
    let num_states = 1usize << (k - 1);
    let mut next = Vec::with_capacity(2 * num_states);
    let mut outputs = Vec::with_capacity(2 * num_states);
    for state in 0..num_states as u32 {
        for input in 0..2u32 {
            let register = (input << (k - 1)) | state;
            next.push(register >> 1);
            outputs.push(register_outputs(spec.generators(), register));
        }
    }
    Trellis {
        constraint_length: k,
        n_out: spec.n_out(),
        next,
        outputs,
    }
}

fn register_outputs(generators: &[u32], register: u32) -> u32 {
    generators
        .iter()
        .enumerate()
        .fold(0, |mask, (j, g)| mask | (((g & register).count_ones() & 1) << j))
}

/// Encodes `info_bits` starting from the all-zero state, optionally appending
/// `K-1` zero tail bits so the encoder also ends there.
pub fn encode(spec: &CodeSpec, info_bits: &[u8], terminate: bool) -> Result<Vec<u8>, CodeError> {
    if info_bits.is_empty() {
        return Err(CodeError::EmptyInput);
    }
    let k = spec.constraint_length();
    let tail = if terminate { spec.tail_len() } else { 0 };
    let mut out = Vec::with_capacity(spec.n_out() * (info_bits.len() + tail));
    let mut register = 0u32;
    let inputs = info_bits.iter().copied().chain(std::iter::repeat_n(0, tail));
    for bit in inputs {
        register = (register >> 1) | (u32::from(bit & 1) << (k - 1));
        for g in spec.generators() {
            out.push(((g & register).count_ones() & 1) as u8);
        }
    }
    Ok(out)
}
