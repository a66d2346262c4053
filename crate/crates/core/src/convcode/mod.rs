//! Feed-forward rate-1/n convolutional codes.
//!
//! Register convention: the newest input bit occupies the most significant
//! generator tap (bit `K-1` of the octal polynomial), and a trellis state holds
//! the previous `K-1` input bits with the newest in the most significant
//! position. Under this convention `K=7 g=133,171` is the familiar
//! industry-standard rate-1/2 code.

mod events;
mod trellis;
mod viterbi;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use events::{
    check_catastrophic, default_bounds, enumerate_error_events, enumerate_error_events_capped, free_distance,
    length_for_completeness, min_unmerged_weight, ErrorEvent, EventBounds, EventEnumeration, DEFAULT_EVENT_CAP,
};
pub use trellis::{build_trellis, encode, Trellis};
pub use viterbi::{viterbi_decode, viterbi_decode_with_cost};

/// Largest supported constraint length (32768 states).
pub const MAX_CONSTRAINT_LENGTH: u32 = 16;
/// Largest supported number of generator polynomials.
pub const MAX_OUTPUTS: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CodeError {
    #[error("constraint length must be in 2..={MAX_CONSTRAINT_LENGTH}, got {0}")]
    ConstraintLength(u32),
    #[error("a rate-1/n code needs between 2 and {MAX_OUTPUTS} generators, got {0}")]
    GeneratorCount(usize),
    #[error("generator {index} is zero")]
    ZeroGenerator { index: usize },
    #[error("generator {index} ({octal:o} octal) is wider than K={k} taps")]
    GeneratorTooWide { index: usize, octal: u32, k: u32 },
    #[error("no generator taps the newest register bit; the code is not delay-free")]
    NotDelayFree,
    #[error("cannot parse code description: {0}")]
    Parse(String),
    #[error("information sequence is empty")]
    EmptyInput,
    #[error("catastrophic code: zero-output cycle through state {state}")]
    Catastrophic { state: usize },
    #[error("invalid enumeration bounds: {0}")]
    Bounds(String),
    #[error("event enumeration exceeded the cap of {cap} events")]
    TooManyEvents { cap: usize },
    #[error("two input paths produce identical coded bits {coded}")]
    DuplicateEvent { coded: String },
    #[error("branch metric array of length {len} is not a whole number of {n_out}-bit steps")]
    MetricLength { len: usize, n_out: usize },
    #[error("terminated decoding needs at least {needed} trellis steps, got {got}")]
    TooFewSteps { needed: usize, got: usize },
    #[error("non-finite branch metric at coded bit {index}")]
    NonFiniteMetric { index: usize },
}

/// Generator polynomials and constraint length of a feed-forward rate-1/n code.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "CodeSpecRepr", into = "CodeSpecRepr")]
pub struct CodeSpec {
    constraint_length: u32,
    generators: Vec<u32>,
}

impl CodeSpec {
    pub fn new(constraint_length: u32, generators: Vec<u32>) -> Result<Self, CodeError> {
        if !(2..=MAX_CONSTRAINT_LENGTH).contains(&constraint_length) {
            return Err(CodeError::ConstraintLength(constraint_length));
        }
        if !(2..=MAX_OUTPUTS).contains(&generators.len()) {
            return Err(CodeError::GeneratorCount(generators.len()));
        }
        for (index, &g) in generators.iter().enumerate() {
            if g == 0 {
                return Err(CodeError::ZeroGenerator { index });
            }
            if g >> constraint_length != 0 {
                return Err(CodeError::GeneratorTooWide {
                    index,
                    octal: g,
                    k: constraint_length,
                });
            }
        }
        let newest_tap = 1 << (constraint_length - 1);
        if generators.iter().all(|g| g & newest_tap == 0) {
            return Err(CodeError::NotDelayFree);
        }
        Ok(Self {
            constraint_length,
            generators,
        })
    }

    /// The rate-1/2, K=7 code with generators 133 and 171 (octal).
    pub fn industry_standard() -> Self {
        Self::new(7, vec![0o133, 0o171]).expect("valid code")
    }

    pub fn constraint_length(&self) -> u32 {
        self.constraint_length
    }

    pub fn generators(&self) -> &[u32] {
        &self.generators
    }

    /// Coded bits per information bit (the code rate is `1 / n_out`).
    pub fn n_out(&self) -> usize {
        self.generators.len()
    }

    /// Number of zero tail bits appended by terminated encoding.
    pub fn tail_len(&self) -> usize {
        self.constraint_length as usize - 1
    }
}

impl fmt::Display for CodeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "K={} g=", self.constraint_length)?;
        for (i, g) in self.generators.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{g:o}")?;
        }
        Ok(())
    }
}

/// Parses `K=7 g=133,171` (generators in octal, tokens in any order).
impl FromStr for CodeSpec {
    type Err = CodeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut k = None;
        let mut generators = None;
        for token in s.split_whitespace() {
            let (key, value) = token
                .split_once('=')
                .ok_or_else(|| CodeError::Parse(format!("expected key=value, got `{token}`")))?;
            match key {
                "K" | "k" => {
                    let parsed = value
                        .parse::<u32>()
                        .map_err(|_| CodeError::Parse(format!("bad constraint length `{value}`")))?;
                    k = Some(parsed);
                }
                "g" | "G" => {
                    let parsed = value.split(',').map(parse_octal).collect::<Result<Vec<_>, _>>()?;
                    generators = Some(parsed);
                }
                other => return Err(CodeError::Parse(format!("unknown key `{other}`"))),
            }
        }
        let k = k.ok_or_else(|| CodeError::Parse("missing K=".into()))?;
        let generators = generators.ok_or_else(|| CodeError::Parse("missing g=".into()))?;
        Self::new(k, generators)
    }
}

fn parse_octal(s: &str) -> Result<u32, CodeError> {
    u32::from_str_radix(s.trim(), 8).map_err(|_| CodeError::Parse(format!("`{s}` is not octal")))
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CodeSpecRepr {
    constraint_length: u32,
    /// Octal strings, e.g. `"133"`.
    generators: Vec<String>,
}

impl TryFrom<CodeSpecRepr> for CodeSpec {
    type Error = CodeError;

    fn try_from(repr: CodeSpecRepr) -> Result<Self, Self::Error> {
        let generators = repr
            .generators
            .iter()
            .map(|g| parse_octal(g))
            .collect::<Result<Vec<_>, _>>()?;
        CodeSpec::new(repr.constraint_length, generators)
    }
}

impl From<CodeSpec> for CodeSpecRepr {
    fn from(spec: CodeSpec) -> Self {
        Self {
            constraint_length: spec.constraint_length,
            generators: spec.generators.iter().map(|g| format!("{g:o}")).collect(),
        }
    }
}

/// Renders a bit slice as a compact `0`/`1` string.
pub fn bits_to_string(bits: &[u8]) -> String {
    bits.iter().map(|&b| if b == 0 { '0' } else { '1' }).collect()
}
