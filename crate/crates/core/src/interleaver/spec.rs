use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{InterleaverError, Slot};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CarrierMode {
    SingleCarrier,
    Ofdm { num_subcarriers: usize },
}

impl CarrierMode {
    pub fn name(&self) -> &'static str {
        match self {
            CarrierMode::SingleCarrier => "single-carrier",
            CarrierMode::Ofdm { .. } => "ofdm",
        }
    }

    pub fn is_ofdm(&self) -> bool {
        matches!(self, CarrierMode::Ofdm { .. })
    }

    /// Subcarriers per OFDM symbol, 1 for single-carrier.
    pub fn subcarriers(&self) -> usize {
        match *self {
            CarrierMode::SingleCarrier => 1,
            CarrierMode::Ofdm { num_subcarriers } => num_subcarriers,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum InterleaverKind {
    /// Bit `i` goes to stream `i mod S`; each stream fills its symbols in order.
    RoundRobin,
    /// The period is cut into `S` contiguous blocks, one per stream.
    Block,
    /// Explicit slot for each of the `P` bit positions of a period.
    Custom(Vec<Slot>),
}

impl InterleaverKind {
    pub fn name(&self) -> &'static str {
        match self {
            InterleaverKind::RoundRobin => "round-robin",
            InterleaverKind::Block => "block",
            InterleaverKind::Custom(_) => "custom",
        }
    }
}

/// Parameters of a periodic interleaver.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "SpecRepr", into = "SpecRepr")]
pub struct InterleaverSpec {
    pub num_streams: usize,
    pub bits_per_symbol: usize,
    pub mode: CarrierMode,
    /// Coded bits per interleaver cycle.
    pub period: usize,
    pub kind: InterleaverKind,
}

impl InterleaverSpec {
    pub fn new(
        num_streams: usize,
        bits_per_symbol: usize,
        mode: CarrierMode,
        period: usize,
        kind: InterleaverKind,
    ) -> Result<Self, InterleaverError> {
        let spec = Self {
            num_streams,
            bits_per_symbol,
            mode,
            period,
            kind,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn round_robin(num_streams: usize, bits_per_symbol: usize, period: usize) -> Result<Self, InterleaverError> {
        Self::new(
            num_streams,
            bits_per_symbol,
            CarrierMode::SingleCarrier,
            period,
            InterleaverKind::RoundRobin,
        )
    }

    pub fn block(num_streams: usize, bits_per_symbol: usize, period: usize) -> Result<Self, InterleaverError> {
        Self::new(
            num_streams,
            bits_per_symbol,
            CarrierMode::SingleCarrier,
            period,
            InterleaverKind::Block,
        )
    }

    pub fn validate(&self) -> Result<(), InterleaverError> {
        let invalid = |msg: String| Err(InterleaverError::Invalid(msg));
        if self.num_streams == 0 {
            return invalid("S must be at least 1".into());
        }
        if self.bits_per_symbol == 0 {
            return invalid("B must be at least 1".into());
        }
        if self.mode.subcarriers() == 0 {
            return invalid("Nc must be at least 1".into());
        }
        let per_cycle = self.num_streams * self.bits_per_symbol;
        if self.period == 0 || !self.period.is_multiple_of(per_cycle) {
            return invalid(format!(
                "P={} is not a positive multiple of S*B={per_cycle}",
                self.period
            ));
        }
        let uniform = !matches!(self.kind, InterleaverKind::Custom(_));
        let grid = per_cycle * self.mode.subcarriers();
        if self.mode.is_ofdm() && uniform && !self.period.is_multiple_of(grid) {
            return invalid(format!("P={} is not a multiple of S*B*Nc={grid}", self.period));
        }
        if let InterleaverKind::Custom(table) = &self.kind {
            if table.len() != self.period {
                return Err(InterleaverError::TableLength {
                    expected: self.period,
                    got: table.len(),
                });
            }
        }
        Ok(())
    }

    /// The same parameters with a different kind.
    pub fn with_kind(&self, kind: InterleaverKind) -> Self {
        Self { kind, ..self.clone() }
    }
}

/// Text form: `S=2 B=1 mode=sc kind=round-robin P=32`, with `Nc=<n>` for
/// `mode=ofdm` and `table=<s:t:b[:c],...>` for `kind=custom` (streams 1-based).
impl fmt::Display for InterleaverSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "S={} B={}", self.num_streams, self.bits_per_symbol)?;
        match self.mode {
            CarrierMode::SingleCarrier => f.write_str(" mode=sc")?,
            CarrierMode::Ofdm { num_subcarriers } => write!(f, " mode=ofdm Nc={num_subcarriers}")?,
        }
        write!(f, " kind={} P={}", self.kind.name(), self.period)?;
        if let InterleaverKind::Custom(table) = &self.kind {
            f.write_str(" table=")?;
            for (i, slot) in table.iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{slot}")?;
            }
        }
        Ok(())
    }
}

impl FromStr for InterleaverSpec {
    type Err = InterleaverError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parse_err = |msg: String| InterleaverError::Parse(msg);
        let mut streams = None;
        let mut bits = None;
        let mut mode = None;
        let mut subcarriers = None;
        let mut kind = None;
        let mut period = None;
        let mut table = None;
        let content = s
            .lines()
            .map(|line| line.split('#').next().unwrap_or(""))
            .collect::<Vec<_>>()
            .join(" ");
        for token in content.split_whitespace() {
            let (key, value) = token
                .split_once('=')
                .ok_or_else(|| parse_err(format!("expected key=value, got `{token}`")))?;
            let number = || {
                value
                    .parse::<usize>()
                    .map_err(|_| parse_err(format!("`{key}` needs an integer, got `{value}`")))
            };
            match key {
                "S" => streams = Some(number()?),
                "B" => bits = Some(number()?),
                "P" => period = Some(number()?),
                "Nc" => subcarriers = Some(number()?),
                "mode" => mode = Some(value.to_string()),
                "kind" => kind = Some(value.to_string()),
                "table" => table = Some(value.to_string()),
                other => return Err(parse_err(format!("unknown key `{other}`"))),
            }
        }
        let repr = SpecRepr {
            streams: streams.ok_or_else(|| parse_err("missing S=".into()))?,
            bits_per_symbol: bits.ok_or_else(|| parse_err("missing B=".into()))?,
            mode: mode.ok_or_else(|| parse_err("missing mode=".into()))?,
            subcarriers,
            period: period.ok_or_else(|| parse_err("missing P=".into()))?,
            kind: kind.ok_or_else(|| parse_err("missing kind=".into()))?,
            table,
        };
        repr.try_into()
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SpecRepr {
    streams: usize,
    bits_per_symbol: usize,
    /// `sc` or `ofdm`.
    mode: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    subcarriers: Option<usize>,
    period: usize,
    /// `round-robin`, `block` or `custom`.
    kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    table: Option<String>,
}

impl TryFrom<SpecRepr> for InterleaverSpec {
    type Error = InterleaverError;

    fn try_from(r: SpecRepr) -> Result<Self, Self::Error> {
        let parse_err = |msg: String| InterleaverError::Parse(msg);
        let mode = match (r.mode.as_str(), r.subcarriers) {
            ("sc", None) => CarrierMode::SingleCarrier,
            ("sc", Some(_)) => return Err(parse_err("Nc= only applies to mode=ofdm".into())),
            ("ofdm", Some(n)) => CarrierMode::Ofdm { num_subcarriers: n },
            ("ofdm", None) => return Err(parse_err("mode=ofdm needs Nc=".into())),
            (other, _) => return Err(parse_err(format!("unknown mode `{other}` (sc|ofdm)"))),
        };
        let kind = match (r.kind.as_str(), r.table) {
            ("round-robin", None) => InterleaverKind::RoundRobin,
            ("block", None) => InterleaverKind::Block,
            ("custom", Some(table)) => InterleaverKind::Custom(parse_table(&table, mode)?),
            ("custom", None) => return Err(parse_err("kind=custom needs table=".into())),
            ("round-robin" | "block", Some(_)) => return Err(parse_err("table= only applies to kind=custom".into())),
            (other, _) => return Err(parse_err(format!("unknown kind `{other}` (round-robin|block|custom)"))),
        };
        InterleaverSpec::new(r.streams, r.bits_per_symbol, mode, r.period, kind)
    }
}

impl From<InterleaverSpec> for SpecRepr {
    fn from(spec: InterleaverSpec) -> Self {
        let table = match &spec.kind {
            InterleaverKind::Custom(t) => Some(t.iter().map(Slot::to_string).collect::<Vec<_>>().join(",")),
            _ => None,
        };
        Self {
            streams: spec.num_streams,
            bits_per_symbol: spec.bits_per_symbol,
            mode: match spec.mode {
                CarrierMode::SingleCarrier => "sc".into(),
                CarrierMode::Ofdm { .. } => "ofdm".into(),
            },
            subcarriers: match spec.mode {
                CarrierMode::Ofdm { num_subcarriers } => Some(num_subcarriers),
                CarrierMode::SingleCarrier => None,
            },
            period: spec.period,
            kind: spec.kind.name().into(),
            table,
        }
    }
}

fn parse_table(text: &str, mode: CarrierMode) -> Result<Vec<Slot>, InterleaverError> {
    text.split(',')
        .enumerate()
        .map(|(index, tuple)| {
            let fields = tuple
                .split(':')
                .map(|f| f.trim().parse::<usize>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|_| InterleaverError::Parse(format!("table entry {index} `{tuple}` is not s:t:b[:c]")))?;
            match (fields.as_slice(), mode.is_ofdm()) {
                (&[s, t, b], false) if s >= 1 => Ok(Slot::new(s - 1, t, b, None)),
                (&[s, t, b, c], true) if s >= 1 => Ok(Slot::new(s - 1, t, b, Some(c))),
                _ => Err(InterleaverError::Parse(format!(
                    "table entry {index} `{tuple}` must be s:t:b{} with 1-based stream",
                    if mode.is_ofdm() { ":c" } else { "" }
                ))),
            }
        })
        .collect()
}
