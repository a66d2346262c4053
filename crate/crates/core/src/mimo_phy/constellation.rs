use std::fmt;
use std::str::FromStr;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use super::PhyError;
use crate::num::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ConstellationName {
    Bpsk,
    Qpsk,
    Qam16,
}

impl ConstellationName {
    pub fn bits_per_symbol(self) -> usize {
        match self {
            ConstellationName::Bpsk => 1,
            ConstellationName::Qpsk => 2,
            ConstellationName::Qam16 => 4,
        }
    }
}

impl fmt::Display for ConstellationName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ConstellationName::Bpsk => "bpsk",
            ConstellationName::Qpsk => "qpsk",
            ConstellationName::Qam16 => "qam16",
        })
    }
}

impl FromStr for ConstellationName {
    type Err = PhyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "bpsk" => Ok(ConstellationName::Bpsk),
            "qpsk" => Ok(ConstellationName::Qpsk),
            "qam16" => Ok(ConstellationName::Qam16),
            other => Err(PhyError::UnknownConstellation(other.to_string())),
        }
    }
}

// Label tables, most significant label bit first. Per axis a 0 bit maps to
// the positive side; 16-QAM uses the first two bits for I and the last two
// for Q, each Gray coded as 00 -> +3, 01 -> +1, 11 -> -1, 10 -> -3.
const BPSK: [(f64, f64); 2] = [(1.0, 0.0), (-1.0, 0.0)];
const QPSK: [(f64, f64); 4] = [(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)];
const PAM4_GRAY: [f64; 4] = [3.0, 1.0, -3.0, -1.0];

/// Unit-energy Gray-labelled signal set; `points[label]` is the point for
/// the `B`-bit label read most significant bit first.
#[derive(Debug, Clone, PartialEq)]
pub struct Constellation<T> {
    name: ConstellationName,
    points: Vec<Complex<T>>,
}

impl<T: Real> Constellation<T> {
    pub fn new(name: ConstellationName) -> Self {
        let raw: Vec<(f64, f64)> = match name {
            ConstellationName::Bpsk => BPSK.to_vec(),
            ConstellationName::Qpsk => QPSK.to_vec(),
            ConstellationName::Qam16 => (0..16)
                .map(|label| (PAM4_GRAY[label >> 2], PAM4_GRAY[label & 3]))
                .collect(),
        };
        let energy = raw.iter().map(|(i, q)| i * i + q * q).sum::<f64>() / raw.len() as f64;
        let scale = energy.sqrt().recip();
        let points = raw
            .into_iter()
            .map(|(i, q)| Complex::new(T::lit(i * scale), T::lit(q * scale)))
            .collect();
        Self { name, points }
    }

    pub fn by_name(name: &str) -> Result<Self, PhyError> {
        Ok(Self::new(name.parse()?))
    }

    pub fn name(&self) -> ConstellationName {
        self.name
    }

    pub fn bits_per_symbol(&self) -> usize {
        self.name.bits_per_symbol()
    }

    pub fn points(&self) -> &[Complex<T>] {
        &self.points
    }

    /// Bit `position` (0 = most significant) of `label`.
    pub fn label_bit(&self, label: usize, position: usize) -> u8 {
        ((label >> (self.bits_per_symbol() - 1 - position)) & 1) as u8
    }

    pub fn point_for(&self, bits: &[u8]) -> Complex<T> {
        let label = bits.iter().fold(0usize, |acc, &b| (acc << 1) | usize::from(b & 1));
        self.points[label]
    }

    pub fn modulate(&self, bits: &[u8]) -> Result<Vec<Complex<T>>, PhyError> {
        let b = self.bits_per_symbol();
        if !bits.len().is_multiple_of(b) {
            return Err(PhyError::BitLength {
                len: bits.len(),
                bits_per_symbol: b,
            });
        }
        Ok(bits.chunks_exact(b).map(|chunk| self.point_for(chunk)).collect())
    }

    /// Nearest-point demapping back to label bits.
    pub fn hard_demap(&self, symbols: &[Complex<T>]) -> Vec<u8> {
        let b = self.bits_per_symbol();
        let mut out = Vec::with_capacity(symbols.len() * b);
        for y in symbols {
            let label = self
                .points
                .iter()
                .enumerate()
                .min_by(|x, z| (y - x.1).norm_sqr().partial_cmp(&(y - z.1).norm_sqr()).expect("finite"))
                .map(|(l, _)| l)
                .expect("nonempty constellation");
            out.extend((0..b).map(|p| self.label_bit(label, p)));
        }
        out
    }

    /// Max-log bit costs for `y = gain * x + n`: entry `p` holds, for label
    /// bit `p` equal to 0 and to 1, the least `|y - gain * x|^2` over points
    /// `x` with that bit value.
    pub fn bit_metrics(&self, y: Complex<T>, gain: T) -> Vec<[T; 2]> {
        let mut out = vec![[T::zero(); 2]; self.bits_per_symbol()];
        self.bit_metrics_into(y, gain, &mut out);
        out
    }

    pub fn bit_metrics_into(&self, y: Complex<T>, gain: T, out: &mut [[T; 2]]) {
        let b = self.bits_per_symbol();
        debug_assert_eq!(out.len(), b);
        out.fill([T::infinity(); 2]);
        for (label, x) in self.points.iter().enumerate() {
            let d = (y - x * gain).norm_sqr();
            for (p, cost) in out.iter_mut().enumerate() {
                let v = (label >> (b - 1 - p)) & 1;
                if d < cost[v] {
                    cost[v] = d;
                }
            }
        }
    }
}
