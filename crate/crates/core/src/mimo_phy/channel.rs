use num_complex::Complex;
use rand::Rng;
use rand_distr::StandardNormal;

use super::PhyError;
use crate::num::Real;

/// Dense row-major complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<Complex<T>>,
}

impl<T: Real> CMatrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex::new(T::zero(), T::zero()); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex::new(T::one(), T::zero());
        }
        m
    }

    pub fn from_rows(rows: usize, cols: usize, data: Vec<Complex<T>>) -> Result<Self, PhyError> {
        if rows == 0 || cols == 0 {
            return Err(PhyError::Dimension { rows, cols });
        }
        if data.len() != rows * cols {
            return Err(PhyError::EntryCount {
                expected: rows * cols,
                got: data.len(),
            });
        }
        Ok(Self { rows, cols, data })
    }

    /// Real-valued matrix from nested rows, handy in tests.
    pub fn from_real(rows: &[&[f64]]) -> Result<Self, PhyError> {
        let cols = rows.first().map_or(0, |r| r.len());
        let data = rows
            .iter()
            .flat_map(|r| r.iter().map(|&x| Complex::new(T::lit(x), T::zero())))
            .collect();
        Self::from_rows(rows.len(), cols, data)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn as_slice(&self) -> &[Complex<T>] {
        &self.data
    }

    pub fn conj_transpose(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out[(c, r)] = self[(r, c)].conj();
            }
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(r, k)];
                for c in 0..other.cols {
                    out[(r, c)] = out[(r, c)] + a * other[(k, c)];
                }
            }
        }
        out
    }

    pub fn frobenius_norm(&self) -> T {
        self.data.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt()
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "dimension mismatch");
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn column(&self, c: usize) -> Vec<Complex<T>> {
        (0..self.rows).map(|r| self[(r, c)]).collect()
    }

    pub(crate) fn first_non_finite(&self) -> Option<(usize, usize)> {
        self.data
            .iter()
            .position(|z| !(z.re.is_finite() && z.im.is_finite()))
            .map(|i| (i / self.cols, i % self.cols))
    }
}

impl<T> std::ops::Index<(usize, usize)> for CMatrix<T> {
    type Output = Complex<T>;

    fn index(&self, (r, c): (usize, usize)) -> &Self::Output {
        &self.data[r * self.cols + c]
    }
}

impl<T> std::ops::IndexMut<(usize, usize)> for CMatrix<T> {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Self::Output {
        &mut self.data[r * self.cols + c]
    }
}

/// `Nr x Nt` channel matrix with i.i.d. CN(0, 1) entries.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelRealization<T> {
    pub h: CMatrix<T>,
}

impl<T: Real> ChannelRealization<T> {
    pub fn new(h: CMatrix<T>) -> Result<Self, PhyError> {
        if let Some((row, col)) = h.first_non_finite() {
            return Err(PhyError::NonFinite { row, col });
        }
        Ok(Self { h })
    }

    pub fn num_rx(&self) -> usize {
        self.h.rows()
    }

    pub fn num_tx(&self) -> usize {
        self.h.cols()
    }
}

/// Draws a channel with i.i.d. circularly symmetric unit-variance entries
/// (real and imaginary parts each N(0, 1/2)), row by row.
pub fn sample_channel<T: Real, R: Rng + ?Sized>(
    num_tx: usize,
    num_rx: usize,
    rng: &mut R,
) -> Result<ChannelRealization<T>, PhyError> {
    if num_tx == 0 || num_rx == 0 {
        return Err(PhyError::Dimension {
            rows: num_rx,
            cols: num_tx,
        });
    }
    let scale = std::f64::consts::FRAC_1_SQRT_2;
    let data = (0..num_tx * num_rx)
        .map(|_| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            Complex::new(T::lit(re * scale), T::lit(im * scale))
        })
        .collect();
    Ok(ChannelRealization {
        h: CMatrix::from_rows(num_rx, num_tx, data)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn same_seed_same_channel() {
        let a: ChannelRealization<f64> = sample_channel(2, 2, &mut ChaCha8Rng::seed_from_u64(9)).unwrap();
        let b: ChannelRealization<f64> = sample_channel(2, 2, &mut ChaCha8Rng::seed_from_u64(9)).unwrap();
        let bits = |c: &ChannelRealization<f64>| {
            c.h.as_slice()
                .iter()
                .flat_map(|z| [z.re.to_bits(), z.im.to_bits()])
                .collect::<Vec<_>>()
        };
        assert_eq!(bits(&a), bits(&b));
    }

    #[test]
    fn scalar_channel() {
        let c: ChannelRealization<f32> = sample_channel(1, 1, &mut ChaCha8Rng::seed_from_u64(1)).unwrap();
        assert_eq!((c.num_rx(), c.num_tx()), (1, 1));
        assert!(sample_channel::<f64, _>(0, 2, &mut ChaCha8Rng::seed_from_u64(1)).is_err());
    }

    #[test]
    fn entry_statistics() {
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        let n = 100_000;
        let (mut sum, mut power) = (Complex::new(0.0, 0.0), 0.0);
        for _ in 0..n {
            let c: ChannelRealization<f64> = sample_channel(2, 2, &mut rng).unwrap();
            let z = c.h[(1, 0)];
            sum += z;
            power += z.norm_sqr();
        }
        let mean = sum / n as f64;
        let var = power / n as f64 - mean.norm_sqr();
        assert!(mean.norm() < 0.02, "mean {mean}");
        assert!((var - 1.0).abs() < 0.05, "variance {var}");
    }

    #[test]
    fn rejects_non_finite() {
        let mut h = CMatrix::<f64>::identity(2);
        h[(1, 0)] = Complex::new(f64::NAN, 0.0);
        assert_eq!(ChannelRealization::new(h), Err(PhyError::NonFinite { row: 1, col: 0 }));
    }
}
