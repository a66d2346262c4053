use num_complex::Complex;

use super::{CMatrix, ChannelRealization, PhyError};
use crate::num::Real;

/// Relative orthogonality threshold for the one-sided Jacobi iteration.
pub const JACOBI_TOLERANCE: f64 = 1e-12;
pub const JACOBI_MAX_SWEEPS: usize = 100;

/// `H = U diag(sigma) V^H` with square unitary `U` (Nr x Nr) and `V` (Nt x Nt).
///
/// Stream `s` is beamformed along column `s` of `V`, combined with column `s`
/// of `U`, and sees the scalar gain `sigma[s]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SvdResult<T> {
    pub u: CMatrix<T>,
    /// `min(Nr, Nt)` singular values, descending.
    pub sigma: Vec<T>,
    pub v: CMatrix<T>,
}

impl<T: Real> SvdResult<T> {
    pub fn reconstruct(&self) -> CMatrix<T> {
        let mut s = CMatrix::zeros(self.u.rows(), self.v.rows());
        for (i, &sv) in self.sigma.iter().enumerate() {
            s[(i, i)] = Complex::new(sv, T::zero());
        }
        self.u.mul(&s).mul(&self.v.conj_transpose())
    }

    /// Frobenius norm of `U diag(sigma) V^H - H`.
    pub fn reconstruction_error(&self, h: &CMatrix<T>) -> T {
        self.reconstruct().sub(h).frobenius_norm()
    }

    /// Largest of `|U^H U - I|_F` and `|V^H V - I|_F`.
    pub fn unitarity_error(&self) -> T {
        let gram_err = |m: &CMatrix<T>| {
            m.conj_transpose()
                .mul(m)
                .sub(&CMatrix::identity(m.cols()))
                .frobenius_norm()
        };
        gram_err(&self.u).max(gram_err(&self.v))
    }
}

/// Singular value decomposition by one-sided (Hestenes) Jacobi rotations.
pub fn svd_decompose<T: Real>(channel: &ChannelRealization<T>) -> Result<SvdResult<T>, PhyError> {
    let h = &channel.h;
    if let Some((row, col)) = h.first_non_finite() {
        return Err(PhyError::NonFinite { row, col });
    }
    if h.rows() >= h.cols() {
        tall_svd(h)
    } else {
        // H^H = U' S V'^H  =>  H = V' S U'^H
        let t = tall_svd(&h.conj_transpose())?;
        Ok(SvdResult {
            u: t.v,
            sigma: t.sigma,
            v: t.u,
        })
    }
}

/// SVD of an `m x n` matrix with `m >= n`.
fn tall_svd<T: Real>(h: &CMatrix<T>) -> Result<SvdResult<T>, PhyError> {
    let (m, n) = (h.rows(), h.cols());
    let mut cols: Vec<Vec<Complex<T>>> = (0..n).map(|c| h.column(c)).collect();
    let mut v: Vec<Vec<Complex<T>>> = (0..n)
        .map(|c| {
            let mut e = vec![Complex::new(T::zero(), T::zero()); n];
            e[c] = Complex::new(T::one(), T::zero());
            e
        })
        .collect();
    let tol = T::tolerance(JACOBI_TOLERANCE);

    let mut converged = n == 1;
    for _ in 0..JACOBI_MAX_SWEEPS {
        if converged {
            break;
        }
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let alpha = norm_sqr(&cols[p]);
                let beta = norm_sqr(&cols[q]);
                let gamma = inner(&cols[p], &cols[q]);
                let g = gamma.norm();
                if g == T::zero() || g <= tol * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let phase = gamma.conj() / g;
                let zeta = (beta - alpha) / (T::lit(2.0) * g);
                let sign = if zeta >= T::zero() { T::one() } else { -T::one() };
                let t = sign / (zeta.abs() + (T::one() + zeta * zeta).sqrt());
                let c = T::one() / (T::one() + t * t).sqrt();
                let s = c * t;
                rotate(&mut cols, p, q, phase, c, s);
                rotate(&mut v, p, q, phase, c, s);
            }
        }
        converged = !rotated;
    }
    if !converged {
        return Err(PhyError::NoConvergence {
            sweeps: JACOBI_MAX_SWEEPS,
        });
    }

    let mut order: Vec<(T, usize)> = cols.iter().map(|c| norm_sqr(c).sqrt()).zip(0..).collect();
    order.sort_by(|a, b| b.0.partial_cmp(&a.0).expect("finite norms").then(a.1.cmp(&b.1)));
    let sigma_max = order[0].0;
    let rank_floor = sigma_max * T::epsilon() * T::lit((m.max(n) * 4) as f64);

    let mut sigma = Vec::with_capacity(n);
    let mut u_cols: Vec<Vec<Complex<T>>> = Vec::with_capacity(m);
    let mut v_sorted = CMatrix::zeros(n, n);
    for (k, &(sv, idx)) in order.iter().enumerate() {
        sigma.push(sv);
        for r in 0..n {
            v_sorted[(r, k)] = v[idx][r];
        }
        if sv > rank_floor {
            u_cols.push(cols[idx].iter().map(|z| z / sv).collect());
        } else {
            u_cols.push(Vec::new());
        }
    }
    u_cols.resize(m, Vec::new());
    complete_basis(&mut u_cols, m);

    let mut u = CMatrix::zeros(m, m);
    for (c, col) in u_cols.iter().enumerate() {
        for (r, z) in col.iter().enumerate() {
            u[(r, c)] = *z;
        }
    }
    Ok(SvdResult { u, sigma, v: v_sorted })
}

fn norm_sqr<T: Real>(x: &[Complex<T>]) -> T {
    x.iter().map(|z| z.norm_sqr()).sum()
}

/// `x^H y`.
fn inner<T: Real>(x: &[Complex<T>], y: &[Complex<T>]) -> Complex<T> {
    x.iter()
        .zip(y)
        .fold(Complex::new(T::zero(), T::zero()), |acc, (a, b)| acc + a.conj() * b)
}

/// Applies `q <- q * phase`, then the real rotation
/// `[p, q] <- [c p - s q, s p + c q]`.
fn rotate<T: Real>(cols: &mut [Vec<Complex<T>>], p: usize, q: usize, phase: Complex<T>, c: T, s: T) {
    let (left, right) = cols.split_at_mut(q);
    let (a, b) = (&mut left[p], &mut right[0]);
    for (x, y) in a.iter_mut().zip(b.iter_mut()) {
        let yq = *y * phase;
        let xp = *x;
        *x = xp * c - yq * s;
        *y = xp * s + yq * c;
    }
}

/// Fills empty columns with an orthonormal completion by Gram-Schmidt
/// against the standard basis.
fn complete_basis<T: Real>(cols: &mut [Vec<Complex<T>>], m: usize) {
    let mut candidate = 0;
    for k in 0..cols.len() {
        if !cols[k].is_empty() {
            continue;
        }
        loop {
            assert!(candidate < m, "standard basis exhausted while completing U");
            let mut e = vec![Complex::new(T::zero(), T::zero()); m];
            e[candidate] = Complex::new(T::one(), T::zero());
            candidate += 1;
            // Two passes of classical Gram-Schmidt.
            for _ in 0..2 {
                for other in cols.iter().filter(|c| !c.is_empty()) {
                    let proj = inner(other, &e);
                    for (ei, oi) in e.iter_mut().zip(other) {
                        *ei = *ei - oi * proj;
                    }
                }
            }
            let norm = norm_sqr(&e).sqrt();
            if norm > T::lit(0.5) {
                cols[k] = e.into_iter().map(|z| z / norm).collect();
                break;
            }
        }
    }
}
