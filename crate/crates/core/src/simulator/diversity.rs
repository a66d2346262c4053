use serde::{Deserialize, Serialize};

use super::{BerCurve, SimError, FIT_ERROR_FLOOR};
use crate::num::Real;

pub const MIN_FIT_POINTS: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineFit<T> {
    pub slope: T,
    pub intercept: T,
    /// Root-mean-square residual.
    pub residual: T,
}

/// Ordinary least-squares line through `(xs[i], ys[i])`.
pub fn least_squares<T: Real>(xs: &[T], ys: &[T]) -> LineFit<T> {
    assert_eq!(xs.len(), ys.len());
    assert!(xs.len() >= 2, "a line fit needs two points");
    let n = T::lit(xs.len() as f64);
    let mean_x = xs.iter().copied().sum::<T>() / n;
    let mean_y = ys.iter().copied().sum::<T>() / n;
    let sxx: T = xs.iter().map(|&x| (x - mean_x) * (x - mean_x)).sum();
    let sxy: T = xs.iter().zip(ys).map(|(&x, &y)| (x - mean_x) * (y - mean_y)).sum();
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let sse: T = xs
        .iter()
        .zip(ys)
        .map(|(&x, &y)| {
            let r = y - (intercept + slope * x);
            r * r
        })
        .sum();
    LineFit {
        slope,
        intercept,
        residual: (sse / n).sqrt(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiversityEstimate {
    /// Slope of `log10(BER)` against SNR in dB.
    pub slope: f64,
    /// `-10 * slope`.
    pub order: f64,
    pub window_db: (f64, f64),
    pub residual: f64,
    /// SNRs of the points that entered the fit.
    pub fitted_snr_db: Vec<f64>,
    pub error_floor: u64,
}

/// Fits the diversity order over the points in `window_db` (inclusive) that
/// have at least `error_floor` bit errors.
pub fn estimate_diversity(
    curve: &BerCurve,
    window_db: (f64, f64),
    error_floor: u64,
) -> Result<DiversityEstimate, SimError> {
    let (lo, hi) = window_db;
    let used: Vec<_> = curve
        .points
        .iter()
        .filter(|p| !p.snr_db.is_noiseless() && p.snr_db.0 >= lo && p.snr_db.0 <= hi)
        .filter(|p| p.bit_errors >= error_floor.max(1))
        .collect();
    if used.len() < MIN_FIT_POINTS {
        return Err(SimError::InsufficientPoints {
            needed: MIN_FIT_POINTS,
            floor: error_floor,
            found: used.len(),
        });
    }
    let xs: Vec<f64> = used.iter().map(|p| p.snr_db.0).collect();
    let ys: Vec<f64> = used.iter().map(|p| p.ber.log10()).collect();
    let fit = least_squares(&xs, &ys);
    Ok(DiversityEstimate {
        slope: fit.slope,
        order: -10.0 * fit.slope,
        window_db,
        residual: fit.residual,
        fitted_snr_db: xs,
        error_floor,
    })
}

/// Diversity fit with the default 100-error floor.
pub fn estimate_diversity_default(curve: &BerCurve, window_db: (f64, f64)) -> Result<DiversityEstimate, SimError> {
    estimate_diversity(curve, window_db, FIT_ERROR_FLOOR)
}
