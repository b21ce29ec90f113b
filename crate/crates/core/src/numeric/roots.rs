//! Sign-change scanning and bisection.

use thiserror::Error;

pub const DEFAULT_ROOT_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum RootError {
    #[error("no sign change on [{lo}, {hi}]: f(lo) = {f_lo}, f(hi) = {f_hi}")]
    NotBracketed { lo: f64, hi: f64, f_lo: f64, f_hi: f64 },
    #[error("function value is NaN at t = {t}")]
    NaN { t: f64 },
}

/// Bisects `f` on a sign-changing bracket until its width is at most `tol`
/// (or the midpoint stops moving). Returns the midpoint of the final bracket.
pub fn bisect<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, tol: f64) -> Result<f64, RootError> {
    let mut f_lo = f(lo);
    let f_hi = f(hi);
    if f_lo.is_nan() {
        return Err(RootError::NaN { t: lo });
    }
    if f_hi.is_nan() {
        return Err(RootError::NaN { t: hi });
    }
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if f_lo.signum() == f_hi.signum() {
        return Err(RootError::NotBracketed { lo, hi, f_lo, f_hi });
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let f_mid = f(mid);
        if f_mid.is_nan() {
            return Err(RootError::NaN { t: mid });
        }
        if f_mid == 0.0 {
            return Ok(mid);
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// A grid cell `[lo, hi]` on which a sampled function changes sign.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignChange {
    pub lo: f64,
    pub hi: f64,
    /// True when the function goes from non-positive to positive.
    pub rising: bool,
}

/// Samples `f` at `points` (sorted) and reports every cell where the
/// positivity of `f` flips. Positivity is strict: zero counts as "not positive".
pub fn scan_sign_changes<F: Fn(f64) -> f64>(f: F, points: &[f64]) -> Result<(Vec<bool>, Vec<SignChange>), RootError> {
    let mut positive = Vec::with_capacity(points.len());
    for &t in points {
        let v = f(t);
        if v.is_nan() {
            return Err(RootError::NaN { t });
        }
        positive.push(v > 0.0);
    }
    let changes = points
        .windows(2)
        .zip(positive.windows(2))
        .filter(|(_, p)| p[0] != p[1])
        .map(|(t, p)| SignChange {
            lo: t[0],
            hi: t[1],
            rising: p[1],
        })
        .collect();
    Ok((positive, changes))
}

/// Uniform grid of `count` points on `[lo, hi]` (both ends included).
pub fn uniform_grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    let count = count.max(2);
    let step = (hi - lo) / (count - 1) as f64;
    let mut grid: Vec<f64> = (0..count).map(|k| lo + k as f64 * step).collect();
    grid[count - 1] = hi;
    grid
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bisect_finds_sqrt2() {
        let r = bisect(|x| x * x - 2.0, 0.0, 2.0, 1e-12).unwrap();
        assert!((r - 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn bisect_rejects_unbracketed() {
        let err = bisect(|x| x * x + 1.0, -1.0, 1.0, 1e-10).unwrap_err();
        assert!(matches!(err, RootError::NotBracketed { .. }));
    }

    #[test]
    fn bisect_reports_nan() {
        let err = bisect(|x: f64| (x - 1.0).ln(), 0.0, 3.0, 1e-10).unwrap_err();
        assert!(matches!(err, RootError::NaN { .. }));
    }

    #[test]
    fn scan_finds_both_crossings() {
        let grid = uniform_grid(0.0, 4.0, 41);
        let (_, changes) = scan_sign_changes(|x| -(x - 1.05) * (x - 2.95), &grid).unwrap();
        assert_eq!(changes.len(), 2);
        assert!(changes[0].rising && !changes[1].rising);
        assert!(changes[0].lo < 1.05 && changes[0].hi > 1.05);
    }

    #[test]
    fn grid_endpoints_are_exact() {
        let g = uniform_grid(0.0, 0.3, 7);
        assert_eq!(g[0], 0.0);
        assert_eq!(g[6], 0.3);
    }
}
