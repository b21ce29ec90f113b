//! Global 1-d maximisation: dense grid followed by golden-section refinement.

const INV_PHI: f64 = 0.618_033_988_749_894_8;

pub const DEFAULT_GOLDEN_TOL: f64 = 1e-10;

/// Golden-section search for a maximum of a unimodal `f` on `[lo, hi]`.
pub fn golden_max<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, tol: f64) -> (f64, f64) {
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while hi - lo > tol {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
        }
        if x1 >= x2 {
            break;
        }
    }
    let x = 0.5 * (lo + hi);
    let fx = f(x);
    // The bracket ends can beat the interior when the maximum is at a boundary.
    [(x, fx), (x1, f1), (x2, f2)]
        .into_iter()
        .fold((x, fx), |best, c| if c.1 > best.1 { c } else { best })
}

/// Maximiser of `f` over `grid`, refined by golden section on the two cells
/// adjacent to the best grid point. Returns `(argmax, max)`.
pub fn grid_golden_max<F: Fn(f64) -> f64>(f: F, grid: &[f64], tol: f64) -> (f64, f64) {
    assert!(!grid.is_empty(), "empty grid");
    let (k, fk) = grid
        .iter()
        .map(|&t| f(t))
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |best, (k, v)| if v > best.1 { (k, v) } else { best });
    let lo = grid[k.saturating_sub(1)];
    let hi = grid[(k + 1).min(grid.len() - 1)];
    if hi <= lo {
        return (grid[k], fk);
    }
    let (x, fx) = golden_max(&f, lo, hi, tol);
    if fx >= fk {
        (x, fx)
    } else {
        (grid[k], fk)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::roots::uniform_grid;

    #[test]
    fn golden_finds_parabola_peak() {
        let (x, fx) = golden_max(|x| -(x - 0.3).powi(2) + 2.0, -1.0, 1.0, 1e-12);
        assert!((x - 0.3).abs() < 1e-6);
        assert!((fx - 2.0).abs() < 1e-12);
    }

    #[test]
    fn grid_golden_handles_boundary_max() {
        let grid = uniform_grid(0.0, 1.0, 11);
        let (x, _) = grid_golden_max(|x| x, &grid, 1e-12);
        assert_eq!(x, 1.0);
    }

    #[test]
    fn grid_golden_picks_global_peak() {
        let grid = uniform_grid(0.0, 10.0, 1001);
        let f = |x: f64| (-(x - 2.0).powi(2)).exp() + 1.5 * (-(x - 7.3).powi(2)).exp();
        let (x, _) = grid_golden_max(f, &grid, 1e-12);
        assert!((x - 7.3).abs() < 1e-3);
    }
}
