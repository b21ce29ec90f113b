//! Adaptive Gauss-Kronrod (7/15) quadrature with recursive bisection.

use thiserror::Error;

pub const DEFAULT_TOL: f64 = 1e-10;
pub const DEFAULT_MAX_DEPTH: u32 = 60;

// Kronrod 15-point nodes on [-1, 1] (non-negative half), with the embedded
// 7-point Gauss weights on every odd node.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadOptions {
    /// Absolute error target for the whole interval.
    pub tol: f64,
    pub max_depth: u32,
}

impl Default for QuadOptions {
    fn default() -> Self {
        Self {
            tol: DEFAULT_TOL,
            max_depth: DEFAULT_MAX_DEPTH,
        }
    }
}

#[derive(Debug, Clone, Error, PartialEq)]
pub enum QuadError {
    #[error("adaptive quadrature did not converge: partial value {partial}, worst subinterval [{worst_lo}, {worst_hi}] with error estimate {worst_err:e}")]
    NotConverged {
        partial: f64,
        worst_lo: f64,
        worst_hi: f64,
        worst_err: f64,
    },
    #[error("integrand is not finite at t = {t}")]
    NonFinite { t: f64 },
    #[error("invalid integration bounds [{lo}, {hi}]")]
    InvalidBounds { lo: f64, hi: f64 },
}

/// One G7/K15 panel: (kronrod estimate, |kronrod - gauss|).
fn panel<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64) -> Result<(f64, f64), QuadError> {
    let center = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let fc = f(center);
    if !fc.is_finite() {
        return Err(QuadError::NonFinite { t: center });
    }
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for (j, (&x, &w)) in XGK.iter().zip(WGK.iter()).take(7).enumerate() {
        let dx = half * x;
        let (a, b) = (center - dx, center + dx);
        let (fa, fb) = (f(a), f(b));
        if !fa.is_finite() {
            return Err(QuadError::NonFinite { t: a });
        }
        if !fb.is_finite() {
            return Err(QuadError::NonFinite { t: b });
        }
        kronrod += w * (fa + fb);
        if j % 2 == 1 {
            gauss += WG[j / 2] * (fa + fb);
        }
    }
    Ok((kronrod * half, ((kronrod - gauss) * half).abs()))
}

struct Worst {
    lo: f64,
    hi: f64,
    err: f64,
}

#[allow(clippy::too_many_arguments)]
fn recurse<F: Fn(f64) -> f64>(
    f: &F,
    lo: f64,
    hi: f64,
    whole: (f64, f64),
    tol: f64,
    depth: u32,
    max_depth: u32,
    worst: &mut Option<Worst>,
) -> Result<f64, QuadError> {
    let (value, err) = whole;
    // Roundoff floor: once the estimate is at machine resolution further
    // bisection cannot help.
    let floor = 64.0 * f64::EPSILON * value.abs();
    if err <= tol.max(floor) {
        return Ok(value);
    }
    if depth >= max_depth || hi - lo <= 4.0 * f64::EPSILON * lo.abs().max(hi.abs()).max(1.0) {
        if worst.as_ref().is_none_or(|w| err > w.err) {
            *worst = Some(Worst { lo, hi, err });
        }
        return Ok(value);
    }
    let mid = 0.5 * (lo + hi);
    let left = panel(f, lo, mid)?;
    let right = panel(f, mid, hi)?;
    let a = recurse(f, lo, mid, left, 0.5 * tol, depth + 1, max_depth, worst)?;
    let b = recurse(f, mid, hi, right, 0.5 * tol, depth + 1, max_depth, worst)?;
    Ok(a + b)
}

/// Integrates `f` over `[lo, hi]` to absolute error `opts.tol`.
///
/// `lo > hi` integrates with the sign flipped; `lo == hi` returns zero.
pub fn integrate<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, opts: QuadOptions) -> Result<f64, QuadError> {
    if !lo.is_finite() || !hi.is_finite() {
        return Err(QuadError::InvalidBounds { lo, hi });
    }
    if lo == hi {
        return Ok(0.0);
    }
    if lo > hi {
        return integrate(f, hi, lo, opts).map(|v| -v);
    }
    let whole = panel(&f, lo, hi)?;
    let mut worst = None;
    let value = recurse(&f, lo, hi, whole, opts.tol, 0, opts.max_depth, &mut worst)?;
    match worst {
        None => Ok(value),
        Some(w) => Err(QuadError::NotConverged {
            partial: value,
            worst_lo: w.lo,
            worst_hi: w.hi,
            worst_err: w.err,
        }),
    }
}

/// Running integral `t -> ∫_0^t f` backed by a table of node values, so that
/// each evaluation costs one short quadrature instead of one from zero.
#[derive(Debug, Clone)]
pub struct CumulativeIntegral {
    nodes: Vec<f64>,
    values: Vec<f64>,
    step: f64,
    opts: QuadOptions,
}

impl CumulativeIntegral {
    pub fn build<F: Fn(f64) -> f64>(f: &F, horizon: f64, cells: usize, opts: QuadOptions) -> Result<Self, QuadError> {
        if !(horizon > 0.0) || !horizon.is_finite() {
            return Err(QuadError::InvalidBounds { lo: 0.0, hi: horizon });
        }
        let cells = cells.max(1);
        let step = horizon / cells as f64;
        let cell_opts = QuadOptions {
            tol: opts.tol / cells as f64,
            ..opts
        };
        let nodes: Vec<f64> = (0..=cells).map(|k| k as f64 * step).collect();
        let mut values = Vec::with_capacity(cells + 1);
        values.push(0.0);
        let mut acc = 0.0;
        for w in nodes.windows(2) {
            acc += integrate(f, w[0], w[1], cell_opts)?;
            values.push(acc);
        }
        Ok(Self {
            nodes,
            values,
            step,
            opts,
        })
    }

    pub fn horizon(&self) -> f64 {
        *self.nodes.last().expect("at least one cell")
    }

    /// `∫_0^t f`, extrapolating past the table with a direct quadrature.
    pub fn eval<F: Fn(f64) -> f64>(&self, f: &F, t: f64) -> Result<f64, QuadError> {
        if t <= 0.0 {
            return integrate(f, 0.0, t, self.opts);
        }
        let last = self.nodes.len() - 1;
        let k = ((t / self.step).floor() as usize).min(last);
        let base = self.values[k];
        let node = self.nodes[k];
        if t == node {
            return Ok(base);
        }
        Ok(base + integrate(f, node, t, self.opts)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_is_exact() {
        let v = integrate(|x| 3.0 * x * x, 0.0, 2.0, QuadOptions::default()).unwrap();
        assert!((v - 8.0).abs() < 1e-13);
    }

    #[test]
    fn reversed_bounds_flip_sign() {
        let a = integrate(f64::exp, 0.0, 1.0, QuadOptions::default()).unwrap();
        let b = integrate(f64::exp, 1.0, 0.0, QuadOptions::default()).unwrap();
        assert_eq!(a, -b);
        assert!((a - (1f64.exp() - 1.0)).abs() < 1e-12);
    }

    #[test]
    fn sharp_peak_is_resolved() {
        // ∫_0^1 1/(1e-4 + (x-0.5)^2) = 2 * 100 * atan(50)
        let v = integrate(|x| 1.0 / (1e-4 + (x - 0.5).powi(2)), 0.0, 1.0, QuadOptions::default()).unwrap();
        let exact = 200.0 * 50f64.atan();
        assert!((v - exact).abs() < 1e-8, "{v} vs {exact}");
    }

    #[test]
    fn depth_exhaustion_reports_partial_value() {
        let opts = QuadOptions { tol: 1e-14, max_depth: 2 };
        let err = integrate(|x: f64| x.abs().sqrt(), -1.0, 1.0, opts).unwrap_err();
        match err {
            QuadError::NotConverged { partial, worst_lo, worst_hi, .. } => {
                assert!((partial - 4.0 / 3.0).abs() < 1e-2);
                assert!(worst_lo <= 0.0 && worst_hi >= 0.0 || worst_hi - worst_lo <= 0.5);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn non_finite_integrand_is_rejected() {
        let err = integrate(|x: f64| 1.0 / (x - 0.5), 0.0, 1.0, QuadOptions::default()).unwrap_err();
        assert!(matches!(err, QuadError::NonFinite { .. }));
    }

    #[test]
    fn cumulative_matches_direct() {
        let f = |x: f64| 1.0 / (1.0 + x);
        let table = CumulativeIntegral::build(&f, 10.0, 64, QuadOptions::default()).unwrap();
        for &t in &[0.0, 0.3, 1.0, 4.71, 10.0, 12.5] {
            let v = table.eval(&f, t).unwrap();
            assert!((v - (1.0 + t).ln()).abs() < 1e-10, "t={t}");
        }
    }
}
