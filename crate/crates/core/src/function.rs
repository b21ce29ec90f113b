//! Real functions of one nonnegative variable with their first two derivatives.

use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expr::{Dual2, EvalError, Expr};

/// Seed for every pseudo-random sampling scan.
pub const SAMPLING_SEED: u64 = 0x5EED;

pub trait Univariate: Send + Sync + fmt::Debug {
    fn eval(&self, t: f64) -> f64;
    fn deriv(&self, t: f64) -> f64;
    fn deriv2(&self, t: f64) -> f64;

    /// Value and derivatives together, surfacing domain errors where the
    /// body can detect them.
    fn try_dual(&self, t: f64) -> std::result::Result<Dual2, EvalError> {
        Ok(Dual2 {
            v: self.eval(t),
            d1: self.deriv(t),
            d2: self.deriv2(t),
        })
    }
}

/// Closed-form functions shipped with the crate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "preset", content = "value", rename_all = "kebab-case")]
pub enum Preset {
    /// `c`
    Constant(f64),
    /// `1 + t`
    Linear,
    /// `(1 + t)^2`
    Quadratic,
    /// `e^t`
    Exponential,
    /// `(1 + t) log(1 + t) + 1`
    LogLinear,
    /// `t`
    Identity,
    /// `sinh t`
    Sinh,
}

impl Preset {
    pub fn dual(self, t: f64) -> Dual2 {
        match self {
            Preset::Constant(c) => Dual2::constant(c),
            Preset::Linear => Dual2 { v: 1.0 + t, d1: 1.0, d2: 0.0 },
            Preset::Quadratic => Dual2 {
                v: (1.0 + t) * (1.0 + t),
                d1: 2.0 * (1.0 + t),
                d2: 2.0,
            },
            Preset::Exponential => {
                let e = t.exp();
                Dual2 { v: e, d1: e, d2: e }
            }
            Preset::LogLinear => {
                let l = t.ln_1p();
                Dual2 {
                    v: (1.0 + t) * l + 1.0,
                    d1: l + 1.0,
                    d2: 1.0 / (1.0 + t),
                }
            }
            Preset::Identity => Dual2::variable(t),
            Preset::Sinh => Dual2 {
                v: t.sinh(),
                d1: t.cosh(),
                d2: t.sinh(),
            },
        }
    }

    /// `∫_0^t ds / self(s)` when it has a closed form.
    pub fn reciprocal_integral(self, t: f64) -> Option<f64> {
        match self {
            Preset::Constant(c) => Some(t / c),
            Preset::Linear => Some(t.ln_1p()),
            Preset::Quadratic => Some(t / (1.0 + t)),
            Preset::Exponential => Some(-(-t).exp_m1()),
            _ => None,
        }
    }

    /// `∫_0^t self(s) ds` when it has a closed form.
    pub fn integral(self, t: f64) -> Option<f64> {
        match self {
            Preset::Constant(c) => Some(c * t),
            Preset::Linear => Some(t + 0.5 * t * t),
            Preset::Quadratic => Some(((1.0 + t).powi(3) - 1.0) / 3.0),
            Preset::Exponential => Some(t.exp_m1()),
            Preset::Identity => Some(0.5 * t * t),
            Preset::Sinh => Some(t.cosh() - 1.0),
            Preset::LogLinear => {
                // ∫ (1+s)ln(1+s) = (1+s)^2 ln(1+s)/2 - (1+s)^2/4
                let u = 1.0 + t;
                Some(0.5 * u * u * t.ln_1p() - 0.25 * (u * u - 1.0) + t)
            }
        }
    }

    /// Analytic verdict for `∫_0^∞ ds / self(s)`: `Some(true)` when it
    /// diverges, `Some(false)` when it converges.
    pub fn reciprocal_diverges(self) -> Option<bool> {
        match self {
            Preset::Constant(_) | Preset::Linear | Preset::LogLinear => Some(true),
            Preset::Quadratic | Preset::Exponential => Some(false),
            Preset::Identity | Preset::Sinh => None,
        }
    }

    /// `∫_T^∞ ds / self(s)` for presets whose reciprocal integral converges.
    pub fn reciprocal_tail(self, t: f64) -> Option<f64> {
        match self {
            Preset::Quadratic => Some(1.0 / (1.0 + t)),
            Preset::Exponential => Some((-t).exp()),
            _ => None,
        }
    }

    pub fn expression(self) -> String {
        match self {
            Preset::Constant(c) => format!("{c}"),
            Preset::Linear => "1+t".into(),
            Preset::Quadratic => "(1+t)^2".into(),
            Preset::Exponential => "exp(t)".into(),
            Preset::LogLinear => "(1+t)*log(1+t)+1".into(),
            Preset::Identity => "t".into(),
            Preset::Sinh => "sinh(t)".into(),
        }
    }
}

impl Univariate for Preset {
    fn eval(&self, t: f64) -> f64 {
        self.dual(t).v
    }
    fn deriv(&self, t: f64) -> f64 {
        self.dual(t).d1
    }
    fn deriv2(&self, t: f64) -> f64 {
        self.dual(t).d2
    }
    fn try_dual(&self, t: f64) -> std::result::Result<Dual2, EvalError> {
        Ok(self.dual(t))
    }
}

#[derive(Debug)]
struct ExprBody(Expr);

impl Univariate for ExprBody {
    fn eval(&self, t: f64) -> f64 {
        self.0.eval_dual(t).map_or(f64::NAN, |d| d.v)
    }
    fn deriv(&self, t: f64) -> f64 {
        self.0.eval_dual(t).map_or(f64::NAN, |d| d.d1)
    }
    fn deriv2(&self, t: f64) -> f64 {
        self.0.eval_dual(t).map_or(f64::NAN, |d| d.d2)
    }
    fn try_dual(&self, t: f64) -> std::result::Result<Dual2, EvalError> {
        self.0.eval_dual(t)
    }
}

/// Monotone cubic Hermite interpolant through tabulated `(t, value)` pairs
/// (Fritsch-Carlson slopes). Constant extrapolation of the end slopes.
#[derive(Debug, Clone)]
pub struct HermiteTable {
    ts: Vec<f64>,
    vs: Vec<f64>,
    slopes: Vec<f64>,
}

impl HermiteTable {
    pub fn new(points: &[(f64, f64)]) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::InvalidInput("piecewise table needs at least two rows".into()));
        }
        if points.iter().any(|p| !p.0.is_finite() || !p.1.is_finite()) {
            return Err(Error::InvalidInput("piecewise table contains non-finite values".into()));
        }
        if points.windows(2).any(|w| w[1].0 <= w[0].0) {
            return Err(Error::InvalidInput("piecewise table abscissae must be strictly increasing".into()));
        }
        let ts: Vec<f64> = points.iter().map(|p| p.0).collect();
        let vs: Vec<f64> = points.iter().map(|p| p.1).collect();
        let n = ts.len();
        let secants: Vec<f64> = (0..n - 1).map(|k| (vs[k + 1] - vs[k]) / (ts[k + 1] - ts[k])).collect();
        let mut slopes = vec![0.0; n];
        slopes[0] = secants[0];
        slopes[n - 1] = secants[n - 2];
        for k in 1..n - 1 {
            slopes[k] = if secants[k - 1] * secants[k] <= 0.0 {
                0.0
            } else {
                0.5 * (secants[k - 1] + secants[k])
            };
        }
        for k in 0..n - 1 {
            let d = secants[k];
            if d == 0.0 {
                slopes[k] = 0.0;
                slopes[k + 1] = 0.0;
                continue;
            }
            let alpha = slopes[k] / d;
            let beta = slopes[k + 1] / d;
            let r = alpha * alpha + beta * beta;
            if r > 9.0 {
                let tau = 3.0 / r.sqrt();
                slopes[k] = tau * alpha * d;
                slopes[k + 1] = tau * beta * d;
            }
        }
        Ok(Self { ts, vs, slopes })
    }

    pub fn domain_max(&self) -> f64 {
        *self.ts.last().expect("non-empty")
    }

    fn dual(&self, t: f64) -> Dual2 {
        let n = self.ts.len();
        if t <= self.ts[0] {
            let s = self.slopes[0];
            return Dual2 { v: self.vs[0] + s * (t - self.ts[0]), d1: s, d2: 0.0 };
        }
        if t >= self.ts[n - 1] {
            let s = self.slopes[n - 1];
            return Dual2 { v: self.vs[n - 1] + s * (t - self.ts[n - 1]), d1: s, d2: 0.0 };
        }
        let k = self.ts.partition_point(|&x| x <= t) - 1;
        let h = self.ts[k + 1] - self.ts[k];
        let s = (t - self.ts[k]) / h;
        let (y0, y1) = (self.vs[k], self.vs[k + 1]);
        let (m0, m1) = (self.slopes[k] * h, self.slopes[k + 1] * h);
        let h00 = 2.0 * s * s * s - 3.0 * s * s + 1.0;
        let h10 = s * s * s - 2.0 * s * s + s;
        let h01 = -2.0 * s * s * s + 3.0 * s * s;
        let h11 = s * s * s - s * s;
        let d00 = 6.0 * s * s - 6.0 * s;
        let d10 = 3.0 * s * s - 4.0 * s + 1.0;
        let d01 = -6.0 * s * s + 6.0 * s;
        let d11 = 3.0 * s * s - 2.0 * s;
        let e00 = 12.0 * s - 6.0;
        let e10 = 6.0 * s - 4.0;
        let e01 = -12.0 * s + 6.0;
        let e11 = 6.0 * s - 2.0;
        Dual2 {
            v: h00 * y0 + h10 * m0 + h01 * y1 + h11 * m1,
            d1: (d00 * y0 + d10 * m0 + d01 * y1 + d11 * m1) / h,
            d2: (e00 * y0 + e10 * m0 + e01 * y1 + e11 * m1) / (h * h),
        }
    }
}

impl Univariate for HermiteTable {
    fn eval(&self, t: f64) -> f64 {
        self.dual(t).v
    }
    fn deriv(&self, t: f64) -> f64 {
        self.dual(t).d1
    }
    fn deriv2(&self, t: f64) -> f64 {
        self.dual(t).d2
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FunctionKind {
    Preset(Preset),
    ParsedExpression,
    Piecewise,
}

/// A real function on `[0, domain_max]` with first and second derivatives.
#[derive(Clone)]
pub struct ScalarFunction1D {
    body: Arc<dyn Univariate>,
    domain_max: f64,
    kind: FunctionKind,
    label: String,
}

impl fmt::Debug for ScalarFunction1D {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ScalarFunction1D")
            .field("label", &self.label)
            .field("kind", &self.kind)
            .field("domain_max", &self.domain_max)
            .finish()
    }
}

impl ScalarFunction1D {
    pub fn new(body: Arc<dyn Univariate>, domain_max: f64, kind: FunctionKind, label: impl Into<String>) -> Self {
        Self {
            body,
            domain_max,
            kind,
            label: label.into(),
        }
    }

    pub fn preset(preset: Preset, domain_max: f64) -> Self {
        Self::new(Arc::new(preset), domain_max, FunctionKind::Preset(preset), preset.expression())
    }

    pub fn constant(c: f64, domain_max: f64) -> Self {
        Self::preset(Preset::Constant(c), domain_max)
    }

    pub fn expression(expr: Expr, domain_max: f64) -> Self {
        let label = expr.source().to_string();
        Self::new(Arc::new(ExprBody(expr)), domain_max, FunctionKind::ParsedExpression, label)
    }

    pub fn piecewise(body: Arc<dyn Univariate>, domain_max: f64, label: impl Into<String>) -> Self {
        Self::new(body, domain_max, FunctionKind::Piecewise, label)
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.body.eval(t)
    }

    pub fn deriv(&self, t: f64) -> f64 {
        self.body.deriv(t)
    }

    pub fn deriv2(&self, t: f64) -> f64 {
        self.body.deriv2(t)
    }

    pub fn dual(&self, t: f64) -> std::result::Result<Dual2, EvalError> {
        self.body.try_dual(t)
    }

    pub fn domain_max(&self) -> f64 {
        self.domain_max
    }

    pub fn kind(&self) -> &FunctionKind {
        &self.kind
    }

    pub fn preset_kind(&self) -> Option<Preset> {
        match self.kind {
            FunctionKind::Preset(p) => Some(p),
            _ => None,
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_domain_max(mut self, domain_max: f64) -> Self {
        self.domain_max = domain_max;
        self
    }

    /// Checks that value and derivatives are finite on a uniform grid of
    /// `samples` points over `[0, domain_max]`.
    pub fn check_finite(&self, samples: usize) -> Result<()> {
        for t in crate::numeric::uniform_grid(0.0, self.domain_max, samples) {
            let d = self.dual(t).map_err(|e| Error::Evaluation {
                function: self.label.clone(),
                source: e,
            })?;
            if !(d.v.is_finite() && d.d1.is_finite() && d.d2.is_finite()) {
                return Err(Error::NonFinite {
                    function: self.label.clone(),
                    t,
                });
            }
        }
        Ok(())
    }

    /// Largest relative mismatch between `deriv` and a central difference of
    /// `eval` over `count` seeded random points in `[0, domain_max]`.
    pub fn derivative_consistency(&self, count: usize) -> f64 {
        let mut rng = ChaCha8Rng::seed_from_u64(SAMPLING_SEED);
        let mut worst: f64 = 0.0;
        for _ in 0..count {
            let t = rng.gen_range(0.0..=self.domain_max);
            let h = 1e-5 * t.abs().max(1.0);
            // Stay inside the domain near zero.
            let (lo, hi) = if t - h < 0.0 { (t, t + 2.0 * h) } else { (t - h, t + h) };
            let mid = 0.5 * (lo + hi);
            let fd = (self.eval(hi) - self.eval(lo)) / (hi - lo);
            let d = self.deriv(mid);
            let scale = d.abs() + 1e-6 * self.eval(mid).abs() + 1e-10;
            worst = worst.max((fd - d).abs() / scale);
        }
        worst
    }
}

/// Seeded uniform random points in `[0, hi]`.
pub(crate) fn random_points(hi: f64, count: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| rng.gen_range(0.0..=hi)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_are_derivative_consistent() {
        for p in [
            Preset::Constant(3.0),
            Preset::Linear,
            Preset::Quadratic,
            Preset::Exponential,
            Preset::LogLinear,
            Preset::Identity,
            Preset::Sinh,
        ] {
            let f = ScalarFunction1D::preset(p, 20.0);
            assert!(f.derivative_consistency(100) < 1e-5, "{p:?}");
        }
    }

    #[test]
    fn preset_integrals_match_quadrature() {
        use crate::numeric::{integrate, QuadOptions};
        for p in [Preset::Constant(2.0), Preset::Linear, Preset::Quadratic, Preset::Exponential] {
            let q = integrate(|s| 1.0 / p.eval(s), 0.0, 3.7, QuadOptions::default()).unwrap();
            assert!((q - p.reciprocal_integral(3.7).unwrap()).abs() < 1e-10, "{p:?}");
        }
        for p in [Preset::Linear, Preset::Quadratic, Preset::LogLinear, Preset::Sinh] {
            let q = integrate(|s| p.eval(s), 0.0, 2.5, QuadOptions::default()).unwrap();
            assert!((q - p.integral(2.5).unwrap()).abs() < 1e-9, "{p:?}");
        }
    }

    #[test]
    fn expression_function_is_consistent() {
        let f = ScalarFunction1D::expression(Expr::parse("1 + t^2 + sinh(t/3)").unwrap(), 10.0);
        assert!(f.derivative_consistency(100) < 1e-5);
        assert_eq!(f.kind(), &FunctionKind::ParsedExpression);
    }

    #[test]
    fn hermite_table_is_monotone_and_interpolating() {
        let pts: Vec<(f64, f64)> = (0..=10).map(|k| (k as f64, 1.0 + (k as f64).powi(2))).collect();
        let table = HermiteTable::new(&pts).unwrap();
        for &(t, v) in &pts {
            assert!((table.eval(t) - v).abs() < 1e-12);
        }
        let f = ScalarFunction1D::piecewise(Arc::new(table), 10.0, "table");
        assert!(f.derivative_consistency(100) < 1e-5);
        let grid = crate::numeric::uniform_grid(0.0, 10.0, 1000);
        assert!(grid.windows(2).all(|w| f.eval(w[1]) >= f.eval(w[0])));
    }

    #[test]
    fn hermite_rejects_unsorted() {
        assert!(HermiteTable::new(&[(0.0, 1.0), (0.0, 2.0)]).is_err());
        assert!(HermiteTable::new(&[(0.0, 1.0)]).is_err());
    }

    #[test]
    fn finite_check_reports_domain_errors() {
        let f = ScalarFunction1D::expression(Expr::parse("log(t - 1)").unwrap(), 5.0);
        assert!(matches!(f.check_finite(10), Err(Error::Evaluation { .. })));
    }
}
