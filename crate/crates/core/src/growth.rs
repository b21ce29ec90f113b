//! Admissible growth functions `G` (G ≥ 1, G' ≥ 0), the reciprocal integral
//! `∫ 1/G`, and the auxiliary function `F = exp(∫_0^t 1/G)`.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::function::{random_points, SAMPLING_SEED, FunctionKind, ScalarFunction1D, Univariate};
use crate::numeric::{integrate, uniform_grid, CumulativeIntegral, QuadOptions};

/// Absolute slack on `G' ≥ 0`.
pub const MONOTONE_TOL: f64 = 1e-9;
/// Roundoff slack on `G ≥ 1`.
pub const LOWER_BOUND_TOL: f64 = 1e-12;
const RANDOM_SAMPLES: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Violation {
    pub t: f64,
    /// `"G >= 1"` or `"G' >= 0"`.
    pub condition: &'static str,
    pub value: f64,
}

/// A growth function together with the outcome of its admissibility scan.
#[derive(Debug, Clone)]
pub struct GrowthFunction {
    base: ScalarFunction1D,
    verified_admissible: bool,
    /// First violation of each condition, ordered by `t`.
    violations: Vec<Violation>,
}

impl GrowthFunction {
    pub fn base(&self) -> &ScalarFunction1D {
        &self.base
    }

    pub fn verified_admissible(&self) -> bool {
        self.verified_admissible
    }

    pub fn violations(&self) -> &[Violation] {
        &self.violations
    }

    pub fn first_violation(&self) -> Option<&Violation> {
        self.violations.first()
    }

    pub fn require_admissible(&self) -> Result<()> {
        match self.first_violation() {
            None => Ok(()),
            Some(v) => Err(Error::Inadmissible {
                t: v.t,
                condition: v.condition,
                value: v.value,
            }),
        }
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.base.eval(t)
    }

    pub fn deriv(&self, t: f64) -> f64 {
        self.base.deriv(t)
    }

    pub fn deriv2(&self, t: f64) -> f64 {
        self.base.deriv2(t)
    }

    pub fn domain_max(&self) -> f64 {
        self.base.domain_max()
    }
}

/// Scans `G ≥ 1` and `G' ≥ 0` on a uniform grid of `samples` points plus
/// 100 seeded random points.
pub fn validate_growth(function: ScalarFunction1D, samples: usize) -> Result<GrowthFunction> {
    validate_growth_seeded(function, samples, SAMPLING_SEED)
}

/// [`validate_growth`] with an explicit seed for the random sample points.
pub fn validate_growth_seeded(function: ScalarFunction1D, samples: usize, seed: u64) -> Result<GrowthFunction> {
    if samples == 0 {
        return Err(Error::InvalidInput("samples must be positive".into()));
    }
    let hi = function.domain_max();
    if !(hi > 0.0) || !hi.is_finite() {
        return Err(Error::InvalidInput(format!("domain_max must be positive and finite, got {hi}")));
    }
    let mut points = uniform_grid(0.0, hi, samples.max(2));
    points.extend(random_points(hi, RANDOM_SAMPLES, seed));
    points.sort_by(f64::total_cmp);

    let mut low: Option<Violation> = None;
    let mut slope: Option<Violation> = None;
    for &t in &points {
        let d = function.dual(t).map_err(|e| Error::Evaluation {
            function: function.label().to_string(),
            source: e,
        })?;
        if !(d.v.is_finite() && d.d1.is_finite()) {
            return Err(Error::NonFinite {
                function: function.label().to_string(),
                t,
            });
        }
        if low.is_none() && d.v < 1.0 - LOWER_BOUND_TOL {
            low = Some(Violation { t, condition: "G >= 1", value: d.v });
        }
        if slope.is_none() && d.d1 < -MONOTONE_TOL {
            slope = Some(Violation { t, condition: "G' >= 0", value: d.d1 });
        }
        if low.is_some() && slope.is_some() {
            break;
        }
    }
    let mut violations: Vec<Violation> = low.into_iter().chain(slope).collect();
    violations.sort_by(|a, b| a.t.total_cmp(&b.t));
    Ok(GrowthFunction {
        base: function,
        verified_admissible: violations.is_empty(),
        violations,
    })
}

/// `∫_0^horizon ds / G(s)` by adaptive quadrature to absolute error `tol`.
pub fn integrate_reciprocal(growth: &GrowthFunction, horizon: f64, tol: f64) -> Result<f64> {
    if !(horizon > 0.0) || horizon > growth.domain_max() {
        return Err(Error::InvalidInput(format!(
            "horizon {horizon} must lie in (0, {}]",
            growth.domain_max()
        )));
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidInput(format!("tolerance must be positive, got {tol}")));
    }
    let opts = QuadOptions {
        tol,
        ..QuadOptions::default()
    };
    Ok(integrate(|s| 1.0 / growth.eval(s), 0.0, horizon, opts)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    DivergesDeclared,
    ConvergesDeclared,
    InconclusiveNumeric,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::DivergesDeclared => "diverges-declared",
            Verdict::ConvergesDeclared => "converges-declared",
            Verdict::InconclusiveNumeric => "inconclusive-numeric",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntegralClassification {
    /// `∫_0^T 1/G` at the largest horizon.
    pub value_on_horizon: f64,
    pub horizons: Vec<f64>,
    pub values: Vec<f64>,
    /// Differences between consecutive `values` (first entry is `values[0]`).
    pub increments: Vec<f64>,
    pub verdict: Verdict,
    /// `∫_T^∞ 1/G` at the largest horizon, for declared-convergent presets.
    pub tail_estimate: Option<f64>,
}

/// Evaluates `∫_0^T 1/G` at each horizon. Only presets carry a verdict; any
/// other function is reported as inconclusive whatever its increments look like.
pub fn classify_integral(growth: &GrowthFunction, horizons: &[f64]) -> Result<IntegralClassification> {
    if horizons.is_empty() {
        return Err(Error::InvalidInput("at least one horizon is required".into()));
    }
    if horizons.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidInput("horizons must be strictly increasing".into()));
    }
    let opts = QuadOptions::default();
    let mut values = Vec::with_capacity(horizons.len());
    let mut increments = Vec::with_capacity(horizons.len());
    let mut prev = (0.0, 0.0);
    for &t in horizons {
        if !(t > 0.0) || t > growth.domain_max() {
            return Err(Error::InvalidInput(format!(
                "horizon {t} must lie in (0, {}]",
                growth.domain_max()
            )));
        }
        let inc = integrate(|s| 1.0 / growth.eval(s), prev.0, t, opts)?;
        let value = prev.1 + inc;
        values.push(value);
        increments.push(inc);
        prev = (t, value);
    }
    let last = *horizons.last().expect("non-empty");
    let (verdict, tail_estimate) = match growth.base().preset_kind() {
        Some(p) => match p.reciprocal_diverges() {
            Some(true) => (Verdict::DivergesDeclared, None),
            Some(false) => (Verdict::ConvergesDeclared, p.reciprocal_tail(last)),
            None => (Verdict::InconclusiveNumeric, None),
        },
        None => (Verdict::InconclusiveNumeric, None),
    };
    Ok(IntegralClassification {
        value_on_horizon: prev.1,
        horizons: horizons.to_vec(),
        values,
        increments,
        verdict,
        tail_estimate,
    })
}

/// Running integral `t -> ∫_0^t integrand` using a closed form when the
/// integrand is a preset and a node table otherwise.
#[derive(Debug, Clone)]
pub struct RunningIntegral {
    integrand: ScalarFunction1D,
    reciprocal: bool,
    table: Option<CumulativeIntegral>,
}

impl RunningIntegral {
    pub fn new(integrand: ScalarFunction1D, reciprocal: bool) -> Result<Self> {
        let closed = integrand.preset_kind().and_then(|p| {
            if reciprocal {
                p.reciprocal_integral(0.0)
            } else {
                p.integral(0.0)
            }
        });
        let table = if closed.is_some() {
            None
        } else {
            let horizon = integrand.domain_max();
            let cells = ((horizon * 8.0).ceil() as usize).clamp(64, 8192);
            let f = integrand.clone();
            let table = if reciprocal {
                CumulativeIntegral::build(&|s| 1.0 / f.eval(s), horizon, cells, QuadOptions::default())?
            } else {
                CumulativeIntegral::build(&|s| f.eval(s), horizon, cells, QuadOptions::default())?
            };
            Some(table)
        };
        Ok(Self {
            integrand,
            reciprocal,
            table,
        })
    }

    pub fn eval(&self, t: f64) -> f64 {
        match (&self.table, self.integrand.preset_kind()) {
            (None, Some(p)) => {
                let v = if self.reciprocal {
                    p.reciprocal_integral(t)
                } else {
                    p.integral(t)
                };
                v.unwrap_or(f64::NAN)
            }
            (Some(table), _) => {
                let f = &self.integrand;
                let r = if self.reciprocal {
                    table.eval(&|s| 1.0 / f.eval(s), t)
                } else {
                    table.eval(&|s| f.eval(s), t)
                };
                r.unwrap_or(f64::NAN)
            }
            (None, None) => f64::NAN,
        }
    }
}

#[derive(Debug)]
struct FBody {
    growth: ScalarFunction1D,
    exponent: RunningIntegral,
}

impl FBody {
    fn parts(&self, t: f64) -> (f64, f64, f64) {
        let f = self.exponent.eval(t).exp();
        let g = self.growth.eval(t);
        let dg = self.growth.deriv(t);
        let d1 = f / g;
        let d2 = d1 / g - f * dg / (g * g);
        (f, d1, d2)
    }
}

impl Univariate for FBody {
    fn eval(&self, t: f64) -> f64 {
        self.parts(t).0
    }
    fn deriv(&self, t: f64) -> f64 {
        self.parts(t).1
    }
    fn deriv2(&self, t: f64) -> f64 {
        self.parts(t).2
    }
}

/// `F(t) = exp(∫_0^t 1/G)` with `F' = F/G` and `F'' = F'/G - F G'/G²`.
pub fn build_f(growth: &GrowthFunction) -> Result<ScalarFunction1D> {
    growth.require_admissible()?;
    let exponent = RunningIntegral::new(growth.base().clone(), true)?;
    let body = FBody {
        growth: growth.base().clone(),
        exponent,
    };
    Ok(ScalarFunction1D::new(
        Arc::new(body),
        growth.domain_max(),
        FunctionKind::Piecewise,
        format!("F[{}]", growth.base().label()),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::Expr;
    use crate::function::Preset;

    fn preset(p: Preset, hi: f64) -> GrowthFunction {
        validate_growth(ScalarFunction1D::preset(p, hi), 1000).unwrap()
    }

    fn parsed(src: &str, hi: f64) -> GrowthFunction {
        validate_growth(ScalarFunction1D::expression(Expr::parse(src).unwrap(), hi), 1000).unwrap()
    }

    #[test]
    fn linear_is_admissible() {
        assert!(preset(Preset::Linear, 10.0).verified_admissible());
        assert!(preset(Preset::Quadratic, 10.0).verified_admissible());
    }

    #[test]
    fn decreasing_reports_first_violation() {
        let g = parsed("2 - t", 5.0);
        assert!(!g.verified_admissible());
        let first = g.first_violation().unwrap();
        assert_eq!(first.t, 0.0);
        assert_eq!(first.condition, "G' >= 0");
        let low = g.violations().iter().find(|v| v.condition == "G >= 1").unwrap();
        assert!(low.t > 1.0 && low.t < 1.01);
        assert!(matches!(g.require_admissible(), Err(Error::Inadmissible { .. })));
    }

    #[test]
    fn reciprocal_integrals() {
        let v = integrate_reciprocal(&preset(Preset::Linear, 10.0), std::f64::consts::E - 1.0, 1e-10).unwrap();
        assert!((v - 1.0).abs() < 1e-10);
        let v = integrate_reciprocal(&preset(Preset::Constant(1.0), 10.0), 7.0, 1e-10).unwrap();
        assert!((v - 7.0).abs() < 1e-10);
        let v = integrate_reciprocal(&preset(Preset::Quadratic, 10.0), 9.0, 1e-10).unwrap();
        assert!((v - 0.9).abs() < 1e-10);
    }

    #[test]
    fn horizon_outside_domain_is_rejected() {
        let g = preset(Preset::Linear, 10.0);
        assert!(integrate_reciprocal(&g, 11.0, 1e-10).is_err());
        assert!(integrate_reciprocal(&g, 0.0, 1e-10).is_err());
        assert!(integrate_reciprocal(&g, 1.0, 0.0).is_err());
    }

    #[test]
    fn classification_verdicts() {
        let c = classify_integral(&preset(Preset::Linear, 100.0), &[10.0, 100.0]).unwrap();
        assert_eq!(c.verdict, Verdict::DivergesDeclared);
        let c = classify_integral(&preset(Preset::Quadratic, 100.0), &[10.0, 50.0]).unwrap();
        assert_eq!(c.verdict, Verdict::ConvergesDeclared);
        assert!((c.tail_estimate.unwrap() - 1.0 / 51.0).abs() < 1e-15);
        assert!((c.value_on_horizon - 50.0 / 51.0).abs() < 1e-10);
        let c = classify_integral(&parsed("1+t^2", 100.0), &[1.0, 10.0, 100.0]).unwrap();
        assert_eq!(c.verdict, Verdict::InconclusiveNumeric);
        assert_eq!(c.increments.len(), 3);
        assert!((c.values[2] - 100f64.atan()).abs() < 1e-9);
        assert!(classify_integral(&parsed("1+t^2", 100.0), &[10.0, 5.0]).is_err());
    }

    #[test]
    fn f_from_linear_growth() {
        let f = build_f(&preset(Preset::Linear, 10.0)).unwrap();
        assert_eq!(f.eval(0.0), 1.0);
        assert!((f.eval(3.0) - 4.0).abs() < 1e-12);
        // Same through the quadrature path.
        let f = build_f(&parsed("1+t", 10.0)).unwrap();
        assert!((f.eval(3.0) - 4.0).abs() < 1e-9);
        assert!((f.deriv(3.0) - 1.0).abs() < 1e-9);
        assert!(f.deriv2(3.0).abs() < 1e-9);
    }

    #[test]
    fn f_from_constant_two() {
        let f = build_f(&preset(Preset::Constant(2.0), 10.0)).unwrap();
        assert!((f.eval(2.0) - std::f64::consts::E).abs() < 1e-14);
        let f = build_f(&parsed("2", 10.0)).unwrap();
        assert!((f.eval(2.0) - std::f64::consts::E).abs() < 1e-9);
    }

    #[test]
    fn f_requires_admissible_growth() {
        assert!(build_f(&parsed("2 - t", 5.0)).is_err());
    }
}
