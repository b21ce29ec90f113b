//! Rotationally symmetric model manifolds `dr² + f(r)² dθ²` and the Riccati
//! comparison for the mean curvature of geodesic spheres.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::function::{FunctionKind, Preset, ScalarFunction1D, Univariate};
use crate::growth::{GrowthFunction, RunningIntegral};
use crate::numeric::{dopri5, uniform_grid, OdeOptions, Termination};

const POLE_TOL: f64 = 1e-8;
const CHECK_POINTS: usize = 2000;

/// Warping function `f` of a model manifold.
///
/// Geometry only ever needs `f'/f` and `f''/f`, which every variant supplies
/// without forming `f` itself, so fast-growing warpings do not overflow.
#[derive(Clone)]
pub enum Warping {
    /// `f(t) = t`
    Euclidean,
    /// `f(t) = sinh t`
    Hyperbolic,
    /// `f(t) = t exp(∫_0^t G)`
    Counterexample { growth: ScalarFunction1D, integral: RunningIntegral },
    Custom(ScalarFunction1D),
}

impl fmt::Debug for Warping {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

impl Warping {
    pub fn counterexample(growth: &GrowthFunction) -> Result<Self> {
        Ok(Warping::Counterexample {
            growth: growth.base().clone(),
            integral: RunningIntegral::new(growth.base().clone(), false)?,
        })
    }

    pub fn label(&self) -> String {
        match self {
            Warping::Euclidean => "t".into(),
            Warping::Hyperbolic => "sinh(t)".into(),
            Warping::Counterexample { growth, .. } => format!("t*exp(int[{}])", growth.label()),
            Warping::Custom(f) => f.label().to_string(),
        }
    }

    /// `log f(t)` for `t > 0`.
    pub fn log_value(&self, t: f64) -> f64 {
        match self {
            Warping::Euclidean => t.ln(),
            // log sinh t = t + log(1 - e^{-2t}) - log 2
            Warping::Hyperbolic => t + (-(-2.0 * t).exp()).ln_1p() - std::f64::consts::LN_2,
            Warping::Counterexample { integral, .. } => t.ln() + integral.eval(t),
            Warping::Custom(f) => f.eval(t).ln(),
        }
    }

    /// `f'(t)/f(t)`
    pub fn log_derivative(&self, t: f64) -> f64 {
        match self {
            Warping::Euclidean => 1.0 / t,
            Warping::Hyperbolic => 1.0 / t.tanh(),
            Warping::Counterexample { growth, .. } => 1.0 / t + growth.eval(t),
            Warping::Custom(f) => f.deriv(t) / f.eval(t),
        }
    }

    /// `f''(t)/f(t)`
    pub fn second_ratio(&self, t: f64) -> f64 {
        match self {
            Warping::Euclidean => 0.0,
            Warping::Hyperbolic => 1.0,
            Warping::Counterexample { growth, .. } => {
                // (f'/f)' + (f'/f)²
                let q = 1.0 / t + growth.eval(t);
                -1.0 / (t * t) + growth.deriv(t) + q * q
            }
            Warping::Custom(f) => f.deriv2(t) / f.eval(t),
        }
    }

    /// `(f(0), f'(0))`
    fn pole_values(&self) -> (f64, f64) {
        match self {
            Warping::Euclidean | Warping::Hyperbolic | Warping::Counterexample { .. } => (0.0, 1.0),
            Warping::Custom(f) => (f.eval(0.0), f.deriv(0.0)),
        }
    }

    pub fn as_function(&self, domain_max: f64) -> ScalarFunction1D {
        match self {
            Warping::Euclidean => ScalarFunction1D::preset(Preset::Identity, domain_max),
            Warping::Hyperbolic => ScalarFunction1D::preset(Preset::Sinh, domain_max),
            Warping::Custom(f) => f.clone(),
            Warping::Counterexample { .. } => ScalarFunction1D::new(
                Arc::new(WarpingBody(self.clone())),
                domain_max,
                FunctionKind::Piecewise,
                self.label(),
            ),
        }
    }
}

struct WarpingBody(Warping);

impl fmt::Debug for WarpingBody {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl Univariate for WarpingBody {
    fn eval(&self, t: f64) -> f64 {
        if t == 0.0 {
            return 0.0;
        }
        self.0.log_value(t).exp()
    }
    fn deriv(&self, t: f64) -> f64 {
        if t == 0.0 {
            return self.0.pole_values().1;
        }
        self.eval(t) * self.0.log_derivative(t)
    }
    fn deriv2(&self, t: f64) -> f64 {
        self.eval(t) * self.0.second_ratio(t)
    }
}

/// Dimension plus warping function.
#[derive(Debug, Clone)]
pub struct ModelManifold {
    dim: usize,
    warping: Warping,
    domain_max: f64,
}

impl ModelManifold {
    /// Checks `n ≥ 2`, `f > 0` on `(0, domain_max]`, and `f(0) = 0`, `f'(0) = 1`.
    pub fn new(dim: usize, warping: Warping, domain_max: f64) -> Result<Self> {
        if dim < 2 {
            return Err(Error::InvalidInput(format!("dimension must be at least 2, got {dim}")));
        }
        if !(domain_max > 0.0) || !domain_max.is_finite() {
            return Err(Error::InvalidInput(format!("domain_max must be positive, got {domain_max}")));
        }
        let (f0, df0) = warping.pole_values();
        if f0.abs() > POLE_TOL || (df0 - 1.0).abs() > POLE_TOL {
            return Err(Error::InvalidWarping(format!(
                "need f(0) = 0 and f'(0) = 1, got f(0) = {f0}, f'(0) = {df0}"
            )));
        }
        for t in uniform_grid(0.0, domain_max, CHECK_POINTS).into_iter().skip(1) {
            let lf = warping.log_value(t);
            if lf.is_nan() || lf == f64::NEG_INFINITY {
                return Err(Error::InvalidWarping(format!("f is not positive at t = {t}")));
            }
        }
        Ok(Self {
            dim,
            warping,
            domain_max,
        })
    }

    pub fn euclidean(dim: usize, domain_max: f64) -> Result<Self> {
        Self::new(dim, Warping::Euclidean, domain_max)
    }

    pub fn hyperbolic(dim: usize, domain_max: f64) -> Result<Self> {
        Self::new(dim, Warping::Hyperbolic, domain_max)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn warping(&self) -> &Warping {
        &self.warping
    }

    pub fn domain_max(&self) -> f64 {
        self.domain_max
    }

    fn radial(&self, t: f64) -> Result<f64> {
        if !(t > 0.0) {
            return Err(Error::PoleSingularity { t });
        }
        if t > self.domain_max {
            return Err(Error::InvalidInput(format!("radius {t} beyond domain {}", self.domain_max)));
        }
        Ok((self.dim - 1) as f64)
    }
}

/// Laplacian of the distance function: `Δr = (n-1) f'/f`.
pub fn delta_r(m: &ModelManifold, t: f64) -> Result<f64> {
    Ok(m.radial(t)? * m.warping.log_derivative(t))
}

/// Radial Ricci curvature `Ric(∂r, ∂r) = -(n-1) f''/f`.
pub fn ricci_radial(m: &ModelManifold, t: f64) -> Result<f64> {
    Ok(-m.radial(t)? * m.warping.second_ratio(t))
}

/// Laplacian of a radial function `g(r)`: `g'' + Δr g'`.
pub fn radial_laplacian(m: &ModelManifold, g: &ScalarFunction1D, t: f64) -> Result<f64> {
    Ok(g.deriv2(t) + delta_r(m, t)? * g.deriv(t))
}

/// Model manifold with `f = t exp(∫_0^t G)`, so that
/// `Δr = (n-1)(1/t + G) > G` on `(0, domain_max]`.
pub fn build_counterexample_manifold(growth: &GrowthFunction, dim: usize) -> Result<ModelManifold> {
    growth.require_admissible()?;
    let m = ModelManifold::new(dim, Warping::counterexample(growth)?, growth.domain_max())?;
    for t in uniform_grid(0.0, m.domain_max, CHECK_POINTS).into_iter().skip(1) {
        let dr = delta_r(&m, t)?;
        let g = growth.eval(t);
        if !(dr > g) {
            return Err(Error::InvalidWarping(format!("Δr = {dr} does not exceed G = {g} at t = {t}")));
        }
    }
    Ok(m)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RiccatiTrace {
    pub dim: usize,
    pub t: Vec<f64>,
    /// Mean curvature of the geodesic spheres.
    pub m: Vec<f64>,
    /// Radial Ricci lower bound used on the right-hand side.
    pub ricci: Vec<f64>,
    pub termination: Termination,
    /// Finite-time escape of `m` (a conjugate point).
    pub blow_up: bool,
}

/// Integrates `m' = -R(t) - m²/(n-1)` from `m(t0) = m0` to `horizon`.
pub fn riccati_integrate<R: Fn(f64) -> f64>(
    ricci: R,
    dim: usize,
    t0: f64,
    m0: f64,
    horizon: f64,
    opts: OdeOptions,
) -> Result<RiccatiTrace> {
    if dim < 2 {
        return Err(Error::InvalidInput(format!("dimension must be at least 2, got {dim}")));
    }
    if !(t0 > 0.0) || !(horizon > t0) {
        return Err(Error::InvalidInput(format!("need 0 < t0 < T, got t0 = {t0}, T = {horizon}")));
    }
    if !m0.is_finite() {
        return Err(Error::InvalidInput(format!("initial value must be finite, got {m0}")));
    }
    let k = (dim - 1) as f64;
    let sol = dopri5(|t, m| -ricci(t) - m * m / k, t0, m0, horizon, opts);
    let blow_up = matches!(sol.termination, Termination::BlowUp | Termination::StepUnderflow)
        || sol.y.last().is_some_and(|&m| m < -opts.blowup);
    let ricci_samples = sol.t.iter().map(|&t| ricci(t)).collect();
    Ok(RiccatiTrace {
        dim,
        t: sol.t,
        m: sol.y,
        ricci: ricci_samples,
        termination: sol.termination,
        blow_up,
    })
}

/// Comparison equation with the curvature bound `Ric ≥ -G²`.
pub fn riccati_for_growth(growth: &GrowthFunction, dim: usize, t0: f64, m0: f64, horizon: f64, opts: OdeOptions) -> Result<RiccatiTrace> {
    riccati_integrate(|t| -growth.eval(t).powi(2), dim, t0, m0, horizon, opts)
}

/// Riccati equation of a model manifold itself, started from `Δr(t0)`.
pub fn riccati_for_manifold(m: &ModelManifold, t0: f64, horizon: f64, opts: OdeOptions) -> Result<RiccatiTrace> {
    let m0 = delta_r(m, t0)?;
    let k = (m.dim - 1) as f64;
    riccati_integrate(|t| -k * m.warping.second_ratio(t), m.dim, t0, m0, horizon, opts)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundRow {
    pub t: f64,
    pub m: f64,
    pub bound: f64,
    pub margin: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    /// `√(n-1) + 1`
    pub factor: f64,
    /// Earliest sample from which `m < factor·G` holds at every later sample.
    pub holds_from: Option<f64>,
    /// Last sample where the bound fails.
    pub witness: Option<BoundRow>,
    pub holds_everywhere: bool,
    pub min_margin_after: Option<f64>,
    pub rows: Vec<BoundRow>,
}

/// Scans a trace for the bound `m(t) < (√(n-1) + 1) G(t)`.
pub fn check_comparison_bound(trace: &RiccatiTrace, growth: &GrowthFunction, dim: usize) -> ComparisonReport {
    let factor = ((dim.max(1) - 1) as f64).sqrt() + 1.0;
    let rows: Vec<BoundRow> = trace
        .t
        .iter()
        .zip(&trace.m)
        .map(|(&t, &m)| {
            let bound = factor * growth.eval(t);
            BoundRow { t, m, bound, margin: bound - m }
        })
        .collect();
    let last_bad = rows.iter().rposition(|r| !(r.margin > 0.0));
    let (holds_from, witness) = match last_bad {
        None => (rows.first().map(|r| r.t), None),
        Some(k) if k + 1 < rows.len() => (Some(rows[k + 1].t), Some(rows[k])),
        Some(k) => (None, Some(rows[k])),
    };
    let start = last_bad.map_or(0, |k| k + 1);
    let min_margin_after = rows[start.min(rows.len())..]
        .iter()
        .map(|r| r.margin)
        .reduce(f64::min);
    ComparisonReport {
        factor,
        holds_from,
        witness,
        holds_everywhere: last_bad.is_none(),
        min_margin_after,
        rows,
    }
}
