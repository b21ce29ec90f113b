//! The maximum principle at desk scale.
//!
//! [`sweep_lambda0`] lowers the family `h_λ = λ F(r) + L - ε` onto a function
//! `g` bounded above by `L` and reports the touching point `x_ε` together with
//! the four certified inequalities
//!
//! * `L - g(x_ε) ≤ ε`
//! * `λ₀ < ε / F(x_ε) < ε`
//! * `|∇g(x_ε)| < ε`
//! * `Δg(x_ε) ≤ 2ε`
//!
//! [`build_counterexample`] goes the other way: for `∫ 1/G < ∞` it produces a
//! bounded radial function whose Laplacian stays above 1 everywhere.

use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::function::{ScalarFunction1D, Univariate};
use crate::growth::{build_f, classify_integral, GrowthFunction, RunningIntegral, Verdict};
use crate::manifold::{build_counterexample_manifold, delta_r, radial_laplacian, ModelManifold};
use crate::numeric::{grid_golden_max, uniform_grid};
use crate::slowdown::{build_h, integral_reciprocal_h, SlowdownOptions, SlowedGrowth};

pub const DEFAULT_SWEEP_GRID: usize = 100_000;
pub const DEFAULT_GOLDEN_TOL: f64 = 1e-10;
/// Fraction of the horizon in which a maximiser is considered truncated.
pub const HORIZON_GUARD: f64 = 0.01;
/// `Δh` must stay above `1 - COUNTEREXAMPLE_TOL`.
pub const COUNTEREXAMPLE_TOL: f64 = 1e-6;
/// Slack used when deciding that `g` attains `L`.
const ATTAIN_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepOptions {
    pub grid: usize,
    pub golden_tol: f64,
}

impl Default for SweepOptions {
    fn default() -> Self {
        Self {
            grid: DEFAULT_SWEEP_GRID,
            golden_tol: DEFAULT_GOLDEN_TOL,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateChecks {
    /// `L - g(x_ε) ≤ ε`
    pub gap: bool,
    /// `λ₀ < ε/F(x_ε)` and `λ₀ < ε`
    pub lambda: bool,
    /// `|∇g(x_ε)| < ε`
    pub gradient: bool,
    /// `Δg(x_ε) ≤ 2ε`
    pub laplacian: bool,
}

impl CertificateChecks {
    pub fn all(&self) -> bool {
        self.gap && self.lambda && self.gradient && self.laplacian
    }

    /// Names of the inequalities that fail.
    pub fn failures(&self) -> Vec<&'static str> {
        [
            (self.gap, "gap"),
            (self.lambda, "lambda"),
            (self.gradient, "gradient"),
            (self.laplacian, "laplacian"),
        ]
        .into_iter()
        .filter(|(ok, _)| !ok)
        .map(|(_, name)| name)
        .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepCertificate {
    pub epsilon: f64,
    pub level: f64,
    pub lambda0: f64,
    /// Radius of the touching point.
    pub x_eps: f64,
    pub f_at_x: f64,
    /// `L - g(x_ε)`
    pub gap: f64,
    /// `|g'(x_ε)|`
    pub grad_norm: f64,
    /// `Δg(x_ε)`
    pub laplacian: f64,
    /// The maximum of `g` is attained; `x_eps` is the maximiser.
    pub trivial: bool,
    pub passed: CertificateChecks,
}

impl SweepCertificate {
    pub fn passes(&self) -> bool {
        self.passed.all()
    }
}

fn check_horizon(m: &ModelManifold, g: &ScalarFunction1D, growth: &GrowthFunction, horizon: f64) -> Result<()> {
    let limit = m.domain_max().min(g.domain_max()).min(growth.domain_max());
    if !(horizon > 0.0) || horizon > limit {
        return Err(Error::InvalidInput(format!("horizon {horizon} must lie in (0, {limit}]")));
    }
    Ok(())
}

/// Verifies `Δr ≤ G` on `(1, T]`.
fn check_curvature_hypothesis(m: &ModelManifold, growth: &GrowthFunction, horizon: f64, points: usize) -> Result<()> {
    if horizon <= 1.0 {
        return Ok(());
    }
    for t in uniform_grid(1.0, horizon, points).into_iter().skip(1) {
        let dr = delta_r(m, t)?;
        let g = growth.eval(t);
        if dr > g + 1e-12 * g.abs().max(1.0) {
            return Err(Error::CurvatureHypothesis { t, delta_r: dr, growth: g });
        }
    }
    Ok(())
}

fn laplacian_at(m: &ModelManifold, g: &ScalarFunction1D, t: f64) -> Result<f64> {
    if t > 0.0 {
        radial_laplacian(m, g, t)
    } else {
        // Smooth radial function at the pole: Δg = n g''(0).
        Ok(m.dim() as f64 * g.deriv2(0.0))
    }
}

/// Runs one sweep and certifies the touching point.
pub fn sweep_lambda0(
    m: &ModelManifold,
    g: &ScalarFunction1D,
    level: f64,
    growth: &GrowthFunction,
    epsilon: f64,
    horizon: f64,
    opts: &SweepOptions,
) -> Result<SweepCertificate> {
    let f = build_f(growth)?;
    sweep_with_f(m, g, level, growth, &f, epsilon, horizon, opts)
}

#[allow(clippy::too_many_arguments)]
fn sweep_with_f(
    m: &ModelManifold,
    g: &ScalarFunction1D,
    level: f64,
    growth: &GrowthFunction,
    f: &ScalarFunction1D,
    epsilon: f64,
    horizon: f64,
    opts: &SweepOptions,
) -> Result<SweepCertificate> {
    if !(epsilon > 0.0) {
        return Err(Error::InvalidInput(format!("epsilon must be positive, got {epsilon}")));
    }
    growth.require_admissible()?;
    check_horizon(m, g, growth, horizon)?;
    check_curvature_hypothesis(m, growth, horizon, opts.grid)?;

    let grid = uniform_grid(0.0, horizon, opts.grid);
    let (_, sup) = grid_golden_max(|t| g.eval(t), &grid, opts.golden_tol);
    if !(sup < level) {
        return Err(Error::SupremumAttained { sup, level });
    }
    let inner = uniform_grid(0.0, 1.0f64.min(horizon), (opts.grid / 10).max(100));
    let (_, sup_inner) = grid_golden_max(|t| g.eval(t), &inner, opts.golden_tol);
    let bound = 1.0f64.min(level - sup_inner);
    if epsilon > bound {
        return Err(Error::EpsilonGuard { epsilon, bound });
    }

    let ratio = |t: f64| (g.eval(t) - level + epsilon) / f.eval(t);
    let (x, lambda0) = grid_golden_max(ratio, &grid, opts.golden_tol);
    if !(lambda0 > 0.0) {
        return Err(Error::EpsilonBelowHorizonGap { epsilon });
    }
    if x > (1.0 - HORIZON_GUARD) * horizon {
        return Err(Error::HorizonLimited { x, horizon });
    }
    certificate(m, g, level, f, epsilon, lambda0, x, false)
}

#[allow(clippy::too_many_arguments)]
fn certificate(
    m: &ModelManifold,
    g: &ScalarFunction1D,
    level: f64,
    f: &ScalarFunction1D,
    epsilon: f64,
    lambda0: f64,
    x: f64,
    trivial: bool,
) -> Result<SweepCertificate> {
    let f_at_x = f.eval(x);
    let gap = level - g.eval(x);
    let grad_norm = g.deriv(x).abs();
    let laplacian = laplacian_at(m, g, x)?;
    let passed = CertificateChecks {
        gap: gap <= epsilon,
        lambda: lambda0 < epsilon / f_at_x && lambda0 < epsilon,
        gradient: grad_norm < epsilon,
        laplacian: laplacian <= 2.0 * epsilon,
    };
    Ok(SweepCertificate {
        epsilon,
        level,
        lambda0,
        x_eps: x,
        f_at_x,
        gap,
        grad_norm,
        laplacian,
        trivial,
        passed,
    })
}

/// Runs the sweep for every `ε`. When `g` attains `L` inside the horizon the
/// maximiser itself is certified for every `ε`.
pub fn certify_definition(
    m: &ModelManifold,
    g: &ScalarFunction1D,
    level: f64,
    growth: &GrowthFunction,
    epsilons: &[f64],
    horizon: f64,
    opts: &SweepOptions,
) -> Result<Vec<SweepCertificate>> {
    growth.require_admissible()?;
    check_horizon(m, g, growth, horizon)?;
    let f = build_f(growth)?;
    let grid = uniform_grid(0.0, horizon, opts.grid);
    let (argmax, sup) = grid_golden_max(|t| g.eval(t), &grid, opts.golden_tol);
    if sup > level + ATTAIN_TOL * level.abs().max(1.0) {
        return Err(Error::InvalidInput(format!("g reaches {sup} above the level L = {level}")));
    }
    if sup >= level - ATTAIN_TOL * level.abs().max(1.0) && argmax <= (1.0 - HORIZON_GUARD) * horizon {
        return epsilons
            .iter()
            .map(|&eps| {
                if !(eps > 0.0) {
                    return Err(Error::InvalidInput(format!("epsilon must be positive, got {eps}")));
                }
                certificate(m, g, level, &f, eps, 0.0, argmax, true)
            })
            .collect();
    }
    epsilons
        .par_iter()
        .map(|&eps| sweep_with_f(m, g, level, growth, &f, eps, horizon, opts))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub t: f64,
    pub g: f64,
    pub h_lambda0: f64,
    /// `h_λ₀ - g`, nonnegative up to optimiser tolerance.
    pub gap: f64,
}

/// Samples `g` against the touching member `h_λ₀` of the sweep family.
pub fn sweep_profile(g: &ScalarFunction1D, f: &ScalarFunction1D, cert: &SweepCertificate, horizon: f64, points: usize) -> Vec<SweepRow> {
    uniform_grid(0.0, horizon, points)
        .into_iter()
        .map(|t| {
            let gv = g.eval(t);
            let h = cert.lambda0 * f.eval(t) + cert.level - cert.epsilon;
            SweepRow { t, g: gv, h_lambda0: h, gap: h - gv }
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TailSample {
    pub radius: f64,
    pub h: f64,
    pub delta_h: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JointLaplacian {
    pub t: f64,
    pub left: f64,
    pub right: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ViolationReport {
    pub dim: usize,
    pub horizon: f64,
    /// Upper bound for `sup h = ∫_0^∞ 1/H` (integral on the horizon plus the
    /// tail bound when one is available).
    pub h_sup: f64,
    pub integral_on_horizon: f64,
    pub tail_bound: Option<f64>,
    pub grid_points: usize,
    pub delta_h_min: f64,
    pub delta_h_min_at: f64,
    pub maximizing_tail: Vec<TailSample>,
    /// One-sided `Δh` at the splice joints (excluded from the grid minimum).
    pub joints: Vec<JointLaplacian>,
    /// `delta_h_min > 1 - 1e-6`.
    pub violated: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CounterexampleOptions {
    pub grid: usize,
    pub tail_samples: usize,
    pub slowdown: SlowdownOptions,
}

impl Default for CounterexampleOptions {
    fn default() -> Self {
        Self {
            grid: 10_000,
            tail_samples: 11,
            slowdown: SlowdownOptions::default(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Counterexample {
    pub h: ScalarFunction1D,
    pub slowed: SlowedGrowth,
    pub manifold: ModelManifold,
    pub report: ViolationReport,
}

struct BoundedBody {
    slowed: SlowedGrowth,
    integral: RunningIntegral,
}

impl fmt::Debug for BoundedBody {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BoundedBody").field("splices", &self.slowed.splices()).finish()
    }
}

impl Univariate for BoundedBody {
    fn eval(&self, t: f64) -> f64 {
        self.integral.eval(t)
    }
    fn deriv(&self, t: f64) -> f64 {
        1.0 / self.slowed.eval(t)
    }
    fn deriv2(&self, t: f64) -> f64 {
        let h = self.slowed.eval(t);
        -self.slowed.deriv(t) / (h * h)
    }
}

/// `Δh = Δr/H - H'/H²` using a given one-sided `(H, H')`.
fn laplacian_from(m: &ModelManifold, t: f64, h: f64, dh: f64) -> Result<f64> {
    Ok(delta_r(m, t)? / h - dh / (h * h))
}

/// Builds `h(r) = ∫_0^r 1/H` on the model manifold with `f = t exp(∫G)` and
/// checks that `Δh > 1` on the grid.
pub fn build_counterexample(growth: &GrowthFunction, dim: usize, horizon: f64, opts: &CounterexampleOptions) -> Result<Counterexample> {
    growth.require_admissible()?;
    if !opts.slowdown.force {
        match classify_integral(growth, &[horizon])?.verdict {
            Verdict::ConvergesDeclared => {}
            Verdict::DivergesDeclared => return Err(Error::DivergesDeclared),
            other => return Err(Error::NotDeclaredConvergent { verdict: other.as_str() }),
        }
    }
    let slowed = build_h(growth, horizon, &opts.slowdown)?;
    let manifold = build_counterexample_manifold(growth, dim)?;
    let integral = RunningIntegral::new(slowed.as_function(), true)?;
    let h = ScalarFunction1D::piecewise(
        Arc::new(BoundedBody {
            slowed: slowed.clone(),
            integral,
        }),
        horizon,
        format!("int 1/H[{}]", growth.base().label()),
    );
    let recip = integral_reciprocal_h(&slowed, horizon)?;

    let mut delta_h_min = f64::INFINITY;
    let mut delta_h_min_at = f64::NAN;
    let grid = uniform_grid(0.0, horizon, opts.grid);
    for &t in grid.iter().skip(1) {
        if slowed.is_joint(t) {
            continue;
        }
        let lap = radial_laplacian(&manifold, &h, t)?;
        if lap < delta_h_min {
            delta_h_min = lap;
            delta_h_min_at = t;
        }
    }
    let joints = slowed
        .joint_values()
        .into_iter()
        .filter(|j| j.t > 0.0)
        .map(|j| {
            Ok(JointLaplacian {
                t: j.t,
                left: laplacian_from(&manifold, j.t, j.h_left, j.dh_left)?,
                right: laplacian_from(&manifold, j.t, j.h_right, j.dh_right)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let maximizing_tail = uniform_grid(0.5 * horizon, horizon, opts.tail_samples.max(2))
        .into_iter()
        .map(|r| {
            Ok(TailSample {
                radius: r,
                h: h.eval(r),
                delta_h: radial_laplacian(&manifold, &h, r)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    if !(delta_h_min > 1.0) {
        return Err(Error::ConstructionFailed {
            t: delta_h_min_at,
            delta_h: delta_h_min,
        });
    }
    let report = ViolationReport {
        dim,
        horizon,
        h_sup: recip.total_bound.unwrap_or(recip.integral),
        integral_on_horizon: recip.integral,
        tail_bound: recip.tail_bound,
        grid_points: grid.len(),
        delta_h_min,
        delta_h_min_at,
        maximizing_tail,
        joints,
        violated: delta_h_min > 1.0 - COUNTEREXAMPLE_TOL,
    };
    Ok(Counterexample {
        h,
        slowed,
        manifold,
        report,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SequenceVerdict {
    /// Near-supremum points have vanishing gradient and Laplacian ≤ 0 in the limit.
    Plausible,
    /// `Δg ≥ 1` throughout every near-supremum region.
    Violated,
    Inconclusive,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SequenceOptions {
    pub grid: usize,
    /// Width of the near-supremum band at the first horizon; halves at each
    /// subsequent horizon.
    pub delta0: f64,
    /// Final infima at or below this count as "trending to zero".
    pub plausibility: f64,
    pub golden_tol: f64,
}

impl Default for SequenceOptions {
    fn default() -> Self {
        Self {
            grid: 10_000,
            delta0: 0.1,
            plausibility: 1e-2,
            golden_tol: DEFAULT_GOLDEN_TOL,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HorizonDiagnostic {
    pub horizon: f64,
    pub sup: f64,
    pub sup_at: f64,
    pub delta: f64,
    pub region_points: usize,
    pub inf_grad: f64,
    pub inf_grad_at: f64,
    pub inf_laplacian: f64,
    pub inf_laplacian_at: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SequenceDiagnostics {
    pub rows: Vec<HorizonDiagnostic>,
    pub verdict: SequenceVerdict,
}

/// For each horizon, inspects the band `{g > sup_T g - δ}` and reports the
/// smallest `|g'|` and `Δg` found there.
pub fn search_omori_sequence(m: &ModelManifold, g: &ScalarFunction1D, horizons: &[f64], opts: &SequenceOptions) -> Result<SequenceDiagnostics> {
    if horizons.is_empty() || horizons.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidInput("horizons must be non-empty and strictly increasing".into()));
    }
    let mut rows = Vec::with_capacity(horizons.len());
    let mut delta = opts.delta0;
    for &horizon in horizons {
        let limit = m.domain_max().min(g.domain_max());
        if !(horizon > 0.0) || horizon > limit {
            return Err(Error::InvalidInput(format!("horizon {horizon} must lie in (0, {limit}]")));
        }
        let grid = uniform_grid(0.0, horizon, opts.grid);
        let (sup_at, sup) = grid_golden_max(|t| g.eval(t), &grid, opts.golden_tol);
        let mut row = HorizonDiagnostic {
            horizon,
            sup,
            sup_at,
            delta,
            region_points: 0,
            inf_grad: f64::INFINITY,
            inf_grad_at: f64::NAN,
            inf_laplacian: f64::INFINITY,
            inf_laplacian_at: f64::NAN,
        };
        let candidates = grid.iter().copied().filter(|&t| t > 0.0).chain(std::iter::once(sup_at));
        for t in candidates {
            if !(g.eval(t) > sup - delta) {
                continue;
            }
            row.region_points += 1;
            let grad = g.deriv(t).abs();
            if grad < row.inf_grad {
                row.inf_grad = grad;
                row.inf_grad_at = t;
            }
            let lap = laplacian_at(m, g, t)?;
            if lap < row.inf_laplacian {
                row.inf_laplacian = lap;
                row.inf_laplacian_at = t;
            }
        }
        rows.push(row);
        delta *= 0.5;
    }
    let violated = rows.iter().all(|r| r.inf_laplacian >= 1.0 - COUNTEREXAMPLE_TOL);
    let last = rows.last().expect("non-empty");
    let first = rows.first().expect("non-empty");
    let plausible = last.inf_grad <= opts.plausibility
        && last.inf_laplacian.max(0.0) <= opts.plausibility
        && last.inf_grad <= first.inf_grad
        && last.inf_laplacian.max(0.0) <= first.inf_laplacian.max(0.0);
    let verdict = if violated {
        SequenceVerdict::Violated
    } else if plausible {
        SequenceVerdict::Plausible
    } else {
        SequenceVerdict::Inconclusive
    };
    Ok(SequenceDiagnostics { rows, verdict })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::Expr;
    use crate::function::Preset;
    use crate::growth::validate_growth;

    fn expr(src: &str, hi: f64) -> ScalarFunction1D {
        ScalarFunction1D::expression(Expr::parse(src).unwrap(), hi)
    }

    fn constant(c: f64, hi: f64) -> GrowthFunction {
        validate_growth(ScalarFunction1D::constant(c, hi), 100).unwrap()
    }

    #[test]
    fn hyperbolic_sweep_matches_quadratic_oracle() {
        let m = ModelManifold::hyperbolic(2, 100.0).unwrap();
        let g = expr("-1/(1+t)", 100.0);
        let cert = sweep_lambda0(&m, &g, 0.0, &constant(2.0, 100.0), 0.1, 100.0, &SweepOptions::default()).unwrap();
        // Stationarity of (ε - 1/u) e^{-(u-1)/2} gives ε u² - u - 2 = 0.
        let u = (1.0 + (1.0f64 + 8.0 * 0.1).sqrt()) / (2.0 * 0.1);
        assert!((cert.x_eps - (u - 1.0)).abs() < 1e-6);
        assert!((cert.gap - 1.0 / u).abs() < 1e-9);
        assert!(cert.passes(), "{cert:?}");
    }

    #[test]
    fn exponential_profile_sweep() {
        let m = ModelManifold::hyperbolic(2, 60.0).unwrap();
        let g = expr("-exp(-t)", 60.0);
        let growth = constant(2.0, 60.0);
        // The guard bound is min{1, e^{-1}}.
        let err = sweep_lambda0(&m, &g, 0.0, &growth, 0.5, 60.0, &SweepOptions::default()).unwrap_err();
        assert!(matches!(err, Error::EpsilonGuard { .. }));
        let cert = sweep_lambda0(&m, &g, 0.0, &growth, 0.3, 60.0, &SweepOptions::default()).unwrap();
        // (ε - e^{-t}) e^{-t/2} peaks where e^{-t} = ε/3.
        assert!((cert.x_eps - 10f64.ln()).abs() < 1e-6);
        assert!((cert.gap - 0.1).abs() < 1e-7, "{}", cert.gap);
        assert!(cert.passes());
    }

    #[test]
    fn sweep_preconditions() {
        let m = ModelManifold::hyperbolic(2, 100.0).unwrap();
        let g = expr("-1/(1+t)", 100.0);
        let two = constant(2.0, 100.0);
        let opts = SweepOptions::default();
        assert!(matches!(
            sweep_lambda0(&m, &g, 0.0, &two, 0.6, 100.0, &opts),
            Err(Error::EpsilonGuard { .. })
        ));
        assert!(matches!(
            sweep_lambda0(&m, &g, -0.5, &two, 0.1, 100.0, &opts),
            Err(Error::SupremumAttained { .. })
        ));
        // coth r > 1 everywhere, so G ≡ 1 violates Δr ≤ G.
        assert!(matches!(
            sweep_lambda0(&m, &g, 0.0, &constant(1.0, 100.0), 0.1, 100.0, &opts),
            Err(Error::CurvatureHypothesis { .. })
        ));
        // g stays below L - ε on the whole horizon.
        assert!(matches!(
            sweep_lambda0(&m, &g, 0.0, &two, 0.1, 8.0, &opts),
            Err(Error::EpsilonBelowHorizonGap { .. })
        ));
        // The interior touching point for ε = 0.2 sits near 5.53.
        assert!(matches!(
            sweep_lambda0(&m, &g, 0.0, &two, 0.2, 5.5, &opts),
            Err(Error::HorizonLimited { .. })
        ));
    }

    #[test]
    fn interior_maximum_is_trivially_certified() {
        let m = ModelManifold::hyperbolic(2, 20.0).unwrap();
        let g = expr("-(t-3)^2", 20.0);
        let certs = certify_definition(&m, &g, 0.0, &constant(2.0, 20.0), &[0.5, 0.1, 1e-3], 20.0, &SweepOptions::default()).unwrap();
        assert!(certs.iter().all(|c| c.trivial && c.passes()));
        assert!((certs[0].x_eps - 3.0).abs() < 1e-6);
    }

    #[test]
    fn touching_and_derivative_conditions() {
        let m = ModelManifold::hyperbolic(2, 100.0).unwrap();
        let g = expr("-1/(1+t)", 100.0);
        let growth = constant(2.0, 100.0);
        let f = build_f(&growth).unwrap();
        let cert = sweep_lambda0(&m, &g, 0.0, &growth, 0.25, 100.0, &SweepOptions::default()).unwrap();
        let x = cert.x_eps;
        let h_at = cert.lambda0 * f.eval(x) + cert.level - cert.epsilon;
        assert!((h_at - g.eval(x)).abs() <= 1e-8);
        let rows = sweep_profile(&g, &f, &cert, 100.0, 20_001);
        assert!(rows.iter().all(|r| r.gap >= -1e-8));
        assert!((g.deriv(x) - cert.lambda0 * f.deriv(x)).abs() <= 1e-6);
        let lap_h = cert.lambda0 * radial_laplacian(&m, &f, x).unwrap();
        assert!(cert.laplacian <= lap_h + 1e-6);
    }

    #[test]
    fn lambda_increases_with_epsilon() {
        let m = ModelManifold::hyperbolic(2, 100.0).unwrap();
        let g = expr("-1/(1+t)", 100.0);
        let growth = constant(2.0, 100.0);
        let eps = [0.05, 0.1, 0.2, 0.3, 0.4, 0.5];
        let certs = certify_definition(&m, &g, 0.0, &growth, &eps, 100.0, &SweepOptions::default()).unwrap();
        assert!(certs.windows(2).all(|w| w[0].lambda0 <= w[1].lambda0));
        assert!(certs.iter().zip(eps).all(|(c, e)| c.epsilon == e));
    }

    #[test]
    fn euclidean_plane_sweep() {
        let m = ModelManifold::euclidean(2, 200.0).unwrap();
        let g = expr("-1/(1+t)", 200.0);
        let cert = sweep_lambda0(&m, &g, 0.0, &constant(1.0, 200.0), 0.1, 200.0, &SweepOptions::default()).unwrap();
        // F = e^t: ε u² - u - 1 = 0 with u = 1 + x.
        let u = (1.0 + (1.0f64 + 4.0 * 0.1).sqrt()) / (2.0 * 0.1);
        assert!((cert.x_eps - (u - 1.0)).abs() < 1e-6);
        assert!(cert.passes());
    }

    #[test]
    fn sequence_verdicts() {
        let hyp = ModelManifold::hyperbolic(2, 100.0).unwrap();
        let g = expr("-1/(1+t)", 100.0);
        let diag = search_omori_sequence(&hyp, &g, &[10.0, 20.0, 50.0, 100.0], &SequenceOptions::default()).unwrap();
        assert_eq!(diag.verdict, SequenceVerdict::Plausible);

        let bump = expr("-(t-3)^2", 20.0);
        let diag = search_omori_sequence(&hyp, &bump, &[10.0, 20.0], &SequenceOptions::default()).unwrap();
        assert_eq!(diag.verdict, SequenceVerdict::Plausible);

        let growth = validate_growth(ScalarFunction1D::preset(Preset::Quadratic, 50.0), 1000).unwrap();
        let ce = build_counterexample(&growth, 2, 50.0, &CounterexampleOptions::default()).unwrap();
        let diag = search_omori_sequence(&ce.manifold, &ce.h, &[12.5, 25.0, 50.0], &SequenceOptions::default()).unwrap();
        assert_eq!(diag.verdict, SequenceVerdict::Violated);
    }

    #[test]
    fn counterexample_values() {
        let g = validate_growth(ScalarFunction1D::preset(Preset::Quadratic, 50.0), 1000).unwrap();
        let ce = build_counterexample(&g, 2, 50.0, &CounterexampleOptions::default()).unwrap();
        let lap = |t: f64| radial_laplacian(&ce.manifold, &ce.h, t).unwrap();
        assert!((lap(1.0) - 4.0).abs() < 1e-12);
        let expected = 121.1 / 60.5 - 11.0 / (60.5 * 60.5);
        assert!((lap(10.0) - expected).abs() < 1e-12);
        assert!(ce.report.delta_h_min > 1.0);
        assert!(ce.report.violated);
    }

    #[test]
    fn counterexample_rejects_divergent_growth() {
        let g = validate_growth(ScalarFunction1D::preset(Preset::Linear, 50.0), 100).unwrap();
        assert!(matches!(
            build_counterexample(&g, 2, 50.0, &CounterexampleOptions::default()),
            Err(Error::DivergesDeclared)
        ));
    }
}
