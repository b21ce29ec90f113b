//! Slowed growth: from a growth function `G` with `∫ 1/G < ∞`, build `H` with
//! `H ≥ 1/2`, `H' ≥ 0`, `2H ≤ G`, `H' ≤ H²` and `∫ 1/H < ∞`.
//!
//! On the set `A = {G'/2 > (G/2)²}` the function `G/2` grows too fast. Each
//! component `(t_n, s_n)` of `A` is covered by a splice `(t_n, v_n)` on which
//! `H` follows the hyperbola `1/(a_n - t)` started at `G(t_n)/2`, until the
//! hyperbola meets `G/2` again at `v_n`. Elsewhere `H = G/2`.

use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::function::{ScalarFunction1D, Univariate};
use crate::growth::{classify_integral, GrowthFunction, Verdict};
use crate::numeric::{bisect, integrate, scan_sign_changes, uniform_grid, QuadOptions};

pub const DEFAULT_SCAN_GRID: usize = 10_000;
pub const DEFAULT_ROOT_TOL: f64 = 1e-10;
/// Closed-interval slack when testing splice containment.
pub const NESTING_TOL: f64 = 1e-12;
/// Base slack for the pointwise checks on H.
pub const PROPERTY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EndpointKind {
    /// The left end of the working domain (t = 0).
    Boundary,
    /// A detected sign change, refined by bisection.
    Root,
    /// Cut by the horizon T.
    Truncation,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
    pub lo_kind: EndpointKind,
    pub hi_kind: EndpointKind,
}

/// Ordered, pairwise disjoint open intervals.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct IntervalSet {
    intervals: Vec<Interval>,
}

impl IntervalSet {
    pub fn new(intervals: Vec<Interval>) -> Result<Self> {
        if let Some(bad) = intervals.iter().find(|i| !(i.lo < i.hi)) {
            return Err(Error::InvalidInput(format!("empty interval ({}, {})", bad.lo, bad.hi)));
        }
        if intervals.windows(2).any(|w| w[1].lo < w[0].hi) {
            return Err(Error::InvalidInput("intervals must be sorted and disjoint".into()));
        }
        Ok(Self { intervals })
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn contains(&self, t: f64) -> bool {
        self.intervals.iter().any(|i| i.lo < t && t < i.hi)
    }
}

/// `G'(t)/2 - (G(t)/2)²`; positive exactly on the fast-growth set.
pub fn fast_growth_indicator(growth: &GrowthFunction, t: f64) -> f64 {
    let g = growth.eval(t);
    0.5 * growth.deriv(t) - 0.25 * g * g
}

/// Components of `{t ∈ (0, T] : G'/2 > (G/2)²}` found by a uniform scan of
/// `grid` points and bisection of every sign change.
///
/// Components narrower than the grid spacing can be missed.
pub fn detect_fast_growth_set(growth: &GrowthFunction, horizon: f64, grid: usize) -> Result<IntervalSet> {
    detect_with_tol(growth, horizon, grid, DEFAULT_ROOT_TOL)
}

fn detect_with_tol(growth: &GrowthFunction, horizon: f64, grid: usize, tol: f64) -> Result<IntervalSet> {
    if grid < 2 {
        return Err(Error::InvalidInput("scan grid needs at least two points".into()));
    }
    if !(horizon > 0.0) {
        return Err(Error::InvalidInput(format!("horizon must be positive, got {horizon}")));
    }
    let phi = |t: f64| fast_growth_indicator(growth, t);
    let points = uniform_grid(0.0, horizon, grid);
    let (positive, changes) = scan_sign_changes(phi, &points)?;

    let mut intervals = Vec::new();
    let mut open: Option<(f64, EndpointKind)> = positive[0].then_some((0.0, EndpointKind::Boundary));
    for change in changes {
        let root = bisect(phi, change.lo, change.hi, tol)?;
        if change.rising {
            open = Some((root, EndpointKind::Root));
        } else if let Some((lo, lo_kind)) = open.take() {
            if root > lo {
                intervals.push(Interval {
                    lo,
                    hi: root,
                    lo_kind,
                    hi_kind: EndpointKind::Root,
                });
            }
        }
    }
    if let Some((lo, lo_kind)) = open {
        intervals.push(Interval {
            lo,
            hi: horizon,
            lo_kind,
            hi_kind: EndpointKind::Truncation,
        });
    }
    IntervalSet::new(intervals)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpliceInterval {
    pub t_n: f64,
    pub s_n: f64,
    /// Pole of the hyperbola `1/(a_n - t)`.
    pub a_n: f64,
    /// First point after `t_n` where the hyperbola meets `G/2` again.
    pub v_n: f64,
}

impl SpliceInterval {
    pub fn hyperbola(&self, t: f64) -> f64 {
        1.0 / (self.a_n - t)
    }

    /// Whether `t` is handled by the hyperbola branch. Splices are closed on
    /// the left, so right derivatives at `t_n` come from the hyperbola.
    pub fn covers(&self, t: f64) -> bool {
        self.t_n <= t && t < self.v_n
    }

    /// `∫_{t_n}^{v_n} (a_n - t) dt` from the antiderivative `a t - t²/2`.
    pub fn reciprocal_integral(&self) -> f64 {
        let anti = |t: f64| self.a_n * t - 0.5 * t * t;
        anti(self.v_n) - anti(self.t_n)
    }

    /// `½[(a_n - t_n)² - (a_n - v_n)²]`.
    pub fn telescoping_term(&self) -> f64 {
        0.5 * ((self.a_n - self.t_n).powi(2) - (self.a_n - self.v_n).powi(2))
    }
}

/// The hyperbola pole: `a_n = t_n + 2/G(t_n)`, so that `1/(a_n - t_n) = G(t_n)/2`.
pub fn splice_pole(growth: &GrowthFunction, t_n: f64) -> f64 {
    t_n + 2.0 / growth.eval(t_n)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SlowdownOptions {
    /// Points in the scan for the fast-growth set.
    pub grid: usize,
    /// Points in the scan for each re-crossing `v_n`.
    pub splice_grid: usize,
    pub root_tol: f64,
    /// Build even when `∫ 1/G` is not declared convergent.
    pub force: bool,
}

impl Default for SlowdownOptions {
    fn default() -> Self {
        Self {
            grid: DEFAULT_SCAN_GRID,
            splice_grid: DEFAULT_SCAN_GRID,
            root_tol: DEFAULT_ROOT_TOL,
            force: false,
        }
    }
}

/// Builds the splice over one component `(t_n, s_n)` of the fast-growth set.
pub fn build_splice(growth: &GrowthFunction, component: &Interval, horizon: f64, opts: &SlowdownOptions) -> Result<SpliceInterval> {
    let t_n = component.lo;
    let s_n = component.hi;
    let a_n = splice_pole(growth, t_n);
    if component.hi_kind == EndpointKind::Truncation {
        return Err(Error::SpliceEscapesHorizon { t_n, a_n, horizon });
    }
    // (a - t) G(t)/2 - 1 vanishes at t_n, is positive on (t_n, s_n] and
    // tends to -1 at the pole.
    let gap = |t: f64| (a_n - t) * growth.eval(t) * 0.5 - 1.0;
    if !(gap(s_n) > 0.0) {
        return Err(Error::SpliceDegenerate { t_n });
    }
    let end = a_n.min(horizon);
    if end <= s_n {
        return Err(Error::SpliceEscapesHorizon { t_n, a_n, horizon });
    }
    let points = uniform_grid(s_n, end, opts.splice_grid.max(2));
    let (_, changes) = scan_sign_changes(gap, &points)?;
    let first = changes.iter().find(|c| !c.rising);
    let v_n = match first {
        Some(c) => bisect(gap, c.lo, c.hi, opts.root_tol)?,
        None => return Err(Error::SpliceEscapesHorizon { t_n, a_n, horizon }),
    };
    Ok(SpliceInterval { t_n, s_n, a_n, v_n })
}

/// Keeps only the maximal splices of a list sorted by `t_n`. Splices either
/// nest or are disjoint; a partial overlap is reported as an error.
pub fn disjointify(splices: &[SpliceInterval]) -> Result<Vec<SpliceInterval>> {
    if splices.windows(2).any(|w| w[1].t_n < w[0].t_n) {
        return Err(Error::InvalidInput("splices must be sorted by t_n".into()));
    }
    let mut kept: Vec<SpliceInterval> = Vec::with_capacity(splices.len());
    for s in splices {
        match kept.last() {
            Some(k) if s.t_n >= k.t_n - NESTING_TOL && s.v_n <= k.v_n + NESTING_TOL => continue,
            Some(k) if s.t_n < k.v_n - NESTING_TOL => {
                return Err(Error::NestingViolated(k.t_n, k.v_n, s.t_n, s.v_n));
            }
            _ => kept.push(*s),
        }
    }
    Ok(kept)
}

/// The slowed growth function `H` on `[0, horizon]`.
#[derive(Debug, Clone)]
pub struct SlowedGrowth {
    growth: GrowthFunction,
    horizon: f64,
    components: IntervalSet,
    splices: Vec<SpliceInterval>,
    /// Accuracy of the re-crossing points, used to size the continuity check.
    root_tol: f64,
}

/// Which formula defines `H` at a point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    Base,
    /// Index into [`SlowedGrowth::splices`].
    Splice(usize),
}

impl Branch {
    /// 0 for the base branch, `k + 1` for splice `k`.
    pub fn id(self) -> usize {
        match self {
            Branch::Base => 0,
            Branch::Splice(k) => k + 1,
        }
    }
}

impl SlowedGrowth {
    pub fn growth(&self) -> &GrowthFunction {
        &self.growth
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn components(&self) -> &IntervalSet {
        &self.components
    }

    pub fn splices(&self) -> &[SpliceInterval] {
        &self.splices
    }

    pub fn branch(&self, t: f64) -> Branch {
        let k = self.splices.partition_point(|s| s.t_n <= t);
        if k > 0 && self.splices[k - 1].covers(t) {
            Branch::Splice(k - 1)
        } else {
            Branch::Base
        }
    }

    pub fn eval(&self, t: f64) -> f64 {
        match self.branch(t) {
            Branch::Base => 0.5 * self.growth.eval(t),
            Branch::Splice(k) => self.splices[k].hyperbola(t),
        }
    }

    /// `G'/2` off the splices and `1/(a_n - t)² = H²` on them.
    pub fn deriv(&self, t: f64) -> f64 {
        match self.branch(t) {
            Branch::Base => 0.5 * self.growth.deriv(t),
            Branch::Splice(k) => self.splices[k].hyperbola(t).powi(2),
        }
    }

    pub fn deriv2(&self, t: f64) -> f64 {
        match self.branch(t) {
            Branch::Base => 0.5 * self.growth.deriv2(t),
            Branch::Splice(k) => 2.0 * self.splices[k].hyperbola(t).powi(3),
        }
    }

    /// Every splice endpoint, sorted.
    pub fn joints(&self) -> Vec<f64> {
        self.splices.iter().flat_map(|s| [s.t_n, s.v_n]).collect()
    }

    pub fn is_joint(&self, t: f64) -> bool {
        self.splices
            .iter()
            .any(|s| (t - s.t_n).abs() <= 1e-9 * t.abs().max(1.0) || (t - s.v_n).abs() <= 1e-9 * t.abs().max(1.0))
    }

    /// One-sided values of `H` and `H'` at each joint.
    pub fn joint_values(&self) -> Vec<JointValue> {
        let base = |t: f64| (0.5 * self.growth.eval(t), 0.5 * self.growth.deriv(t));
        self.splices
            .iter()
            .flat_map(|s| {
                let hyp = |t: f64| {
                    let h = s.hyperbola(t);
                    (h, h * h)
                };
                let (lb, rb) = (base(s.t_n), hyp(s.t_n));
                let (lv, rv) = (hyp(s.v_n), base(s.v_n));
                [
                    JointValue {
                        t: s.t_n,
                        h_left: lb.0,
                        h_right: rb.0,
                        dh_left: lb.1,
                        dh_right: rb.1,
                    },
                    JointValue {
                        t: s.v_n,
                        h_left: lv.0,
                        h_right: rv.0,
                        dh_left: lv.1,
                        dh_right: rv.1,
                    },
                ]
            })
            .collect()
    }

    pub fn as_function(&self) -> ScalarFunction1D {
        ScalarFunction1D::piecewise(
            Arc::new(self.clone()),
            self.horizon,
            format!("H[{}]", self.growth.base().label()),
        )
    }

    /// Samples `(t, H, H', branch-id)` on a uniform grid.
    pub fn table(&self, points: usize) -> Vec<HRow> {
        uniform_grid(0.0, self.horizon, points)
            .into_iter()
            .map(|t| HRow {
                t,
                h: self.eval(t),
                dh: self.deriv(t),
                branch: self.branch(t).id(),
            })
            .collect()
    }
}

impl Univariate for SlowedGrowth {
    fn eval(&self, t: f64) -> f64 {
        SlowedGrowth::eval(self, t)
    }
    fn deriv(&self, t: f64) -> f64 {
        SlowedGrowth::deriv(self, t)
    }
    fn deriv2(&self, t: f64) -> f64 {
        SlowedGrowth::deriv2(self, t)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JointValue {
    pub t: f64,
    pub h_left: f64,
    pub h_right: f64,
    pub dh_left: f64,
    pub dh_right: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HRow {
    pub t: f64,
    pub h: f64,
    pub dh: f64,
    pub branch: usize,
}

/// Runs the whole construction: fast-growth set, one splice per component,
/// then the maximal splices.
pub fn build_h(growth: &GrowthFunction, horizon: f64, opts: &SlowdownOptions) -> Result<SlowedGrowth> {
    growth.require_admissible()?;
    if !(horizon > 0.0) || horizon > growth.domain_max() {
        return Err(Error::InvalidInput(format!(
            "horizon {horizon} must lie in (0, {}]",
            growth.domain_max()
        )));
    }
    if !opts.force {
        let verdict = classify_integral(growth, &[horizon])?.verdict;
        match verdict {
            Verdict::ConvergesDeclared => {}
            Verdict::DivergesDeclared => return Err(Error::DivergesDeclared),
            other => return Err(Error::NotDeclaredConvergent { verdict: other.as_str() }),
        }
    }
    let components = detect_with_tol(growth, horizon, opts.grid, opts.root_tol)?;
    let mut splices = components
        .intervals()
        .par_iter()
        .map(|c| build_splice(growth, c, horizon, opts))
        .collect::<Result<Vec<_>>>()?;
    splices.sort_by(|a, b| a.t_n.total_cmp(&b.t_n));
    let splices = disjointify(&splices)?;
    Ok(SlowedGrowth {
        growth: growth.clone(),
        horizon,
        components,
        splices,
        root_tol: opts.root_tol,
    })
}

/// Relative slack above 10³, absolute below.
pub(crate) fn scaled_tol(magnitude: f64) -> f64 {
    PROPERTY_TOL * (magnitude.abs() / 1e3).max(1.0)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PropertyReport {
    pub grid_points: usize,
    pub checked_points: usize,
    pub min_h: f64,
    pub min_dh: f64,
    /// max of `2H - G`
    pub max_twice_h_minus_g: f64,
    /// max of `H' - H²`
    pub max_dh_minus_h_squared: f64,
    pub h_lower_bound_ok: bool,
    pub monotone_ok: bool,
    pub below_half_g_ok: bool,
    pub riccati_ok: bool,
    /// Largest jump of `H` across a joint.
    pub max_joint_jump: f64,
    pub continuity_ok: bool,
    pub nondecreasing_on_grid: bool,
    /// Every component of the fast-growth set lies inside a kept splice.
    pub components_covered: bool,
    pub joints: Vec<JointValue>,
    pub all_pass: bool,
}

/// Checks the four pointwise properties of `H` on a uniform grid of
/// `points` samples in `[0, T]`, skipping the splice joints where `H'` jumps.
pub fn check_properties(h: &SlowedGrowth, points: usize) -> PropertyReport {
    let grid = uniform_grid(0.0, h.horizon, points);
    let mut report = PropertyReport {
        grid_points: grid.len(),
        checked_points: 0,
        min_h: f64::INFINITY,
        min_dh: f64::INFINITY,
        max_twice_h_minus_g: f64::NEG_INFINITY,
        max_dh_minus_h_squared: f64::NEG_INFINITY,
        h_lower_bound_ok: true,
        monotone_ok: true,
        below_half_g_ok: true,
        riccati_ok: true,
        max_joint_jump: 0.0,
        continuity_ok: true,
        nondecreasing_on_grid: true,
        components_covered: true,
        joints: h.joint_values(),
        all_pass: false,
    };
    let mut prev: Option<f64> = None;
    for &t in &grid {
        let hv = h.eval(t);
        if let Some(p) = prev {
            if hv < p - scaled_tol(p) {
                report.nondecreasing_on_grid = false;
            }
        }
        prev = Some(hv);
        if h.is_joint(t) {
            continue;
        }
        report.checked_points += 1;
        let dh = h.deriv(t);
        let g = h.growth.eval(t);
        report.min_h = report.min_h.min(hv);
        report.min_dh = report.min_dh.min(dh);
        report.max_twice_h_minus_g = report.max_twice_h_minus_g.max(2.0 * hv - g);
        report.max_dh_minus_h_squared = report.max_dh_minus_h_squared.max(dh - hv * hv);
        report.h_lower_bound_ok &= hv >= 0.5 - PROPERTY_TOL;
        report.monotone_ok &= dh >= -PROPERTY_TOL;
        report.below_half_g_ok &= 2.0 * hv <= g + scaled_tol(g);
        report.riccati_ok &= dh <= hv * hv + scaled_tol(hv * hv);
    }
    for j in &report.joints {
        let jump = (j.h_left - j.h_right).abs();
        report.max_joint_jump = report.max_joint_jump.max(jump);
        // The joint is located to within root_tol, so each side may be
        // evaluated up to root_tol away from the exact crossing.
        let allowed = (j.dh_left.abs() + j.dh_right.abs()) * h.root_tol + 1e-8 * (j.h_left.abs() / 1e3).max(1.0);
        report.continuity_ok &= jump <= allowed;
    }
    report.components_covered = h.components.intervals().iter().all(|c| {
        h.splices
            .iter()
            .any(|s| s.t_n <= c.lo + NESTING_TOL && c.hi <= s.v_n + NESTING_TOL)
    });
    report.all_pass = report.h_lower_bound_ok
        && report.monotone_ok
        && report.below_half_g_ok
        && report.riccati_ok
        && report.continuity_ok
        && report.nondecreasing_on_grid
        && report.components_covered;
    report
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReciprocalReport {
    pub horizon: f64,
    /// `∫_0^T 1/H`.
    pub integral: f64,
    /// Exact contribution of the splices inside `[0, T]`.
    pub splice_contribution: f64,
    /// Quadrature of `2/G` over the rest of `[0, T]`.
    pub base_contribution: f64,
    /// `½ Σ [(a_n - t_n)² - (a_n - v_n)²]`.
    pub telescoping_sum: f64,
    /// `(2/G(t_1))²`, or zero without splices.
    pub bound: f64,
    pub bound_holds: bool,
    /// Every prefix `Σ_{n≤m} [(2/G(t_n))² - (2/G(v_n))²]` stays below `bound`.
    pub prefix_bounds_hold: bool,
    /// Upper bound for `∫_T^∞ 1/H` when `∫_T^∞ 1/G` is known in closed form:
    /// `2 ∫_T^∞ 1/G + 2/G(T)²`.
    pub tail_bound: Option<f64>,
    /// `integral + tail_bound`.
    pub total_bound: Option<f64>,
}

/// `∫_0^T 1/H` with exact antiderivatives on splices and quadrature
/// elsewhere, plus the telescoping bound on the splice sum.
pub fn integral_reciprocal_h(h: &SlowedGrowth, horizon: f64) -> Result<ReciprocalReport> {
    if !(horizon > 0.0) || horizon > h.horizon {
        return Err(Error::InvalidInput(format!("horizon {horizon} must lie in (0, {}]", h.horizon)));
    }
    let quad = QuadOptions::default();
    let g = &h.growth;
    let mut cursor = 0.0;
    let mut base = 0.0;
    let mut splice_part = 0.0;
    for s in h.splices.iter().filter(|s| s.t_n < horizon) {
        if s.t_n > cursor {
            base += integrate(|t| 2.0 / g.eval(t), cursor, s.t_n, quad)?;
        }
        let end = s.v_n.min(horizon);
        let clipped = SpliceInterval { v_n: end, ..*s };
        splice_part += clipped.reciprocal_integral();
        cursor = end;
    }
    if cursor < horizon {
        base += integrate(|t| 2.0 / g.eval(t), cursor, horizon, quad)?;
    }

    let telescoping_sum: f64 = h.splices.iter().map(SpliceInterval::telescoping_term).sum();
    let bound = h.splices.first().map_or(0.0, |s| (2.0 / g.eval(s.t_n)).powi(2));
    let mut prefix = 0.0;
    let mut prefix_bounds_hold = true;
    for s in &h.splices {
        prefix += (2.0 / g.eval(s.t_n)).powi(2) - (2.0 / g.eval(s.v_n)).powi(2);
        prefix_bounds_hold &= prefix < bound + PROPERTY_TOL;
    }
    let tail_bound = g
        .base()
        .preset_kind()
        .and_then(|p| p.reciprocal_tail(horizon))
        .map(|tail| 2.0 * tail + 2.0 / g.eval(horizon).powi(2));
    let integral = base + splice_part;
    Ok(ReciprocalReport {
        horizon,
        integral,
        splice_contribution: splice_part,
        base_contribution: base,
        telescoping_sum,
        bound,
        bound_holds: h.splices.is_empty() || telescoping_sum < bound + PROPERTY_TOL,
        prefix_bounds_hold,
        tail_bound,
        total_bound: tail_bound.map(|t| integral + t),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::Expr;
    use crate::function::Preset;
    use crate::growth::validate_growth;

    fn quadratic(hi: f64) -> GrowthFunction {
        validate_growth(ScalarFunction1D::preset(Preset::Quadratic, hi), 1000).unwrap()
    }

    fn forced() -> SlowdownOptions {
        SlowdownOptions {
            force: true,
            ..SlowdownOptions::default()
        }
    }

    #[test]
    fn fast_growth_set_for_quadratic() {
        let set = detect_fast_growth_set(&quadratic(10.0), 10.0, 10_000).unwrap();
        assert_eq!(set.len(), 1);
        let i = set.intervals()[0];
        assert_eq!((i.lo, i.lo_kind, i.hi_kind), (0.0, EndpointKind::Boundary, EndpointKind::Root));
        assert!((i.hi - (4f64.cbrt() - 1.0)).abs() < 1e-9);
    }

    #[test]
    fn fast_growth_set_for_linear_and_constant() {
        let lin = validate_growth(ScalarFunction1D::preset(Preset::Linear, 10.0), 100).unwrap();
        let set = detect_fast_growth_set(&lin, 10.0, 10_000).unwrap();
        assert_eq!(set.len(), 1);
        assert!((set.intervals()[0].hi - (2f64.sqrt() - 1.0)).abs() < 1e-9);
        let one = validate_growth(ScalarFunction1D::constant(1.0, 10.0), 100).unwrap();
        assert!(detect_fast_growth_set(&one, 10.0, 100).unwrap().is_empty());
    }

    #[test]
    fn truncated_component_is_marked() {
        // For G = 1 + t^4 the indicator is still positive at t = 1.
        let g = validate_growth(ScalarFunction1D::expression(Expr::parse("1+t^4").unwrap(), 5.0), 100).unwrap();
        let set = detect_fast_growth_set(&g, 1.0, 1000).unwrap();
        let last = set.intervals().last().unwrap();
        assert_eq!(last.hi_kind, EndpointKind::Truncation);
        assert_eq!(last.hi, 1.0);
    }

    #[test]
    fn splice_for_quadratic() {
        let g = quadratic(50.0);
        let set = detect_fast_growth_set(&g, 50.0, 10_000).unwrap();
        let s = build_splice(&g, &set.intervals()[0], 50.0, &SlowdownOptions::default()).unwrap();
        assert_eq!(s.a_n, 2.0);
        assert!((s.v_n - 3f64.sqrt()).abs() < 1e-9);
        assert!(s.t_n < s.s_n && s.s_n < s.v_n && s.v_n < s.a_n);
    }

    #[test]
    fn splice_for_linear() {
        let g = validate_growth(ScalarFunction1D::preset(Preset::Linear, 50.0), 100).unwrap();
        let set = detect_fast_growth_set(&g, 50.0, 10_000).unwrap();
        let s = build_splice(&g, &set.intervals()[0], 50.0, &SlowdownOptions::default()).unwrap();
        assert_eq!(s.a_n, 2.0);
        assert!((s.v_n - 1.0).abs() < 1e-9);
        assert!(s.v_n > s.s_n);
    }

    #[test]
    fn pole_for_unit_growth() {
        let g = validate_growth(ScalarFunction1D::constant(1.0, 10.0), 10).unwrap();
        assert_eq!(splice_pole(&g, 5.0), 7.0);
    }

    #[test]
    fn splice_escaping_the_horizon() {
        let g = quadratic(50.0);
        let set = detect_fast_growth_set(&g, 50.0, 1000).unwrap();
        let err = build_splice(&g, &set.intervals()[0], 1.0, &SlowdownOptions::default()).unwrap_err();
        assert!(matches!(err, Error::SpliceEscapesHorizon { t_n, a_n, .. } if t_n == 0.0 && a_n == 2.0));
    }

    fn sp(t_n: f64, v_n: f64) -> SpliceInterval {
        SpliceInterval { t_n, s_n: t_n, a_n: v_n + 1.0, v_n }
    }

    #[test]
    fn disjointify_cases() {
        let r3 = 3f64.sqrt();
        assert_eq!(disjointify(&[sp(0.0, r3)]).unwrap(), vec![sp(0.0, r3)]);
        assert_eq!(disjointify(&[sp(0.0, 5.0), sp(1.0, 2.0)]).unwrap(), vec![sp(0.0, 5.0)]);
        assert_eq!(disjointify(&[sp(0.0, 1.0), sp(2.0, 3.0)]).unwrap().len(), 2);
        assert!(matches!(disjointify(&[sp(0.0, 2.0), sp(1.0, 3.0)]), Err(Error::NestingViolated(..))));
        assert!(disjointify(&[sp(2.0, 3.0), sp(0.0, 1.0)]).is_err());
    }

    #[test]
    fn h_for_quadratic() {
        let h = build_h(&quadratic(50.0), 50.0, &SlowdownOptions::default()).unwrap();
        assert_eq!(h.splices().len(), 1);
        assert_eq!(h.eval(0.0), 0.5);
        assert!((h.eval(1.0) - 1.0).abs() < 1e-15);
        assert_eq!(h.eval(2.0), 4.5);
        let r3 = 3f64.sqrt();
        let expected = 1.0 / (2.0 - r3);
        assert!((expected - (1.0 + r3).powi(2) / 2.0).abs() < 1e-12);
        let j = h.joint_values()[1];
        assert!((j.h_left - expected).abs() < 1e-8 && (j.h_right - expected).abs() < 1e-8);
    }

    #[test]
    fn h_without_fast_growth() {
        let g = validate_growth(ScalarFunction1D::constant(5.0, 10.0), 100).unwrap();
        let h = build_h(&g, 10.0, &forced()).unwrap();
        assert!(h.splices().is_empty());
        assert!(uniform_grid(0.0, 10.0, 50).into_iter().all(|t| h.eval(t) == 2.5));
    }

    #[test]
    fn gate_refuses_divergent_or_unknown() {
        let lin = validate_growth(ScalarFunction1D::preset(Preset::Linear, 50.0), 100).unwrap();
        assert!(matches!(build_h(&lin, 50.0, &SlowdownOptions::default()), Err(Error::DivergesDeclared)));
        let g = validate_growth(ScalarFunction1D::expression(Expr::parse("1+t^2").unwrap(), 50.0), 100).unwrap();
        assert!(matches!(
            build_h(&g, 50.0, &SlowdownOptions::default()),
            Err(Error::NotDeclaredConvergent { .. })
        ));
        assert!(build_h(&g, 50.0, &forced()).is_ok());
    }

    #[test]
    fn slowed_properties_quadratic() {
        let h = build_h(&quadratic(50.0), 50.0, &SlowdownOptions::default()).unwrap();
        let r = check_properties(&h, 10_000);
        assert!(r.all_pass, "{r:?}");
        assert!(r.min_h >= 0.5 - 1e-9);
    }

    #[test]
    fn reciprocal_integral_quadratic() {
        let h = build_h(&quadratic(50.0), 50.0, &SlowdownOptions::default()).unwrap();
        let rep = integral_reciprocal_h(&h, 50.0).unwrap();
        let r3 = 3f64.sqrt();
        assert!((rep.splice_contribution - (2.0 * r3 - 1.5)).abs() < 1e-9);
        assert!((rep.telescoping_sum - rep.splice_contribution).abs() < 1e-9);
        assert!(rep.bound_holds && rep.prefix_bounds_hold);
        assert_eq!(rep.bound, 4.0);
        let closed = 2.0 * r3 - 1.5 + 2.0 / (1.0 + r3);
        assert!((rep.total_bound.unwrap() - closed).abs() < 1e-6);
        assert!((rep.integral - (closed - 2.0 / 51.0)).abs() < 1e-8);
    }
}
