//! One pipeline per CLI command. Each returns its artifacts in memory and
//! whether every checked property held.

use serde::{Deserialize, Serialize};

use super::config::RunConfig;
use super::output::{json_bytes, Artifacts, Csv};
use super::functions::{FunctionSpec, WarpingSpec};
use crate::error::{Error, Result};
use crate::function::ScalarFunction1D;
use crate::growth::{build_f, classify_integral, validate_growth_seeded, GrowthFunction, IntegralClassification, RunningIntegral};
use crate::manifold::{
    check_comparison_bound, delta_r, radial_laplacian, riccati_for_growth, riccati_for_manifold, riccati_integrate, ComparisonReport, ModelManifold,
    Warping,
};
use crate::numeric::{uniform_grid, Termination};
use crate::principle::{
    build_counterexample, certify_definition, search_omori_sequence, sweep_profile, SequenceDiagnostics, SequenceVerdict,
    SweepCertificate, ViolationReport,
};
use crate::slowdown::{build_h, integral_reciprocal_h, check_properties, Interval, PropertyReport, ReciprocalReport, SpliceInterval};

/// Largest allowed gap between the integrated Riccati solution and the
/// model's own `Δr`.
pub const MODEL_EXACTNESS_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Growth,
    Slowdown,
    Riccati,
    Sweep,
    Counterexample,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Growth => "growth",
            Command::Slowdown => "slowdown",
            Command::Riccati => "riccati",
            Command::Sweep => "sweep",
            Command::Counterexample => "counterexample",
        }
    }
}

#[derive(Debug, Clone)]
pub struct Outcome {
    pub artifacts: Artifacts,
    pub passed: bool,
    /// One-line human summary.
    pub summary: String,
}

pub fn execute(command: Command, cfg: &RunConfig) -> Result<Outcome> {
    cfg.validate()?;
    match command {
        Command::Growth => growth(cfg),
        Command::Slowdown => slowdown(cfg),
        Command::Riccati => riccati(cfg),
        Command::Sweep => sweep(cfg),
        Command::Counterexample => counterexample(cfg),
    }
}

fn function(cfg: &RunConfig, text: &str) -> Result<ScalarFunction1D> {
    FunctionSpec::parse(text)
        .with_parameters(cfg.parameters.clone())
        .build(cfg.horizon)
}

pub fn load_growth(cfg: &RunConfig) -> Result<GrowthFunction> {
    let f = function(cfg, cfg.growth_spec()?)?;
    validate_growth_seeded(f, cfg.grid, cfg.seed)
}

pub fn load_manifold(cfg: &RunConfig, growth: Option<&GrowthFunction>) -> Result<ModelManifold> {
    match WarpingSpec::parse(&cfg.warping) {
        WarpingSpec::Euclidean => ModelManifold::euclidean(cfg.dim, cfg.horizon),
        WarpingSpec::Hyperbolic => ModelManifold::hyperbolic(cfg.dim, cfg.horizon),
        WarpingSpec::Counterexample => {
            let g = growth.ok_or_else(|| Error::InvalidInput("the counterexample warping needs --G".into()))?;
            ModelManifold::new(cfg.dim, Warping::counterexample(g)?, cfg.horizon)
        }
        WarpingSpec::Custom(spec) => {
            let f = spec.with_parameters(cfg.parameters.clone()).build(cfg.horizon)?;
            ModelManifold::new(cfg.dim, Warping::Custom(f), cfg.horizon)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ViolationRecord {
    pub t: f64,
    pub condition: String,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrowthReport {
    pub function: String,
    pub horizon: f64,
    pub seed: u64,
    pub admissible: bool,
    pub violations: Vec<ViolationRecord>,
    /// Worst relative mismatch between derivatives and finite differences.
    pub derivative_consistency: f64,
    /// Skipped when `G` is inadmissible.
    pub classification: Option<IntegralClassification>,
    pub all_pass: bool,
}

fn growth(cfg: &RunConfig) -> Result<Outcome> {
    let g = load_growth(cfg)?;
    let classification = if g.verified_admissible() {
        Some(classify_integral(&g, &cfg.horizon_list())?)
    } else {
        None
    };
    let violations: Vec<ViolationRecord> = g
        .violations()
        .iter()
        .map(|v| ViolationRecord {
            t: v.t,
            condition: v.condition.to_string(),
            value: v.value,
        })
        .collect();
    let report = GrowthReport {
        function: g.base().label().to_string(),
        horizon: cfg.horizon,
        seed: cfg.seed,
        admissible: g.verified_admissible(),
        violations,
        derivative_consistency: g.base().derivative_consistency(200),
        classification,
        all_pass: g.verified_admissible(),
    };
    let mut artifacts = Artifacts::default();
    artifacts.add("growth.json", json_bytes(&report)?);
    if report.admissible {
        let f = build_f(&g)?;
        let recip = RunningIntegral::new(g.base().clone(), true)?;
        let mut csv = Csv::new(&["t", "G", "dG", "int_recip_G", "F"]);
        for t in uniform_grid(0.0, cfg.horizon, cfg.points) {
            csv.row(&[t.into(), g.eval(t).into(), g.deriv(t).into(), recip.eval(t).into(), f.eval(t).into()]);
        }
        artifacts.add("f_table.csv", csv.into_bytes());
    }
    let summary = match &report.classification {
        Some(c) => format!(
            "G = {}: admissible, verdict = {}, integral on [0, {}] = {}",
            report.function,
            c.verdict.as_str(),
            cfg.horizon,
            c.value_on_horizon
        ),
        None => format!("G = {}: NOT admissible ({} violation(s))", report.function, report.violations.len()),
    };
    Ok(Outcome {
        passed: report.all_pass,
        artifacts,
        summary,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpliceLedger {
    pub function: String,
    pub horizon: f64,
    pub components: Vec<Interval>,
    pub splices: Vec<SpliceInterval>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SlowdownReport {
    pub properties: PropertyReport,
    pub reciprocal: ReciprocalReport,
    pub all_pass: bool,
}

fn slowdown(cfg: &RunConfig) -> Result<Outcome> {
    let g = load_growth(cfg)?;
    let h = build_h(&g, cfg.horizon, &cfg.slowdown_options())?;
    let properties = check_properties(&h, cfg.grid);
    let reciprocal = integral_reciprocal_h(&h, cfg.horizon)?;
    let all_pass = properties.all_pass && reciprocal.bound_holds && reciprocal.prefix_bounds_hold;
    let ledger = SpliceLedger {
        function: g.base().label().to_string(),
        horizon: cfg.horizon,
        components: h.components().intervals().to_vec(),
        splices: h.splices().to_vec(),
    };
    let mut csv = Csv::new(&["t", "H", "dH", "branch"]);
    for row in h.table(cfg.points) {
        csv.row(&[row.t.into(), row.h.into(), row.dh.into(), row.branch.into()]);
    }
    let summary = format!(
        "{} splice(s), integral of 1/H on [0, {}] = {}, properties {}",
        ledger.splices.len(),
        cfg.horizon,
        reciprocal.integral,
        if properties.all_pass { "hold" } else { "FAIL" }
    );
    let report = SlowdownReport {
        properties,
        reciprocal,
        all_pass,
    };
    let mut artifacts = Artifacts::default();
    artifacts.add("splices.json", json_bytes(&ledger)?);
    artifacts.add("h_table.csv", csv.into_bytes());
    artifacts.add("slowdown.json", json_bytes(&report)?);
    Ok(Outcome {
        artifacts,
        passed: all_pass,
        summary,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RiccatiReport {
    /// `growth`: curvature bound `-G²`; `manifold`: the model's own curvature.
    pub mode: String,
    pub dim: usize,
    pub warping: String,
    pub t0: f64,
    pub m0: f64,
    pub termination: Termination,
    pub blow_up: bool,
    /// Largest `|m - Δr|` along the trace; only checked in manifold mode
    /// started from `Δr(t0)`.
    pub max_error_vs_model: f64,
    pub exactness_checked: bool,
    pub comparison: ComparisonReport,
    pub all_pass: bool,
}

fn riccati(cfg: &RunConfig) -> Result<Outcome> {
    let g = load_growth(cfg)?;
    g.require_admissible()?;
    let m = load_manifold(cfg, Some(&g))?;
    let manifold_mode = cfg.ricci_manifold;
    let m0 = match cfg.m0 {
        Some(v) => v,
        None => delta_r(&m, cfg.t0)?,
    };
    let trace = if manifold_mode && cfg.m0.is_none() {
        riccati_for_manifold(&m, cfg.t0, cfg.horizon, cfg.ode_options())?
    } else if manifold_mode {
        let k = (cfg.dim - 1) as f64;
        riccati_integrate(|t| -k * m.warping().second_ratio(t), cfg.dim, cfg.t0, m0, cfg.horizon, cfg.ode_options())?
    } else {
        riccati_for_growth(&g, cfg.dim, cfg.t0, m0, cfg.horizon, cfg.ode_options())?
    };
    let mut max_error = 0.0f64;
    for (&t, &mv) in trace.t.iter().zip(&trace.m) {
        max_error = max_error.max((mv - delta_r(&m, t)?).abs());
    }
    let exactness_checked = manifold_mode && cfg.m0.is_none();
    let comparison = check_comparison_bound(&trace, &g, cfg.dim);
    let all_pass = !trace.blow_up
        && trace.termination == Termination::Completed
        && comparison.holds_from.is_some()
        && (!exactness_checked || max_error <= MODEL_EXACTNESS_TOL);
    let mut csv = Csv::new(&["t", "m", "bound", "margin"]);
    for row in &comparison.rows {
        csv.row(&[row.t.into(), row.m.into(), row.bound.into(), row.margin.into()]);
    }
    let report = RiccatiReport {
        mode: if manifold_mode { "manifold" } else { "growth" }.into(),
        dim: cfg.dim,
        warping: m.warping().label(),
        t0: cfg.t0,
        m0,
        termination: trace.termination,
        blow_up: trace.blow_up,
        max_error_vs_model: max_error,
        exactness_checked,
        comparison,
        all_pass,
    };
    let summary = format!(
        "{} steps, bound holds from t = {}, max |m - Δr| = {:e}",
        trace.t.len(),
        report.comparison.holds_from.map_or("never".to_string(), |t| t.to_string()),
        max_error
    );
    let mut artifacts = Artifacts::default();
    artifacts.add("riccati_trace.csv", csv.into_bytes());
    artifacts.add("riccati.json", json_bytes(&report)?);
    Ok(Outcome {
        artifacts,
        passed: all_pass,
        summary,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub test_function: String,
    pub warping: String,
    pub growth: String,
    pub dim: usize,
    pub horizon: f64,
    pub level: f64,
    pub certificates: Vec<SweepCertificate>,
    pub all_pass: bool,
}

fn sweep(cfg: &RunConfig) -> Result<Outcome> {
    let g = load_growth(cfg)?;
    let m = load_manifold(cfg, Some(&g))?;
    let src = cfg
        .test_function
        .as_deref()
        .ok_or_else(|| Error::InvalidInput("missing test function (--g)".into()))?;
    let test = function(cfg, src)?;
    let certs = certify_definition(&m, &test, cfg.level, &g, &cfg.epsilons, cfg.horizon, &cfg.sweep_options())?;
    let f = build_f(&g)?;
    let mut artifacts = Artifacts::default();
    for (k, cert) in certs.iter().enumerate() {
        let mut csv = Csv::new(&["t", "g", "h_lambda0", "gap"]);
        for row in sweep_profile(&test, &f, cert, cfg.horizon, cfg.points) {
            csv.row(&[row.t.into(), row.g.into(), row.h_lambda0.into(), row.gap.into()]);
        }
        artifacts.add(format!("sweep_trace_{k}.csv"), csv.into_bytes());
    }
    let all_pass = certs.iter().all(SweepCertificate::passes);
    let summary = certs
        .iter()
        .map(|c| format!("eps = {}: x = {}, {}", c.epsilon, c.x_eps, if c.passes() { "pass" } else { "FAIL" }))
        .collect::<Vec<_>>()
        .join("; ");
    let report = SweepReport {
        test_function: test.label().to_string(),
        warping: m.warping().label(),
        growth: g.base().label().to_string(),
        dim: cfg.dim,
        horizon: cfg.horizon,
        level: cfg.level,
        certificates: certs,
        all_pass,
    };
    artifacts.add("certificates.json", json_bytes(&report)?);
    Ok(Outcome {
        artifacts,
        passed: all_pass,
        summary,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CounterexampleReport {
    pub growth: String,
    pub report: ViolationReport,
    pub sequence: SequenceDiagnostics,
    pub all_pass: bool,
}

fn counterexample(cfg: &RunConfig) -> Result<Outcome> {
    let g = load_growth(cfg)?;
    let ce = build_counterexample(&g, cfg.dim, cfg.horizon, &cfg.counterexample_options())?;
    let sequence = search_omori_sequence(&ce.manifold, &ce.h, &cfg.horizon_list(), &cfg.sequence_options())?;
    let mut csv = Csv::new(&["t", "h", "dh", "delta_h"]);
    for t in uniform_grid(0.0, cfg.horizon, cfg.points).into_iter().skip(1) {
        if ce.slowed.is_joint(t) {
            continue;
        }
        csv.row(&[
            t.into(),
            ce.h.eval(t).into(),
            ce.h.deriv(t).into(),
            radial_laplacian(&ce.manifold, &ce.h, t)?.into(),
        ]);
    }
    let all_pass = ce.report.violated && sequence.verdict == SequenceVerdict::Violated;
    let summary = format!(
        "sup h <= {}, min Δh = {} at t = {}, sequence verdict {:?}",
        ce.report.h_sup, ce.report.delta_h_min, ce.report.delta_h_min_at, sequence.verdict
    );
    let report = CounterexampleReport {
        growth: g.base().label().to_string(),
        report: ce.report,
        sequence,
        all_pass,
    };
    let mut artifacts = Artifacts::default();
    artifacts.add("counterexample.json", json_bytes(&report)?);
    artifacts.add("delta_h.csv", csv.into_bytes());
    Ok(Outcome {
        artifacts,
        passed: all_pass,
        summary,
    })
}
