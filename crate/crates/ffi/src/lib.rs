//! C ABI over `omori-core`.
//!
//! Objects are opaque handles created by `*_new`/`*_build` functions and
//! released by the matching `*_free`. Every fallible call returns an
//! [`OmoriStatus`]; on failure [`omori_last_error_message`] describes the
//! error for the calling thread. Outputs are written through pointers only on
//! success.

#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, c_int, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use omori_core::frontend::{FunctionSpec, WarpingSpec};
use omori_core::growth::{classify_integral, validate_growth, GrowthFunction, Verdict};
use omori_core::manifold::{
    check_comparison_bound, delta_r, ricci_radial, riccati_for_growth, ModelManifold, Warping,
};
use omori_core::numeric::OdeOptions;
use omori_core::principle::{build_counterexample, sweep_lambda0, CounterexampleOptions, SweepOptions};
use omori_core::slowdown::{build_h, check_properties, SlowdownOptions, SlowedGrowth};
use omori_core::{Error, ScalarFunction1D};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OmoriStatus {
    Ok = 0,
    /// Null pointer, bad UTF-8, or an out-of-range argument.
    InvalidArgument = 1,
    /// Expression could not be parsed.
    ParseError = 2,
    /// A documented precondition of the operation does not hold.
    Precondition = 3,
    /// A checked mathematical property failed.
    PropertyViolation = 4,
    /// Evaluation, quadrature or root finding failed.
    Numerical = 5,
    Io = 6,
    /// A Rust panic was caught at the boundary.
    Panic = 7,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OmoriVerdict {
    DivergesDeclared = 0,
    ConvergesDeclared = 1,
    Inconclusive = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OmoriWarpingKind {
    /// `f(t) = t`
    Euclidean = 0,
    /// `f(t) = sinh t`
    Hyperbolic = 1,
    /// `f(t) = t exp(∫ G)`; requires a growth handle.
    Counterexample = 2,
}

/// A real function with two derivatives.
pub struct OmoriFunction {
    inner: ScalarFunction1D,
}

/// A growth function after the admissibility scan.
pub struct OmoriGrowth {
    inner: GrowthFunction,
}

/// The slowed growth function built from a growth function.
pub struct OmoriSlowed {
    inner: SlowedGrowth,
}

pub struct OmoriManifold {
    inner: ModelManifold,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct OmoriSplice {
    pub t_n: f64,
    pub s_n: f64,
    pub a_n: f64,
    pub v_n: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct OmoriCertificate {
    pub epsilon: f64,
    pub lambda0: f64,
    pub x_eps: f64,
    pub f_at_x: f64,
    pub gap: f64,
    pub grad_norm: f64,
    pub laplacian: f64,
    pub gap_ok: bool,
    pub lambda_ok: bool,
    pub gradient_ok: bool,
    pub laplacian_ok: bool,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct OmoriViolationSummary {
    pub h_sup: f64,
    pub delta_h_min: f64,
    pub delta_h_min_at: f64,
    pub splice_count: usize,
    pub violated: bool,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct OmoriRiccatiSummary {
    pub t_end: f64,
    pub m_end: f64,
    pub steps: usize,
    pub blow_up: bool,
    /// NaN when the bound never settles.
    pub holds_from: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

fn clear_last_error() {
    LAST_ERROR.with(|slot| *slot.borrow_mut() = None);
}

fn status_of(err: &Error) -> OmoriStatus {
    match err {
        Error::InvalidInput(_) | Error::InvalidWarping(_) => OmoriStatus::InvalidArgument,
        Error::Parse(_) => OmoriStatus::ParseError,
        e if e.is_property_violation() => OmoriStatus::PropertyViolation,
        Error::Evaluation { .. } | Error::NonFinite { .. } | Error::Quadrature(_) | Error::Root(_) => OmoriStatus::Numerical,
        Error::Io(_) | Error::Json(_) => OmoriStatus::Io,
        _ => OmoriStatus::Precondition,
    }
}

struct Failure(OmoriStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(status_of(&e), e.to_string())
    }
}

fn invalid(msg: &str) -> Failure {
    Failure(OmoriStatus::InvalidArgument, msg.to_string())
}

/// Runs `body`, converting errors and panics into a status code.
fn guard<F: FnOnce() -> Result<(), Failure>>(body: F) -> OmoriStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            clear_last_error();
            OmoriStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_last_error(msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_last_error(format!("panic: {msg}"));
            OmoriStatus::Panic
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, name: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(invalid(&format!("{name} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| invalid(&format!("{name} is not valid UTF-8")))
}

unsafe fn handle<'a, T>(p: *const T, name: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| invalid(&format!("{name} is null")))
}

unsafe fn write_out<T>(out: *mut T, value: T) {
    if !out.is_null() {
        out.write(value);
    }
}

fn check_out<T>(out: *mut T, name: &str) -> Result<(), Failure> {
    if out.is_null() {
        Err(invalid(&format!("{name} is null")))
    } else {
        Ok(())
    }
}

/// Message for the last failed call on this thread, or null. The pointer
/// stays valid until the next call into this library from the same thread.
#[no_mangle]
pub extern "C" fn omori_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn omori_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Parses a function description (preset name, number, expression in `t`, or
/// `table:PATH`) on `[0, domain_max]`.
#[no_mangle]
pub unsafe extern "C" fn omori_function_new(spec: *const c_char, domain_max: f64, out: *mut *mut OmoriFunction) -> OmoriStatus {
    guard(|| {
        check_out(out, "out")?;
        let spec = str_arg(spec, "spec")?;
        let inner = FunctionSpec::parse(spec).build(domain_max)?;
        write_out(out, Box::into_raw(Box::new(OmoriFunction { inner })));
        Ok(())
    })
}

/// Value and first two derivatives at `t`. Any output pointer may be null.
#[no_mangle]
pub unsafe extern "C" fn omori_function_eval(
    f: *const OmoriFunction,
    t: f64,
    value: *mut f64,
    d1: *mut f64,
    d2: *mut f64,
) -> OmoriStatus {
    guard(|| {
        let f = handle(f, "function")?;
        let d = f.inner.dual(t).map_err(|e| Error::Evaluation {
            function: f.inner.label().to_string(),
            source: e,
        })?;
        write_out(value, d.v);
        write_out(d1, d.d1);
        write_out(d2, d.d2);
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn omori_function_free(f: *mut OmoriFunction) {
    if !f.is_null() {
        drop(Box::from_raw(f));
    }
}

/// Builds a growth function and scans `G ≥ 1`, `G' ≥ 0` on `samples` points.
/// An inadmissible function is still returned; query it with
/// [`omori_growth_is_admissible`].
#[no_mangle]
pub unsafe extern "C" fn omori_growth_new(
    spec: *const c_char,
    domain_max: f64,
    samples: usize,
    out: *mut *mut OmoriGrowth,
) -> OmoriStatus {
    guard(|| {
        check_out(out, "out")?;
        let spec = str_arg(spec, "spec")?;
        let f = FunctionSpec::parse(spec).build(domain_max)?;
        let inner = validate_growth(f, samples)?;
        write_out(out, Box::into_raw(Box::new(OmoriGrowth { inner })));
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn omori_growth_is_admissible(g: *const OmoriGrowth) -> bool {
    g.as_ref().is_some_and(|g| g.inner.verified_admissible())
}

/// `∫_0^horizon 1/G` and the convergence verdict.
#[no_mangle]
pub unsafe extern "C" fn omori_growth_classify(
    g: *const OmoriGrowth,
    horizon: f64,
    verdict: *mut OmoriVerdict,
    integral: *mut f64,
) -> OmoriStatus {
    guard(|| {
        let g = handle(g, "growth")?;
        let c = classify_integral(&g.inner, &[horizon])?;
        let v = match c.verdict {
            Verdict::DivergesDeclared => OmoriVerdict::DivergesDeclared,
            Verdict::ConvergesDeclared => OmoriVerdict::ConvergesDeclared,
            _ => OmoriVerdict::Inconclusive,
        };
        write_out(verdict, v);
        write_out(integral, c.value_on_horizon);
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn omori_growth_free(g: *mut OmoriGrowth) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// Builds the slowed growth function on `[0, horizon]` with default scan
/// settings. `force` skips the convergence gate.
#[no_mangle]
pub unsafe extern "C" fn omori_slowdown_build(
    g: *const OmoriGrowth,
    horizon: f64,
    force: bool,
    out: *mut *mut OmoriSlowed,
) -> OmoriStatus {
    guard(|| {
        check_out(out, "out")?;
        let g = handle(g, "growth")?;
        let opts = SlowdownOptions {
            force,
            ..SlowdownOptions::default()
        };
        let inner = build_h(&g.inner, horizon, &opts)?;
        write_out(out, Box::into_raw(Box::new(OmoriSlowed { inner })));
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn omori_slowed_eval(h: *const OmoriSlowed, t: f64, value: *mut f64, d1: *mut f64) -> OmoriStatus {
    guard(|| {
        let h = handle(h, "slowed")?;
        write_out(value, h.inner.eval(t));
        write_out(d1, h.inner.deriv(t));
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn omori_slowed_splice_count(h: *const OmoriSlowed) -> usize {
    h.as_ref().map_or(0, |h| h.inner.splices().len())
}

#[no_mangle]
pub unsafe extern "C" fn omori_slowed_splice(h: *const OmoriSlowed, index: usize, out: *mut OmoriSplice) -> OmoriStatus {
    guard(|| {
        check_out(out, "out")?;
        let h = handle(h, "slowed")?;
        let s = h
            .inner
            .splices()
            .get(index)
            .ok_or_else(|| invalid(&format!("splice index {index} out of range")))?;
        write_out(
            out,
            OmoriSplice {
                t_n: s.t_n,
                s_n: s.s_n,
                a_n: s.a_n,
                v_n: s.v_n,
            },
        );
        Ok(())
    })
}

/// Checks the pointwise properties of `H` on `points` grid points.
#[no_mangle]
pub unsafe extern "C" fn omori_slowed_check(h: *const OmoriSlowed, points: usize, all_pass: *mut bool) -> OmoriStatus {
    guard(|| {
        check_out(all_pass, "all_pass")?;
        let h = handle(h, "slowed")?;
        write_out(all_pass, check_properties(&h.inner, points.max(2)).all_pass);
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn omori_slowed_free(h: *mut OmoriSlowed) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// Model manifold of dimension `dim`. `growth` is required only for the
/// counterexample warping and may be null otherwise.
#[no_mangle]
pub unsafe extern "C" fn omori_manifold_new(
    kind: OmoriWarpingKind,
    dim: usize,
    domain_max: f64,
    growth: *const OmoriGrowth,
    out: *mut *mut OmoriManifold,
) -> OmoriStatus {
    guard(|| {
        check_out(out, "out")?;
        let inner = match kind {
            OmoriWarpingKind::Euclidean => ModelManifold::euclidean(dim, domain_max)?,
            OmoriWarpingKind::Hyperbolic => ModelManifold::hyperbolic(dim, domain_max)?,
            OmoriWarpingKind::Counterexample => {
                let g = handle(growth, "growth")?;
                ModelManifold::new(dim, Warping::counterexample(&g.inner)?, domain_max)?
            }
        };
        write_out(out, Box::into_raw(Box::new(OmoriManifold { inner })));
        Ok(())
    })
}

/// Model manifold with a warping given as a function description.
#[no_mangle]
pub unsafe extern "C" fn omori_manifold_new_custom(
    warping: *const c_char,
    dim: usize,
    domain_max: f64,
    out: *mut *mut OmoriManifold,
) -> OmoriStatus {
    guard(|| {
        check_out(out, "out")?;
        let text = str_arg(warping, "warping")?;
        let inner = match WarpingSpec::parse(text) {
            WarpingSpec::Euclidean => ModelManifold::euclidean(dim, domain_max)?,
            WarpingSpec::Hyperbolic => ModelManifold::hyperbolic(dim, domain_max)?,
            WarpingSpec::Counterexample => return Err(invalid("use omori_manifold_new for the counterexample warping")),
            WarpingSpec::Custom(spec) => ModelManifold::new(dim, Warping::Custom(spec.build(domain_max)?), domain_max)?,
        };
        write_out(out, Box::into_raw(Box::new(OmoriManifold { inner })));
        Ok(())
    })
}

/// `Δr` and the radial Ricci curvature at radius `t > 0`.
#[no_mangle]
pub unsafe extern "C" fn omori_manifold_radial(
    m: *const OmoriManifold,
    t: f64,
    delta_r_out: *mut f64,
    ricci_out: *mut f64,
) -> OmoriStatus {
    guard(|| {
        let m = handle(m, "manifold")?;
        write_out(delta_r_out, delta_r(&m.inner, t)?);
        write_out(ricci_out, ricci_radial(&m.inner, t)?);
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn omori_manifold_free(m: *mut OmoriManifold) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// Integrates the comparison equation with curvature bound `-G²` from
/// `m(t0) = m0` and checks `m < (√(n-1) + 1) G`.
#[no_mangle]
pub unsafe extern "C" fn omori_riccati(
    g: *const OmoriGrowth,
    dim: usize,
    t0: f64,
    m0: f64,
    horizon: f64,
    out: *mut OmoriRiccatiSummary,
) -> OmoriStatus {
    guard(|| {
        check_out(out, "out")?;
        let g = handle(g, "growth")?;
        let trace = riccati_for_growth(&g.inner, dim, t0, m0, horizon, OdeOptions::default())?;
        let report = check_comparison_bound(&trace, &g.inner, dim);
        write_out(
            out,
            OmoriRiccatiSummary {
                t_end: trace.t.last().copied().unwrap_or(t0),
                m_end: trace.m.last().copied().unwrap_or(m0),
                steps: trace.t.len(),
                blow_up: trace.blow_up,
                holds_from: report.holds_from.unwrap_or(f64::NAN),
            },
        );
        Ok(())
    })
}

/// One λ-sweep for `test` bounded above by `level`.
#[no_mangle]
pub unsafe extern "C" fn omori_sweep(
    m: *const OmoriManifold,
    test: *const OmoriFunction,
    level: f64,
    g: *const OmoriGrowth,
    epsilon: f64,
    horizon: f64,
    out: *mut OmoriCertificate,
) -> OmoriStatus {
    guard(|| {
        check_out(out, "out")?;
        let m = handle(m, "manifold")?;
        let test = handle(test, "test")?;
        let g = handle(g, "growth")?;
        let c = sweep_lambda0(&m.inner, &test.inner, level, &g.inner, epsilon, horizon, &SweepOptions::default())?;
        write_out(
            out,
            OmoriCertificate {
                epsilon: c.epsilon,
                lambda0: c.lambda0,
                x_eps: c.x_eps,
                f_at_x: c.f_at_x,
                gap: c.gap,
                grad_norm: c.grad_norm,
                laplacian: c.laplacian,
                gap_ok: c.passed.gap,
                lambda_ok: c.passed.lambda,
                gradient_ok: c.passed.gradient,
                laplacian_ok: c.passed.laplacian,
            },
        );
        Ok(())
    })
}

/// Builds the bounded function with `Δh > 1` on the counterexample manifold.
#[no_mangle]
pub unsafe extern "C" fn omori_counterexample(
    g: *const OmoriGrowth,
    dim: usize,
    horizon: f64,
    force: c_int,
    out: *mut OmoriViolationSummary,
) -> OmoriStatus {
    guard(|| {
        check_out(out, "out")?;
        let g = handle(g, "growth")?;
        let mut opts = CounterexampleOptions::default();
        opts.slowdown.force = force != 0;
        let ce = build_counterexample(&g.inner, dim, horizon, &opts)?;
        write_out(
            out,
            OmoriViolationSummary {
                h_sup: ce.report.h_sup,
                delta_h_min: ce.report.delta_h_min,
                delta_h_min_at: ce.report.delta_h_min_at,
                splice_count: ce.slowed.splices().len(),
                violated: ce.report.violated,
            },
        );
        Ok(())
    })
}
