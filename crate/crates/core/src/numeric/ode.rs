//! Scalar explicit Runge-Kutta integration with the Dormand-Prince 5(4) pair.

// Butcher tableau.
const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
// 5th-order minus embedded 4th-order weights.
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OdeOptions {
    /// Local error tolerance, applied as `tol * max(1, |y|)`.
    pub tol: f64,
    pub max_step: f64,
    pub min_step: f64,
    /// |y| beyond this counts as finite-time blow-up.
    pub blowup: f64,
    pub max_steps: usize,
}

impl Default for OdeOptions {
    fn default() -> Self {
        Self {
            tol: 1e-9,
            max_step: 0.1,
            min_step: 1e-14,
            blowup: 1e12,
            max_steps: 10_000_000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Termination {
    Completed,
    /// |y| exceeded the blow-up threshold.
    BlowUp,
    /// The controller asked for a step below `min_step`.
    StepUnderflow,
    /// The right-hand side produced a non-finite value.
    NonFinite,
    StepLimit,
}

#[derive(Debug, Clone)]
pub struct OdeSolution {
    pub t: Vec<f64>,
    pub y: Vec<f64>,
    pub termination: Termination,
    pub rejected_steps: usize,
}

/// Integrates `y' = rhs(t, y)` from `(t0, y0)` to `t_end` and returns every
/// accepted step.
pub fn dopri5<F: Fn(f64, f64) -> f64>(rhs: F, t0: f64, y0: f64, t_end: f64, opts: OdeOptions) -> OdeSolution {
    let mut t = t0;
    let mut y = y0;
    let mut ts = vec![t0];
    let mut ys = vec![y0];
    let mut rejected = 0;
    let mut k1 = rhs(t, y);
    let mut h = initial_step(&rhs, t, y, k1, opts).min(t_end - t0);
    let finish = |ts, ys, termination, rejected| OdeSolution {
        t: ts,
        y: ys,
        termination,
        rejected_steps: rejected,
    };
    if !k1.is_finite() {
        return finish(ts, ys, Termination::NonFinite, rejected);
    }
    for _ in 0..opts.max_steps {
        if t >= t_end {
            return finish(ts, ys, Termination::Completed, rejected);
        }
        if h < opts.min_step {
            return finish(ts, ys, Termination::StepUnderflow, rejected);
        }
        let last = t + h >= t_end;
        let step = if last { t_end - t } else { h };
        let k2 = rhs(t + C2 * step, y + step * A21 * k1);
        let k3 = rhs(t + C3 * step, y + step * (A31 * k1 + A32 * k2));
        let k4 = rhs(t + C4 * step, y + step * (A41 * k1 + A42 * k2 + A43 * k3));
        let k5 = rhs(t + C5 * step, y + step * (A51 * k1 + A52 * k2 + A53 * k3 + A54 * k4));
        let k6 = rhs(t + step, y + step * (A61 * k1 + A62 * k2 + A63 * k3 + A64 * k4 + A65 * k5));
        let y_new = y + step * (B1 * k1 + B3 * k3 + B4 * k4 + B5 * k5 + B6 * k6);
        let k7 = rhs(t + step, y_new);
        let err = (step * (E1 * k1 + E3 * k3 + E4 * k4 + E5 * k5 + E6 * k6 + E7 * k7)).abs();
        let scale = opts.tol * y.abs().max(y_new.abs()).max(1.0);

        if !err.is_finite() || !y_new.is_finite() {
            // Shrink hard and retry; a genuine singularity ends in underflow.
            rejected += 1;
            h = step * 0.1;
            continue;
        }
        let ratio = err / scale;
        if ratio <= 1.0 {
            t = if last { t_end } else { t + step };
            y = y_new;
            k1 = k7;
            ts.push(t);
            ys.push(y);
            if y.abs() > opts.blowup {
                return finish(ts, ys, Termination::BlowUp, rejected);
            }
            if !k1.is_finite() {
                return finish(ts, ys, Termination::NonFinite, rejected);
            }
            let grow = if ratio == 0.0 { 5.0 } else { (0.9 * ratio.powf(-0.2)).clamp(0.2, 5.0) };
            h = (step * grow).min(opts.max_step);
        } else {
            rejected += 1;
            h = step * (0.9 * ratio.powf(-0.2)).clamp(0.1, 1.0);
        }
    }
    finish(ts, ys, Termination::StepLimit, rejected)
}

fn initial_step<F: Fn(f64, f64) -> f64>(rhs: &F, t: f64, y: f64, f0: f64, opts: OdeOptions) -> f64 {
    let scale = opts.tol * y.abs().max(1.0);
    let d0 = y.abs() / scale;
    let d1 = f0.abs() / scale;
    let h0 = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
    let f1 = rhs(t + h0, y + h0 * f0);
    let d2 = ((f1 - f0) / scale).abs() / h0;
    let h1 = if d1.max(d2) <= 1e-15 {
        (h0 * 1e-3).max(1e-6)
    } else {
        (0.01 / d1.max(d2)).powf(0.2)
    };
    (100.0 * h0).min(h1).min(opts.max_step).max(opts.min_step)
}
