use thiserror::Error;

use crate::expr::{EvalError, ParseError};
use crate::numeric::{QuadError, RootError};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error("evaluating `{function}`: {source}")]
    Evaluation {
        function: String,
        #[source]
        source: EvalError,
    },

    #[error("`{function}` is not finite at t = {t}")]
    NonFinite { function: String, t: f64 },

    #[error(transparent)]
    Quadrature(#[from] QuadError),

    #[error(transparent)]
    Root(#[from] RootError),

    #[error("growth function is inadmissible: {condition} fails at t = {t} (value {value})")]
    Inadmissible {
        t: f64,
        condition: &'static str,
        value: f64,
    },

    #[error("integral of 1/G diverges (declared)")]
    DivergesDeclared,

    #[error("integral of 1/G is not declared convergent ({verdict}); pass the override to force the construction")]
    NotDeclaredConvergent { verdict: &'static str },

    #[error("splice escapes horizon: t_n = {t_n}, a_n = {a_n}, horizon = {horizon}")]
    SpliceEscapesHorizon { t_n: f64, a_n: f64, horizon: f64 },

    #[error("splice at t_n = {t_n} is degenerate: the hyperbola does not start below G/2")]
    SpliceDegenerate { t_n: f64 },

    #[error("nesting violated: ({0}, {1}) and ({2}, {3}) overlap without containment")]
    NestingViolated(f64, f64, f64, f64),

    #[error("radius t = {t} is at or inside the pole")]
    PoleSingularity { t: f64 },

    #[error("warping function check failed: {0}")]
    InvalidWarping(String),

    #[error("hypothesis Δr ≤ G fails at t = {t}: Δr = {delta_r}, G = {growth}")]
    CurvatureHypothesis { t: f64, delta_r: f64, growth: f64 },

    #[error("supremum of g on the horizon ({sup}) is not below L = {level}")]
    SupremumAttained { sup: f64, level: f64 },

    #[error("epsilon = {epsilon} exceeds min{{1, L - sup{{g : r < 1}}}} = {bound}")]
    EpsilonGuard { epsilon: f64, bound: f64 },

    #[error("epsilon = {epsilon} is too small: g never exceeds L - epsilon on the horizon")]
    EpsilonBelowHorizonGap { epsilon: f64 },

    #[error("horizon-limited sweep: maximiser {x} lies in the last 1% of [0, {horizon}]")]
    HorizonLimited { x: f64, horizon: f64 },

    #[error("construction failed: Δh = {delta_h} ≤ 1 at t = {t}")]
    ConstructionFailed { t: f64, delta_h: f64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Errors that mean a checked mathematical property failed, as opposed to
    /// bad input or unmet preconditions.
    pub fn is_property_violation(&self) -> bool {
        matches!(
            self,
            Error::Inadmissible { .. } | Error::ConstructionFailed { .. } | Error::NestingViolated(..)
        )
    }
}
