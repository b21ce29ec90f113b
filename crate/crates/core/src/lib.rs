//! Numerical laboratory for the Omori-Yau maximum principle on rotationally
//! symmetric model manifolds.
//!
//! The crate is organised bottom-up:
//!
//! * [`growth`]: admissible growth functions `G`, `∫ 1/G` and `F = exp ∫ 1/G`.
//! * [`slowdown`]: the slowed growth `H` built from a fast-growing `G` with
//!   `∫ 1/G < ∞`, satisfying `H ≥ 1/2`, `H' ≥ 0`, `2H ≤ G`, `H' ≤ H²`.
//! * [`manifold`]: warped-product geometry (`Δr`, radial Ricci curvature,
//!   radial Laplacian) and the Riccati comparison equation.
//! * [`principle`]: the λ-sweep producing ε-certificates, and the
//!   counterexample pipeline on which the principle fails.
//! * [`frontend`]: function specifications, configuration and report output
//!   used by the `omori` binary.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod expr;
pub mod frontend;
pub mod function;
pub mod growth;
pub mod manifold;
pub mod numeric;
pub mod principle;
pub mod slowdown;

pub use error::{Error, Result};
pub use function::{FunctionKind, Preset, ScalarFunction1D, Univariate};
pub use growth::{GrowthFunction, IntegralClassification, Verdict};
