//! Numerical building blocks shared by the geometric modules.

pub mod ode;
pub mod optimize;
pub mod quadrature;
pub mod roots;

pub use ode::{dopri5, OdeOptions, OdeSolution, Termination};
pub use optimize::{golden_max, grid_golden_max};
pub use quadrature::{integrate, CumulativeIntegral, QuadError, QuadOptions};
pub use roots::{bisect, scan_sign_changes, uniform_grid, RootError, SignChange};
