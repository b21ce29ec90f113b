//! Command-line front end: function specifications, run configuration,
//! command pipelines and report output.

mod cli;
pub mod commands;
pub mod config;
pub mod output;
pub mod functions;

pub use cli::run;
pub use commands::{execute, Command, Outcome};
pub use config::RunConfig;
pub use functions::{FunctionSource, FunctionSpec, WarpingSpec};

/// All checked properties held.
pub const EXIT_OK: i32 = 0;
/// Usage, parse or precondition error.
pub const EXIT_USAGE: i32 = 1;
/// A checked property failed.
pub const EXIT_VIOLATION: i32 = 2;
