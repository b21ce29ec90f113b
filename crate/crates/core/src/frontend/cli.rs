use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use super::commands::{execute, Command};
use super::config::RunConfig;
use super::output::resolve_out_dir;
use super::{EXIT_OK, EXIT_USAGE, EXIT_VIOLATION};
use crate::error::{Error, Result};

#[derive(Debug, Parser)]
#[command(name = "omori", version, about = "Omori-Yau maximum principle laboratory on model manifolds")]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Debug, Subcommand)]
enum Sub {
    /// Admissibility, integral classification and F table for G.
    Growth(Flags),
    /// Splice ledger, H table and property report.
    Slowdown(Flags),
    /// Riccati trace and comparison bound.
    Riccati(Flags),
    /// ε-certificates for a test function.
    Sweep(Flags),
    /// Bounded function with Δh > 1 and its diagnostics.
    Counterexample(Flags),
}

#[derive(Debug, Args)]
struct Flags {
    /// Flat `key = value` file; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Growth function: preset name, number, expression in t, or table:PATH.
    #[arg(long = "G", allow_hyphen_values = true)]
    growth: Option<String>,
    /// Test function bounded above by L.
    #[arg(long = "g", allow_hyphen_values = true)]
    test_function: Option<String>,
    #[arg(long = "L", allow_hyphen_values = true)]
    level: Option<String>,
    /// Comma-separated list.
    #[arg(long)]
    eps: Option<String>,
    /// t, sinh, counterexample, or an expression for f.
    #[arg(long)]
    warping: Option<String>,
    #[arg(long)]
    n: Option<String>,
    #[arg(long = "T")]
    horizon: Option<String>,
    /// Comma-separated horizons for classification and sequence search.
    #[arg(long)]
    horizons: Option<String>,
    /// Expression constant, NAME=VALUE. Repeatable.
    #[arg(long, allow_hyphen_values = true)]
    param: Vec<String>,
    #[arg(long)]
    grid: Option<String>,
    #[arg(long = "sweep-grid")]
    sweep_grid: Option<String>,
    #[arg(long)]
    points: Option<String>,
    #[arg(long = "root-tol")]
    root_tol: Option<String>,
    #[arg(long = "golden-tol")]
    golden_tol: Option<String>,
    #[arg(long = "ode-tol")]
    ode_tol: Option<String>,
    #[arg(long = "max-step")]
    max_step: Option<String>,
    #[arg(long)]
    t0: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    m0: Option<String>,
    /// growth (curvature bound -G²) or manifold (the model's own curvature).
    #[arg(long)]
    ricci: Option<String>,
    #[arg(long)]
    delta0: Option<String>,
    /// Build even when the integral of 1/G is not declared convergent.
    #[arg(long)]
    force: bool,
    #[arg(long)]
    seed: Option<String>,
    /// Output directory (default: $OMORI_OUT_DIR, else ./omori-out).
    #[arg(long)]
    out: Option<String>,
}

impl Flags {
    fn config(&self) -> Result<RunConfig> {
        let mut cfg = RunConfig::default();
        if let Some(path) = &self.config {
            let text = fs::read_to_string(path)
                .map_err(|e| Error::InvalidInput(format!("reading config {}: {e}", path.display())))?;
            cfg.apply_file(&text)?;
        }
        let pairs = [
            ("G", &self.growth),
            ("g", &self.test_function),
            ("L", &self.level),
            ("eps", &self.eps),
            ("warping", &self.warping),
            ("n", &self.n),
            ("T", &self.horizon),
            ("horizons", &self.horizons),
            ("grid", &self.grid),
            ("sweep-grid", &self.sweep_grid),
            ("points", &self.points),
            ("root-tol", &self.root_tol),
            ("golden-tol", &self.golden_tol),
            ("ode-tol", &self.ode_tol),
            ("max-step", &self.max_step),
            ("t0", &self.t0),
            ("m0", &self.m0),
            ("ricci", &self.ricci),
            ("delta0", &self.delta0),
            ("seed", &self.seed),
            ("out", &self.out),
        ];
        for (key, value) in pairs {
            if let Some(v) = value {
                cfg.apply(key, v)?;
            }
        }
        for p in &self.param {
            cfg.apply("param", p)?;
        }
        if self.force {
            cfg.force = true;
        }
        Ok(cfg)
    }
}

/// Parses `args`, runs the command and writes its outputs. Returns the
/// process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let (command, flags) = match &cli.command {
        Sub::Growth(f) => (Command::Growth, f),
        Sub::Slowdown(f) => (Command::Slowdown, f),
        Sub::Riccati(f) => (Command::Riccati, f),
        Sub::Sweep(f) => (Command::Sweep, f),
        Sub::Counterexample(f) => (Command::Counterexample, f),
    };
    match run_command(command, flags) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("omori {}: error: {e}", command.name());
            if e.is_property_violation() {
                EXIT_VIOLATION
            } else {
                EXIT_USAGE
            }
        }
    }
}

fn run_command(command: Command, flags: &Flags) -> Result<i32> {
    let cfg = flags.config()?;
    let outcome = execute(command, &cfg)?;
    let dir = resolve_out_dir(cfg.out.as_deref());
    let written = outcome.artifacts.write_all(&dir)?;
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    writeln!(out, "{}", outcome.summary)?;
    for path in written {
        writeln!(out, "wrote {}", path.display())?;
    }
    if outcome.passed {
        Ok(EXIT_OK)
    } else {
        eprintln!("omori {}: property check failed (see reports)", command.name());
        Ok(EXIT_VIOLATION)
    }
}
