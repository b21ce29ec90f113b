//! Run configuration shared by every command.
//!
//! A config file holds one `key = value` per line, using the long flag names
//! without dashes (`T = 50`, `eps = 0.5, 0.1`, `param.c = 2`). Lines starting
//! with `#` are comments. Flags given on the command line are applied after
//! the file and win.

use std::collections::BTreeMap;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::function::SAMPLING_SEED;
use crate::numeric::OdeOptions;
use crate::principle::{CounterexampleOptions, SequenceOptions, SweepOptions};
use crate::slowdown::SlowdownOptions;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub dim: usize,
    pub horizon: f64,
    /// Growth function `G`.
    pub growth: Option<String>,
    /// Test function for sweeps.
    pub test_function: Option<String>,
    /// Upper bound `L` of the test function.
    pub level: f64,
    pub epsilons: Vec<f64>,
    pub warping: String,
    /// Extra horizons for integral classification and sequence search.
    pub horizons: Vec<f64>,
    pub parameters: BTreeMap<String, f64>,
    /// Scan grid for the fast-growth set, splice roots and Δh.
    pub grid: usize,
    pub sweep_grid: usize,
    /// Rows in emitted tables.
    pub points: usize,
    pub root_tol: f64,
    pub golden_tol: f64,
    pub ode_tol: f64,
    pub max_step: f64,
    pub t0: f64,
    pub m0: Option<f64>,
    /// Integrate the model's own Riccati equation instead of the comparison
    /// equation with curvature bound `-G²`.
    pub ricci_manifold: bool,
    pub delta0: f64,
    pub force: bool,
    pub seed: u64,
    pub out: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            dim: 2,
            horizon: 50.0,
            growth: None,
            test_function: None,
            level: 0.0,
            epsilons: vec![0.5, 0.25, 0.1],
            warping: "sinh".into(),
            horizons: Vec::new(),
            parameters: BTreeMap::new(),
            grid: 10_000,
            sweep_grid: 100_000,
            points: 1001,
            root_tol: 1e-10,
            golden_tol: 1e-10,
            ode_tol: 1e-9,
            max_step: 0.1,
            t0: 0.1,
            m0: None,
            ricci_manifold: false,
            delta0: 0.1,
            force: false,
            seed: SAMPLING_SEED,
            out: None,
        }
    }
}

fn number(key: &str, value: &str) -> Result<f64> {
    value
        .trim()
        .parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| Error::InvalidInput(format!("{key}: expected a number, got `{value}`")))
}

fn count(key: &str, value: &str) -> Result<usize> {
    value
        .trim()
        .parse::<usize>()
        .map_err(|_| Error::InvalidInput(format!("{key}: expected a non-negative integer, got `{value}`")))
}

fn list(key: &str, value: &str) -> Result<Vec<f64>> {
    value
        .split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| number(key, s))
        .collect()
}

fn boolean(key: &str, value: &str) -> Result<bool> {
    match value.trim() {
        "" | "true" | "1" | "yes" => Ok(true),
        "false" | "0" | "no" => Ok(false),
        other => Err(Error::InvalidInput(format!("{key}: expected a boolean, got `{other}`"))),
    }
}

fn parse_seed(value: &str) -> Result<u64> {
    let v = value.trim();
    let parsed = match v.strip_prefix("0x").or_else(|| v.strip_prefix("0X")) {
        Some(hex) => u64::from_str_radix(hex, 16),
        None => v.parse(),
    };
    parsed.map_err(|_| Error::InvalidInput(format!("seed: expected an integer, got `{value}`")))
}

impl RunConfig {
    /// Sets one key. Keys are the long flag names.
    pub fn apply(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "n" => self.dim = count(key, value)?,
            "T" => self.horizon = number(key, value)?,
            "G" => self.growth = Some(value.trim().to_string()),
            "g" => self.test_function = Some(value.trim().to_string()),
            "L" => self.level = number(key, value)?,
            "eps" => self.epsilons = list(key, value)?,
            "warping" => self.warping = value.trim().to_string(),
            "horizons" => self.horizons = list(key, value)?,
            "grid" => self.grid = count(key, value)?,
            "sweep-grid" => self.sweep_grid = count(key, value)?,
            "points" => self.points = count(key, value)?,
            "root-tol" => self.root_tol = number(key, value)?,
            "golden-tol" => self.golden_tol = number(key, value)?,
            "ode-tol" => self.ode_tol = number(key, value)?,
            "max-step" => self.max_step = number(key, value)?,
            "t0" => self.t0 = number(key, value)?,
            "m0" => self.m0 = Some(number(key, value)?),
            "ricci" => {
                self.ricci_manifold = match value.trim() {
                    "growth" => false,
                    "manifold" => true,
                    other => return Err(Error::InvalidInput(format!("ricci: expected `growth` or `manifold`, got `{other}`"))),
                }
            }
            "delta0" => self.delta0 = number(key, value)?,
            "force" => self.force = boolean(key, value)?,
            "seed" => self.seed = parse_seed(value)?,
            "out" => self.out = Some(PathBuf::from(value.trim())),
            "param" => {
                let (name, v) = value
                    .split_once('=')
                    .ok_or_else(|| Error::InvalidInput(format!("param: expected NAME=VALUE, got `{value}`")))?;
                self.parameters.insert(name.trim().to_string(), number(key, v)?);
            }
            _ => match key.strip_prefix("param.") {
                Some(name) if !name.is_empty() => {
                    self.parameters.insert(name.to_string(), number(key, value)?);
                }
                _ => return Err(Error::InvalidInput(format!("unknown configuration key `{key}`"))),
            },
        }
        Ok(())
    }

    /// Applies every `key = value` line of a config file.
    pub fn apply_file(&mut self, text: &str) -> Result<()> {
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::InvalidInput(format!("config line {}: expected `key = value`", lineno + 1)))?;
            self.apply(key.trim(), value)?;
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("T", self.horizon),
            ("root-tol", self.root_tol),
            ("golden-tol", self.golden_tol),
            ("ode-tol", self.ode_tol),
            ("max-step", self.max_step),
            ("t0", self.t0),
            ("delta0", self.delta0),
        ];
        for (key, v) in positive {
            if !(v > 0.0) {
                return Err(Error::InvalidInput(format!("{key} must be positive, got {v}")));
            }
        }
        if self.dim < 2 {
            return Err(Error::InvalidInput(format!("n must be at least 2, got {}", self.dim)));
        }
        if self.grid < 2 || self.sweep_grid < 2 || self.points < 2 {
            return Err(Error::InvalidInput("grid sizes must be at least 2".into()));
        }
        if self.epsilons.iter().any(|e| !(*e > 0.0)) {
            return Err(Error::InvalidInput("every eps must be positive".into()));
        }
        Ok(())
    }

    pub fn growth_spec(&self) -> Result<&str> {
        self.growth
            .as_deref()
            .ok_or_else(|| Error::InvalidInput("missing growth function (--G)".into()))
    }

    pub fn slowdown_options(&self) -> SlowdownOptions {
        SlowdownOptions {
            grid: self.grid,
            splice_grid: self.grid,
            root_tol: self.root_tol,
            force: self.force,
        }
    }

    pub fn sweep_options(&self) -> SweepOptions {
        SweepOptions {
            grid: self.sweep_grid,
            golden_tol: self.golden_tol,
        }
    }

    pub fn ode_options(&self) -> OdeOptions {
        OdeOptions {
            tol: self.ode_tol,
            max_step: self.max_step,
            ..OdeOptions::default()
        }
    }

    pub fn counterexample_options(&self) -> CounterexampleOptions {
        CounterexampleOptions {
            grid: self.grid,
            slowdown: self.slowdown_options(),
            ..CounterexampleOptions::default()
        }
    }

    pub fn sequence_options(&self) -> SequenceOptions {
        SequenceOptions {
            grid: self.grid,
            delta0: self.delta0,
            golden_tol: self.golden_tol,
            ..SequenceOptions::default()
        }
    }

    /// Horizons for classification: the configured list, or `T/4, T/2, T`.
    pub fn horizon_list(&self) -> Vec<f64> {
        let mut hs: Vec<f64> = self.horizons.iter().copied().filter(|&h| h < self.horizon).collect();
        if hs.is_empty() {
            hs = vec![0.25 * self.horizon, 0.5 * self.horizon];
        }
        hs.push(self.horizon);
        hs.sort_by(f64::total_cmp);
        hs.dedup();
        hs
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn file_then_flags() {
        let mut cfg = RunConfig::default();
        cfg.apply_file("# sweep\nT = 100\neps = 0.5, 0.1\nparam.c = 2\nforce = yes\n").unwrap();
        cfg.apply("T", "80").unwrap();
        assert_eq!(cfg.horizon, 80.0);
        assert_eq!(cfg.epsilons, vec![0.5, 0.1]);
        assert_eq!(cfg.parameters["c"], 2.0);
        assert!(cfg.force);
    }

    #[test]
    fn rejects_bad_values() {
        let mut cfg = RunConfig::default();
        assert!(cfg.apply("T", "abc").is_err());
        assert!(cfg.apply("bogus", "1").is_err());
        cfg.apply("n", "1").unwrap();
        assert!(cfg.validate().is_err());
        cfg.apply("seed", "0x5eed").unwrap();
        assert_eq!(cfg.seed, 0x5EED);
    }

    #[test]
    fn horizon_list_ends_at_horizon() {
        let cfg = RunConfig::default();
        assert_eq!(cfg.horizon_list(), vec![12.5, 25.0, 50.0]);
    }
}
