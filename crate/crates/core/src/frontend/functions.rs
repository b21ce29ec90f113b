//! Resolution of user-supplied function descriptions.

use std::collections::BTreeMap;
use std::fs;
use std::path::PathBuf;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::function::{HermiteTable, Preset, ScalarFunction1D};

#[derive(Debug, Clone, PartialEq)]
pub enum FunctionSource {
    Preset(Preset),
    Expression(String),
    /// Two-column CSV `t,value`, interpolated by a monotone cubic.
    Table(PathBuf),
}

#[derive(Debug, Clone, PartialEq)]
pub struct FunctionSpec {
    pub source: FunctionSource,
    /// Named constants available inside expressions.
    pub parameters: BTreeMap<String, f64>,
}

fn preset_by_name(text: &str) -> Option<Preset> {
    let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let named = match compact.to_ascii_lowercase().as_str() {
        "linear" => Some(Preset::Linear),
        "quadratic" => Some(Preset::Quadratic),
        "exp" | "exponential" => Some(Preset::Exponential),
        "loglinear" | "log-linear" => Some(Preset::LogLinear),
        "identity" => Some(Preset::Identity),
        "sinh" => Some(Preset::Sinh),
        _ => None,
    };
    if named.is_some() {
        return named;
    }
    if let Some(c) = compact.strip_prefix("const:") {
        return c.parse().ok().map(Preset::Constant);
    }
    if let Ok(c) = compact.parse::<f64>() {
        return c.is_finite().then_some(Preset::Constant(c));
    }
    [
        Preset::Linear,
        Preset::Quadratic,
        Preset::Exponential,
        Preset::LogLinear,
        Preset::Identity,
        Preset::Sinh,
    ]
    .into_iter()
    .find(|p| {
        let canon: String = p.expression().chars().filter(|c| !c.is_whitespace()).collect();
        canon == compact
    })
}

impl FunctionSpec {
    /// Preset names, canonical preset expressions and bare numbers resolve to
    /// presets; `table:PATH` loads a table; anything else is an expression.
    pub fn parse(text: &str) -> Self {
        let trimmed = text.trim();
        let source = if let Some(path) = trimmed.strip_prefix("table:") {
            FunctionSource::Table(PathBuf::from(path))
        } else if let Some(p) = preset_by_name(trimmed) {
            FunctionSource::Preset(p)
        } else {
            FunctionSource::Expression(trimmed.to_string())
        };
        Self {
            source,
            parameters: BTreeMap::new(),
        }
    }

    pub fn with_parameters(mut self, parameters: BTreeMap<String, f64>) -> Self {
        self.parameters = parameters;
        self
    }

    pub fn build(&self, domain_max: f64) -> Result<ScalarFunction1D> {
        match &self.source {
            FunctionSource::Preset(p) => Ok(ScalarFunction1D::preset(*p, domain_max)),
            FunctionSource::Expression(src) => {
                let expr = Expr::parse_with(src, &self.parameters)?;
                Ok(ScalarFunction1D::expression(expr, domain_max))
            }
            FunctionSource::Table(path) => {
                let text = fs::read_to_string(path)?;
                let rows = parse_table(&text)?;
                let table = HermiteTable::new(&rows)?;
                if table.domain_max() < domain_max {
                    return Err(Error::InvalidInput(format!(
                        "table {} ends at {} before the horizon {domain_max}",
                        path.display(),
                        table.domain_max()
                    )));
                }
                Ok(ScalarFunction1D::piecewise(
                    Arc::new(table),
                    domain_max,
                    format!("table:{}", path.display()),
                ))
            }
        }
    }
}

/// Reads `t,value` rows. Blank lines and `#` comments are skipped, and a
/// non-numeric first row is treated as a header.
pub fn parse_table(text: &str) -> Result<Vec<(f64, f64)>> {
    let mut rows = Vec::new();
    let mut first = true;
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        let parsed = match fields.as_slice() {
            [t, v] => t.parse::<f64>().ok().zip(v.parse::<f64>().ok()),
            _ => None,
        };
        match parsed {
            Some(row) => rows.push(row),
            None if first => {}
            None => {
                return Err(Error::InvalidInput(format!(
                    "table line {}: expected `t,value`, got `{line}`",
                    lineno + 1
                )))
            }
        }
        first = false;
    }
    Ok(rows)
}

/// Warping function of a model manifold.
#[derive(Debug, Clone, PartialEq)]
pub enum WarpingSpec {
    Euclidean,
    Hyperbolic,
    /// `t exp(∫ G)` for the configured growth function.
    Counterexample,
    Custom(FunctionSpec),
}

impl WarpingSpec {
    pub fn parse(text: &str) -> Self {
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        match compact.as_str() {
            "t" | "euclidean" | "flat" => Self::Euclidean,
            "sinh" | "sinh(t)" | "hyperbolic" => Self::Hyperbolic,
            "counterexample" => Self::Counterexample,
            _ => Self::Custom(FunctionSpec::parse(text)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_are_recognised() {
        assert_eq!(FunctionSpec::parse("(1 + t)^2").source, FunctionSource::Preset(Preset::Quadratic));
        assert_eq!(FunctionSpec::parse("2").source, FunctionSource::Preset(Preset::Constant(2.0)));
        assert_eq!(FunctionSpec::parse("1+t").source, FunctionSource::Preset(Preset::Linear));
        assert_eq!(FunctionSpec::parse("exp").source, FunctionSource::Preset(Preset::Exponential));
        assert_eq!(
            FunctionSpec::parse("1+t^2").source,
            FunctionSource::Expression("1+t^2".into())
        );
    }

    #[test]
    fn expressions_take_parameters() {
        let params = BTreeMap::from([("c".to_string(), 3.0)]);
        let f = FunctionSpec::parse("c*t").with_parameters(params).build(10.0).unwrap();
        assert_eq!(f.eval(2.0), 6.0);
        assert!(matches!(FunctionSpec::parse("1+*t").build(1.0), Err(Error::Parse(_))));
    }

    #[test]
    fn tables_skip_headers() {
        let rows = parse_table("t,G\n0,1\n# note\n1,2\n").unwrap();
        assert_eq!(rows, vec![(0.0, 1.0), (1.0, 2.0)]);
        assert!(parse_table("0,1\nx,y\n").is_err());
    }

    #[test]
    fn warpings() {
        assert_eq!(WarpingSpec::parse("sinh"), WarpingSpec::Hyperbolic);
        assert_eq!(WarpingSpec::parse("t"), WarpingSpec::Euclidean);
        assert!(matches!(WarpingSpec::parse("t*exp(t)"), WarpingSpec::Custom(_)));
    }
}
