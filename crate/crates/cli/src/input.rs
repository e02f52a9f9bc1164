//! Density input: inline literals, a key-value config file, or the default
//! triple.

use std::fs;
use std::path::Path;

use tripart::partition::DensityTriple;
use tripart::qfield::QuadExpr;
use tripart::webster::Density;

use crate::CliError;

pub const DEFAULT_ALPHA: &str = "sqrt(2)/4";
pub const DEFAULT_BETA: &str = "sqrt(3)/8";

/// The two density literals; gamma is always derived.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TripleSpec {
    pub alpha: String,
    pub beta: String,
}

impl TripleSpec {
    /// Inline values override the config file; with neither, the default
    /// triple is used.
    pub fn resolve(alpha: Option<String>, beta: Option<String>, config: Option<&Path>) -> Result<Self, CliError> {
        let (mut a, mut b) = match config {
            Some(path) => read_config(path)?,
            None => (None, None),
        };
        a = alpha.or(a);
        b = beta.or(b);
        match (a, b) {
            (Some(alpha), Some(beta)) => Ok(TripleSpec { alpha, beta }),
            (None, None) => Ok(TripleSpec { alpha: DEFAULT_ALPHA.into(), beta: DEFAULT_BETA.into() }),
            (Some(_), None) => Err(CliError::input("beta is missing")),
            (None, Some(_)) => Err(CliError::input("alpha is missing")),
        }
    }

    pub fn parse(&self) -> Result<(QuadExpr, QuadExpr), CliError> {
        let lit = |name: &str, s: &str| {
            s.parse::<QuadExpr>().map_err(|e| CliError::input(format!("cannot parse {name} = {s:?}: {e}")))
        };
        Ok((lit("alpha", &self.alpha)?, lit("beta", &self.beta)?))
    }

    pub fn triple(&self) -> Result<DensityTriple, CliError> {
        let (a, b) = self.parse()?;
        DensityTriple::new(a, b).map_err(|e| CliError::Triple { clause: e.clause(), detail: e.to_string() })
    }

    /// A triple that may violate the ordering conditions.
    pub fn relaxed(&self) -> Result<DensityTriple, CliError> {
        let (a, b) = self.parse()?;
        DensityTriple::relaxed(a, b).map_err(|e| CliError::Triple { clause: e.clause(), detail: e.to_string() })
    }

    /// The two densities on their own, with no condition tying them.
    pub fn pair(&self) -> Result<(Density, Density), CliError> {
        let (a, b) = self.parse()?;
        let d = |name: &str, x: QuadExpr| {
            Density::new(x)
                .map_err(|e| CliError::Triple { clause: "0 < x < 1, x irrational", detail: format!("{name}: {e}") })
        };
        Ok((d("alpha", a)?, d("beta", b)?))
    }
}

/// Lines of `key = value`; blank lines and `#` comments are skipped.
fn read_config(path: &Path) -> Result<(Option<String>, Option<String>), CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::input(format!("cannot read {}: {e}", path.display())))?;
    parse_config(&text)
}

pub fn parse_config(text: &str) -> Result<(Option<String>, Option<String>), CliError> {
    let (mut alpha, mut beta) = (None, None);
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| CliError::input(format!("config line {}: expected key = value", i + 1)))?;
        let value = value.trim().to_string();
        match key.trim() {
            "alpha" => alpha = Some(value),
            "beta" => beta = Some(value),
            "gamma" => return Err(CliError::input("gamma is derived as 1 - alpha - beta and cannot be set")),
            other => return Err(CliError::input(format!("config line {}: unknown key {other:?}", i + 1))),
        }
    }
    Ok((alpha, beta))
}
