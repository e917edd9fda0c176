//! `key = value` override files.
//!
//! Recognised keys: `tolerance`, `max_iterations`, `preconditioner`
//! (`jacobi` or `ilu0`), `bounds_min`, `bounds_max` (three comma- or
//! space-separated numbers). `#` starts a comment.

use std::path::Path;

use crate::error::HarnessError;
use crate::solver::PreconditionerKind;

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub tolerance: Option<f64>,
    pub max_iterations: Option<usize>,
    pub preconditioner: Option<PreconditionerKind>,
    pub bounds_min: Option<[f64; 3]>,
    pub bounds_max: Option<[f64; 3]>,
}

fn triple(key: &str, v: &str) -> Result<[f64; 3], HarnessError> {
    let parts: Vec<f64> = v
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| HarnessError::Config(format!("{key}: expected three numbers")))?;
    parts
        .try_into()
        .map_err(|_| HarnessError::Config(format!("{key}: expected three numbers")))
}

pub fn parse_overrides(text: &str) -> Result<Overrides, HarnessError> {
    let mut o = Overrides::default();
    for (k, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| HarnessError::Config(format!("line {}: expected key=value", k + 1)))?;
        let (key, value) = (key.trim(), value.trim());
        let num_err = || HarnessError::Config(format!("{key}: invalid value {value:?}"));
        match key {
            "tolerance" => o.tolerance = Some(value.parse().map_err(|_| num_err())?),
            "max_iterations" => o.max_iterations = Some(value.parse().map_err(|_| num_err())?),
            "preconditioner" => o.preconditioner = Some(PreconditionerKind::parse(value).ok_or_else(num_err)?),
            "bounds_min" => o.bounds_min = Some(triple(key, value)?),
            "bounds_max" => o.bounds_max = Some(triple(key, value)?),
            _ => return Err(HarnessError::Config(format!("unknown key {key:?}"))),
        }
    }
    Ok(o)
}

pub fn load_overrides(path: &Path) -> Result<Overrides, HarnessError> {
    parse_overrides(&std::fs::read_to_string(path)?)
}
