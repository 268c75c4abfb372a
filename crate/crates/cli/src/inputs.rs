//! Resolution of `--ineq`, `--vectors`, `--point` and coefficient arguments.

use std::fs;

use bellbound_core::inequality::{chsh, triangle, PairwiseInequality};
use bellbound_core::quantum::{bouquet, chsh_directions, planar_star, UnitVectorConfig};
use bellbound_core::webs::{clique_web_inequality, WebSpec};
use serde::Deserialize;

use crate::CliError;

fn read(path: &str) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Input(format!("cannot read '{path}': {e}")))
}

fn parse_json<T: for<'de> Deserialize<'de>>(path: &str) -> Result<T, CliError> {
    serde_json::from_str(&read(path)?)
        .map_err(|e| CliError::Input(format!("'{path}' is not valid: {e}")))
}

fn numbers<T: std::str::FromStr>(text: &str, count: usize, what: &str) -> Result<Vec<T>, CliError> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    if parts.len() != count {
        return Err(CliError::Usage(format!(
            "{what} expects {count} comma-separated values, got '{text}'"
        )));
    }
    parts
        .iter()
        .map(|p| {
            p.parse()
                .map_err(|_| CliError::Usage(format!("bad number '{p}' in {what}")))
        })
        .collect()
}

/// `chsh`, `triangle`, `cliqueweb:p,q,r`, or a path to an inequality file.
pub fn inequality(arg: &str) -> Result<PairwiseInequality, CliError> {
    match arg {
        "chsh" => Ok(chsh()),
        "triangle" => Ok(triangle()),
        _ => match arg.strip_prefix("cliqueweb:") {
            Some(rest) => {
                let v: Vec<usize> = numbers(rest, 3, "cliqueweb:p,q,r")?;
                Ok(clique_web_inequality(&WebSpec::new(v[0], v[1], v[2])?))
            }
            None => parse_json(arg),
        },
    }
}

/// `chsh`, `star:N`, `bouquet:p,q,theta`, or a path to a vector file.
pub fn vectors(arg: &str) -> Result<UnitVectorConfig, CliError> {
    if arg == "chsh" {
        return Ok(chsh_directions());
    }
    if let Some(rest) = arg.strip_prefix("star:") {
        let n: Vec<usize> = numbers(rest, 1, "star:N")?;
        return Ok(planar_star(n[0]));
    }
    if let Some(rest) = arg.strip_prefix("bouquet:") {
        let v: Vec<f64> = numbers(rest, 3, "bouquet:p,q,theta")?;
        if v[0].fract() != 0.0 || v[1].fract() != 0.0 || v[0] < 1.0 || v[1] < 1.0 {
            return Err(CliError::Usage(format!(
                "bouquet sizes must be positive integers in '{arg}'"
            )));
        }
        return Ok(bouquet(v[0] as usize, v[1] as usize, v[2])?);
    }
    parse_json(arg)
}

#[derive(Deserialize)]
#[serde(untagged)]
enum PointFile {
    Bare(Vec<f64>),
    Wrapped { point: Vec<f64> },
}

/// A JSON array of coordinates, or `{"point": [...]}`.
pub fn point(path: &str) -> Result<Vec<f64>, CliError> {
    Ok(match parse_json::<PointFile>(path)? {
        PointFile::Bare(p) | PointFile::Wrapped { point: p } => p,
    })
}

#[derive(Deserialize)]
pub struct CoefficientFile {
    pub coefficients: Vec<f64>,
    pub rhs: f64,
}

/// `{"coefficients": [...], "rhs": r}` in polytope coordinates.
pub fn coefficients(path: &str) -> Result<CoefficientFile, CliError> {
    parse_json(path)
}
