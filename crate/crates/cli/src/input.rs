use std::path::{Path, PathBuf};

use clap::Args;
use fgs_core::{FiniteGapSet, PeriodicJacobi, RealPolynomial};
use serde::de::DeserializeOwned;

use crate::CliError;

/// Comma-separated reals, e.g. `-2,-1,1,2`.
#[derive(Debug, Clone, PartialEq)]
pub struct List(pub Vec<f64>);

pub fn parse_list(s: &str) -> Result<List, String> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| format!("'{t}' is not a number"))
        })
        .collect::<Result<Vec<_>, _>>()
        .map(List)
}

/// `auto` or comma-separated ascending coefficients.
#[derive(Debug, Clone, PartialEq)]
pub enum PolyChoice {
    Auto,
    Coeffs(Vec<f64>),
}

pub fn parse_poly(s: &str) -> Result<PolyChoice, String> {
    if s.eq_ignore_ascii_case("auto") {
        Ok(PolyChoice::Auto)
    } else {
        parse_list(s).map(|l| PolyChoice::Coeffs(l.0))
    }
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("--in {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| match e.classify() {
        serde_json::error::Category::Data => {
            CliError::Domain(format!("--in {}: {e}", path.display()))
        }
        _ => CliError::Usage(format!("--in {}: {e}", path.display())),
    })
}

#[derive(Debug, Clone, Args)]
pub struct SetInput {
    /// JSON file {"edges": [...]}
    #[arg(long = "in", value_name = "FILE", conflicts_with = "edges")]
    pub input: Option<PathBuf>,
    /// Ascending band edges
    #[arg(long, value_name = "LIST", allow_hyphen_values = true, value_parser = parse_list)]
    pub edges: Option<List>,
}

impl SetInput {
    pub fn load(&self) -> Result<FiniteGapSet, CliError> {
        match (&self.input, &self.edges) {
            (Some(path), _) => read_json(path),
            (None, Some(List(e))) => Ok(FiniteGapSet::new(e.clone())?),
            (None, None) => Err(CliError::Usage("one of --in or --edges is required".into())),
        }
    }

    pub fn given(&self) -> bool {
        self.input.is_some() || self.edges.is_some()
    }
}

#[derive(Debug, Clone, Args)]
pub struct JacobiInput {
    /// JSON file {"period": p, "a": [...], "b": [...]}
    #[arg(long = "in", value_name = "FILE", conflicts_with_all = ["a", "b", "dso"])]
    pub input: Option<PathBuf>,
    /// Off-diagonal coefficients over one period
    #[arg(long, value_name = "LIST", allow_hyphen_values = true, value_parser = parse_list)]
    pub a: Option<List>,
    /// Diagonal coefficients (the potential with --dso)
    #[arg(long, value_name = "LIST", allow_hyphen_values = true, value_parser = parse_list)]
    pub b: Option<List>,
    /// Discrete Schrodinger operator: a = 1
    #[arg(long, conflicts_with = "a")]
    pub dso: bool,
}

impl JacobiInput {
    pub fn load(&self) -> Result<PeriodicJacobi, CliError> {
        if let Some(path) = &self.input {
            return read_json(path);
        }
        let b = match &self.b {
            Some(List(b)) => b.clone(),
            None => return Err(CliError::Usage("--b is required without --in".into())),
        };
        if self.dso {
            return Ok(PeriodicJacobi::dso(b)?);
        }
        match &self.a {
            Some(List(a)) => Ok(PeriodicJacobi::new(a.clone(), b)?),
            None => Err(CliError::Usage(
                "--a is required unless --dso is given".into(),
            )),
        }
    }
}

pub fn poly_from(choice: &PolyChoice) -> Result<RealPolynomial, CliError> {
    match choice {
        PolyChoice::Auto => unreachable!("auto is resolved by the caller"),
        PolyChoice::Coeffs(c) => {
            let p = RealPolynomial::new(c.clone());
            if !p.is_monic() || p.degree() < 1 {
                return Err(CliError::Usage(
                    "--poly must list ascending coefficients of a monic polynomial of degree >= 1"
                        .into(),
                ));
            }
            Ok(p)
        }
    }
}
