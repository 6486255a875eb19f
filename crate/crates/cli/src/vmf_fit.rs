//! vMF concentration fitting from a feature file.
//!
//! CSV files hold one vector per row with no header; JSON-lines files hold
//! one array of reals per line. Blank lines are skipped in both.

use std::path::Path;

use logbessel::vmf::{fit_mle, UnitSample};
use serde::{Deserialize, Serialize};

use crate::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum FeatureFormat {
    Csv,
    Jsonl,
}

impl FeatureFormat {
    /// `.jsonl` and `.json` files are JSON lines, everything else CSV.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some("jsonl" | "json") => FeatureFormat::Jsonl,
            _ => FeatureFormat::Csv,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitOutput {
    pub p: usize,
    pub n: usize,
    pub r_bar: f64,
    pub kappa0: f64,
    pub kappa1: f64,
    pub kappa2: f64,
    pub kappa_mle: f64,
    pub loglik: f64,
    pub used_gradient: bool,
}

fn row_error(row: usize, message: String) -> CliError {
    CliError::Row { row, message }
}

pub fn parse_features(text: &str, format: FeatureFormat) -> Result<Vec<Vec<f64>>> {
    let mut vectors = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let row = i + 1;
        let vector = match format {
            FeatureFormat::Jsonl => serde_json::from_str::<Vec<f64>>(line).map_err(|e| row_error(row, e.to_string()))?,
            FeatureFormat::Csv => line
                .split(',')
                .map(|s| {
                    let s = s.trim();
                    s.parse::<f64>().map_err(|_| row_error(row, format!("`{s}` is not a number")))
                })
                .collect::<Result<_>>()?,
        };
        vectors.push(vector);
    }
    Ok(vectors)
}

/// Loads and fits. The second value is the number of vectors whose norm
/// was off by more than the loader tolerance.
pub fn fit_text(text: &str, format: FeatureFormat, use_gradient: bool) -> Result<(FitOutput, usize)> {
    let sample = UnitSample::new(parse_features(text, format)?)?;
    let fit = fit_mle(&sample, use_gradient, 1e-12)?;
    let out = FitOutput {
        p: sample.dim(),
        n: sample.len(),
        r_bar: fit.r_bar,
        kappa0: fit.kappa0,
        kappa1: fit.kappa1,
        kappa2: fit.kappa2,
        kappa_mle: fit.kappa_mle,
        loglik: fit.loglik_at_mle,
        used_gradient: fit.used_gradient,
    };
    Ok((out, sample.renormalized()))
}
