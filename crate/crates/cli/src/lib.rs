//! Command implementations behind the `logbessel` binary.
//!
//! Every command writes its primary output to a caller-supplied writer and
//! reports failures as [`CliError`], which maps onto the process exit code.

pub mod bench;
pub mod eval;
pub mod io;
pub mod precision;
pub mod sampling;
pub mod vmf_fit;

use clap::ValueEnum;
use logbessel::{BesselError, BesselFn};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Domain(#[from] BesselError),
    #[error("row {row}: {message}")]
    Row { row: usize, message: String },
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Vmf(#[from] logbessel::vmf::VmfError),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{0}")]
    Output(#[from] std::io::Error),
    /// Carries the already-written report's failure count.
    #[error("{failures} oracle failures exceed the limit of {limit}")]
    OracleFailures { failures: usize, limit: usize },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::OracleFailures { .. } => 3,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;

/// Function selector shared by the commands.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Func {
    #[value(name = "logiv")]
    LogIv,
    #[value(name = "logkv")]
    LogKv,
    /// `log I_0(x)`; the order is fixed at 0.
    #[value(name = "logi0")]
    LogI0,
}

impl Func {
    pub fn kernel(self) -> BesselFn {
        match self {
            Func::LogIv | Func::LogI0 => BesselFn::LogIv,
            Func::LogKv => BesselFn::LogKv,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Region {
    Small,
    Large,
}

/// Seventeen significant digits, enough to round-trip any `f64`.
pub fn format_value(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        x.to_string()
    }
}

pub(crate) fn relative_error(got: f64, want: f64) -> f64 {
    if got == want {
        0.0
    } else {
        ((got - want) / want).abs()
    }
}
