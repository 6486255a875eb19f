//! Timing runs over seeded samples.

use clap::ValueEnum;
use logbessel::batch::{bench, BenchReport};
use logbessel::{BatchMode, BatchRequest};
use serde::Serialize;

use crate::sampling::sample_points;
use crate::{CliError, Func, Region, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BenchMode {
    Naive,
    Sorted,
    Both,
}

impl BenchMode {
    fn modes(self) -> &'static [BatchMode] {
        match self {
            BenchMode::Naive => &[BatchMode::Naive],
            BenchMode::Sorted => &[BatchMode::MethodSorted],
            BenchMode::Both => &[BatchMode::Naive, BatchMode::MethodSorted],
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct BenchOptions {
    pub func: Func,
    pub region: Region,
    pub samples: usize,
    pub repeats: usize,
    pub mode: BenchMode,
    pub workers: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchOutput {
    pub func: Func,
    pub region: Region,
    pub samples: usize,
    pub seed: u64,
    /// One entry per timed mode, naive first.
    pub runs: Vec<BenchReport>,
}

pub fn run(opts: &BenchOptions) -> Result<BenchOutput> {
    if opts.samples == 0 {
        return Err(CliError::Usage("samples must be positive".into()));
    }
    let points = sample_points(opts.func, opts.region, opts.samples, opts.seed);
    let mut runs = Vec::new();
    for &mode in opts.mode.modes() {
        let req = BatchRequest {
            func: opts.func.kernel(),
            points: points.clone(),
            mode,
        };
        runs.push(bench(&req, opts.repeats, opts.workers).map_err(|e| CliError::Usage(e.to_string()))?);
    }
    Ok(BenchOutput {
        func: opts.func,
        region: opts.region,
        samples: opts.samples,
        seed: opts.seed,
        runs,
    })
}
