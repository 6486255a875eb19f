//! Fast path against the arbitrary-precision oracle.

use logbessel::EvalPoint;
use logbessel_oracle::{oracle_log_iv, oracle_log_kv, OracleConfig};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::eval::evaluate;
use crate::sampling::sample_points;
use crate::{relative_error, CliError, Func, Region, Result};

/// Summary of one precision run. Errors are taken over points where both
/// the fast path and the oracle returned finite values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PrecisionReport {
    pub region: Region,
    pub func: Func,
    pub n: usize,
    /// Fraction of fast-path outputs that are finite.
    pub robustness: f64,
    pub median_rel_err: f64,
    pub max_rel_err: f64,
    pub oracle_failures: usize,
}

#[derive(Debug, Clone, Copy)]
pub struct PrecisionOptions {
    pub func: Func,
    pub region: Region,
    pub samples: usize,
    pub seed: u64,
    pub oracle_bits: u32,
    /// Series length limit passed to the oracle.
    pub oracle_max_terms: usize,
    pub workers: usize,
}

fn oracle(func: Func, p: EvalPoint, cfg: &OracleConfig) -> Option<f64> {
    let r = match func {
        Func::LogIv | Func::LogI0 => oracle_log_iv(p.v, p.x, cfg),
        Func::LogKv => oracle_log_kv(p.v, p.x, cfg),
    };
    r.ok().filter(|y| y.is_finite())
}

pub fn measure(opts: &PrecisionOptions) -> Result<PrecisionReport> {
    if opts.samples == 0 {
        return Err(CliError::Usage("samples must be positive".into()));
    }
    if opts.workers == 0 {
        return Err(CliError::Usage("workers must be positive".into()));
    }
    if opts.oracle_bits < logbessel_oracle::MIN_MANTISSA_BITS {
        return Err(CliError::Usage(format!(
            "oracle bits must be at least {}",
            logbessel_oracle::MIN_MANTISSA_BITS
        )));
    }
    let cfg = OracleConfig {
        max_terms: opts.oracle_max_terms,
        ..OracleConfig::with_bits(opts.oracle_bits)
    };
    let points = sample_points(opts.func, opts.region, opts.samples, opts.seed);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.workers)
        .build()
        .map_err(|e| CliError::Usage(e.to_string()))?;

    // (fast value finite, relative error if the oracle answered)
    let rows: Vec<(bool, Option<f64>)> = pool.install(|| {
        points
            .par_iter()
            .map(|&p| {
                let fast = evaluate(opts.func, p.v, p.x).map(|r| r.value).unwrap_or(f64::NAN);
                let finite = fast.is_finite();
                let err = oracle(opts.func, p, &cfg).map(|want| if finite { relative_error(fast, want) } else { f64::NAN });
                (finite, err)
            })
            .collect()
    });

    let finite = rows.iter().filter(|r| r.0).count();
    let oracle_failures = rows.iter().filter(|r| r.1.is_none()).count();
    let mut errors: Vec<f64> = rows.iter().filter_map(|r| r.1).filter(|e| e.is_finite()).collect();
    errors.sort_by(f64::total_cmp);
    let (median, max) = match errors.len() {
        0 => (0.0, 0.0),
        n if n % 2 == 1 => (errors[n / 2], errors[n - 1]),
        n => (0.5 * (errors[n / 2 - 1] + errors[n / 2]), errors[n - 1]),
    };
    Ok(PrecisionReport {
        region: opts.region,
        func: opts.func,
        n: points.len(),
        robustness: finite as f64 / points.len() as f64,
        median_rel_err: median,
        max_rel_err: max,
        oracle_failures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_i_report() {
        let opts = PrecisionOptions {
            func: Func::LogIv,
            region: Region::Small,
            samples: 200,
            seed: 1,
            oracle_bits: 256,
            oracle_max_terms: 100_000,
            workers: 1,
        };
        let r = measure(&opts).unwrap();
        assert_eq!(r.n, 200);
        assert_eq!(r.robustness, 1.0);
        assert_eq!(r.oracle_failures, 0);
        assert!(r.median_rel_err <= r.max_rel_err && r.max_rel_err <= 1e-12);
        assert_eq!(measure(&opts).unwrap(), r);
    }
}
