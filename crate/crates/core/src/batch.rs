//! Data-parallel evaluation of many `(v, x)` points.
//!
//! [`BatchMode::MethodSorted`] classifies every point with the reduced
//! branch set, stable-sorts the indices by route, evaluates each
//! route-homogeneous group in parallel, and scatters the values back to
//! input order. [`BatchMode::Naive`] maps the full scalar dispatch over the
//! points directly. Both modes compute every value independently, so the
//! output does not depend on the number of workers.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dispatch::{eval, route, BesselFn, LogValue, MethodKind};
use crate::error::BesselError;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvalPoint {
    pub v: f64,
    pub x: f64,
}

impl EvalPoint {
    pub fn new(v: f64, x: f64) -> Self {
        Self { v, x }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BatchMode {
    Naive,
    MethodSorted,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BatchRequest {
    pub func: BesselFn,
    pub points: Vec<EvalPoint>,
    pub mode: BatchMode,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BatchResult {
    /// One value per input point, in input order.
    pub values: Vec<LogValue>,
    pub group_sizes: BTreeMap<MethodKind, usize>,
    /// Evaluation time per route; only measured in sorted mode.
    pub group_times: BTreeMap<MethodKind, Duration>,
    /// Includes classification and sorting.
    pub wall_time: Duration,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BatchError {
    #[error("point {index} is outside the domain: {source}")]
    Domain { index: usize, source: BesselError },
    #[error("worker count must be positive")]
    NoWorkers,
    #[error("repeat count must be positive")]
    NoRepeats,
    #[error("failed to start worker pool: {0}")]
    Pool(String),
}

fn check_point(func: BesselFn, p: EvalPoint) -> Result<(), BesselError> {
    let v_ok = match func {
        BesselFn::LogIv => p.v.is_finite() && p.v >= 0.0,
        BesselFn::LogKv => p.v.is_finite(),
    };
    if !v_ok {
        return Err(BesselError::Order(p.v));
    }
    if !(p.x.is_finite() && p.x >= 0.0) {
        return Err(BesselError::Argument(p.x));
    }
    Ok(())
}

/// Index and error of the first point violating the domain, if any.
pub fn first_domain_error(func: BesselFn, points: &[EvalPoint]) -> Option<(usize, BesselError)> {
    points
        .iter()
        .enumerate()
        .find_map(|(i, &p)| check_point(func, p).err().map(|e| (i, e)))
}

fn pool(workers: usize) -> Result<rayon::ThreadPool, BatchError> {
    if workers == 0 {
        return Err(BatchError::NoWorkers);
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| BatchError::Pool(e.to_string()))
}

fn eval_point(func: BesselFn, p: EvalPoint, batch_mode: bool, index: usize) -> Result<LogValue, BatchError> {
    eval(func, p.v, p.x, batch_mode).map_err(|source| BatchError::Domain { index, source })
}

pub fn evaluate_batch(req: &BatchRequest, workers: usize) -> Result<BatchResult, BatchError> {
    let pool = pool(workers)?;
    pool.install(|| evaluate_in_pool(req))
}

fn evaluate_in_pool(req: &BatchRequest) -> Result<BatchResult, BatchError> {
    let start = Instant::now();
    if let Some((index, source)) = first_domain_error(req.func, &req.points) {
        return Err(BatchError::Domain { index, source });
    }
    let func = req.func;
    let mut group_times = BTreeMap::new();

    let values = match req.mode {
        BatchMode::Naive => req
            .points
            .par_iter()
            .enumerate()
            .map(|(i, &p)| eval_point(func, p, false, i))
            .collect::<Result<Vec<_>, _>>()?,
        BatchMode::MethodSorted => {
            let routes: Vec<MethodKind> = req
                .points
                .par_iter()
                .map(|p| route(func, p.v.abs(), p.x, true))
                .collect();
            let mut order: Vec<usize> = (0..req.points.len()).collect();
            order.sort_by_key(|&i| routes[i]);

            let mut sorted_values = Vec::with_capacity(order.len());
            for group in order.chunk_by(|&a, &b| routes[a] == routes[b]) {
                let t0 = Instant::now();
                let chunk = group
                    .par_iter()
                    .map(|&i| eval_point(func, req.points[i], true, i))
                    .collect::<Result<Vec<_>, _>>()?;
                group_times.insert(routes[group[0]], t0.elapsed());
                sorted_values.extend(chunk);
            }

            let mut values = vec![None; order.len()];
            for (&i, value) in order.iter().zip(sorted_values) {
                values[i] = Some(value);
            }
            values.into_iter().map(|v| v.expect("every index scattered")).collect()
        }
    };

    let mut group_sizes = BTreeMap::new();
    for v in &values {
        *group_sizes.entry(v.method).or_insert(0) += 1;
    }
    Ok(BatchResult {
        values,
        group_sizes,
        group_times,
        wall_time: start.elapsed(),
    })
}

/// Timing summary over repeated batch runs.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchReport {
    pub mode: BatchMode,
    pub points: usize,
    pub workers: usize,
    pub repeats: usize,
    pub timings_ms: Vec<f64>,
    pub mean_ms: f64,
    /// Sample standard deviation; 0 for a single run.
    pub stddev_ms: f64,
    pub group_sizes: BTreeMap<MethodKind, usize>,
    /// Points per second per route (sorted mode only), from the last run.
    pub group_throughput: BTreeMap<MethodKind, f64>,
    /// Points per second over the whole batch, from the mean time.
    pub throughput: f64,
}

pub fn bench(req: &BatchRequest, repeats: usize, workers: usize) -> Result<BenchReport, BatchError> {
    if repeats == 0 {
        return Err(BatchError::NoRepeats);
    }
    let pool = pool(workers)?;
    let mut timings_ms = Vec::with_capacity(repeats);
    let mut last = None;
    for _ in 0..repeats {
        let r = pool.install(|| evaluate_in_pool(req))?;
        timings_ms.push(r.wall_time.as_secs_f64() * 1e3);
        last = Some(r);
    }
    let last = last.expect("at least one repeat");
    let (mean_ms, stddev_ms) = mean_stddev(&timings_ms);
    let group_throughput = last
        .group_times
        .iter()
        .map(|(m, t)| {
            let n = last.group_sizes.get(m).copied().unwrap_or(0) as f64;
            (*m, n / t.as_secs_f64().max(f64::MIN_POSITIVE))
        })
        .collect();
    Ok(BenchReport {
        mode: req.mode,
        points: req.points.len(),
        workers,
        repeats,
        timings_ms,
        mean_ms,
        stddev_ms,
        group_sizes: last.group_sizes,
        group_throughput,
        throughput: req.points.len() as f64 / (mean_ms / 1e3).max(f64::MIN_POSITIVE),
    })
}

fn mean_stddev(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use MethodKind::*;

    fn four_points() -> Vec<EvalPoint> {
        [(1.0, 1500.0), (200.0, 10.0), (5.0, 5.0), (0.0, 0.0)]
            .iter()
            .map(|&(v, x)| EvalPoint::new(v, x))
            .collect()
    }

    fn run(mode: BatchMode, points: Vec<EvalPoint>) -> BatchResult {
        let req = BatchRequest {
            func: BesselFn::LogIv,
            points,
            mode,
        };
        evaluate_batch(&req, 2).unwrap()
    }

    #[test]
    fn naive_uses_full_branch_set() {
        let r = run(BatchMode::Naive, four_points());
        let methods: Vec<_> = r.values.iter().map(|v| v.method).collect();
        assert_eq!(methods, vec![Mu3, U4, SeriesI, SeriesI]);
        assert_eq!(r.group_sizes.values().sum::<usize>(), 4);
    }

    #[test]
    fn sorted_uses_reduced_branch_set() {
        let naive = run(BatchMode::Naive, four_points());
        let sorted = run(BatchMode::MethodSorted, four_points());
        let methods: Vec<_> = sorted.values.iter().map(|v| v.method).collect();
        assert_eq!(methods, vec![Mu20, U13, SeriesI, SeriesI]);
        for (a, b) in naive.values.iter().zip(&sorted.values) {
            if a.value == b.value {
                continue;
            }
            assert!(((a.value - b.value) / a.value).abs() <= 1e-12, "{a:?} {b:?}");
        }
        assert_eq!(sorted.group_sizes.get(&SeriesI), Some(&2));
    }

    #[test]
    fn empty_batch() {
        let r = run(BatchMode::MethodSorted, vec![]);
        assert!(r.values.is_empty());
        assert!(r.group_sizes.is_empty());
        let r = run(BatchMode::Naive, vec![]);
        assert!(r.values.is_empty());
    }

    #[test]
    fn fail_fast_reports_first_offender() {
        let mut points = four_points();
        points.push(EvalPoint::new(-1.0, 1.0));
        points.push(EvalPoint::new(1.0, -1.0));
        let req = BatchRequest {
            func: BesselFn::LogIv,
            points,
            mode: BatchMode::MethodSorted,
        };
        let err = evaluate_batch(&req, 1).unwrap_err();
        assert_eq!(
            err,
            BatchError::Domain {
                index: 4,
                source: BesselError::Order(-1.0)
            }
        );
    }

    #[test]
    fn negative_order_is_fine_for_k() {
        let req = BatchRequest {
            func: BesselFn::LogKv,
            points: vec![EvalPoint::new(-0.5, 1.0), EvalPoint::new(0.5, 1.0)],
            mode: BatchMode::MethodSorted,
        };
        let r = evaluate_batch(&req, 1).unwrap();
        assert_eq!(r.values[0], r.values[1]);
    }

    #[test]
    fn zero_workers_rejected() {
        let req = BatchRequest {
            func: BesselFn::LogIv,
            points: four_points(),
            mode: BatchMode::Naive,
        };
        assert_eq!(evaluate_batch(&req, 0), Err(BatchError::NoWorkers));
        assert_eq!(bench(&req, 0, 1).unwrap_err(), BatchError::NoRepeats);
    }

    #[test]
    fn bench_statistics() {
        assert_eq!(mean_stddev(&[3.0]), (3.0, 0.0));
        let (m, s) = mean_stddev(&[1.0, 2.0, 3.0]);
        assert_eq!(m, 2.0);
        assert!((s - 1.0).abs() < 1e-15);

        let req = BatchRequest {
            func: BesselFn::LogIv,
            points: four_points(),
            mode: BatchMode::MethodSorted,
        };
        let r = bench(&req, 1, 1).unwrap();
        assert_eq!(r.timings_ms.len(), 1);
        assert_eq!(r.stddev_ms, 0.0);
        let r = bench(&req, 3, 2).unwrap();
        assert_eq!(r.timings_ms.len(), 3);
        assert!(r.stddev_ms.is_finite());
    }
}
