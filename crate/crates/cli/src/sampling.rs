//! Seeded uniform sampling of evaluation points.
//!
//! The generator is ChaCha8 seeded with `ChaCha8Rng::seed_from_u64(seed)`,
//! which produces the same stream on every platform. Each point draws `v`
//! then `x`, both uniform on the closed region square.

use logbessel::EvalPoint;
use logbessel_oracle::k_order_supported;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::{Func, Region};

/// Bounds `(lo, hi)` of the region square for `func`.
pub fn bounds(func: Func, region: Region) -> (f64, f64) {
    match (region, func) {
        (Region::Small, _) => (0.0, 150.0),
        (Region::Large, Func::LogKv) => (150.0, 4000.0),
        (Region::Large, _) => (150.0, 10_000.0),
    }
}

/// `n` points for `func` in `region`. `log I_0` samples put `v = 0`;
/// `log K` samples skip `x = 0` and orders outside the oracle's fractional
/// range.
pub fn sample_points(func: Func, region: Region, n: usize, seed: u64) -> Vec<EvalPoint> {
    let (lo, hi) = bounds(func, region);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points = Vec::with_capacity(n);
    while points.len() < n {
        let v = rng.gen_range(lo..=hi);
        let x = rng.gen_range(lo..=hi);
        match func {
            Func::LogI0 => points.push(EvalPoint::new(0.0, x)),
            Func::LogIv => points.push(EvalPoint::new(v, x)),
            Func::LogKv => {
                if x > 0.0 && k_order_supported(v) {
                    points.push(EvalPoint::new(v, x));
                }
            }
        }
    }
    points
}
