#![allow(dead_code)]

use logbessel::vmf::UnitSample;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform points in `[lo, hi]²`, optionally excluding `x = 0`.
pub fn square(rng: &mut ChaCha8Rng, n: usize, lo: f64, hi: f64, positive_x: bool) -> Vec<(f64, f64)> {
    (0..n)
        .map(|_| loop {
            let v = rng.gen_range(lo..=hi);
            let x = rng.gen_range(lo..=hi);
            if !positive_x || x > 0.0 {
                break (v, x);
            }
        })
        .collect()
}

/// Unit vectors `R̄ e₁ + √(1−R̄²) w` with the `w ⊥ e₁` drawn in `±` pairs,
/// so the sample mean is `R̄ e₁` up to rounding.
pub fn synthetic_sample(p: usize, r_bar: f64, pairs: usize, seed: u64) -> UnitSample {
    let mut rng = rng(seed);
    let side = (1.0 - r_bar * r_bar).sqrt();
    let mut vectors = Vec::with_capacity(2 * pairs);
    for _ in 0..pairs {
        let mut w: Vec<f64> = (0..p).map(|_| rng.gen_range(-1.0..1.0)).collect();
        w[0] = 0.0;
        let norm = w.iter().map(|c| c * c).sum::<f64>().sqrt();
        for sign in [1.0, -1.0] {
            let mut x: Vec<f64> = w.iter().map(|c| sign * side * c / norm).collect();
            x[0] = r_bar;
            vectors.push(x);
        }
    }
    UnitSample::new(vectors).expect("synthetic sample is valid")
}

pub fn rel(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        ((a - b) / b).abs()
    }
}

pub fn median(xs: &mut [f64]) -> f64 {
    xs.sort_by(|a, b| a.partial_cmp(b).expect("no NaN"));
    let n = xs.len();
    if n % 2 == 1 {
        xs[n / 2]
    } else {
        0.5 * (xs[n / 2 - 1] + xs[n / 2])
    }
}
