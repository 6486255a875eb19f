//! von Mises-Fisher distribution on the unit sphere `S^{p-1}`.
//!
//! The density is `f(x) = C_p(κ) exp(κ μᵀx)` with
//! `C_p(κ) = κ^{p/2-1} / ((2π)^{p/2} I_{p/2-1}(κ))`. For a sample the mean
//! log-likelihood depends on the data only through `R̄ = ‖x̄‖`, so every
//! estimator here also has an entry point taking `(p, R̄)` directly.
//!
//! The concentration estimates are Sra's closed form
//! `κ̂₀ = R̄(p − R̄²)/(1 − R̄²)` and its Newton refinements on
//! `A_p(κ) = R̄`, where `A_p(κ) = I_{p/2}(κ)/I_{p/2-1}(κ)`.

use thiserror::Error;

use crate::dd::Dd;
use crate::dispatch::{log_iv_dd, log_iv_difference};
use crate::error::BesselError;

/// Inputs whose norm differs from 1 by more than this are counted as
/// renormalized.
pub const NORM_TOLERANCE: f64 = 1e-8;

/// Iteration limit for [`fit_mle`].
pub const MAX_ITERATIONS: usize = 200;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum VmfError {
    #[error("sample is empty")]
    Empty,
    #[error("dimension must be at least 2, got {0}")]
    Dimension(usize),
    #[error("vector {index} has {found} components, expected {expected}")]
    Ragged {
        index: usize,
        expected: usize,
        found: usize,
    },
    #[error("vector {0} has a non-finite component")]
    NonFinite(usize),
    #[error("vector {0} is zero and has no direction")]
    ZeroVector(usize),
    #[error("mean resultant length {0} is outside (0, 1)")]
    Resultant(f64),
    #[error("concentration {0} must be non-negative")]
    Kappa(f64),
    #[error("mean direction dimension {found} does not match the sample ({expected})")]
    Direction { expected: usize, found: usize },
    #[error(transparent)]
    Bessel(#[from] BesselError),
    #[error("optimizer did not converge in {iterations} iterations; best κ = {best}")]
    NoConvergence { best: f64, iterations: usize },
}

pub type Result<T> = std::result::Result<T, VmfError>;

/// Non-empty set of unit vectors of a common dimension `p >= 2`.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitSample {
    dim: usize,
    vectors: Vec<Vec<f64>>,
    renormalized: usize,
}

impl UnitSample {
    /// Normalizes every vector to unit length. Zero or non-finite vectors
    /// are rejected.
    pub fn new(mut vectors: Vec<Vec<f64>>) -> Result<Self> {
        let dim = vectors.first().ok_or(VmfError::Empty)?.len();
        if dim < 2 {
            return Err(VmfError::Dimension(dim));
        }
        let mut renormalized = 0;
        for (index, vec) in vectors.iter_mut().enumerate() {
            if vec.len() != dim {
                return Err(VmfError::Ragged {
                    index,
                    expected: dim,
                    found: vec.len(),
                });
            }
            if vec.iter().any(|c| !c.is_finite()) {
                return Err(VmfError::NonFinite(index));
            }
            let norm = euclidean_norm(vec);
            if norm == 0.0 {
                return Err(VmfError::ZeroVector(index));
            }
            if (norm - 1.0).abs() > NORM_TOLERANCE {
                renormalized += 1;
            }
            vec.iter_mut().for_each(|c| *c /= norm);
        }
        Ok(Self {
            dim,
            vectors,
            renormalized,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn vectors(&self) -> &[Vec<f64>] {
        &self.vectors
    }

    /// How many input vectors were off the unit sphere by more than
    /// [`NORM_TOLERANCE`].
    pub fn renormalized(&self) -> usize {
        self.renormalized
    }

    /// Component-wise mean `x̄`.
    pub fn mean(&self) -> Vec<f64> {
        let n = self.vectors.len() as f64;
        let mut sum = vec![0.0; self.dim];
        for vec in &self.vectors {
            for (s, c) in sum.iter_mut().zip(vec) {
                *s += c;
            }
        }
        sum.iter_mut().for_each(|s| *s /= n);
        sum
    }
}

fn euclidean_norm(v: &[f64]) -> f64 {
    // scaled to avoid overflow for huge unnormalized inputs
    let scale = v.iter().fold(0.0f64, |m, c| m.max(c.abs()));
    if scale == 0.0 {
        return 0.0;
    }
    scale * v.iter().map(|c| (c / scale).powi(2)).sum::<f64>().sqrt()
}

/// `μ = x̄/R̄` and `R̄ = ‖x̄‖`.
pub fn mean_direction(sample: &UnitSample) -> Result<(Vec<f64>, f64)> {
    let mut mean = sample.mean();
    let r_bar = euclidean_norm(&mean);
    if r_bar == 0.0 {
        return Err(VmfError::Resultant(0.0));
    }
    mean.iter_mut().for_each(|c| *c /= r_bar);
    Ok((mean, r_bar))
}

fn check_dim(p: usize) -> Result<()> {
    if p < 2 {
        return Err(VmfError::Dimension(p));
    }
    Ok(())
}

fn check_r_bar(r_bar: f64) -> Result<()> {
    if !(r_bar > 0.0 && r_bar < 1.0) {
        return Err(VmfError::Resultant(r_bar));
    }
    Ok(())
}

fn check_kappa(kappa: f64) -> Result<()> {
    if !(kappa.is_finite() && kappa >= 0.0) {
        return Err(VmfError::Kappa(kappa));
    }
    Ok(())
}

/// `A_p(κ) = I_{p/2}(κ) / I_{p/2-1}(κ)`; 0 at `κ = 0`.
pub fn a_p_ratio(p: usize, kappa: f64) -> Result<f64> {
    check_dim(p)?;
    check_kappa(kappa)?;
    if kappa == 0.0 {
        return Ok(0.0);
    }
    let half = p as f64 / 2.0;
    Ok(log_iv_difference(half, half - 1.0, kappa)?.exp())
}

/// `F(κ) = κ − (A_p(κ) − R̄) / (1 − A_p(κ)² − (p−1) A_p(κ)/κ)`.
pub fn newton_step(p: usize, r_bar: f64, kappa: f64) -> Result<f64> {
    let a = a_p_ratio(p, kappa)?;
    Ok(kappa - (a - r_bar) / a_p_derivative(p, kappa, a))
}

/// `A_p'(κ) = 1 − A² − (p−1)A/κ`.
fn a_p_derivative(p: usize, kappa: f64, a: f64) -> f64 {
    1.0 - a * a - (p as f64 - 1.0) * a / kappa
}

/// Closed-form estimate and its one- and two-step Newton refinements.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KappaEstimates {
    pub kappa0: f64,
    pub kappa1: f64,
    pub kappa2: f64,
}

pub fn kappa_estimates(p: usize, r_bar: f64) -> Result<KappaEstimates> {
    check_dim(p)?;
    check_r_bar(r_bar)?;
    let r2 = r_bar * r_bar;
    let kappa0 = r_bar * (p as f64 - r2) / (1.0 - r2);
    let kappa1 = newton_step(p, r_bar, kappa0)?;
    let kappa2 = newton_step(p, r_bar, kappa1)?;
    Ok(KappaEstimates {
        kappa0,
        kappa1,
        kappa2,
    })
}

/// Mean log-likelihood from sufficient statistics, where `mean_dot` is
/// `μᵀx̄` (equal to `R̄` at the estimated mean direction).
pub fn log_likelihood(p: usize, mean_dot: f64, kappa: f64) -> Result<f64> {
    check_dim(p)?;
    check_kappa(kappa)?;
    let nu = p as f64 / 2.0 - 1.0;
    let half_p = Dd::new(p as f64 / 2.0);
    let two_pi = Dd::new(2.0) * Dd::PI;
    // ν log κ − log I_ν(κ), finite as κ → 0
    let norm = if kappa == 0.0 {
        Dd::new(nu) * Dd::LN_2 + Dd::new(libm::lgamma(nu + 1.0))
    } else if nu == 0.0 {
        -log_iv_dd(0.0, kappa)?
    } else {
        Dd::new(nu) * Dd::new(kappa).ln() - log_iv_dd(nu, kappa)?
    };
    let total = norm - half_p * two_pi.ln() + Dd::new(kappa) * Dd::new(mean_dot);
    Ok(total.to_f64())
}

/// Mean log-likelihood of `sample` under `(μ, κ)`.
pub fn sample_log_likelihood(sample: &UnitSample, mu: &[f64], kappa: f64) -> Result<f64> {
    if mu.len() != sample.dim() {
        return Err(VmfError::Direction {
            expected: sample.dim(),
            found: mu.len(),
        });
    }
    let mean_dot = sample.mean().iter().zip(mu).map(|(a, b)| a * b).sum();
    log_likelihood(sample.dim(), mean_dot, kappa)
}

/// `d logLik / dκ = R̄ − A_p(κ)`.
pub fn log_likelihood_gradient(p: usize, r_bar: f64, kappa: f64) -> Result<f64> {
    Ok(r_bar - a_p_ratio(p, kappa)?)
}

#[derive(Debug, Clone, PartialEq)]
pub struct VmfFit {
    pub mu: Vec<f64>,
    pub r_bar: f64,
    pub kappa0: f64,
    pub kappa1: f64,
    pub kappa2: f64,
    pub kappa_mle: f64,
    pub loglik_at_mle: f64,
    pub used_gradient: bool,
    pub iterations: usize,
}

/// Fits `κ` by maximizing the log-likelihood with `μ` fixed at its
/// closed-form estimate.
pub fn fit_mle(sample: &UnitSample, use_gradient: bool, tol: f64) -> Result<VmfFit> {
    let (mu, r_bar) = mean_direction(sample)?;
    let fit = fit_stats(sample.dim(), r_bar, use_gradient, tol)?;
    Ok(VmfFit {
        mu,
        r_bar,
        kappa0: fit.estimates.kappa0,
        kappa1: fit.estimates.kappa1,
        kappa2: fit.estimates.kappa2,
        kappa_mle: fit.kappa_mle,
        loglik_at_mle: fit.loglik_at_mle,
        used_gradient: use_gradient,
        iterations: fit.iterations,
    })
}

/// Concentration fit from sufficient statistics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StatsFit {
    pub estimates: KappaEstimates,
    pub kappa_mle: f64,
    pub loglik_at_mle: f64,
    pub iterations: usize,
}

/// [`fit_mle`] from `(p, R̄)`.
pub fn fit_stats(p: usize, r_bar: f64, use_gradient: bool, tol: f64) -> Result<StatsFit> {
    let estimates = kappa_estimates(p, r_bar)?;
    let hi = 10.0 * estimates.kappa0;
    let (kappa_mle, iterations) = if use_gradient {
        solve_stationary(p, r_bar, estimates.kappa0, hi, tol)?
    } else {
        brent_minimize(|k| log_likelihood(p, r_bar, k).map(|l| -l), 0.0, hi, tol)?
    };
    Ok(StatsFit {
        estimates,
        kappa_mle,
        loglik_at_mle: log_likelihood(p, r_bar, kappa_mle)?,
        iterations,
    })
}

/// Root of `R̄ − A_p(κ)` on `[0, hi]` by Newton steps kept inside a
/// shrinking bracket, falling back to bisection.
fn solve_stationary(p: usize, r_bar: f64, start: f64, hi: f64, tol: f64) -> Result<(f64, usize)> {
    // g(0) = R̄ > 0 and g decreases, so the bracket is [lo, hi] with g(lo) > 0 > g(hi)
    let mut lo = 0.0;
    let mut hi = hi;
    let mut kappa = start.clamp(lo, hi);
    let mut best = kappa;
    let mut best_g = f64::INFINITY;
    for iter in 1..=MAX_ITERATIONS {
        let a = a_p_ratio(p, kappa)?;
        let g = r_bar - a;
        if g.abs() < best_g {
            best_g = g.abs();
            best = kappa;
        }
        if g.abs() <= tol {
            return Ok((kappa, iter));
        }
        if g > 0.0 {
            lo = kappa;
        } else {
            hi = kappa;
        }
        let slope = a_p_derivative(p, kappa, a);
        let newton = kappa + g / slope;
        let next = if slope > 0.0 && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        if (next - kappa).abs() <= tol * kappa.max(1.0) {
            return Ok((next, iter));
        }
        kappa = next;
    }
    Err(VmfError::NoConvergence {
        best,
        iterations: MAX_ITERATIONS,
    })
}

/// Brent's derivative-free minimization on `[a, b]`.
fn brent_minimize<F>(mut f: F, a: f64, b: f64, tol: f64) -> Result<(f64, usize)>
where
    F: FnMut(f64) -> Result<f64>,
{
    const GOLDEN: f64 = 0.381_966_011_250_105_1;
    let (mut a, mut b) = (a, b);
    let mut x = a + GOLDEN * (b - a);
    let (mut w, mut v) = (x, x);
    let mut fx = f(x)?;
    let (mut fw, mut fv) = (fx, fx);
    let mut d: f64 = 0.0;
    let mut e: f64 = 0.0;
    let eps = f64::EPSILON.sqrt();

    for iter in 1..=MAX_ITERATIONS {
        let mid = 0.5 * (a + b);
        let tol1 = eps * x.abs() + tol / 3.0;
        let tol2 = 2.0 * tol1;
        if (x - mid).abs() <= tol2 - 0.5 * (b - a) {
            return Ok((x, iter));
        }
        let mut golden = true;
        if e.abs() > tol1 {
            // parabola through (v, fv), (w, fw), (x, fx)
            let r = (x - w) * (fx - fv);
            let mut q = (x - v) * (fx - fw);
            let mut p = (x - v) * q - (x - w) * r;
            q = 2.0 * (q - r);
            if q > 0.0 {
                p = -p;
            }
            q = q.abs();
            if p.abs() < (0.5 * q * e).abs() && p > q * (a - x) && p < q * (b - x) {
                e = d;
                d = p / q;
                let u = x + d;
                if u - a < tol2 || b - u < tol2 {
                    d = tol1.copysign(mid - x);
                }
                golden = false;
            }
        }
        if golden {
            e = if x >= mid { a - x } else { b - x };
            d = GOLDEN * e;
        }
        let u = if d.abs() >= tol1 { x + d } else { x + tol1.copysign(d) };
        let fu = f(u)?;
        if fu <= fx {
            if u >= x {
                a = x;
            } else {
                b = x;
            }
            (v, fv) = (w, fw);
            (w, fw) = (x, fx);
            (x, fx) = (u, fu);
        } else {
            if u < x {
                a = u;
            } else {
                b = u;
            }
            if fu <= fw || w == x {
                (v, fv) = (w, fw);
                (w, fw) = (u, fu);
            } else if fu <= fv || v == x || v == w {
                (v, fv) = (u, fu);
            }
        }
    }
    Err(VmfError::NoConvergence {
        best: x,
        iterations: MAX_ITERATIONS,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit(p: usize, i: usize) -> Vec<f64> {
        let mut v = vec![0.0; p];
        v[i] = 1.0;
        v
    }

    #[test]
    fn mean_direction_examples() {
        let s = UnitSample::new(vec![unit(3, 0)]).unwrap();
        assert_eq!(mean_direction(&s).unwrap(), (unit(3, 0), 1.0));

        let s = UnitSample::new(vec![unit(2, 0), unit(2, 1)]).unwrap();
        let (mu, r) = mean_direction(&s).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!((mu[0] - h).abs() < 4e-16 && (mu[1] - h).abs() < 4e-16);
        assert!((r - h).abs() < 4e-16);

        let s = UnitSample::new(vec![vec![1.0, 0.0], vec![-1.0, 0.0]]).unwrap();
        assert_eq!(mean_direction(&s), Err(VmfError::Resultant(0.0)));
    }

    #[test]
    fn loader_contract() {
        assert_eq!(UnitSample::new(vec![]), Err(VmfError::Empty));
        assert_eq!(UnitSample::new(vec![vec![1.0]]), Err(VmfError::Dimension(1)));
        assert_eq!(
            UnitSample::new(vec![vec![1.0, 0.0], vec![0.0, 0.0]]),
            Err(VmfError::ZeroVector(1))
        );
        assert!(matches!(
            UnitSample::new(vec![vec![1.0, 0.0], vec![1.0]]),
            Err(VmfError::Ragged { index: 1, .. })
        ));
        let s = UnitSample::new(vec![vec![3.0, 4.0], vec![0.0, 1.0]]).unwrap();
        assert_eq!(s.renormalized(), 1);
        assert_eq!(s.vectors()[0], vec![0.6, 0.8]);
    }

    #[test]
    fn langevin_ratio() {
        let k: f64 = 2.0;
        let want = 1.0 / k.tanh() - 1.0 / k;
        let got = a_p_ratio(3, k).unwrap();
        assert!((got - want).abs() < 1e-14, "{got} vs {want}");
        assert!((got - 0.53731).abs() < 1e-5);
        assert_eq!(a_p_ratio(3, 0.0), Ok(0.0));
        assert!(a_p_ratio(5, 1e-6).unwrap() < 1e-6);
        let a = a_p_ratio(2048, 300.0).unwrap();
        assert!(a > 0.0 && a < 1.0);
    }

    #[test]
    fn closed_form_estimate() {
        let e = kappa_estimates(3, 0.5).unwrap();
        assert!((e.kappa0 - 11.0 / 6.0).abs() < 1e-15);
        assert!(kappa_estimates(3, 1e-9).unwrap().kappa0 < 1e-8);
        assert_eq!(kappa_estimates(3, 1.0), Err(VmfError::Resultant(1.0)));
        assert_eq!(kappa_estimates(3, 0.0), Err(VmfError::Resultant(0.0)));
    }

    #[test]
    fn uniform_limit() {
        let want = -(4.0 * std::f64::consts::PI).ln();
        assert!((log_likelihood(3, 0.5, 0.0).unwrap() - want).abs() < 1e-14);
        assert!((log_likelihood(3, 0.5, 1e-9).unwrap() - want).abs() < 1e-8);
        assert!((want + 2.53102).abs() < 1e-5);
        assert_eq!(log_likelihood(3, 0.5, -1.0), Err(VmfError::Kappa(-1.0)));
    }

    #[test]
    fn likelihood_increases_with_resultant() {
        let a = log_likelihood(10, 0.3, 4.0).unwrap();
        let b = log_likelihood(10, 0.6, 4.0).unwrap();
        assert!(b > a);
    }

    #[test]
    fn brent_finds_parabola_minimum() {
        let (x, _) = brent_minimize(|x| Ok((x - 2.5).powi(2)), 0.0, 10.0, 1e-12).unwrap();
        assert!((x - 2.5).abs() < 1e-7);
    }

    #[test]
    fn balanced_sample_cannot_be_fitted() {
        let s = UnitSample::new(vec![unit(4, 2), vec![0.0, 0.0, -1.0, 0.0]]).unwrap();
        assert_eq!(fit_mle(&s, true, 1e-12), Err(VmfError::Resultant(0.0)));
    }
}
