//! `log K_v(x)` for small inputs from the integral representation
//!
//! ```text
//! K_v(x) = √π / (Γ(v+½) (2x)^v e^x) ∫₀¹ g(u) + h(u) du
//! g(u) = β exp(−u^β) (2x + u^β)^{v−½} u^{n−1}
//! h(u) = exp(−1/u) u^{−2v−1} (2xu + 1)^{v−½}
//! ```
//!
//! with `β = 2n/(2v+1)`. The integral is evaluated with composite Simpson
//! on `u = k/N`, `k = 1..N` (both integrands vanish at `u = 0`), and each
//! half is summed in log space around a cheap estimate of its maximum.

use crate::error::{BesselError, Result};
use crate::logspace::{log_add, LogAccumulator};

const HALF_LN_PI: f64 = 0.572_364_942_924_700_1;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IntegralConfig {
    /// Exponent `n` of the substitution.
    pub n_exponent: u32,
    /// Number of Simpson panels; must be even.
    pub simpson_panels: usize,
}

impl Default for IntegralConfig {
    fn default() -> Self {
        Self {
            n_exponent: 8,
            simpson_panels: 600,
        }
    }
}

impl IntegralConfig {
    pub fn beta(&self, v: f64) -> f64 {
        2.0 * self.n_exponent as f64 / (2.0 * v + 1.0)
    }
}

#[inline]
fn log_g_with(ln_u: f64, u_beta: f64, v: f64, x: f64, ln_beta: f64, n: f64) -> f64 {
    ln_beta - u_beta + (v - 0.5) * (2.0 * x + u_beta).ln() + (n - 1.0) * ln_u
}

#[inline]
fn log_h_with(u: f64, ln_u: f64, v: f64, x: f64) -> f64 {
    -1.0 / u - (2.0 * v + 1.0) * ln_u + (v - 0.5) * (2.0 * x * u).ln_1p()
}

/// `log g(u)`; `-inf` for `u <= 0`.
pub fn log_g(u: f64, v: f64, x: f64, cfg: &IntegralConfig) -> f64 {
    if u <= 0.0 {
        return f64::NEG_INFINITY;
    }
    let beta = cfg.beta(v);
    let ln_u = u.ln();
    log_g_with(ln_u, (beta * ln_u).exp(), v, x, beta.ln(), cfg.n_exponent as f64)
}

/// `log h(u)`; `-inf` for `u <= 0`.
pub fn log_h(u: f64, v: f64, x: f64) -> f64 {
    if u <= 0.0 {
        return f64::NEG_INFINITY;
    }
    log_h_with(u, u.ln(), v, x)
}

/// Approximate maximisers `(u_g, u_h)` of `g` and `h` on `(0, 1]`.
pub fn argmax_heuristics(v: f64) -> (f64, f64) {
    let u_h = if v < 2.0 { 0.5 } else { 1.0 / (2.0 * v) };
    (1.0, u_h)
}

/// Result of one quadrature together with how far the grid rose above
/// the heuristic pivots.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegralTrace {
    pub value: f64,
    /// `max_k log g(u_k) − log g(u_g)`.
    pub g_excess: f64,
    /// `max_k log h(u_k) − log h(u_h)`.
    pub h_excess: f64,
}

pub fn log_kv_integral(v: f64, x: f64, cfg: &IntegralConfig) -> Result<f64> {
    log_kv_integral_traced(v, x, cfg).map(|t| t.value)
}

pub fn log_kv_integral_traced(v: f64, x: f64, cfg: &IntegralConfig) -> Result<IntegralTrace> {
    if !(v.is_finite() && v >= 0.0) {
        return Err(BesselError::Order(v));
    }
    if !(x.is_finite() && x >= 0.0) {
        return Err(BesselError::Argument(x));
    }
    if x == 0.0 {
        return Err(BesselError::Pole);
    }
    let panels = cfg.simpson_panels;
    assert!(panels >= 2 && panels.is_multiple_of(2), "Simpson needs an even panel count");

    let n = cfg.n_exponent as f64;
    let beta = cfg.beta(v);
    let ln_beta = beta.ln();

    let (u_g, u_h) = argmax_heuristics(v);
    let pivot_g = log_g(u_g, v, x, cfg);
    let pivot_h = log_h(u_h, v, x);
    let mut g_sum = LogAccumulator::with_pivot(pivot_g);
    let mut h_sum = LogAccumulator::with_pivot(pivot_h);
    let mut g_max = f64::NEG_INFINITY;
    let mut h_max = f64::NEG_INFINITY;

    let step = 1.0 / panels as f64;
    for k in 1..=panels {
        let weight = if k == panels {
            1.0
        } else if k % 2 == 1 {
            4.0
        } else {
            2.0
        };
        let u = k as f64 * step;
        let ln_u = u.ln();
        let lg = log_g_with(ln_u, (beta * ln_u).exp(), v, x, ln_beta, n);
        let lh = log_h_with(u, ln_u, v, x);
        g_max = g_max.max(lg);
        h_max = h_max.max(lh);
        g_sum.push_weighted(lg, weight);
        h_sum.push_weighted(lh, weight);
    }

    // Simpson: (h/3)(f_0 + 4f_1 + 2f_2 + … + f_N) with h = 1/N and f_0 = 0
    let log_integral = log_add(g_sum.result(), h_sum.result()) - (3.0 * panels as f64).ln();
    let value = HALF_LN_PI - libm::lgamma(v + 0.5) - v * (2.0 * x).ln() - x + log_integral;
    Ok(IntegralTrace {
        value,
        g_excess: g_max - pivot_g,
        h_excess: h_max - pivot_h,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn cfg() -> IntegralConfig {
        IntegralConfig::default()
    }

    #[test]
    fn half_ln_pi() {
        assert_eq!(HALF_LN_PI, 0.5 * PI.ln());
    }

    #[test]
    fn log_g_by_hand() {
        // v = ½ removes the (2x + u^β) factor; β = 8, u = 1.
        assert!((log_g(1.0, 0.5, 1.0, &cfg()) - (8f64.ln() - 1.0)).abs() < 1e-15);
        assert!((log_g(1.0, 0.5, 1.0, &cfg()) - 1.0794).abs() < 1e-4);
        // v = 2: β = 16/5, u = ½
        let beta: f64 = 16.0 / 5.0;
        let ub = 0.5f64.powf(beta);
        let want = beta.ln() - ub + 1.5 * (6.0 + ub).ln() + 7.0 * 0.5f64.ln();
        assert!((log_g(0.5, 2.0, 3.0, &cfg()) - want).abs() < 1e-14);
        assert_eq!(log_g(0.0, 2.0, 3.0, &cfg()), f64::NEG_INFINITY);
        assert_eq!(log_g(-0.1, 2.0, 3.0, &cfg()), f64::NEG_INFINITY);
    }

    #[test]
    fn log_h_by_hand() {
        assert_eq!(log_h(1.0, 0.5, 7.0), -1.0);
        let want = -2.0 - 5.0 * 0.5f64.ln() + 1.5 * 4f64.ln();
        assert!((log_h(0.5, 2.0, 3.0) - want).abs() < 1e-14);
        assert!((log_h(0.5, 2.0, 3.0) - 3.5452).abs() < 1e-4);
        assert_eq!(log_h(0.0, 2.0, 3.0), f64::NEG_INFINITY);
    }

    #[test]
    fn heuristics() {
        assert_eq!(argmax_heuristics(1.0), (1.0, 0.5));
        assert_eq!(argmax_heuristics(2.0), (1.0, 0.25));
        assert_eq!(argmax_heuristics(10.0), (1.0, 0.05));
        assert_eq!(argmax_heuristics(0.0), (1.0, 0.5));
    }

    #[test]
    fn half_order_closed_form() {
        for &x in &[0.5, 1.0, 2.0, 10.0] {
            let got = log_kv_integral(0.5, x, &cfg()).unwrap();
            let want = 0.5 * (PI / (2.0 * x)).ln() - x;
            assert!(((got - want) / want).abs() < 1e-8, "x={x}: {got} vs {want}");
        }
        let got = log_kv_integral(0.5, 1.0, &cfg()).unwrap();
        assert!((got + 0.774_208_647_355_272_6).abs() < 1e-8);
        let got = log_kv_integral(0.5, 2.0, &cfg()).unwrap();
        assert!((got + 2.120_782_237_635_245).abs() < 1e-8);
    }

    #[test]
    fn pole_and_domain() {
        assert_eq!(log_kv_integral(1.0, 0.0, &cfg()), Err(BesselError::Pole));
        assert_eq!(log_kv_integral(1.0, -1.0, &cfg()), Err(BesselError::Argument(-1.0)));
        assert_eq!(log_kv_integral(-1.0, 1.0, &cfg()), Err(BesselError::Order(-1.0)));
    }
}
