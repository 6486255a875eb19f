//! Asymptotic expansions of `log I_v(x)` and `log K_v(x)`.
//!
//! Two families are used:
//!
//! * the large-argument expansion in `μ = 4v²`, truncated after 3 or 20
//!   correction terms, valid for `x ≫ v`;
//! * the uniform large-order expansion in `t = 1/√(1+(x/v)²)` built on the
//!   `u_k(t)` polynomials, truncated after 4, 6, 9 or 13 terms.
//!
//! Both correction sums are `O(1)` inside their validity regions, so they
//! are accumulated in plain arithmetic and only the final factor is logged.

use std::f64::consts::{LN_2, PI};

use crate::dd::Dd;
use crate::error::{BesselError, Result};
use crate::uk_table::UkTable;

const LN_PI: f64 = 1.144_729_885_849_400_2;
const LN_2PI: f64 = 1.837_877_066_409_345_5;

/// Truncation of the large-argument expansion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MuTerms {
    Three,
    Twenty,
}

impl MuTerms {
    pub const fn count(self) -> usize {
        match self {
            MuTerms::Three => 3,
            MuTerms::Twenty => 20,
        }
    }
}

/// Truncation of the uniform expansion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum UTerms {
    Four,
    Six,
    Nine,
    Thirteen,
}

impl UTerms {
    pub const fn count(self) -> usize {
        match self {
            UTerms::Four => 4,
            UTerms::Six => 6,
            UTerms::Nine => 9,
            UTerms::Thirteen => 13,
        }
    }
}

fn check_finite(v: f64, x: f64) -> Result<()> {
    if !v.is_finite() {
        return Err(BesselError::Order(v));
    }
    if !(x.is_finite() && x > 0.0) {
        return Err(BesselError::Argument(x));
    }
    Ok(())
}

/// `1 + Σ_{k=1..n} s^k Π_{j=1..k}(μ − (2j−1)²) / (k! (8x)^k)` with `s = ±1`.
fn mu_correction(v: f64, x: f64, terms: MuTerms, sign: f64) -> f64 {
    let mu = 4.0 * v * v;
    let eight_x = 8.0 * x;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..=terms.count() {
        let odd = (2 * k - 1) as f64;
        term *= sign * (mu - odd * odd) / (k as f64 * eight_x);
        sum += term;
    }
    sum
}

pub fn log_iv_mu(v: f64, x: f64, terms: MuTerms) -> Result<f64> {
    check_finite(v, x)?;
    let corr = mu_correction(v, x, terms, -1.0);
    Ok(x - 0.5 * (LN_2PI + x.ln()) + corr.abs().ln())
}

pub fn log_kv_mu(v: f64, x: f64, terms: MuTerms) -> Result<f64> {
    check_finite(v, x)?;
    let corr = mu_correction(v, x, terms, 1.0);
    Ok(0.5 * (LN_PI - LN_2 - x.ln()) - x + corr.abs().ln())
}

/// Shared pieces of the uniform expansion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UniformParams {
    pub x_prime: f64,
    pub t: f64,
    pub eta: f64,
    /// `¼ log(1 + x'²)`
    pub quarter_log: f64,
}

impl UniformParams {
    pub fn new(v: f64, x: f64) -> Self {
        let x_prime = x / v;
        let root = x_prime.hypot(1.0);
        Self {
            x_prime,
            t: 1.0 / root,
            eta: root + (x_prime / (1.0 + root)).ln(),
            quarter_log: 0.25 * (x_prime * x_prime).ln_1p(),
        }
    }
}

/// `1 + Σ_{k=1..n} u_k(t) w^k`, Horner in `w`.
fn uniform_correction(table: &UkTable, t: f64, w: f64, terms: UTerms) -> f64 {
    let n = terms.count();
    let mut acc = 0.0;
    for k in (1..=n).rev() {
        acc = (acc + table.eval(k, t)) * w;
    }
    1.0 + acc
}

fn check_uniform(v: f64, x: f64, table: &UkTable, terms: UTerms) -> Result<()> {
    if !(v.is_finite() && v > 0.0) {
        return Err(BesselError::Order(v));
    }
    if !(x.is_finite() && x >= 0.0) {
        return Err(BesselError::Argument(x));
    }
    assert!(table.max_k() >= terms.count(), "u_k table too short");
    Ok(())
}

/// Ratio of `v √(1+x'²)` to the result above which the leading terms are
/// recomputed in double-double.
const CANCELLATION_LIMIT: f64 = 64.0;

/// `∓½ log(2πv)^{±1} ± vη − ¼ log(1+x'²)` in double-double, for results
/// close to zero where `vη` cancels against the other terms.
fn leading_terms_dd(v: f64, x: f64, first_kind: bool) -> Dd {
    let z = Dd::ratio(x, v);
    let one = Dd::new(1.0);
    let z2p1 = z * z + one;
    let root = z2p1.sqrt();
    let eta = root + z.div(root + one).ln();
    let v_eta = Dd::new(v) * eta;
    let quarter_log = Dd::new(0.25) * z2p1.ln();
    let two_v = Dd::new(2.0 * v);
    if first_kind {
        Dd::new(-0.5) * (Dd::PI * two_v).ln() + v_eta - quarter_log
    } else {
        Dd::new(0.5) * Dd::PI.div(two_v).ln() - v_eta - quarter_log
    }
}

pub fn log_iv_u(v: f64, x: f64, terms: UTerms, table: &UkTable) -> Result<f64> {
    check_uniform(v, x, table, terms)?;
    let p = UniformParams::new(v, x);
    let log_corr = uniform_correction(table, p.t, 1.0 / v, terms).abs().ln();
    let lead = -0.5 * (2.0 * PI * v).ln() + v * p.eta - p.quarter_log;
    Ok(refine(lead, log_corr, v, x, p.t, true))
}

pub fn log_kv_u(v: f64, x: f64, terms: UTerms, table: &UkTable) -> Result<f64> {
    check_uniform(v, x, table, terms)?;
    if x == 0.0 {
        return Err(BesselError::Pole);
    }
    let p = UniformParams::new(v, x);
    let log_corr = uniform_correction(table, p.t, -1.0 / v, terms).abs().ln();
    let lead = 0.5 * (LN_PI - (2.0 * v).ln()) - v * p.eta - p.quarter_log;
    Ok(refine(lead, log_corr, v, x, p.t, false))
}

/// `log I_v(x)` by the uniform expansion, kept in double-double so that
/// differences between nearby orders do not lose the low bits of `vη`.
pub(crate) fn log_iv_u_dd(v: f64, x: f64, terms: UTerms, table: &UkTable) -> Result<Dd> {
    check_uniform(v, x, table, terms)?;
    let t = UniformParams::new(v, x).t;
    let log_corr = uniform_correction(table, t, 1.0 / v, terms).abs().ln();
    Ok(leading_terms_dd(v, x, true) + Dd::new(log_corr))
}

fn refine(lead: f64, log_corr: f64, v: f64, x: f64, t: f64, first_kind: bool) -> f64 {
    let value = lead + log_corr;
    // v/t = v √(1+x'²) bounds the size of the cancelling terms
    if (value * CANCELLATION_LIMIT).abs() >= v / t || x == 0.0 {
        return value;
    }
    (leading_terms_dd(v, x, first_kind) + Dd::new(log_corr)).to_f64()
}
