//! Power series for `log I_v(x)`.
//!
//! `I_v(x) = (x/2)^v Σ_k a_k` with `a_k = (x²/4)^k / (k! Γ(k+v+1))`. The
//! terms are generated in log space by
//! `log a_k = log a_{k-1} + 2 log x - log 4 - log k - log(k+v)` and summed
//! with [`LogAccumulator`]. Terms grow until the peak index
//! `K = (√(x²+v²) - v)/2` and decay super-exponentially afterwards, so the
//! loop stops once it is past the peak and the current term is negligible
//! relative to the running maximum.

use crate::dd::Dd;
use crate::error::{check_argument, check_order, Result};
use crate::logspace::LogAccumulator;

/// `ln(2^-60)`.
pub const DEFAULT_RELATIVE_FLOOR: f64 = -60.0 * std::f64::consts::LN_2;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesConfig {
    /// Log of the smallest term ratio (relative to the largest term) that
    /// still contributes.
    pub relative_floor: f64,
    /// Explicit term cap; `None` means `ceil(9.2 √x) + 64`.
    pub hard_cap_terms: Option<usize>,
}

impl Default for SeriesConfig {
    fn default() -> Self {
        Self {
            relative_floor: DEFAULT_RELATIVE_FLOOR,
            hard_cap_terms: None,
        }
    }
}

impl SeriesConfig {
    pub fn cap_for(&self, x: f64) -> usize {
        self.hard_cap_terms
            .unwrap_or_else(|| default_term_cap(x))
            .max(8)
    }
}

/// `ceil(9.2 √x) + 64`.
pub fn default_term_cap(x: f64) -> usize {
    (9.2 * x.sqrt()).ceil() as usize + 64
}

/// Location of the largest series term.
#[inline]
pub fn peak_index(v: f64, x: f64) -> f64 {
    (x.hypot(v) - v) / 2.0
}

/// Diagnostics from one series evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesTrace {
    pub value: f64,
    /// Number of terms `a_0 .. a_{n-1}` that were generated.
    pub terms: usize,
    /// Index of the largest `log a_k` observed.
    pub argmax: usize,
}

pub fn log_iv_series(v: f64, x: f64, cfg: &SeriesConfig) -> Result<f64> {
    log_iv_series_traced(v, x, cfg).map(|t| t.value)
}

pub fn log_iv_series_traced(v: f64, x: f64, cfg: &SeriesConfig) -> Result<SeriesTrace> {
    check_order(v)?;
    check_argument(x)?;
    if x == 0.0 {
        let value = if v == 0.0 { 0.0 } else { f64::NEG_INFINITY };
        return Ok(SeriesTrace {
            value,
            terms: 1,
            argmax: 0,
        });
    }

    let step = 2.0 * x.ln() - std::f64::consts::LN_2 * 2.0;
    let peak = peak_index(v, x);
    let cap = cfg.cap_for(x);

    let log_gamma = libm::lgamma(v + 1.0);
    let mut log_a = -log_gamma;
    let mut acc = LogAccumulator::new();
    acc.push(log_a);
    let mut best = log_a;
    let mut argmax = 0;
    let mut k = 1usize;
    while k < cap {
        let kf = k as f64;
        log_a += step - kf.ln() - (kf + v).ln();
        acc.push(log_a);
        if log_a > best {
            best = log_a;
            argmax = k;
        }
        k += 1;
        if kf > peak && log_a - acc.running_max() < cfg.relative_floor {
            break;
        }
    }

    let leading = v * (x / 2.0).ln();
    let mut value = leading + acc.result();
    // v ln(x/2) and ln Γ(v+1) cancel when I_v(x) is close to 1
    let scale = leading.abs() + log_gamma.abs();
    if (value * CANCELLATION_LIMIT).abs() < scale {
        if let Some(refined) = refine(v, x, peak, cap) {
            value = refined;
        }
    }

    Ok(SeriesTrace {
        value,
        terms: k,
        argmax,
    })
}

/// Ratio of the cancelling terms to the result above which the series is
/// re-summed in double-double.
const CANCELLATION_LIMIT: f64 = 64.0;

/// `v ln(x/2) − ln Γ(v+1) + ln Σ_k a_k/a_0` in double-double, with the
/// term ratios `(x²/4) / (k (v+k))` formed exactly enough that only the
/// final rounding remains. `None` if the ratio sum overflows.
fn refine(v: f64, x: f64, peak: f64, cap: usize) -> Option<f64> {
    let half_x = Dd::new(x / 2.0);
    let vd = Dd::new(v);
    let lead = vd * half_x.ln() - (vd + Dd::new(1.0)).lgamma();
    let q = half_x * half_x;
    let mut ratio = Dd::new(1.0);
    let mut sum = ratio;
    for k in 1..cap {
        let kd = Dd::new(k as f64);
        ratio = (ratio * q).div(kd * (vd + kd));
        sum = sum + ratio;
        if !sum.hi.is_finite() {
            return None;
        }
        if k as f64 > peak && ratio.hi < sum.hi * REFINE_FLOOR {
            break;
        }
    }
    Some((lead + sum.ln()).to_f64())
}

/// 2^-110: below the last bit of a double-double sum.
const REFINE_FLOOR: f64 = 7.703_719_777_548_943e-34;
