//! Arbitrary-precision reference values for `log I_v(x)` and `log K_v(x)`.
//!
//! Both functions are built on MPFR and share no code with the fast
//! kernels. `I_v` is the defining power series summed at `mantissa_bits`
//! precision. `K_v` uses the reflection identity
//!
//! ```text
//! K_v(x) = ½ (x/2)^{-v} Γ(v) S₋ − ½ (x/2)^v π / (sin(πv) Γ(v+1)) S₊
//! S± = Σ_k (x²/4)^k / (k! (1 ± v)_k)
//! ```
//!
//! which is `π (I_{-v} − I_v) / (2 sin πv)` with the gamma factors of
//! `I_{-v}` folded through the reflection formula. The two halves cancel
//! down to `e^{-x}` from `e^{x}`, so the working precision is raised until
//! at least `mantissa_bits` bits survive the subtraction.
//!
//! Every result is rounded once to the nearest double.

use rug::float::Constant;
use rug::ops::Pow;
use rug::Assign;
use rug::Float;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleConfig {
    /// Significant bits carried through the final result; at least 256.
    pub mantissa_bits: u32,
    /// Series length limit.
    pub max_terms: usize,
    /// Upper bound on the working precision reached while absorbing
    /// cancellation in `K`.
    pub max_working_bits: u32,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self {
            mantissa_bits: 320,
            max_terms: 100_000,
            max_working_bits: 1 << 16,
        }
    }
}

impl OracleConfig {
    pub fn with_bits(mantissa_bits: u32) -> Self {
        Self {
            mantissa_bits,
            ..Self::default()
        }
    }
}

pub const MIN_MANTISSA_BITS: u32 = 256;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("mantissa_bits must be at least {MIN_MANTISSA_BITS}, got {0}")]
    Precision(u32),
    #[error("order {0} is outside the oracle domain")]
    Order(f64),
    #[error("argument {0} is outside the oracle domain")]
    Argument(f64),
    #[error("order {0} is too close to an integer for the reflection identity")]
    NearInteger(f64),
    #[error("series did not converge within {0} terms")]
    NoConvergence(usize),
    #[error("cancellation needs more than {0} working bits")]
    Cancellation(u32),
}

pub type Result<T> = std::result::Result<T, OracleError>;

/// Fractional parts of `v` accepted by [`oracle_log_kv`].
pub const K_FRACTION_RANGE: (f64, f64) = (0.05, 0.95);

fn check_config(cfg: &OracleConfig) -> Result<()> {
    if cfg.mantissa_bits < MIN_MANTISSA_BITS {
        return Err(OracleError::Precision(cfg.mantissa_bits));
    }
    Ok(())
}

/// `Σ_k q^k / (k! (1 + s)_k)` and `max_k |term|`, stopping once the terms
/// are past every sign change, shrinking, and below `2^-prec` of the
/// largest one.
fn hyper_sum(q: &Float, s: &Float, prec: u32, max_terms: usize) -> Result<(Float, Float)> {
    let mut term = Float::with_val(prec, 1);
    let mut sum = Float::with_val(prec, 1);
    let mut largest = Float::with_val(prec, 1);
    let s_f64 = s.to_f64();
    let mut k: usize = 1;
    loop {
        if k > max_terms {
            return Err(OracleError::NoConvergence(max_terms));
        }
        // (1+s)_k = (1+s)_{k-1} (k + s)
        let denom = Float::with_val(prec, s + k as u32) * k as u32;
        term *= q;
        term /= &denom;
        sum += &term;
        let mag = Float::with_val(prec, term.abs_ref());
        if mag > largest {
            largest.assign(&mag);
        }
        let kf = k as f64;
        let shrinking = q.to_f64() < 0.5 * kf * (kf + s_f64).abs();
        if kf + s_f64 > 0.0 && shrinking && below(&mag, &largest, prec) {
            return Ok((sum, largest));
        }
        k += 1;
    }
}

fn below(term: &Float, reference: &Float, bits: u32) -> bool {
    if term.is_zero() {
        return true;
    }
    match (term.get_exp(), reference.get_exp()) {
        (Some(a), Some(b)) => i64::from(b) - i64::from(a) > i64::from(bits),
        _ => false,
    }
}

/// `log I_v(x)` for `v >= 0`, `x >= 0`.
pub fn oracle_log_iv(v: f64, x: f64, cfg: &OracleConfig) -> Result<f64> {
    check_config(cfg)?;
    if !(v.is_finite() && v >= 0.0) {
        return Err(OracleError::Order(v));
    }
    if !(x.is_finite() && x >= 0.0) {
        return Err(OracleError::Argument(x));
    }
    if x == 0.0 {
        return Ok(if v == 0.0 { 0.0 } else { f64::NEG_INFINITY });
    }
    let prec = cfg.mantissa_bits;
    let half_x = Float::with_val(prec, x) / 2u32;
    let q = Float::with_val(prec, half_x.square_ref());
    let s = Float::with_val(prec, v);
    let (sum, _) = hyper_sum(&q, &s, prec, cfg.max_terms)?;

    // v ln(x/2) − ln Γ(v+1) + ln S₊
    let mut out = half_x.ln() * &s;
    out -= Float::with_val(prec, &s + 1u32).ln_gamma();
    out += sum.ln();
    Ok(out.to_f64())
}

/// Whether `v` satisfies the fractional-order contract of [`oracle_log_kv`].
pub fn k_order_supported(v: f64) -> bool {
    let frac = v.abs().fract();
    frac >= K_FRACTION_RANGE.0 && frac <= K_FRACTION_RANGE.1
}

/// `log K_v(x)` for `x > 0` and `v` with fractional part in `[0.05, 0.95]`.
pub fn oracle_log_kv(v: f64, x: f64, cfg: &OracleConfig) -> Result<f64> {
    check_config(cfg)?;
    if !v.is_finite() {
        return Err(OracleError::Order(v));
    }
    if !(x.is_finite() && x > 0.0) {
        return Err(OracleError::Argument(x));
    }
    let v = v.abs();
    if !k_order_supported(v) {
        return Err(OracleError::NearInteger(v));
    }

    // e^{x} against e^{-x}, plus room for the alternating head of S₋
    let mut extra = (2.0 * x / std::f64::consts::LN_2).ceil() as u32 + 64;
    loop {
        let prec = cfg.mantissa_bits.saturating_add(extra);
        if prec > cfg.max_working_bits {
            return Err(OracleError::Cancellation(cfg.max_working_bits));
        }
        let (value, lost) = reflection(v, x, prec, cfg.max_terms)?;
        match value {
            Some(k) if lost.saturating_add(cfg.mantissa_bits) <= prec => {
                return Ok(k.ln().to_f64());
            }
            Some(_) => extra = lost.saturating_add(64),
            None => extra = extra.saturating_mul(2),
        }
    }
}

/// `K_v(x)` at working precision `prec` and the number of bits lost to
/// cancellation. `None` when the difference is not positive, i.e. every
/// significant bit cancelled.
fn reflection(v: f64, x: f64, prec: u32, max_terms: usize) -> Result<(Option<Float>, u32)> {
    let half_x = Float::with_val(prec, x) / 2u32;
    let q = Float::with_val(prec, half_x.square_ref());
    let vf = Float::with_val(prec, v);
    let neg_v = Float::with_val(prec, -&vf);

    let (s_minus, big_minus) = hyper_sum(&q, &neg_v, prec, max_terms)?;
    let (s_plus, big_plus) = hyper_sum(&q, &vf, prec, max_terms)?;

    // ½ (x/2)^{-v} Γ(v)
    let pow_v = Float::with_val(prec, (&half_x).pow(&vf));
    let pre_minus = Float::with_val(prec, vf.gamma_ref()) / &pow_v / 2u32;
    // ½ (x/2)^v π / (sin(πv) Γ(v+1))
    let pi = Float::with_val(prec, Constant::Pi);
    let sin = Float::with_val(prec, vf.sin_pi_ref());
    let gamma1 = Float::with_val(prec, &vf + 1u32).gamma();
    let pre_plus = pow_v * pi / sin / gamma1 / 2u32;

    let a = Float::with_val(prec, &pre_minus * &s_minus);
    let b = Float::with_val(prec, &pre_plus * &s_plus);
    let scale = [
        Float::with_val(prec, pre_minus.abs_ref()) * big_minus,
        Float::with_val(prec, pre_plus.abs_ref()) * big_plus,
        a.clone().abs(),
        b.clone().abs(),
    ]
    .into_iter()
    .max_by(|l, r| l.partial_cmp(r).expect("finite"))
    .expect("non-empty");

    let k = a - b;
    if k.is_sign_negative() || k.is_zero() {
        return Ok((None, prec));
    }
    let lost = match (scale.get_exp(), k.get_exp()) {
        (Some(s), Some(r)) => (i64::from(s) - i64::from(r)).max(0) as u32,
        _ => prec,
    };
    Ok((Some(k), lost))
}
