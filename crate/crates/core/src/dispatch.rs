//! Method selection and the public scalar entry points.
//!
//! Each `(v, x)` is routed to the fastest expression whose validity region
//! contains it. Regions are tried in priority order; the series (for `I`)
//! or the integral (for `K`) is the fallback. Every comparison is strict, so
//! a point exactly on a threshold falls through to the next branch.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::asymptotics::{log_iv_mu, log_iv_u, log_iv_u_dd, log_kv_mu, log_kv_u, MuTerms, UTerms};
use crate::dd::Dd;
use crate::error::{check_argument, check_order, BesselError, Result};
use crate::integral_k::{log_kv_integral, IntegralConfig};
use crate::series_i::{log_iv_series, SeriesConfig};
use crate::uk_table::UkTable;

/// Evaluation route, ordered from fastest to slowest.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MethodKind {
    Mu3,
    Mu20,
    U4,
    U6,
    U9,
    U13,
    #[serde(rename = "series")]
    SeriesI,
    IntegralK,
}

impl MethodKind {
    pub const ALL: [MethodKind; 8] = [
        MethodKind::Mu3,
        MethodKind::Mu20,
        MethodKind::U4,
        MethodKind::U6,
        MethodKind::U9,
        MethodKind::U13,
        MethodKind::SeriesI,
        MethodKind::IntegralK,
    ];

    pub fn name(self) -> &'static str {
        match self {
            MethodKind::Mu3 => "mu3",
            MethodKind::Mu20 => "mu20",
            MethodKind::U4 => "u4",
            MethodKind::U6 => "u6",
            MethodKind::U9 => "u9",
            MethodKind::U13 => "u13",
            MethodKind::SeriesI => "series",
            MethodKind::IntegralK => "integral_k",
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for MethodKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Which function is being evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BesselFn {
    #[serde(rename = "logiv")]
    LogIv,
    #[serde(rename = "logkv")]
    LogKv,
}

impl BesselFn {
    pub fn fallback(self) -> MethodKind {
        match self {
            BesselFn::LogIv => MethodKind::SeriesI,
            BesselFn::LogKv => MethodKind::IntegralK,
        }
    }
}

/// A log-domain result tagged with the route that produced it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogValue {
    pub value: f64,
    pub method: MethodKind,
    /// Set only for `K_v(0)`, where the value is `+inf`.
    pub pole: bool,
}

impl LogValue {
    fn new(value: f64, method: MethodKind) -> Self {
        Self {
            value,
            method,
            pole: false,
        }
    }
}

fn mu3_region(v: f64, x: f64) -> bool {
    (x > 1400.0 && v < 3.05) || ((0.6229 * x.ln() - 3.2318) > v.ln() && v > 3.1)
}

fn mu20_region(v: f64, x: f64) -> bool {
    (x > 30.0 && v < 15.3919) || ((0.5113 * x.ln() + 0.7939) > v.ln() && x > 59.6925)
}

fn u4_region(v: f64, x: f64) -> bool {
    (x > 274.2377 && v > 0.3) || v > 163.6993
}

fn u6_region(v: f64, x: f64) -> bool {
    (x > 84.4153 && v > 0.46) || v > 56.9971
}

fn u9_region(v: f64, x: f64) -> bool {
    (x > 35.9074 && v > 0.6) || v > 20.1534
}

fn u13_region(v: f64, x: f64) -> bool {
    (x > 19.6931 && v > 0.7) || v > 12.6964
}

/// Picks the evaluation route for `(v, x)` with `v, x >= 0`.
///
/// `batch_mode` drops the μ₃, U₄, U₆ and U₉ branches so that only three
/// routes remain reachable, which keeps method groups large in batches.
pub fn select_method(func: BesselFn, v: f64, x: f64, batch_mode: bool) -> MethodKind {
    if !batch_mode && mu3_region(v, x) {
        MethodKind::Mu3
    } else if mu20_region(v, x) {
        MethodKind::Mu20
    } else if !batch_mode && u4_region(v, x) {
        MethodKind::U4
    } else if !batch_mode && u6_region(v, x) {
        MethodKind::U6
    } else if !batch_mode && u9_region(v, x) {
        MethodKind::U9
    } else if u13_region(v, x) {
        MethodKind::U13
    } else {
        func.fallback()
    }
}

/// Route actually taken by [`eval`] for an in-domain point with `v >= 0`:
/// [`select_method`] except that `I_v(0)` is always answered by the
/// series' closed form.
pub fn route(func: BesselFn, v: f64, x: f64, batch_mode: bool) -> MethodKind {
    if func == BesselFn::LogIv && x == 0.0 {
        MethodKind::SeriesI
    } else {
        select_method(func, v, x, batch_mode)
    }
}

/// Evaluates `log I_v(x)` with a given route. The caller is responsible
/// for having checked the domain.
pub fn eval_iv_with(method: MethodKind, v: f64, x: f64) -> Result<f64> {
    let table = UkTable::shared();
    match method {
        MethodKind::Mu3 => log_iv_mu(v, x, MuTerms::Three),
        MethodKind::Mu20 => log_iv_mu(v, x, MuTerms::Twenty),
        MethodKind::U4 => log_iv_u(v, x, UTerms::Four, table),
        MethodKind::U6 => log_iv_u(v, x, UTerms::Six, table),
        MethodKind::U9 => log_iv_u(v, x, UTerms::Nine, table),
        MethodKind::U13 => log_iv_u(v, x, UTerms::Thirteen, table),
        MethodKind::SeriesI | MethodKind::IntegralK => {
            log_iv_series(v, x, &SeriesConfig::default())
        }
    }
}

/// Evaluates `log K_v(x)` for `v >= 0` with a given route.
pub fn eval_kv_with(method: MethodKind, v: f64, x: f64) -> Result<f64> {
    let table = UkTable::shared();
    match method {
        MethodKind::Mu3 => log_kv_mu(v, x, MuTerms::Three),
        MethodKind::Mu20 => log_kv_mu(v, x, MuTerms::Twenty),
        MethodKind::U4 => log_kv_u(v, x, UTerms::Four, table),
        MethodKind::U6 => log_kv_u(v, x, UTerms::Six, table),
        MethodKind::U9 => log_kv_u(v, x, UTerms::Nine, table),
        MethodKind::U13 => log_kv_u(v, x, UTerms::Thirteen, table),
        MethodKind::SeriesI | MethodKind::IntegralK => {
            log_kv_integral(v, x, &IntegralConfig::default())
        }
    }
}

fn uniform_terms(method: MethodKind) -> Option<UTerms> {
    match method {
        MethodKind::U4 => Some(UTerms::Four),
        MethodKind::U6 => Some(UTerms::Six),
        MethodKind::U9 => Some(UTerms::Nine),
        MethodKind::U13 => Some(UTerms::Thirteen),
        _ => None,
    }
}

/// `log I_v(x)` as an unevaluated double-double sum. Uniform-expansion
/// routes keep their leading terms to double-double accuracy; other routes
/// return the plain result.
pub(crate) fn log_iv_dd(v: f64, x: f64) -> Result<Dd> {
    check_order(v)?;
    check_argument(x)?;
    let method = route(BesselFn::LogIv, v, x, false);
    match uniform_terms(method) {
        Some(terms) => log_iv_u_dd(v, x, terms, UkTable::shared()),
        None => eval_iv_with(method, v, x).map(Dd::new),
    }
}

/// `log I_a(x) − log I_b(x)`, formed before rounding. In the uniform
/// region this is accurate to a few ulp of the difference rather than of
/// `log I_a(x)`.
pub fn log_iv_difference(a: f64, b: f64, x: f64) -> Result<f64> {
    Ok((log_iv_dd(a, x)? - log_iv_dd(b, x)?).to_f64())
}

pub(crate) fn log_iv_mode(v: f64, x: f64, batch_mode: bool) -> Result<LogValue> {
    check_order(v)?;
    check_argument(x)?;
    let method = route(BesselFn::LogIv, v, x, batch_mode);
    eval_iv_with(method, v, x).map(|value| LogValue::new(value, method))
}

pub(crate) fn log_kv_mode(v: f64, x: f64, batch_mode: bool) -> Result<LogValue> {
    if !v.is_finite() {
        return Err(BesselError::Order(v));
    }
    check_argument(x)?;
    // K_{-v} = K_v
    let v = v.abs();
    let method = select_method(BesselFn::LogKv, v, x, batch_mode);
    if x == 0.0 {
        return Ok(LogValue {
            value: f64::INFINITY,
            method,
            pole: true,
        });
    }
    eval_kv_with(method, v, x).map(|value| LogValue::new(value, method))
}

/// `log I_v(x)` for `v >= 0`, `x >= 0`.
pub fn log_iv(v: f64, x: f64) -> Result<LogValue> {
    log_iv_mode(v, x, false)
}

/// `log K_v(x)` for real `v` and `x >= 0`. `x = 0` returns `+inf` with
/// [`LogValue::pole`] set.
pub fn log_kv(v: f64, x: f64) -> Result<LogValue> {
    log_kv_mode(v, x, false)
}

pub fn log_i0(x: f64) -> Result<LogValue> {
    log_iv(0.0, x)
}

pub fn log_i1(x: f64) -> Result<LogValue> {
    log_iv(1.0, x)
}

/// Evaluates either function; the batch and CLI layers go through here.
pub fn eval(func: BesselFn, v: f64, x: f64, batch_mode: bool) -> Result<LogValue> {
    match func {
        BesselFn::LogIv => log_iv_mode(v, x, batch_mode),
        BesselFn::LogKv => log_kv_mode(v, x, batch_mode),
    }
}

/// Coordinate that a [`Threshold`] constrains.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    V,
    X,
}

/// A point sitting exactly on one region comparison.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Threshold {
    pub label: &'static str,
    pub v: f64,
    pub x: f64,
    /// Stepping this coordinate crosses the comparison.
    pub axis: Axis,
}

/// Every region comparison that can decide a route, placed where it does,
/// for boundary sweeps. The `v > 0.3`, `v > 0.46` and `v > 0.6` guards of
/// U₄, U₆ and U₉ are absent: they only matter for `x > 30`, where μ₂₀
/// already claims every `v < 15.3919`.
pub fn region_thresholds() -> Vec<Threshold> {
    let t = |label, v, x, axis| Threshold { label, v, x, axis };
    vec![
        t("mu3: x > 1400", 1.0, 1400.0, Axis::X),
        t("mu3: v < 3.05", 3.05, 2000.0, Axis::V),
        t("mu3: v > 3.1", 3.1, 5000.0, Axis::V),
        t("mu3: ln v < 0.6229 ln x - 3.2318", (0.6229 * 5000f64.ln() - 3.2318).exp(), 5000.0, Axis::V),
        t("mu20: x > 30", 5.0, 30.0, Axis::X),
        t("mu20: v < 15.3919", 15.3919, 40.0, Axis::V),
        t("mu20: x > 59.6925", 16.0, 59.6925, Axis::X),
        t("mu20: ln v < 0.5113 ln x + 0.7939", (0.5113 * 100f64.ln() + 0.7939).exp(), 100.0, Axis::V),
        t("u4: x > 274.2377", 50.0, 274.2377, Axis::X),
        t("u4: v > 163.6993", 163.6993, 10.0, Axis::V),
        t("u6: x > 84.4153", 30.0, 84.4153, Axis::X),
        t("u6: v > 56.9971", 56.9971, 10.0, Axis::V),
        t("u9: x > 35.9074", 18.0, 35.9074, Axis::X),
        t("u9: v > 20.1534", 20.1534, 10.0, Axis::V),
        t("u13: x > 19.6931", 5.0, 19.6931, Axis::X),
        t("u13: v > 0.7", 0.7, 25.0, Axis::V),
        t("u13: v > 12.6964", 12.6964, 5.0, Axis::V),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use MethodKind::*;

    #[test]
    fn table_examples_route() {
        assert_eq!(select_method(BesselFn::LogIv, 1.0, 1500.0, false), Mu3);
        assert_eq!(select_method(BesselFn::LogIv, 200.0, 10.0, false), U4);
        assert_eq!(select_method(BesselFn::LogIv, 5.0, 5.0, false), SeriesI);
        assert_eq!(select_method(BesselFn::LogKv, 5.0, 5.0, false), IntegralK);
        assert_eq!(select_method(BesselFn::LogIv, 1.0, 1500.0, true), Mu20);
        assert_eq!(select_method(BesselFn::LogIv, 200.0, 10.0, true), U13);
    }

    #[test]
    fn fallback_point_fails_every_predicate() {
        let (v, x) = (5.0, 5.0);
        assert!(!mu3_region(v, x));
        assert!(!mu20_region(v, x));
        assert!(!u4_region(v, x));
        assert!(!u6_region(v, x));
        assert!(!u9_region(v, x));
        assert!(!u13_region(v, x));
    }

    #[test]
    fn thresholds_are_strict() {
        // x = 1400 exactly is not μ₃ via the first clause
        assert_eq!(select_method(BesselFn::LogIv, 1.0, 1400.0, false), Mu20);
        assert_eq!(select_method(BesselFn::LogIv, 1.0, 1400.0 + 1e-9, false), Mu3);
        assert_eq!(select_method(BesselFn::LogIv, 12.6964, 5.0, false), SeriesI);
        assert_eq!(select_method(BesselFn::LogIv, 12.6965, 5.0, false), U13);
    }

    #[test]
    fn batch_mode_reaches_only_three_routes() {
        for i in 0..60 {
            for j in 0..60 {
                let v = 0.37 * (i * i) as f64;
                let x = 0.51 * (j * j) as f64;
                let m = select_method(BesselFn::LogIv, v, x, true);
                assert!(matches!(m, Mu20 | U13 | SeriesI), "{v} {x} -> {m}");
            }
        }
    }

    #[test]
    fn special_points() {
        let r = log_iv(0.0, 0.0).unwrap();
        assert_eq!((r.value, r.method, r.pole), (0.0, SeriesI, false));
        assert_eq!(log_iv(3.0, 0.0).unwrap().value, f64::NEG_INFINITY);
        assert_eq!(log_i0(0.0).unwrap().value, 0.0);
        assert_eq!(log_i1(0.0).unwrap().value, f64::NEG_INFINITY);

        let k = log_kv(2.0, 0.0).unwrap();
        assert!(k.pole);
        assert_eq!(k.value, f64::INFINITY);
    }

    #[test]
    fn k_is_even_in_order() {
        assert_eq!(log_kv(-0.5, 1.0).unwrap(), log_kv(0.5, 1.0).unwrap());
        assert_eq!(log_kv(-40.0, 3.0).unwrap(), log_kv(40.0, 3.0).unwrap());
        let k = log_kv(0.5, 1.0).unwrap();
        assert!((k.value + 0.774_208_647_355_272_6).abs() < 1e-8);
        assert_eq!(k.method, IntegralK);
    }

    #[test]
    fn domain_errors() {
        assert_eq!(log_iv(-1.0, 2.0), Err(BesselError::Order(-1.0)));
        assert_eq!(log_iv(1.0, -2.0), Err(BesselError::Argument(-2.0)));
        assert!(log_iv(f64::NAN, 2.0).is_err());
        assert!(log_kv(f64::NAN, 2.0).is_err());
        assert!(log_kv(1.0, f64::NAN).is_err());
        assert!(log_kv(1.0, -0.5).is_err());
    }

    #[test]
    fn every_threshold_switches_route() {
        for t in region_thresholds() {
            let (dv, dx) = match t.axis {
                Axis::V => (1e-9, 0.0),
                Axis::X => (0.0, 1e-9),
            };
            let below = select_method(BesselFn::LogIv, t.v - dv, t.x - dx, false);
            let above = select_method(BesselFn::LogIv, t.v + dv, t.x + dx, false);
            assert_ne!(below, above, "{}", t.label);
        }
    }

    #[test]
    fn small_order_guards_are_masked_by_mu20() {
        for &(v, x) in &[(0.3, 300.0), (0.46, 90.0), (0.6, 36.0)] {
            for dv in [-1e-9, 1e-9] {
                assert_eq!(select_method(BesselFn::LogIv, v + dv, x, false), Mu20);
            }
        }
    }

    #[test]
    fn method_names_round_trip_through_serde() {
        for m in MethodKind::ALL {
            let s = serde_json::to_string(&m).unwrap();
            assert_eq!(s, format!("\"{}\"", m.name()));
        }
    }
}
