//! Scalar evaluation.

use std::io::Write;

use logbessel::{log_i0, log_iv, log_kv, LogValue};

use crate::{format_value, Func, Result};

pub fn evaluate(func: Func, v: f64, x: f64) -> Result<LogValue> {
    Ok(match func {
        Func::LogIv => log_iv(v, x)?,
        Func::LogKv => log_kv(v, x)?,
        Func::LogI0 => log_i0(x)?,
    })
}

/// Prints `<value> method=<name> pole=<bool>`.
pub fn run<W: Write>(out: &mut W, func: Func, v: f64, x: f64) -> Result<()> {
    let r = evaluate(func, v, x)?;
    writeln!(out, "{} method={} pole={}", format_value(r.value), r.method, r.pole)?;
    Ok(())
}
