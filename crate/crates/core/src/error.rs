use thiserror::Error;

/// Errors raised by the scalar kernels.
#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum BesselError {
    #[error("order v = {0} is outside the domain of this function")]
    Order(f64),
    #[error("argument x = {0} is outside the domain of this function")]
    Argument(f64),
    /// `K_v(x)` diverges as `x -> 0+`; the value is `+inf`.
    #[error("log K_v(x) has a pole at x = 0")]
    Pole,
    #[error("cannot accumulate a +inf log-term")]
    PositiveInfinity,
}

pub type Result<T> = std::result::Result<T, BesselError>;

pub(crate) fn check_order(v: f64) -> Result<()> {
    if v.is_finite() && v >= 0.0 {
        Ok(())
    } else {
        Err(BesselError::Order(v))
    }
}

pub(crate) fn check_argument(x: f64) -> Result<()> {
    if x.is_finite() && x >= 0.0 {
        Ok(())
    } else {
        Err(BesselError::Argument(x))
    }
}
