//! Log-domain accumulation.
//!
//! Every kernel in this crate sums positive quantities that may be far
//! outside the range of `f64`. Terms are carried as logarithms and summed
//! with the usual max-shift: `log Σ exp(t_k) = m + log Σ exp(t_k - m)`.

use crate::error::{BesselError, Result};

/// Streaming log-sum-exp with online rescaling of the running maximum.
///
/// The accumulator never stores terms. When a new term exceeds the current
/// maximum, the scaled sum is rescaled once and the maximum replaced. The
/// weight of the maximal term is kept apart from the rest so that the final
/// logarithm can use `ln_1p` when the other terms are small.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogAccumulator {
    running_max: f64,
    /// Weight of the term sitting at `running_max`; 0 for a bare pivot.
    lead: f64,
    /// `Σ w exp(t - running_max)` over every other term.
    tail: f64,
    count: usize,
}

impl Default for LogAccumulator {
    fn default() -> Self {
        Self::new()
    }
}

impl LogAccumulator {
    pub const fn new() -> Self {
        Self {
            running_max: f64::NEG_INFINITY,
            lead: 0.0,
            tail: 0.0,
            count: 0,
        }
    }

    /// Accumulator seeded with a known pivot. The pivot is not a term; it
    /// only fixes the scale until a larger term arrives.
    pub(crate) fn with_pivot(pivot: f64) -> Self {
        Self {
            running_max: pivot,
            lead: 0.0,
            tail: 0.0,
            count: 0,
        }
    }

    /// Adds `exp(log_term)` to the sum. `-inf` terms are no-ops.
    pub fn append(&mut self, log_term: f64) -> Result<()> {
        if log_term == f64::INFINITY || log_term.is_nan() {
            return Err(BesselError::PositiveInfinity);
        }
        self.push(log_term);
        Ok(())
    }

    /// Unchecked variant used on hot paths where terms are finite by
    /// construction.
    #[inline]
    pub(crate) fn push(&mut self, log_term: f64) {
        self.push_weighted(log_term, 1.0);
    }

    /// Adds `weight * exp(log_term)` for a positive weight.
    #[inline]
    pub(crate) fn push_weighted(&mut self, log_term: f64, weight: f64) {
        if log_term == f64::NEG_INFINITY {
            return;
        }
        if log_term > self.running_max {
            self.tail = (self.tail + self.lead) * (self.running_max - log_term).exp();
            self.lead = weight;
            self.running_max = log_term;
        } else {
            self.tail += weight * (log_term - self.running_max).exp();
        }
        self.count += 1;
    }

    /// `log Σ exp(t_k)` over the appended terms; `-inf` for an empty sum.
    pub fn result(&self) -> f64 {
        if self.count == 0 || self.lead + self.tail == 0.0 {
            return f64::NEG_INFINITY;
        }
        if self.lead > 0.0 {
            self.running_max + self.lead.ln() + (self.tail / self.lead).ln_1p()
        } else {
            self.running_max + self.tail.ln()
        }
    }

    pub fn running_max(&self) -> f64 {
        self.running_max
    }

    /// `Σ w exp(t - running_max)` over all terms.
    pub fn scaled_sum(&self) -> f64 {
        self.lead + self.tail
    }

    pub fn count(&self) -> usize {
        self.count
    }
}

impl Extend<f64> for LogAccumulator {
    /// Panics on a `+inf` or NaN term, like indexing out of bounds.
    fn extend<I: IntoIterator<Item = f64>>(&mut self, iter: I) {
        for t in iter {
            self.append(t).expect("log-term must not be +inf or NaN");
        }
    }
}

/// `log Σ exp(t)` over a slice.
pub fn log_sum_exp(terms: &[f64]) -> Result<f64> {
    let mut acc = LogAccumulator::new();
    for &t in terms {
        acc.append(t)?;
    }
    Ok(acc.result())
}

/// `log(exp a + exp b)`.
#[inline]
pub fn log_add(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    if lo == f64::NEG_INFINITY {
        return hi;
    }
    hi + (lo - hi).exp().ln_1p()
}
