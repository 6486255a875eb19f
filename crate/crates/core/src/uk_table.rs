//! Exact-rational generation of the polynomials `u_k(t)` of the uniform
//! large-order expansion.
//!
//! `u_0 = 1` and
//! `u_{k+1}(t) = ½(t² − t⁴) u_k'(t) + ⅛ ∫₀ᵗ (1 − 5s²) u_k(s) ds`.
//! The recurrence only differentiates and integrates polynomials, so the
//! coefficients are generated exactly with big rationals and converted to
//! `f64` once.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

/// Largest `k` the table is built for.
pub const MAX_K: usize = 13;

/// Dense monomial coefficients; `coeffs[j]` multiplies `t^j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalPoly {
    coeffs: Vec<BigRational>,
}

impl RationalPoly {
    pub fn one() -> Self {
        Self {
            coeffs: vec![BigRational::from_integer(1.into())],
        }
    }

    /// Builds a polynomial from `(numerator, denominator)` pairs, lowest
    /// power first.
    pub fn from_i64_pairs(pairs: &[(i64, i64)]) -> Self {
        let coeffs = pairs
            .iter()
            .map(|&(n, d)| BigRational::new(n.into(), d.into()))
            .collect();
        let mut p = Self { coeffs };
        p.trim();
        p
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    fn trim(&mut self) {
        while self.coeffs.len() > 1 && self.coeffs.last().is_some_and(Zero::is_zero) {
            self.coeffs.pop();
        }
    }

    fn get(&self, j: usize) -> BigRational {
        self.coeffs.get(j).cloned().unwrap_or_else(BigRational::zero)
    }

    /// One step of the recurrence.
    pub fn next(&self) -> Self {
        let n = self.coeffs.len();
        let mut out = vec![BigRational::zero(); n + 3];

        // ½(t² − t⁴) Σ j c_j t^{j−1} = Σ ½ j c_j (t^{j+1} − t^{j+3})
        for j in 1..n {
            let c = self.get(j) * BigInt::from(j) / BigInt::from(2);
            out[j + 1] += c.clone();
            out[j + 3] -= c;
        }
        // ⅛ ∫₀ᵗ (1 − 5s²) Σ c_j s^j ds = ⅛ Σ c_j (t^{j+1}/(j+1) − 5 t^{j+3}/(j+3))
        for j in 0..n {
            let c = self.get(j) / BigInt::from(8);
            out[j + 1] += c.clone() / BigInt::from(j + 1);
            out[j + 3] -= c * BigInt::from(5) / BigInt::from(j + 3);
        }

        let mut p = Self { coeffs: out };
        p.trim();
        p
    }
}

/// `u_0 .. u_{max_k}` in exact arithmetic.
pub fn generate_rational(max_k: usize) -> Vec<RationalPoly> {
    let mut polys = Vec::with_capacity(max_k + 1);
    polys.push(RationalPoly::one());
    for k in 0..max_k {
        let next = polys[k].next();
        polys.push(next);
    }
    polys
}

/// Double-precision view of `u_k(t) = t^k P_k(t²)`.
///
/// `even_coeffs[k][i]` multiplies `t^{k+2i}`; only these powers are
/// nonzero in `u_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct UkTable {
    even_coeffs: Vec<Vec<f64>>,
}

impl UkTable {
    /// Builds the table up to `max_k` (at most [`MAX_K`]).
    pub fn generate(max_k: usize) -> Self {
        assert!(max_k <= MAX_K, "u_k table supports k <= {MAX_K}");
        let even_coeffs = generate_rational(max_k)
            .iter()
            .enumerate()
            .map(|(k, p)| {
                (k..=3 * k)
                    .step_by(2)
                    .map(|j| p.get(j).to_f64().expect("finite rational"))
                    .collect()
            })
            .collect();
        Self { even_coeffs }
    }

    /// Process-wide table for `k <= 13`, built on first use.
    pub fn shared() -> &'static UkTable {
        static TABLE: OnceLock<UkTable> = OnceLock::new();
        TABLE.get_or_init(|| UkTable::generate(MAX_K))
    }

    pub fn max_k(&self) -> usize {
        self.even_coeffs.len() - 1
    }

    /// `u_k(t)` via Horner in `t²`.
    #[inline]
    pub fn eval(&self, k: usize, t: f64) -> f64 {
        let t2 = t * t;
        let p = self.even_coeffs[k]
            .iter()
            .rev()
            .fold(0.0, |acc, &c| acc * t2 + c);
        p * t.powi(k as i32)
    }
}

/// JSON-friendly dump: `k -> [[numerator, denominator], ...]` lowest power
/// first, with big integers rendered as decimal strings.
#[derive(Debug, Clone, Serialize)]
pub struct UkTableDump {
    pub max_k: usize,
    pub polynomials: Vec<Vec<[String; 2]>>,
}

pub fn dump(max_k: usize) -> UkTableDump {
    let polynomials = generate_rational(max_k)
        .iter()
        .map(|p| {
            p.coeffs()
                .iter()
                .map(|c| [c.numer().to_string(), c.denom().to_string()])
                .collect()
        })
        .collect();
    UkTableDump { max_k, polynomials }
}
