//! Minimal double-double arithmetic, used where a few `O(v)` terms cancel
//! down to an `O(1)` result.

use std::ops::{Add, Mul, Neg, Sub};

/// Unevaluated sum `hi + lo` with `|lo| <= ulp(hi)/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Dd {
    pub hi: f64,
    pub lo: f64,
}


#[inline]
fn two_sum(a: f64, b: f64) -> Dd {
    let s = a + b;
    let bb = s - a;
    Dd {
        hi: s,
        lo: (a - (s - bb)) + (b - bb),
    }
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> Dd {
    let s = a + b;
    Dd {
        hi: s,
        lo: b - (s - a),
    }
}

#[inline]
fn two_prod(a: f64, b: f64) -> Dd {
    let p = a * b;
    Dd {
        hi: p,
        lo: a.mul_add(b, -p),
    }
}

impl Dd {
    pub const LN_2: Dd = Dd {
        hi: std::f64::consts::LN_2,
        lo: 2.319_046_813_846_299_6e-17,
    };

    pub const PI: Dd = Dd {
        hi: std::f64::consts::PI,
        lo: 1.224_646_799_147_353_2e-16,
    };

    pub const fn new(hi: f64) -> Self {
        Self { hi, lo: 0.0 }
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    /// `a / b` for plain doubles.
    pub fn ratio(a: f64, b: f64) -> Self {
        let q = a / b;
        let r = (-q).mul_add(b, a);
        quick_two_sum(q, r / b)
    }

    pub fn div_f64(self, b: f64) -> Self {
        let q1 = self.hi / b;
        let p = two_prod(q1, b);
        let r = (self - p).hi;
        let q2 = r / b;
        quick_two_sum(q1, q2)
    }

    pub fn div(self, b: Dd) -> Self {
        let q1 = self.hi / b.hi;
        let r = self - b * Dd::new(q1);
        let q2 = r.hi / b.hi;
        let r = r - b * Dd::new(q2);
        let q3 = r.hi / b.hi;
        quick_two_sum(q1, q2) + Dd::new(q3)
    }

    pub fn sqrt(self) -> Self {
        if self.hi <= 0.0 {
            return Dd::new(0.0);
        }
        let s = self.hi.sqrt();
        let r = self - two_prod(s, s);
        quick_two_sum(s, r.hi / (2.0 * s))
    }

    /// Natural log for positive arguments: `e ln 2 + 2 atanh((m-1)/(m+1))`
    /// with `m ∈ [√½, √2)`.
    pub fn ln(self) -> Self {
        debug_assert!(self.hi > 0.0);
        let mut e = self.hi.log2().round() as i32;
        let mut scale = 2f64.powi(-e);
        let mut m = Dd {
            hi: self.hi * scale,
            lo: self.lo * scale,
        };
        if m.hi > std::f64::consts::SQRT_2 {
            e += 1;
            scale = 0.5;
            m = Dd {
                hi: m.hi * scale,
                lo: m.lo * scale,
            };
        } else if m.hi < std::f64::consts::FRAC_1_SQRT_2 {
            e -= 1;
            m = Dd {
                hi: m.hi * 2.0,
                lo: m.lo * 2.0,
            };
        }
        let u = (m - Dd::new(1.0)).div(m + Dd::new(1.0));
        let u2 = u * u;
        // |u| < 0.172, so u² < 0.03 and 22 terms reach 1e-33
        let mut sum = Dd::new(0.0);
        for k in (0..22).rev() {
            sum = sum * u2 + Dd::new(1.0).div_f64((2 * k + 1) as f64);
        }
        let atanh = u * sum;
        Dd::LN_2 * Dd::new(e as f64) + atanh + atanh
    }
}

/// `B_{2k} / (2k (2k−1))` for `k = 1..15` as exact integer ratios.
const STIRLING: [(f64, f64); 15] = [
    (1.0, 12.0),
    (-1.0, 360.0),
    (1.0, 1260.0),
    (-1.0, 1680.0),
    (1.0, 1188.0),
    (-691.0, 360_360.0),
    (1.0, 156.0),
    (-3617.0, 122_400.0),
    (43_867.0, 244_188.0),
    (-174_611.0, 125_400.0),
    (854_513.0, 63_756.0),
    (-236_364_091.0, 1_506_960.0),
    (8_553_103.0, 3900.0),
    (-23_749_461_029.0, 657_720.0),
    (8_615_841_276_005.0, 12_460_140.0),
];

/// Arguments are shifted up to at least this before the Stirling series.
const STIRLING_MIN: f64 = 25.0;

impl Dd {
    /// `ln Γ(z)` for `z > 0`, accurate to a few units of `1e-31` in
    /// absolute terms.
    pub fn lgamma(self) -> Self {
        debug_assert!(self.hi > 0.0);
        let mut z = self;
        let mut product = Dd::new(1.0);
        while z.hi < STIRLING_MIN {
            product = product * z;
            z = z + Dd::new(1.0);
        }
        let half = Dd::new(0.5);
        let ln_z = z.ln();
        let mut out = (z - half) * ln_z - z + half * (Dd::new(2.0) * Dd::PI).ln();
        let inv = Dd::new(1.0).div(z);
        let inv2 = inv * inv;
        let mut power = inv;
        for &(num, den) in &STIRLING {
            out = out + Dd::ratio(num, den) * power;
            power = power * inv2;
        }
        if product != Dd::new(1.0) {
            out = out - product.ln();
        }
        out
    }
}

impl Add for Dd {
    type Output = Dd;
    #[inline]
    fn add(self, b: Dd) -> Dd {
        let s = two_sum(self.hi, b.hi);
        let t = two_sum(self.lo, b.lo);
        let s = quick_two_sum(s.hi, s.lo + t.hi);
        quick_two_sum(s.hi, s.lo + t.lo)
    }
}

impl Neg for Dd {
    type Output = Dd;
    #[inline]
    fn neg(self) -> Dd {
        Dd {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

impl Sub for Dd {
    type Output = Dd;
    #[inline]
    fn sub(self, b: Dd) -> Dd {
        self + (-b)
    }
}

impl Mul for Dd {
    type Output = Dd;
    #[inline]
    fn mul(self, b: Dd) -> Dd {
        let p = two_prod(self.hi, b.hi);
        let lo = p.lo + (self.hi * b.lo + self.lo * b.hi);
        quick_two_sum(p.hi, lo)
    }
}
