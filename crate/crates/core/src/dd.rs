//! Double-double ("twofold") arithmetic.
//!
//! A [`Dd`] carries an unevaluated sum `hi + lo` with `|lo| <= ulp(hi) / 2`,
//! giving roughly 106 bits of significand. It is used to form and accumulate
//! the terms of alternating binomial series, whose cancellation would
//! otherwise destroy most of the digits of an `f64` result.
//!
//! Only the operations the series code needs are provided.

use std::cmp::Ordering;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub};

/// Error-free sum: `a + b = s + e` exactly.
#[inline]
pub fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let e = (a - (s - bb)) + (b - bb);
    (s, e)
}

/// Error-free sum, valid when `|a| >= |b|`.
#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let e = b - (s - a);
    (s, e)
}

/// Error-free product: `a * b = p + e` exactly (barring over/underflow).
#[inline]
pub fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let e = a.mul_add(b, -p);
    (p, e)
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

const LN2: Dd = Dd {
    hi: std::f64::consts::LN_2,
    lo: 2.319_046_813_846_299_6e-17,
};

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };
    pub const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };

    #[inline]
    pub const fn from_f64(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    #[inline]
    fn renorm(hi: f64, lo: f64) -> Dd {
        let (hi, lo) = quick_two_sum(hi, lo);
        Dd { hi, lo }
    }

    /// Rounds to the nearest `f64`.
    #[inline]
    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    #[inline]
    pub fn abs(self) -> Dd {
        if self.hi < 0.0 || (self.hi == 0.0 && self.lo < 0.0) {
            -self
        } else {
            self
        }
    }

    #[inline]
    pub fn is_finite(self) -> bool {
        self.hi.is_finite() && self.lo.is_finite()
    }

    /// Exact product of two doubles.
    #[inline]
    pub fn mul_f64s(a: f64, b: f64) -> Dd {
        let (hi, lo) = two_prod(a, b);
        Dd { hi, lo }
    }

    /// Exact difference of two doubles.
    #[inline]
    pub fn sub_f64s(a: f64, b: f64) -> Dd {
        let (hi, lo) = two_sum(a, -b);
        Dd { hi, lo }
    }

    /// Multiplication by `2^k` (exact unless the result leaves the normal range).
    pub fn ldexp(self, k: i32) -> Dd {
        Dd {
            hi: libm::ldexp(self.hi, k),
            lo: libm::ldexp(self.lo, k),
        }
    }

    pub fn recip(self) -> Dd {
        Dd::ONE / self
    }

    pub fn sqr(self) -> Dd {
        let (p, e) = two_prod(self.hi, self.hi);
        let e = e + 2.0 * self.hi * self.lo;
        Dd::renorm(p, e)
    }

    pub fn sqrt(self) -> Dd {
        if self.hi <= 0.0 {
            return if self.hi == 0.0 {
                Dd::ZERO
            } else {
                Dd::from_f64(f64::NAN)
            };
        }
        let s = self.hi.sqrt();
        let r = self - Dd::mul_f64s(s, s);
        Dd::renorm(s, r.hi / (2.0 * s))
    }

    pub fn powi(self, mut n: i32) -> Dd {
        if n == 0 {
            return Dd::ONE;
        }
        let invert = n < 0;
        n = n.abs();
        let mut base = self;
        let mut acc = Dd::ONE;
        while n > 0 {
            if n & 1 == 1 {
                acc = acc * base;
            }
            n >>= 1;
            if n > 0 {
                base = base.sqr();
            }
        }
        if invert {
            acc.recip()
        } else {
            acc
        }
    }

    pub fn exp(self) -> Dd {
        if self.hi > 709.78 {
            return Dd::from_f64(f64::INFINITY);
        }
        if self.hi < -745.2 {
            return Dd::ZERO;
        }
        if self.hi == 0.0 && self.lo == 0.0 {
            return Dd::ONE;
        }
        // x = k ln2 + r, then exp(r) = (1 + expm1(r / 2^9))^(2^9).
        let k = (self.hi / LN2.hi).round();
        let r = (self - LN2 * k).ldexp(-9);

        let mut sum = r;
        let mut term = r;
        for i in 2..=14 {
            term = term * r / (i as f64);
            sum += term;
            if term.hi.abs() < 1e-34 {
                break;
            }
        }
        for _ in 0..9 {
            sum = sum * 2.0 + sum.sqr();
        }
        let e = sum + 1.0;
        e.ldexp(k as i32)
    }

    pub fn ln(self) -> Dd {
        if self.hi <= 0.0 {
            return Dd::from_f64(if self.hi == 0.0 {
                f64::NEG_INFINITY
            } else {
                f64::NAN
            });
        }
        // One Newton step on exp(y) = x doubles the precision of the f64 log.
        let y = Dd::from_f64(self.hi.ln());
        y + self * (-y).exp() - 1.0
    }

    /// `self^e` for `self > 0`.
    pub fn powf(self, e: f64) -> Dd {
        if e == e.trunc() && e.abs() < 1024.0 {
            return self.powi(e as i32);
        }
        let twice = 2.0 * e;
        if twice == twice.trunc() && twice.abs() < 1024.0 {
            let whole = (e - 0.5) as i32;
            return self.powi(whole) * self.sqrt();
        }
        (self.ln() * e).exp()
    }
}

impl From<f64> for Dd {
    fn from(x: f64) -> Dd {
        Dd::from_f64(x)
    }
}

impl PartialOrd for Dd {
    fn partial_cmp(&self, other: &Dd) -> Option<Ordering> {
        match self.hi.partial_cmp(&other.hi)? {
            Ordering::Equal => self.lo.partial_cmp(&other.lo),
            ord => Some(ord),
        }
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

impl Add for Dd {
    type Output = Dd;
    #[inline]
    fn add(self, b: Dd) -> Dd {
        let (s1, s2) = two_sum(self.hi, b.hi);
        let (t1, t2) = two_sum(self.lo, b.lo);
        let s2 = s2 + t1;
        let (s1, s2) = quick_two_sum(s1, s2);
        let s2 = s2 + t2;
        Dd::renorm(s1, s2)
    }
}

impl Add<f64> for Dd {
    type Output = Dd;
    #[inline]
    fn add(self, b: f64) -> Dd {
        let (s1, s2) = two_sum(self.hi, b);
        let s2 = s2 + self.lo;
        Dd::renorm(s1, s2)
    }
}

impl AddAssign for Dd {
    #[inline]
    fn add_assign(&mut self, b: Dd) {
        *self = *self + b;
    }
}

impl Sub for Dd {
    type Output = Dd;
    #[inline]
    fn sub(self, b: Dd) -> Dd {
        self + (-b)
    }
}

impl Sub<f64> for Dd {
    type Output = Dd;
    #[inline]
    fn sub(self, b: f64) -> Dd {
        self + (-b)
    }
}

impl Mul for Dd {
    type Output = Dd;
    #[inline]
    fn mul(self, b: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, b.hi);
        let e = e + (self.hi * b.lo + self.lo * b.hi);
        Dd::renorm(p, e)
    }
}

impl Mul<f64> for Dd {
    type Output = Dd;
    #[inline]
    fn mul(self, b: f64) -> Dd {
        let (p, e) = two_prod(self.hi, b);
        let e = e + self.lo * b;
        Dd::renorm(p, e)
    }
}

impl Div for Dd {
    type Output = Dd;
    fn div(self, b: Dd) -> Dd {
        let q1 = self.hi / b.hi;
        let r = self - b * q1;
        let q2 = r.hi / b.hi;
        let r = r - b * q2;
        let q3 = r.hi / b.hi;
        let (q1, q2) = quick_two_sum(q1, q2);
        Dd { hi: q1, lo: q2 } + q3
    }
}

impl Div<f64> for Dd {
    type Output = Dd;
    fn div(self, b: f64) -> Dd {
        self / Dd::from_f64(b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    // Reference digits from a 50-digit evaluation.
    const E_HI: f64 = std::f64::consts::E;
    const E_LO: f64 = 1.445_646_891_729_250_2e-16;

    #[test]
    fn exp_one_matches_extended_reference() {
        let e = Dd::ONE.exp();
        assert_eq!(e.hi, E_HI);
        assert!((e.lo - E_LO).abs() < 1e-31);
    }

    #[test]
    fn ln_inverts_exp() {
        for &x in &[1e-8, 0.3, 1.0, 2.5, 40.0, 1234.5] {
            let d = Dd::from_f64(x);
            let back = d.ln().exp();
            let rel = ((back - d) / d).to_f64().abs();
            // exp amplifies the absolute error of ln by |ln x|
            assert!(rel < 1e-31 * (1.0 + x.ln().abs()) * 4.0, "x = {x}, rel = {rel:e}");
        }
    }

    #[test]
    fn sqrt_squares_back() {
        for m in 1..200 {
            let s = Dd::from_f64(m as f64).sqrt();
            let r = (s.sqr() - m as f64).to_f64().abs();
            assert!(r < 1e-29 * m as f64);
        }
    }

    #[test]
    fn third_times_three() {
        let third = Dd::ONE / 3.0;
        let back = third * 3.0 - 1.0;
        assert!(back.to_f64().abs() < 1e-32);
    }

    #[test]
    fn half_integer_power_uses_sqrt() {
        let x = Dd::from_f64(7.0);
        let a = x.powf(-2.5);
        let b = (x.ln() * -2.5).exp();
        assert!(((a - b) / a).to_f64().abs() < 1e-30);
    }
}
