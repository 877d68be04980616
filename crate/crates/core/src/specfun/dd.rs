//! Minimal double-double arithmetic for the alternating power series.
//!
//! The J0 series at |x| = 20 has intermediate terms near 1e7; plain f64
//! summation would leave about 1e-9 absolute error.

use std::ops::{Add, Mul};

#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) struct DoubleF64 {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl DoubleF64 {
    pub fn from_f64(x: f64) -> Self {
        Self { hi: x, lo: 0.0 }
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    pub fn neg(self) -> Self {
        Self {
            hi: -self.hi,
            lo: -self.lo,
        }
    }

    pub fn div_f64(self, b: f64) -> Self {
        let q1 = self.hi / b;
        let (p, e) = two_prod(q1, b);
        let (s, mut t) = two_sum(self.hi, -p);
        t -= e;
        t += self.lo;
        let q2 = (s + t) / b;
        let (hi, lo) = quick_two_sum(q1, q2);
        Self { hi, lo }
    }

    pub fn abs_f64(self) -> f64 {
        self.hi.abs()
    }
}

impl Add for DoubleF64 {
    type Output = Self;

    fn add(self, b: Self) -> Self {
        let (s, e) = two_sum(self.hi, b.hi);
        let (t, f) = two_sum(self.lo, b.lo);
        let (s, e) = quick_two_sum(s, e + t);
        let (hi, lo) = quick_two_sum(s, e + f);
        Self { hi, lo }
    }
}

impl Mul for DoubleF64 {
    type Output = Self;

    fn mul(self, b: Self) -> Self {
        let (p, e) = two_prod(self.hi, b.hi);
        let e = e + (self.hi * b.lo + self.lo * b.hi);
        let (hi, lo) = quick_two_sum(p, e);
        Self { hi, lo }
    }
}

impl Mul<f64> for DoubleF64 {
    type Output = Self;

    fn mul(self, b: f64) -> Self {
        let (p, e) = two_prod(self.hi, b);
        let e = e + self.lo * b;
        let (hi, lo) = quick_two_sum(p, e);
        Self { hi, lo }
    }
}

/// `x * x / 4` carried in double-double.
pub(crate) fn quarter_square(x: f64) -> DoubleF64 {
    let (hi, lo) = two_prod(x, x);
    DoubleF64 {
        hi: hi * 0.25,
        lo: lo * 0.25,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_cancelled_digits() {
        let big = DoubleF64::from_f64(1e8);
        let tiny = DoubleF64::from_f64(1e-9);
        let s = big + tiny + big.neg();
        assert_eq!(s.to_f64(), 1e-9);
    }

    #[test]
    fn division_is_accurate() {
        let third = DoubleF64::from_f64(1.0).div_f64(3.0);
        let back = third * 3.0;
        assert!(((back.hi - 1.0) + back.lo).abs() < 1e-30);
    }
}
