//! A double-precision significand with a 64-bit binary exponent.
//!
//! Values are `significand · 2^exponent` with `|significand| ∈ [1, 2)`, or
//! exactly zero. The sign lives on the significand. Range is effectively
//! unbounded for this crate's purposes (`|exponent| < 2^62`); overflow of the
//! exponent yields a non-finite value that callers surface as a numeric-range
//! error.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub};

const EXP_LIMIT: i64 = 1 << 62;
const LN2_HI: f64 = std::f64::consts::LN_2;
const LN2_LO: f64 = 2.319_046_813_846_299_6e-17;

#[derive(Clone, Copy, Debug)]
pub struct XFloat {
    sig: f64,
    exp: i64,
}

impl XFloat {
    pub const ZERO: XFloat = XFloat { sig: 0.0, exp: 0 };
    pub const ONE: XFloat = XFloat { sig: 1.0, exp: 0 };
    const NAN: XFloat = XFloat {
        sig: f64::NAN,
        exp: 0,
    };

    #[inline]
    fn normalize(sig: f64, exp: i64) -> XFloat {
        if sig == 0.0 {
            return XFloat::ZERO;
        }
        if !sig.is_finite() {
            return XFloat::NAN;
        }
        let mut bits = sig.to_bits();
        let mut biased = ((bits >> 52) & 0x7ff) as i64;
        let mut exp = exp;
        if biased == 0 {
            // subnormal significand
            let scaled = sig * f64::from_bits(((1023 + 64) as u64) << 52);
            bits = scaled.to_bits();
            biased = ((bits >> 52) & 0x7ff) as i64;
            exp -= 64;
        }
        let e = match exp.checked_add(biased - 1023) {
            Some(e) if e.abs() < EXP_LIMIT => e,
            _ => return XFloat::NAN,
        };
        let sig = f64::from_bits((bits & !(0x7ffu64 << 52)) | (1023u64 << 52));
        XFloat { sig, exp: e }
    }

    pub fn from_f64(x: f64) -> XFloat {
        XFloat::normalize(x, 0)
    }

    /// `x · 2^e`.
    pub fn ldexp(x: f64, e: i64) -> XFloat {
        XFloat::normalize(x, e)
    }

    /// `e^x` for any finite `x`.
    pub fn exp_of(x: f64) -> XFloat {
        if !x.is_finite() {
            return if x == f64::NEG_INFINITY {
                XFloat::ZERO
            } else {
                XFloat::NAN
            };
        }
        let k = (x / LN2_HI).round();
        if k.abs() >= EXP_LIMIT as f64 {
            return XFloat::NAN;
        }
        let p = k * LN2_HI;
        let err = k.mul_add(LN2_HI, -p);
        let r = ((x - p) - err) - k * LN2_LO;
        XFloat::normalize(r.exp(), k as i64)
    }

    pub fn significand(self) -> f64 {
        self.sig
    }

    pub fn exponent(self) -> i64 {
        self.exp
    }

    pub fn is_zero(self) -> bool {
        self.sig == 0.0
    }

    pub fn is_finite(self) -> bool {
        self.sig.is_finite()
    }

    pub fn is_sign_negative(self) -> bool {
        self.sig < 0.0
    }

    pub fn abs(self) -> XFloat {
        XFloat {
            sig: self.sig.abs(),
            exp: self.exp,
        }
    }

    /// Natural logarithm; `-inf` for zero, NaN for negative values.
    pub fn ln(self) -> f64 {
        if self.sig == 0.0 {
            return f64::NEG_INFINITY;
        }
        if self.sig < 0.0 || !self.sig.is_finite() {
            return f64::NAN;
        }
        self.sig.ln() + self.exp as f64 * LN2_HI
    }

    /// Nearest `f64`, flushing to zero or infinity outside its range.
    pub fn to_f64(self) -> f64 {
        if self.sig == 0.0 || !self.sig.is_finite() {
            return self.sig;
        }
        if self.exp > 1023 {
            return self.sig.signum() * f64::INFINITY;
        }
        if self.exp < -1074 - 1 {
            return 0.0 * self.sig.signum();
        }
        if self.exp >= -1022 {
            self.sig * f64::from_bits(((self.exp + 1023) as u64) << 52)
        } else {
            // two steps through the subnormal range
            self.sig * f64::from_bits(((self.exp + 1023 + 64) as u64) << 52) * 2f64.powi(-64)
        }
    }

    pub fn recip(self) -> XFloat {
        XFloat::ONE / self
    }

    /// Multiplies by `2^k`.
    fn scale2(sig: f64, k: i64) -> f64 {
        if k <= -1075 {
            return 0.0;
        }
        if k >= -1022 {
            sig * f64::from_bits(((k + 1023) as u64) << 52)
        } else {
            sig * f64::from_bits(((k + 1023 + 64) as u64) << 52) * 2f64.powi(-64)
        }
    }
}

impl From<f64> for XFloat {
    fn from(x: f64) -> Self {
        XFloat::from_f64(x)
    }
}

impl Mul for XFloat {
    type Output = XFloat;
    #[inline]
    fn mul(self, rhs: XFloat) -> XFloat {
        if self.sig == 0.0 || rhs.sig == 0.0 {
            if self.sig.is_nan() || rhs.sig.is_nan() {
                return XFloat::NAN;
            }
            return XFloat::ZERO;
        }
        match self.exp.checked_add(rhs.exp) {
            Some(e) => XFloat::normalize(self.sig * rhs.sig, e),
            None => XFloat::NAN,
        }
    }
}

impl MulAssign for XFloat {
    fn mul_assign(&mut self, rhs: XFloat) {
        *self = *self * rhs;
    }
}

impl Div for XFloat {
    type Output = XFloat;
    #[inline]
    fn div(self, rhs: XFloat) -> XFloat {
        if rhs.sig == 0.0 || rhs.sig.is_nan() || self.sig.is_nan() {
            return XFloat::NAN;
        }
        if self.sig == 0.0 {
            return XFloat::ZERO;
        }
        match self.exp.checked_sub(rhs.exp) {
            Some(e) => XFloat::normalize(self.sig / rhs.sig, e),
            None => XFloat::NAN,
        }
    }
}

impl Add for XFloat {
    type Output = XFloat;
    #[inline]
    fn add(self, rhs: XFloat) -> XFloat {
        if rhs.sig == 0.0 {
            return self;
        }
        if self.sig == 0.0 {
            return rhs;
        }
        let (big, small) = if self.exp >= rhs.exp {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let d = big.exp.saturating_sub(small.exp);
        if d > 60 {
            return big;
        }
        XFloat::normalize(big.sig + XFloat::scale2(small.sig, -d), big.exp)
    }
}

impl AddAssign for XFloat {
    fn add_assign(&mut self, rhs: XFloat) {
        *self = *self + rhs;
    }
}

impl Neg for XFloat {
    type Output = XFloat;
    fn neg(self) -> XFloat {
        XFloat {
            sig: -self.sig,
            exp: self.exp,
        }
    }
}

impl Sub for XFloat {
    type Output = XFloat;
    fn sub(self, rhs: XFloat) -> XFloat {
        self + (-rhs)
    }
}

impl PartialEq for XFloat {
    fn eq(&self, other: &Self) -> bool {
        self.partial_cmp(other) == Some(Ordering::Equal)
    }
}

impl PartialOrd for XFloat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        if self.sig.is_nan() || other.sig.is_nan() {
            return None;
        }
        let sa = self.sig.partial_cmp(&0.0)?;
        let sb = other.sig.partial_cmp(&0.0)?;
        if sa != sb || sa == Ordering::Equal {
            return sa.partial_cmp(&sb);
        }
        let mag = match self.exp.cmp(&other.exp) {
            Ordering::Equal => self.sig.abs().partial_cmp(&other.sig.abs())?,
            o => o,
        };
        Some(if sa == Ordering::Less { mag.reverse() } else { mag })
    }
}

impl fmt::Display for XFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.sig == 0.0 || !self.sig.is_finite() {
            return write!(f, "{}", self.sig);
        }
        // decimal mantissa/exponent from the base-2 representation
        let log10 = self.abs().ln() / std::f64::consts::LN_10;
        let e10 = log10.floor();
        let m = 10f64.powf(log10 - e10) * self.sig.signum();
        write!(f, "{m:.6}e{e10}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn round_trips_doubles() {
        for &x in &[1.0, -3.5, 1e-300, 4.9e-324, 1.7e308, 0.1, -0.0] {
            assert_eq!(XFloat::from_f64(x).to_f64(), x);
        }
    }

    #[test]
    fn exp_of_far_outside_double_range() {
        let a = XFloat::exp_of(-1e6);
        assert!(a.is_finite() && !a.is_zero());
        assert!(rel(a.ln(), -1e6) < 1e-15);
        let b = XFloat::exp_of(-1e6 + 3.0);
        assert!(rel((b / a).to_f64(), 3f64.exp()) < 1e-9);
        assert_eq!(a.to_f64(), 0.0);
        assert!(XFloat::exp_of(2.0e9).is_finite());
    }

    #[test]
    fn addition_handles_cancellation_and_zero() {
        let a = XFloat::from_f64(1.5);
        assert!((a - a).is_zero());
        let tiny = XFloat::exp_of(-5000.0);
        assert_eq!((a + tiny).to_f64(), 1.5);
        let s = tiny + tiny;
        assert!(rel((s / tiny).to_f64(), 2.0) < 1e-15);
    }

    #[test]
    fn ordering() {
        let a = XFloat::exp_of(-800.0);
        let b = XFloat::exp_of(-700.0);
        assert!(a < b);
        assert!(-b < -a);
        assert!(XFloat::ZERO < a);
        assert!(-a < XFloat::ZERO);
        assert_eq!(XFloat::from_f64(2.0), XFloat::from_f64(2.0));
    }

    #[test]
    fn division_by_zero_is_not_finite() {
        assert!(!(XFloat::ONE / XFloat::ZERO).is_finite());
    }

    proptest! {
        #[test]
        fn arithmetic_matches_f64(x in -1e100f64..1e100, y in -1e100f64..1e100) {
            let (a, b) = (XFloat::from_f64(x), XFloat::from_f64(y));
            let tol = |v: f64| 1e-15 * v.abs() + 1e-300;
            prop_assert!(((a * b).to_f64() - x * y).abs() <= tol(x * y));
            if y != 0.0 {
                prop_assert!(((a / b).to_f64() - x / y).abs() <= tol(x / y));
            }
            let s = x + y;
            prop_assert!(((a + b).to_f64() - s).abs() <= 1e-15 * (x.abs() + y.abs()) + 1e-300);
        }

        #[test]
        fn ln_and_exp_agree(x in -1e7f64..1e7) {
            let v = XFloat::exp_of(x);
            prop_assert!((v.ln() - x).abs() <= 1e-15 * x.abs().max(1.0) * 4.0);
        }

        #[test]
        fn scaled_products_keep_relative_accuracy(x in 0.5f64..2.0, y in 0.5f64..2.0, k in -3000i64..3000) {
            let shift = XFloat::exp_of(k as f64 * 10.0);
            let a = XFloat::from_f64(x) * shift;
            let b = XFloat::from_f64(y) * shift;
            let q = ((a + b) / shift).to_f64();
            prop_assert!(rel(q, x + y) < 1e-14);
        }
    }
}
