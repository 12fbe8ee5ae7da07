//! Approximations to elements of `Q_p` with tracked absolute precision.
//!
//! A value is `p^val · u + O(p^prec)` where `u` is a `p`-adic unit known
//! modulo `p^{prec − val}`. Values with no digits below `prec` are zero and
//! store `val = prec`. Sums keep the smaller absolute precision, products use
//! `min(prec_a + val_b, prec_b + val_a)`, and dividing by `p` lowers both the
//! valuation and the absolute precision by one.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::arith::{self, Rational};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PAdic {
    p: u64,
    prec: i64,
    val: i64,
    unit: BigInt,
}

impl PAdic {
    pub fn zero(p: u64, prec: i64) -> Self {
        PAdic {
            p,
            prec,
            val: prec,
            unit: BigInt::zero(),
        }
    }

    pub fn one(p: u64, prec: i64) -> Self {
        Self::from_int(p, 1, prec)
    }

    pub fn from_int(p: u64, n: i64, prec: i64) -> Self {
        Self::from_rational(p, &arith::rat(n), prec)
    }

    /// `x + O(p^prec)`.
    pub fn from_rational(p: u64, x: &Rational, prec: i64) -> Self {
        let Some(v) = arith::vp_rat(x, p) else {
            return Self::zero(p, prec);
        };
        if v >= prec {
            return Self::zero(p, prec);
        }
        let shift = Rational::from_integer(arith::pow_big(p, v.unsigned_abs() as u32));
        let unit_part = if v >= 0 { x / shift } else { x * shift };
        let unit = arith::reduce_mod_pm(&unit_part, p, (prec - v) as u32)
            .expect("unit part is p-integral");
        PAdic { p, prec, val: v, unit }
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    /// Absolute precision: the value is known modulo `p^precision`.
    pub fn precision(&self) -> i64 {
        self.prec
    }

    pub fn is_zero(&self) -> bool {
        self.unit.is_zero()
    }

    pub fn valuation(&self) -> Option<i64> {
        (!self.is_zero()).then_some(self.val)
    }

    /// Valuation, or the precision for a value indistinguishable from zero.
    fn val_or_prec(&self) -> i64 {
        self.val
    }

    pub fn is_integral(&self) -> bool {
        self.val >= 0
    }

    /// A rational representative `p^val · u`.
    pub fn to_rational(&self) -> Rational {
        if self.is_zero() {
            return Rational::zero();
        }
        let pv = Rational::from_integer(arith::pow_big(self.p, self.val.unsigned_abs() as u32));
        let u = Rational::from_integer(self.unit.clone());
        if self.val >= 0 {
            u * pv
        } else {
            u / pv
        }
    }

    /// Canonical residue in `[0, p^prec)` for an integral value.
    pub fn residue(&self) -> Option<BigInt> {
        if self.val < 0 || self.prec < 0 {
            return None;
        }
        let modulus = arith::pow_big(self.p, self.prec as u32);
        Some(self.to_rational().to_integer().mod_floor(&modulus))
    }

    /// First `p`-adic digit of the unit part: the image in the residue field
    /// of the graded piece the value lives in.
    pub fn leading_digit(&self) -> Option<u64> {
        if self.is_zero() {
            return None;
        }
        let d = self.unit.mod_floor(&BigInt::from(self.p));
        Some(d.to_string().parse().expect("digit fits in u64"))
    }

    /// Same value with absolute precision lowered to `prec`.
    pub fn with_precision(&self, prec: i64) -> PAdic {
        PAdic::from_rational(self.p, &self.to_rational(), prec.min(self.prec))
    }

    fn check_prime(&self, other: &PAdic) {
        assert_eq!(self.p, other.p, "p-adic operands over different primes");
    }

    pub fn checked_div(&self, other: &PAdic) -> Result<PAdic> {
        self.check_prime(other);
        if other.is_zero() {
            return Err(Error::PrecisionExhausted(
                "division by a value indistinguishable from zero".into(),
            ));
        }
        let vb = other.val;
        if self.is_zero() {
            return Ok(PAdic::zero(self.p, self.prec - vb));
        }
        let rel = (self.prec - self.val).min(other.prec - vb);
        let prec = self.val - vb + rel;
        Ok(PAdic::from_rational(
            self.p,
            &(self.to_rational() / other.to_rational()),
            prec,
        ))
    }

    /// Exact division by a nonzero integer; costs `v_p(n)` digits.
    pub fn div_int(&self, n: i64) -> PAdic {
        assert!(n != 0, "division by zero");
        let v = arith::vp_int(&BigInt::from(n), self.p).unwrap() as i64;
        PAdic::from_rational(self.p, &(self.to_rational() / arith::rat(n)), self.prec - v)
    }

    /// Multiplication by `p^k` (`k` may be negative).
    pub fn shift(&self, k: i64) -> PAdic {
        let factor = if k >= 0 {
            Rational::from_integer(arith::pow_big(self.p, k as u32))
        } else {
            Rational::one() / Rational::from_integer(arith::pow_big(self.p, (-k) as u32))
        };
        PAdic::from_rational(self.p, &(self.to_rational() * factor), self.prec + k)
    }

    /// Number of leading digits on which two values provably agree.
    pub fn agreement(&self, other: &PAdic) -> i64 {
        let d = self - other;
        d.valuation().unwrap_or(d.prec).min(d.prec)
    }
}

impl Add for &PAdic {
    type Output = PAdic;

    fn add(self, rhs: &PAdic) -> PAdic {
        self.check_prime(rhs);
        let prec = self.prec.min(rhs.prec);
        PAdic::from_rational(self.p, &(self.to_rational() + rhs.to_rational()), prec)
    }
}

impl Sub for &PAdic {
    type Output = PAdic;

    fn sub(self, rhs: &PAdic) -> PAdic {
        self.check_prime(rhs);
        let prec = self.prec.min(rhs.prec);
        PAdic::from_rational(self.p, &(self.to_rational() - rhs.to_rational()), prec)
    }
}

impl Mul for &PAdic {
    type Output = PAdic;

    fn mul(self, rhs: &PAdic) -> PAdic {
        self.check_prime(rhs);
        let prec = (self.prec + rhs.val_or_prec()).min(rhs.prec + self.val_or_prec());
        PAdic::from_rational(self.p, &(self.to_rational() * rhs.to_rational()), prec)
    }
}

impl Neg for &PAdic {
    type Output = PAdic;

    fn neg(self) -> PAdic {
        PAdic::from_rational(self.p, &-self.to_rational(), self.prec)
    }
}

impl PartialOrd for PAdic {
    /// Orders by absolute value `|x|_p`; zero is smallest.
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match (self.valuation(), other.valuation()) {
            (None, None) => Some(Ordering::Equal),
            (None, Some(_)) => Some(Ordering::Less),
            (Some(_), None) => Some(Ordering::Greater),
            (Some(a), Some(b)) => Some(b.cmp(&a)),
        }
    }
}

impl fmt::Display for PAdic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.residue() {
            Some(r) => write!(f, "{r} mod {}^{}", self.p, self.prec),
            None => write!(
                f,
                "{} + O({}^{})",
                arith::fmt_rational(&self.to_rational()),
                self.p,
                self.prec
            ),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::ratio;

    #[test]
    fn construction_and_residue() {
        let x = PAdic::from_rational(3, &ratio(1, 2), 3);
        assert_eq!(x.residue(), Some(BigInt::from(14)));
        assert_eq!(x.valuation(), Some(0));
        let y = PAdic::from_int(3, 27, 3);
        assert!(y.is_zero());
        let z = PAdic::from_rational(3, &ratio(1, 9), 3);
        assert_eq!(z.valuation(), Some(-2));
        assert_eq!(z.residue(), None);
    }

    #[test]
    fn precision_rules() {
        let a = PAdic::from_int(5, 5, 4);
        let b = PAdic::from_int(5, 1, 2);
        assert_eq!((&a + &b).precision(), 2);
        // (5 + O(5^4)) (1 + O(5^2)) = 5 + O(5^3)
        assert_eq!((&a * &b).precision(), 3);
        let c = a.div_int(5);
        assert_eq!(c.precision(), 3);
        assert_eq!(c.residue(), Some(BigInt::from(1)));
    }

    #[test]
    fn division_by_zero_is_reported() {
        let a = PAdic::one(3, 4);
        let z = PAdic::zero(3, 4);
        assert!(a.checked_div(&z).is_err());
        let q = a.checked_div(&PAdic::from_int(3, 2, 4)).unwrap();
        assert_eq!(&q * &PAdic::from_int(3, 2, 4), PAdic::one(3, 4));
    }

    #[test]
    fn agreement_digits() {
        let a = PAdic::from_int(3, 1, 6);
        let b = PAdic::from_int(3, 1 + 27, 6);
        assert_eq!(a.agreement(&b), 3);
        assert_eq!(a.agreement(&a), 6);
    }
}
