//! Exact integer and rational helpers shared by every other module.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always stored reduced with a positive denominator.
pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// `p`-adic valuation of a nonzero integer.
pub fn vp_int(n: &BigInt, p: u64) -> Option<u32> {
    if n.is_zero() {
        return None;
    }
    let p = BigInt::from(p);
    let mut m = n.abs();
    let mut v = 0;
    loop {
        let (q, r) = m.div_rem(&p);
        if !r.is_zero() {
            return Some(v);
        }
        m = q;
        v += 1;
    }
}

/// `p`-adic valuation of a rational; `None` for zero.
pub fn vp_rat(x: &Rational, p: u64) -> Option<i64> {
    let vn = vp_int(x.numer(), p)? as i64;
    let vd = vp_int(x.denom(), p).expect("denominator is nonzero") as i64;
    Some(vn - vd)
}

pub fn pow_big(p: u64, e: u32) -> BigInt {
    num_traits::pow(BigInt::from(p), e as usize)
}

/// Inverse of `a` modulo `m`, if it exists.
pub fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.mod_floor(m).extended_gcd(m);
    if !e.gcd.is_one() {
        return None;
    }
    Some(e.x.mod_floor(m))
}

/// Image of a `p`-integral rational in `Z/p^m`, as a canonical residue in `[0, p^m)`.
pub fn reduce_mod_pm(x: &Rational, p: u64, m: u32) -> Result<BigInt> {
    let modulus = pow_big(p, m);
    let inv = mod_inverse(x.denom(), &modulus).ok_or_else(|| Error::NotIntegral {
        value: fmt_rational(x),
        prime: p,
    })?;
    Ok((x.numer() * inv).mod_floor(&modulus))
}

pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

/// Sum of the base-`p` digits of `n`.
pub fn digit_sum(mut n: u64, p: u64) -> u64 {
    let mut s = 0;
    while n > 0 {
        s += n % p;
        n /= p;
    }
    s
}

/// Legendre's formula for `v_p(n!)`.
pub fn vp_factorial(n: u64, p: u64) -> u64 {
    (n - digit_sum(n, p)) / (p - 1)
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// `"num/den"`, with the denominator always present.
pub fn fmt_rational(x: &Rational) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

/// Short human form: integers print without a denominator.
pub fn fmt_rational_short(x: &Rational) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        fmt_rational(x)
    }
}

/// Parses `"a"`, `"-a"` or `"a/b"`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse {
        message: format!("invalid rational `{s}`"),
        line: 1,
        column: 1,
    };
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(n, d))
        }
        None => Ok(Rational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// Smallest integer `>= x`.
pub fn ceil(x: &Rational) -> BigInt {
    x.ceil().to_integer()
}

pub fn to_i64(x: &BigInt) -> Option<i64> {
    x.to_i64()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn valuations() {
        assert_eq!(vp_rat(&ratio(18, 5), 3), Some(2));
        assert_eq!(vp_rat(&ratio(5, 27), 3), Some(-3));
        assert_eq!(vp_rat(&rat(0), 3), None);
    }

    #[test]
    fn legendre_matches_direct_count() {
        for p in [3u64, 5, 7] {
            for n in 0..=60u64 {
                let direct: u64 = (1..=n)
                    .map(|j| vp_int(&BigInt::from(j), p).unwrap() as u64)
                    .sum();
                assert_eq!(vp_factorial(n, p), direct);
            }
        }
    }

    #[test]
    fn modular_reduction() {
        // 1/2 mod 9 = 5
        assert_eq!(reduce_mod_pm(&ratio(1, 2), 3, 2).unwrap(), BigInt::from(5));
        assert_eq!(reduce_mod_pm(&ratio(-1, 1), 3, 2).unwrap(), BigInt::from(8));
        assert!(reduce_mod_pm(&ratio(1, 3), 3, 2).is_err());
    }

    #[test]
    fn rational_parsing() {
        assert_eq!(parse_rational("-3/6").unwrap(), ratio(-1, 2));
        assert_eq!(parse_rational("7").unwrap(), rat(7));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 3), BigInt::from(10));
        assert_eq!(binomial(3, 5), BigInt::zero());
        assert_eq!(factorial(5), BigInt::from(120));
    }
}
