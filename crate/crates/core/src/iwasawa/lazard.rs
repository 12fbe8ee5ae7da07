//! Lazard's sum and bracket on the first congruence subgroup of `SL₂(Z_p)`.
//!
//! `x + y = lim (x^{pⁱ} y^{pⁱ})^{p^{−i}}` and
//! `[x, y] = lim (x^{−pⁱ} y^{−pⁱ} x^{pⁱ} y^{pⁱ})^{p^{−2i}}`, where the
//! `pⁱ`-th roots are taken as `exp(log(·)/pⁱ)`. Dividing by `pⁱ` (resp.
//! `p^{2i}`) costs `i` (resp. `2i`) digits, which the entry precisions track.

use std::fmt;

use crate::arith::{self, Rational};
use crate::error::{Error, Result};
use crate::iwasawa::check_prime;
use crate::padic::PAdic;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PMatrix2 {
    entries: [[PAdic; 2]; 2],
}

impl PMatrix2 {
    pub fn new(entries: [[PAdic; 2]; 2]) -> Self {
        let p = entries[0][0].prime();
        assert!(
            entries.iter().flatten().all(|x| x.prime() == p),
            "matrix entries over different primes"
        );
        PMatrix2 { entries }
    }

    pub fn from_rationals(p: u64, rows: [[Rational; 2]; 2], prec: i64) -> Self {
        let e = |x: &Rational| PAdic::from_rational(p, x, prec);
        PMatrix2::new([
            [e(&rows[0][0]), e(&rows[0][1])],
            [e(&rows[1][0]), e(&rows[1][1])],
        ])
    }

    pub fn from_ints(p: u64, rows: [[i64; 2]; 2], prec: i64) -> Self {
        let r = |x: i64| arith::rat(x);
        PMatrix2::from_rationals(
            p,
            [[r(rows[0][0]), r(rows[0][1])], [r(rows[1][0]), r(rows[1][1])]],
            prec,
        )
    }

    pub fn identity(p: u64, prec: i64) -> Self {
        PMatrix2::from_ints(p, [[1, 0], [0, 1]], prec)
    }

    pub fn prime(&self) -> u64 {
        self.entries[0][0].prime()
    }

    pub fn entry(&self, i: usize, j: usize) -> &PAdic {
        &self.entries[i][j]
    }

    /// Smallest absolute precision among the entries.
    pub fn precision(&self) -> i64 {
        self.entries.iter().flatten().map(PAdic::precision).min().unwrap()
    }

    /// Minimum entry valuation; `None` for the zero matrix.
    pub fn valuation(&self) -> Option<i64> {
        self.entries.iter().flatten().filter_map(PAdic::valuation).min()
    }

    fn map(&self, f: impl Fn(&PAdic) -> PAdic) -> PMatrix2 {
        let [[a, b], [c, d]] = &self.entries;
        PMatrix2::new([[f(a), f(b)], [f(c), f(d)]])
    }

    fn zip(&self, other: &PMatrix2, f: impl Fn(&PAdic, &PAdic) -> PAdic) -> PMatrix2 {
        let (x, y) = (&self.entries, &other.entries);
        PMatrix2::new([
            [f(&x[0][0], &y[0][0]), f(&x[0][1], &y[0][1])],
            [f(&x[1][0], &y[1][0]), f(&x[1][1], &y[1][1])],
        ])
    }

    pub fn add(&self, other: &PMatrix2) -> PMatrix2 {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &PMatrix2) -> PMatrix2 {
        self.zip(other, |a, b| a - b)
    }

    pub fn multiply(&self, other: &PMatrix2) -> PMatrix2 {
        let (x, y) = (&self.entries, &other.entries);
        let cell = |i: usize, j: usize| &(&x[i][0] * &y[0][j]) + &(&x[i][1] * &y[1][j]);
        PMatrix2::new([[cell(0, 0), cell(0, 1)], [cell(1, 0), cell(1, 1)]])
    }

    pub fn div_int(&self, n: i64) -> PMatrix2 {
        self.map(|x| x.div_int(n))
    }

    /// Multiplication by `p^k`.
    pub fn shift(&self, k: i64) -> PMatrix2 {
        self.map(|x| x.shift(k))
    }

    pub fn det(&self) -> PAdic {
        let [[a, b], [c, d]] = &self.entries;
        &(a * d) - &(b * c)
    }

    pub fn inverse(&self) -> Result<PMatrix2> {
        let det = self.det();
        let [[a, b], [c, d]] = &self.entries;
        let adj = [[d.clone(), -b], [-c, a.clone()]];
        Ok(PMatrix2::new([
            [adj[0][0].checked_div(&det)?, adj[0][1].checked_div(&det)?],
            [adj[1][0].checked_div(&det)?, adj[1][1].checked_div(&det)?],
        ]))
    }

    pub fn pow(&self, mut n: u64) -> PMatrix2 {
        let mut base = self.clone();
        let mut acc = PMatrix2::identity(self.prime(), self.precision());
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.multiply(&base);
            }
            n >>= 1;
            if n > 0 {
                base = base.multiply(&base);
            }
        }
        acc
    }

    /// `log(I + X) = Σ (−1)^{j+1} X^j / j` for `X ≡ 0 mod p`.
    pub fn log(&self) -> Result<PMatrix2> {
        let p = self.prime();
        let prec = self.precision();
        let x = self.sub(&PMatrix2::identity(p, prec));
        let Some(v) = x.valuation() else {
            return Ok(x);
        };
        if v < 1 {
            return Err(Error::InvalidInput(
                "logarithm needs a matrix congruent to I mod p".into(),
            ));
        }
        let mut acc = x.clone();
        let mut power = x.clone();
        let mut j = 1i64;
        // j·v − log_p(j) increases with j, so stop once it passes `prec`.
        while j * v - (log_floor(j as u64, p) as i64) < prec {
            j += 1;
            power = power.multiply(&x);
            let term = power.div_int(if j % 2 == 0 { -j } else { j });
            acc = acc.add(&term);
        }
        Ok(acc)
    }

    /// `exp(Y) = Σ Y^j / j!` for `Y ≡ 0 mod p`.
    pub fn exp(&self) -> Result<PMatrix2> {
        let p = self.prime();
        let prec = self.precision();
        let one = PMatrix2::identity(p, prec);
        let Some(v) = self.valuation() else {
            return Ok(one);
        };
        if v < 1 {
            return Err(Error::InvalidInput(
                "exponential needs a matrix divisible by p".into(),
            ));
        }
        let mut acc = one.add(self);
        let mut term = self.clone();
        let mut j = 1i64;
        // v_p(Y^j/j!) ≥ j·v − (j−1)/(p−1), increasing in j.
        while j * v - (j - 1) / (p as i64 - 1) < prec {
            j += 1;
            term = term.multiply(self).div_int(j);
            acc = acc.add(&term);
        }
        Ok(acc)
    }

    /// Digits on which two matrices provably agree.
    pub fn agreement(&self, other: &PMatrix2) -> i64 {
        self.entries
            .iter()
            .flatten()
            .zip(other.entries.iter().flatten())
            .map(|(a, b)| a.agreement(b))
            .min()
            .unwrap()
    }
}

fn log_floor(n: u64, p: u64) -> u32 {
    let mut k = 0;
    let mut q = p;
    while q <= n {
        k += 1;
        q = q.saturating_mul(p);
    }
    k
}

impl fmt::Display for PMatrix2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [[a, b], [c, d]] = &self.entries;
        let s = |x: &PAdic| arith::fmt_rational_short(&x.to_rational());
        write!(
            f,
            "[[{}, {}], [{}, {}]] + O({}^{})",
            s(a),
            s(b),
            s(c),
            s(d),
            self.prime(),
            self.precision()
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LazardApprox {
    pub i: u32,
    pub sum: PMatrix2,
    pub bracket: PMatrix2,
}

/// Finite-`i` approximations of the Lazard sum and bracket of `g` and `h`.
pub fn lazard_ops(g: &PMatrix2, h: &PMatrix2, i: u32) -> Result<LazardApprox> {
    let p = g.prime();
    check_prime(p)?;
    if h.prime() != p {
        return Err(Error::Incompatible("matrices over different primes".into()));
    }
    let prec = g.precision().min(h.precision());
    if prec <= 2 * i as i64 {
        return Err(Error::PrecisionExhausted(format!(
            "precision {prec} leaves no digits after dividing by p^{}",
            2 * i
        )));
    }
    for m in [g, h] {
        let one = PMatrix2::identity(p, prec);
        if m.sub(&one).valuation().is_some_and(|v| v < 1) {
            return Err(Error::InvalidInput("matrix is not congruent to I mod p".into()));
        }
        if !(&m.det() - &PAdic::one(p, prec)).is_zero() {
            return Err(Error::InvalidInput("determinant is not 1".into()));
        }
    }
    let q = p
        .checked_pow(i)
        .ok_or_else(|| Error::InvalidInput(format!("p^{i} overflows")))?;
    let gq = g.pow(q);
    let hq = h.pow(q);
    let sum = gq.multiply(&hq).log()?.shift(-(i as i64)).exp()?;
    let comm = gq
        .inverse()?
        .multiply(&hq.inverse()?)
        .multiply(&gq)
        .multiply(&hq);
    let bracket = comm.log()?.shift(-2 * i as i64).exp()?;
    Ok(LazardApprox { i, sum, bracket })
}

/// `exp(log g + log h)` and `exp([log g, log h])`, the limits of
/// [`lazard_ops`].
pub fn lazard_limits(g: &PMatrix2, h: &PMatrix2) -> Result<(PMatrix2, PMatrix2)> {
    let (x, y) = (g.log()?, h.log()?);
    let sum = x.add(&y).exp()?;
    let bracket = x.multiply(&y).sub(&y.multiply(&x)).exp()?;
    Ok((sum, bracket))
}

/// `exp(p·x)` for one of the standard generators, exactly.
pub fn exp_p_generator(p: u64, which: char, prec: i64) -> Result<PMatrix2> {
    let pi = p as i64;
    let y = match which {
        'e' => PMatrix2::from_ints(p, [[0, pi], [0, 0]], prec),
        'f' => PMatrix2::from_ints(p, [[0, 0], [pi, 0]], prec),
        'h' => PMatrix2::from_ints(p, [[pi, 0], [0, -pi]], prec),
        _ => return Err(Error::InvalidInput(format!("unknown generator `{which}`"))),
    };
    y.exp()
}

impl PMatrix2 {
    pub fn is_zero(&self) -> bool {
        self.entries.iter().flatten().all(|x| x.is_zero())
    }

    pub fn is_identity(&self) -> bool {
        let one = PMatrix2::identity(self.prime(), self.precision());
        self.sub(&one).is_zero()
    }

    pub fn to_rationals(&self) -> [[Rational; 2]; 2] {
        let [[a, b], [c, d]] = &self.entries;
        [
            [a.to_rational(), b.to_rational()],
            [c.to_rational(), d.to_rational()],
        ]
    }
}
