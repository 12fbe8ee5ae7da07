//! Truncated Iwasawa-algebra elements and their analytic invariants.
//!
//! An [`NcSeries`] is a noncommutative power series in `b_1, …, b_d` over
//! `Q_p`, stored as free-monoid words up to a degree cutoff `D` with
//! coefficients known to absolute precision about `p^N`. Words keep their
//! literal order: the bᵢ satisfy no commutation rule at this level.

pub mod generic;
pub mod lazard;
pub mod micro;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::Add;

use num_traits::{One, Signed};
use serde_json::{json, Map, Value};

use crate::arith::{self, Rational};
use crate::error::{Error, Result};
use crate::padic::PAdic;

pub use generic::{genericity_probe, ProbeReport, ProbeRow};
pub use lazard::{lazard_ops, LazardApprox, PMatrix2};
pub use micro::{microlocalise, PadicElement};

/// A word in the variables; entry `i` stands for `b_{i+1}`.
pub type Word = Vec<u8>;

pub(crate) fn check_prime(p: u64) -> Result<()> {
    if p.is_multiple_of(2) || !arith::is_prime(p) {
        return Err(Error::InvalidPrime(p));
    }
    Ok(())
}

/// `b1*b2^2*b1`; the empty word is `1`.
pub fn word_key(w: &[u8]) -> String {
    if w.is_empty() {
        return "1".into();
    }
    let mut parts = Vec::new();
    let mut i = 0;
    while i < w.len() {
        let mut j = i;
        while j < w.len() && w[j] == w[i] {
            j += 1;
        }
        let run = j - i;
        if run == 1 {
            parts.push(format!("b{}", w[i] + 1));
        } else {
            parts.push(format!("b{}^{}", w[i] + 1, run));
        }
        i = j;
    }
    parts.join("*")
}

pub fn parse_word_key(key: &str) -> Result<Word> {
    let key = key.trim();
    if key == "1" {
        return Ok(Vec::new());
    }
    let bad = || Error::InvalidInput(format!("malformed word `{key}`"));
    let mut word = Vec::new();
    for part in key.split('*') {
        let part = part.trim();
        let rest = part.strip_prefix('b').ok_or_else(bad)?;
        let (idx, exp) = match rest.split_once('^') {
            Some((i, e)) => (i, e.parse::<usize>().map_err(|_| bad())?),
            None => (rest, 1),
        };
        let idx: u8 = idx.parse().map_err(|_| bad())?;
        if idx == 0 {
            return Err(bad());
        }
        word.extend(std::iter::repeat_n(idx - 1, exp));
    }
    Ok(word)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NcSeries {
    p: u64,
    nvars: usize,
    cutoff: u32,
    precision: u32,
    terms: BTreeMap<Word, PAdic>,
}

impl NcSeries {
    /// The zero series in `nvars` variables.
    pub fn new(p: u64, nvars: usize, cutoff: u32, precision: u32) -> Result<Self> {
        check_prime(p)?;
        if precision == 0 {
            return Err(Error::InvalidInput("precision must be at least 1".into()));
        }
        if nvars > u8::MAX as usize {
            return Err(Error::InvalidInput(format!("too many variables: {nvars}")));
        }
        Ok(NcSeries {
            p,
            nvars,
            cutoff,
            precision,
            terms: BTreeMap::new(),
        })
    }

    fn empty_like(&self, cutoff: u32) -> Self {
        NcSeries {
            terms: BTreeMap::new(),
            cutoff,
            ..self.clone()
        }
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn cutoff(&self) -> u32 {
        self.cutoff
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &PAdic)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, w: &[u8]) -> Option<&PAdic> {
        self.terms.get(w)
    }

    /// Highest word length present.
    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().map(Vec::len).max()
    }

    /// Adds `c · w`; words beyond the cutoff are dropped.
    pub fn add_term(&mut self, w: Word, c: PAdic) -> Result<()> {
        if let Some(&bad) = w.iter().find(|&&v| v as usize >= self.nvars) {
            return Err(Error::InvalidInput(format!(
                "variable b{} out of range 1..={}",
                bad as usize + 1,
                self.nvars
            )));
        }
        if c.prime() != self.p {
            return Err(Error::Incompatible("coefficient over a different prime".into()));
        }
        if w.len() > self.cutoff as usize {
            return Ok(());
        }
        let sum = match self.terms.remove(&w) {
            Some(old) => &old + &c,
            None => c,
        };
        if !sum.is_zero() {
            self.terms.insert(w, sum);
        }
        Ok(())
    }

    pub fn add_rational(&mut self, w: Word, c: &Rational) -> Result<()> {
        let c = PAdic::from_rational(self.p, c, self.precision as i64);
        self.add_term(w, c)
    }

    pub fn constant(&self, c: &Rational) -> Self {
        let mut s = self.empty_like(self.cutoff);
        s.add_rational(Vec::new(), c).expect("empty word is valid");
        s
    }

    pub fn one(&self) -> Self {
        self.constant(&Rational::one())
    }

    /// The variable `b_{i+1}`.
    pub fn variable(&self, i: usize) -> Result<Self> {
        if i > u8::MAX as usize {
            return Err(Error::InvalidInput(format!("variable index {i} too large")));
        }
        let mut s = self.empty_like(self.cutoff);
        s.add_rational(vec![i as u8], &Rational::one())?;
        Ok(s)
    }

    fn check_compatible(&self, other: &NcSeries) -> Result<()> {
        if self.p != other.p {
            return Err(Error::Incompatible(format!(
                "series over p={} and p={}",
                self.p, other.p
            )));
        }
        if self.precision != other.precision {
            return Err(Error::Incompatible(format!(
                "series at precisions {} and {}",
                self.precision, other.precision
            )));
        }
        if self.nvars != other.nvars {
            return Err(Error::Incompatible(format!(
                "series in {} and {} variables",
                self.nvars, other.nvars
            )));
        }
        Ok(())
    }

    fn combine(&self, other: &NcSeries, sign: i64) -> Result<NcSeries> {
        self.check_compatible(other)?;
        let mut out = self.empty_like(self.cutoff.min(other.cutoff));
        for (w, c) in &self.terms {
            out.add_term(w.clone(), c.clone())?;
        }
        for (w, c) in &other.terms {
            let c = if sign < 0 { -c } else { c.clone() };
            out.add_term(w.clone(), c)?;
        }
        Ok(out)
    }

    pub fn add(&self, other: &NcSeries) -> Result<NcSeries> {
        self.combine(other, 1)
    }

    pub fn sub(&self, other: &NcSeries) -> Result<NcSeries> {
        self.combine(other, -1)
    }

    pub fn scale(&self, c: &Rational) -> NcSeries {
        let factor = PAdic::from_rational(self.p, c, self.precision as i64);
        let mut out = self.empty_like(self.cutoff);
        for (w, x) in &self.terms {
            out.add_term(w.clone(), x * &factor).expect("same shape");
        }
        out
    }

    /// Product in the free algebra, truncated at the smaller cutoff.
    pub fn multiply(&self, other: &NcSeries) -> Result<NcSeries> {
        self.check_compatible(other)?;
        let cutoff = self.cutoff.min(other.cutoff);
        let mut out = self.empty_like(cutoff);
        for (u, a) in &self.terms {
            for (v, b) in &other.terms {
                if u.len() + v.len() > cutoff as usize {
                    continue;
                }
                let mut w = u.clone();
                w.extend_from_slice(v);
                out.add_term(w, a * b)?;
            }
        }
        Ok(out)
    }

    pub fn pow(&self, n: u32) -> Result<NcSeries> {
        let mut acc = self.one();
        for _ in 0..n {
            acc = acc.multiply(self)?;
        }
        Ok(acc)
    }

    /// Inverse of a series with nonzero constant term, to the cutoff.
    pub fn inverse(&self) -> Result<NcSeries> {
        let c0 = self
            .terms
            .get(&Vec::new())
            .cloned()
            .ok_or_else(|| Error::InvalidInput("constant term is zero; no inverse".into()))?;
        // s = c0 (1 - x), so s^{-1} = (1 + x + x^2 + ...) / c0.
        let mut normalised = self.empty_like(self.cutoff);
        for (w, c) in &self.terms {
            normalised.add_term(w.clone(), c.checked_div(&c0)?)?;
        }
        let x = self.one().sub(&normalised)?;
        let mut sum = self.one();
        let mut power = self.one();
        for _ in 0..self.cutoff {
            power = power.multiply(&x)?;
            sum = sum.add(&power)?;
        }
        let inv_c0 = PAdic::one(self.p, self.precision as i64).checked_div(&c0)?;
        let mut out = self.empty_like(self.cutoff);
        for (w, c) in &sum.terms {
            out.add_term(w.clone(), c * &inv_c0)?;
        }
        Ok(out)
    }

    /// `log(1 + b_{i+1}) = Σ_{j=1}^{D} (−1)^{j+1} b^j / j`.
    ///
    /// Dividing by `j` costs `v_p(j)` digits of precision.
    pub fn log_one_plus(&self, i: usize) -> Result<NcSeries> {
        if self.cutoff == 0 {
            return Err(Error::InvalidInput("degree cutoff must be at least 1".into()));
        }
        if i >= self.nvars {
            return Err(Error::InvalidInput(format!(
                "variable b{} out of range 1..={}",
                i + 1,
                self.nvars
            )));
        }
        let mut out = self.empty_like(self.cutoff);
        for j in 1..=self.cutoff as i64 {
            let sign = if j % 2 == 1 { 1 } else { -1 };
            let c = PAdic::from_int(self.p, sign, self.precision as i64).div_int(j);
            out.add_term(vec![i as u8; j as usize], c)?;
        }
        Ok(out)
    }

    /// `log_p` of the norm with log-radius `t`, i.e. `r = p^{−t}`:
    /// the maximum over words of `−v_p(λ_α) − |α| t`.
    pub fn log_norm_at(&self, t: &Rational) -> LogNorm {
        self.terms
            .iter()
            .map(|(w, c)| word_log_norm(w, c, t))
            .max()
            .unwrap_or(LogNorm::NEG_INFINITY)
    }

    /// `log_p ‖s‖_r` for `r = p^{−1/pⁿ}`.
    pub fn norm_r(&self, n: u32) -> LogNorm {
        self.log_norm_at(&radius_exponent(self.p, n))
    }

    /// The terms attaining the norm at log-radius `t`: the image of the
    /// series in the graded ring of the norm filtration.
    pub fn leading_part(&self, t: &Rational) -> NcSeries {
        let top = self.log_norm_at(t);
        let mut out = self.empty_like(self.cutoff);
        for (w, c) in &self.terms {
            if word_log_norm(w, c, t) == top {
                out.terms.insert(w.clone(), c.clone());
            }
        }
        out
    }

    /// The symbol in the associated graded ring at log-radius `t`: each
    /// leading word with its coefficient's valuation and first digit.
    pub fn leading_symbol(&self, t: &Rational) -> Vec<(Word, i64, u64)> {
        self.leading_part(t)
            .terms
            .iter()
            .filter_map(|(w, c)| Some((w.clone(), c.valuation()?, c.leading_digit()?)))
            .collect()
    }

    /// Whether `s ∈ p^a + 𝔪^{a+1}` with `𝔪 = (p, b_1, …, b_d)`.
    ///
    /// A term `λ_α b^α` lies in `𝔪^{a+1}` iff `v_p(λ_α) + |α| ≥ a + 1`.
    pub fn s0_membership(&self, a: u32) -> S0Membership {
        if self.precision <= a || self.cutoff <= a {
            return S0Membership::Indeterminate;
        }
        let target = a as i64 + 1;
        let pa = PAdic::from_rational(
            self.p,
            &Rational::from_integer(arith::pow_big(self.p, a)),
            self.precision as i64,
        );
        let mut shifted = self.clone();
        shifted
            .add_term(Vec::new(), -&pa)
            .expect("constant term is always valid");
        let mut undecided = false;
        for (w, c) in &shifted.terms {
            let len = w.len() as i64;
            match c.valuation() {
                Some(v) if v + len < target => return S0Membership::NotMember,
                _ => {}
            }
            if c.precision() + len < target {
                undecided = true;
            }
        }
        if undecided {
            S0Membership::Indeterminate
        } else {
            S0Membership::Member
        }
    }

    /// `{word: [residue, precision]}`; a non-integral coefficient is written
    /// as a reduced fraction instead of a residue.
    pub fn to_json(&self) -> Value {
        let mut map = Map::new();
        for (w, c) in &self.terms {
            let shown = match c.residue() {
                Some(r) => r.to_string(),
                None => arith::fmt_rational_short(&c.to_rational()),
            };
            map.insert(word_key(w), json!([shown, c.precision()]));
        }
        Value::Object(map)
    }

    pub fn from_json(
        p: u64,
        nvars: usize,
        cutoff: u32,
        precision: u32,
        value: &Value,
    ) -> Result<NcSeries> {
        let mut s = NcSeries::new(p, nvars, cutoff, precision)?;
        let obj = value
            .as_object()
            .ok_or_else(|| Error::InvalidInput("series JSON must be an object".into()))?;
        for (key, entry) in obj {
            let word = parse_word_key(key)?;
            let bad = || Error::InvalidInput(format!("malformed coefficient for `{key}`"));
            let (coeff, prec) = match entry {
                Value::Array(pair) if pair.len() == 2 => {
                    let c = match &pair[0] {
                        Value::String(s) => arith::parse_rational(s)?,
                        Value::Number(n) => arith::parse_rational(&n.to_string())?,
                        _ => return Err(bad()),
                    };
                    (c, pair[1].as_i64().ok_or_else(bad)?)
                }
                Value::String(s) => (arith::parse_rational(s)?, precision as i64),
                Value::Number(n) => (arith::parse_rational(&n.to_string())?, precision as i64),
                _ => return Err(bad()),
            };
            s.add_term(word, PAdic::from_rational(p, &coeff, prec))?;
        }
        Ok(s)
    }
}

fn word_log_norm(w: &[u8], c: &PAdic, t: &Rational) -> LogNorm {
    match c.valuation() {
        Some(v) => LogNorm(Some(arith::rat(-v) - t * arith::rat(w.len() as i64))),
        None => LogNorm::NEG_INFINITY,
    }
}

/// `1/pⁿ`, the log-radius of `r = p^{−1/pⁿ}`.
pub fn radius_exponent(p: u64, n: u32) -> Rational {
    Rational::new(1.into(), arith::pow_big(p, n))
}

impl fmt::Display for NcSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut words: Vec<&Word> = self.terms.keys().collect();
        words.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
        let parts: Vec<String> = words
            .into_iter()
            .map(|w| format!("({})*{}", self.terms[w], word_key(w)))
            .collect();
        write!(f, "{} + O(deg {})", parts.join(" + "), self.cutoff + 1)
    }
}

/// `log_p` of a norm; `None` is the norm of zero (`−∞`).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct LogNorm(pub Option<Rational>);

impl LogNorm {
    pub const NEG_INFINITY: LogNorm = LogNorm(None);

    pub fn value(&self) -> Option<&Rational> {
        self.0.as_ref()
    }
}

impl Add for &LogNorm {
    type Output = LogNorm;

    fn add(self, rhs: &LogNorm) -> LogNorm {
        match (&self.0, &rhs.0) {
            (Some(a), Some(b)) => LogNorm(Some(a + b)),
            _ => LogNorm::NEG_INFINITY,
        }
    }
}

impl fmt::Display for LogNorm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Some(x) => write!(f, "{}", arith::fmt_rational_short(x)),
            None => write!(f, "-inf"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum S0Membership {
    Member,
    NotMember,
    /// The truncation does not decide membership.
    Indeterminate,
}

impl fmt::Display for S0Membership {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            S0Membership::Member => "member",
            S0Membership::NotMember => "not-member",
            S0Membership::Indeterminate => "indeterminate",
        })
    }
}

/// `log_p(|p^{nk}/k!| · p^{(n−1)k}) = −nk + v_p(k!) + (n−1)k` for `k = 0..=k_max`,
/// with `v_p(k!)` from Legendre's formula.
pub fn exp_pn_decay(p: u64, n: u32, k_max: u64) -> Result<Vec<Rational>> {
    check_prime(p)?;
    if n == 0 {
        return Err(Error::InvalidInput("n must be at least 1".into()));
    }
    let n = n as i64;
    Ok((0..=k_max)
        .map(|k| {
            let legendre = (k - arith::digit_sum(k, p)) / (p - 1);
            let k = k as i64;
            arith::rat(-n * k + legendre as i64 + (n - 1) * k)
        })
        .collect())
}

/// The bound `k/(p−1) − k` from the convergence estimate.
pub fn exp_pn_envelope(p: u64, k: u64) -> Rational {
    arith::ratio(k as i64, p as i64 - 1) - arith::rat(k as i64)
}

/// `true` when every value is at most the envelope `k/(p−1) − k`.
pub fn decay_within_envelope(p: u64, values: &[Rational]) -> bool {
    values
        .iter()
        .enumerate()
        .all(|(k, v)| !(v - exp_pn_envelope(p, k as u64)).is_positive())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{rat, ratio};

    fn series(p: u64, d: u32, n: u32) -> NcSeries {
        NcSeries::new(p, 3, d, n).unwrap()
    }

    #[test]
    fn word_keys_round_trip() {
        for w in [vec![], vec![0], vec![0, 0, 1, 0], vec![2, 2, 2]] {
            assert_eq!(parse_word_key(&word_key(&w)).unwrap(), w);
        }
        assert_eq!(word_key(&[0, 1, 1]), "b1*b2^2");
        assert!(parse_word_key("x1").is_err());
        assert!(parse_word_key("b0").is_err());
    }

    #[test]
    fn geometric_series_inverts_one_plus_b() {
        let s = series(3, 5, 4);
        let one_plus = s.one().add(&s.variable(0).unwrap()).unwrap();
        let mut geo = s.clone();
        for j in 0..=5 {
            geo.add_rational(vec![0; j], &rat(if j % 2 == 0 { 1 } else { -1 }))
                .unwrap();
        }
        assert_eq!(one_plus.multiply(&geo).unwrap(), s.one());
        assert_eq!(one_plus.inverse().unwrap(), geo);
    }

    #[test]
    fn words_do_not_commute() {
        let s = series(3, 4, 4);
        let b1 = s.variable(0).unwrap();
        let b2 = s.variable(1).unwrap();
        assert_ne!(b1.multiply(&b2).unwrap(), b2.multiply(&b1).unwrap());
    }

    #[test]
    fn mismatched_series_are_rejected() {
        let a = series(3, 4, 4);
        assert!(a.multiply(&series(5, 4, 4)).is_err());
        assert!(a.multiply(&series(3, 4, 5)).is_err());
        assert!(NcSeries::new(4, 3, 4, 4).is_err());
        assert!(NcSeries::new(2, 3, 4, 4).is_err());
    }

    #[test]
    fn log_series_coefficients() {
        let s = series(3, 2, 4);
        let l = s.log_one_plus(0).unwrap();
        assert_eq!(l.coefficient(&[0]).unwrap(), &PAdic::one(3, 4));
        assert_eq!(
            l.coefficient(&[0, 0]).unwrap(),
            &PAdic::from_rational(3, &ratio(-1, 2), 4)
        );
        let l = series(3, 9, 4).log_one_plus(0).unwrap();
        let c3 = l.coefficient(&[0; 3]).unwrap();
        assert_eq!(c3.valuation(), Some(-1));
        assert_eq!(c3.precision(), 3);
        assert_eq!(l.coefficient(&[0; 9]).unwrap().precision(), 2);
    }

    #[test]
    fn log_norm_is_p_to_the_n_minus_one() {
        for p in [3u64, 5] {
            for n in 1..=3u32 {
                let d = arith::pow_big(p, n).to_string().parse::<u32>().unwrap();
                let l = series(p, d, 6).log_one_plus(1).unwrap();
                assert_eq!(l.norm_r(n), LogNorm(Some(rat(n as i64 - 1))), "p={p} n={n}");
            }
        }
    }

    #[test]
    fn single_word_norms() {
        let s = series(3, 4, 4);
        let mut t = s.clone();
        t.add_rational(vec![0], &rat(3)).unwrap();
        assert_eq!(t.norm_r(1), LogNorm(Some(ratio(-4, 3))));
        assert_eq!(s.norm_r(1), LogNorm::NEG_INFINITY);
    }

    #[test]
    fn s0_examples() {
        let s = series(3, 4, 4);
        assert_eq!(s.one().s0_membership(0), S0Membership::Member);
        let b1 = s.variable(0).unwrap();
        let p = s.constant(&rat(3));
        let yes = p.add(&b1.multiply(&b1).unwrap()).unwrap();
        assert_eq!(yes.s0_membership(1), S0Membership::Member);
        let no = p.add(&b1).unwrap();
        assert_eq!(no.s0_membership(1), S0Membership::NotMember);
        assert_eq!(yes.s0_membership(4), S0Membership::Indeterminate);
    }

    #[test]
    fn decay_examples() {
        let v = exp_pn_decay(3, 1, 9).unwrap();
        assert_eq!(v[0], rat(0));
        assert_eq!(v[9], rat(-5));
        assert_eq!(exp_pn_decay(3, 2, 3).unwrap()[3], rat(-2));
        assert!(decay_within_envelope(3, &v));
    }

    #[test]
    fn casimir_leading_part_in_log_coordinates() {
        // ½L_H² − pL_H + 2L_E L_F at a radius strictly between 1/p and p^{-1/2}.
        for p in [3u64, 5, 7] {
            let s = series(p, 6, 6);
            let (lf, lh, le) = (
                s.log_one_plus(0).unwrap(),
                s.log_one_plus(1).unwrap(),
                s.log_one_plus(2).unwrap(),
            );
            let x = lh
                .multiply(&lh)
                .unwrap()
                .scale(&ratio(1, 2))
                .sub(&lh.scale(&rat(p as i64)))
                .unwrap()
                .add(&le.multiply(&lf).unwrap().scale(&rat(2)))
                .unwrap();
            let t = ratio(3, 4);
            let mut expected = s.clone();
            expected.add_rational(vec![1, 1], &ratio(1, 2)).unwrap();
            expected.add_rational(vec![2, 0], &rat(2)).unwrap();
            assert_eq!(x.leading_symbol(&t), expected.leading_symbol(&t), "p={p}");
            assert_eq!(x.leading_part(&t).len(), 2);
        }
    }

    #[test]
    fn json_round_trip() {
        let s = series(5, 4, 3);
        let mut t = s.log_one_plus(0).unwrap();
        t.add_rational(vec![1, 2], &ratio(7, 3)).unwrap();
        let back = NcSeries::from_json(5, 3, 4, 3, &t.to_json()).unwrap();
        assert_eq!(back, t);
    }
}
