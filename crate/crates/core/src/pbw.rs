//! Exact arithmetic in `U(sl2)^{⊗r}` over the rationals.
//!
//! Every element is kept in PBW normal form: within each tensor factor the
//! letters appear in the order `e`, `f`, `h`, so a monomial is determined by a
//! per-factor exponent triple `(a, b, c)` standing for `e^a f^b h^c`.
//! Generators of different factors commute, which lets a product of two
//! monomials be computed factor by factor and then tensored together.
//!
//! The single-factor work reduces to one rewriting problem, moving `f^b`
//! past `e^a`. Using `f e^x = e^x f - x e^{x-1}(h + x - 1)` one `f` at a time
//! gives `f^b e^a` as a finite sum `Σ e^x f^y P(h)` with integer
//! coefficients; these expansions are memoized per thread.

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::rc::Rc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde_json::{Map, Value};

use crate::arith::{self, Rational};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    E,
    F,
    H,
}

impl Letter {
    pub fn symbol(self) -> char {
        match self {
            Letter::E => 'e',
            Letter::F => 'f',
            Letter::H => 'h',
        }
    }

    fn slot(self) -> usize {
        self as usize
    }
}

/// A Lie generator `e_i`, `f_i` or `h_i`. Factors are 0-based here and
/// 1-based in printed and parsed text.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Generator {
    pub factor: usize,
    pub letter: Letter,
}

impl Generator {
    pub fn new(factor: usize, letter: Letter) -> Self {
        Generator { factor, letter }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.letter.symbol(), self.factor + 1)
    }
}

/// Exponent triple `(a, b, c)` of `e^a f^b h^c` in one factor.
pub type Triple = [u32; 3];

/// A PBW monomial `∏_i e_i^{a_i} f_i^{b_i} h_i^{c_i}`.
///
/// Trailing factors with exponent `(0, 0, 0)` are never stored, so the same
/// monomial has one representation whatever the ambient rank.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PbwMonomial(Vec<Triple>);

impl PbwMonomial {
    pub fn one() -> Self {
        PbwMonomial(Vec::new())
    }

    pub fn from_triples(mut triples: Vec<Triple>) -> Self {
        while triples.last() == Some(&[0, 0, 0]) {
            triples.pop();
        }
        PbwMonomial(triples)
    }

    pub fn generator(g: Generator) -> Self {
        let mut t = vec![[0; 3]; g.factor + 1];
        t[g.factor][g.letter.slot()] = 1;
        PbwMonomial(t)
    }

    /// Exponents of factor `i` (zero beyond the stored length).
    pub fn factor(&self, i: usize) -> Triple {
        self.0.get(i).copied().unwrap_or([0; 3])
    }

    /// Number of factors actually used.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn triples(&self) -> &[Triple] {
        &self.0
    }

    pub fn factor_degree(&self, i: usize) -> u32 {
        self.factor(i).iter().sum()
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().flatten().sum()
    }

    /// Comma-separated exponent vector padded to `rank` factors.
    pub fn key(&self, rank: usize) -> String {
        (0..rank)
            .flat_map(|i| self.factor(i))
            .map(|x| x.to_string())
            .collect::<Vec<_>>()
            .join(",")
    }

    pub fn from_key(key: &str) -> Result<Self> {
        let nums = key
            .split(',')
            .filter(|s| !s.trim().is_empty())
            .map(|s| {
                s.trim()
                    .parse::<u32>()
                    .map_err(|_| Error::InvalidInput(format!("bad monomial key `{key}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        if nums.len() % 3 != 0 {
            return Err(Error::InvalidInput(format!(
                "monomial key `{key}` is not a multiple of three exponents"
            )));
        }
        Ok(PbwMonomial::from_triples(
            nums.chunks(3).map(|c| [c[0], c[1], c[2]]).collect(),
        ))
    }

    fn write_word(&self, out: &mut String) {
        let mut first = true;
        for (i, t) in self.0.iter().enumerate() {
            for (slot, letter) in [Letter::E, Letter::F, Letter::H].into_iter().enumerate() {
                let x = t[slot];
                if x == 0 {
                    continue;
                }
                if !first {
                    out.push('*');
                }
                first = false;
                out.push(letter.symbol());
                out.push_str(&(i + 1).to_string());
                if x > 1 {
                    out.push('^');
                    out.push_str(&x.to_string());
                }
            }
        }
    }
}

impl fmt::Display for PbwMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "1");
        }
        let mut s = String::new();
        self.write_word(&mut s);
        f.write_str(&s)
    }
}

/// Per-factor filtration degree, ordered componentwise.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MultiDegree(pub Vec<u32>);

impl MultiDegree {
    pub fn zero(rank: usize) -> Self {
        MultiDegree(vec![0; rank])
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    /// Componentwise `self <= other`; missing entries count as zero.
    pub fn le(&self, other: &MultiDegree) -> bool {
        let n = self.0.len().max(other.0.len());
        (0..n).all(|i| self.get(i) <= other.get(i))
    }

    pub fn get(&self, i: usize) -> u32 {
        self.0.get(i).copied().unwrap_or(0)
    }

    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }
}

impl Add for &MultiDegree {
    type Output = MultiDegree;

    fn add(self, rhs: &MultiDegree) -> MultiDegree {
        let n = self.0.len().max(rhs.0.len());
        MultiDegree((0..n).map(|i| self.get(i) + rhs.get(i)).collect())
    }
}

impl fmt::Display for MultiDegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

type SlTerms = Rc<Vec<(Triple, BigInt)>>;

#[derive(Default)]
struct SlCache {
    fe: HashMap<(u32, u32), SlTerms>,
    products: HashMap<(Triple, Triple), SlTerms>,
}

thread_local! {
    static SL_CACHE: RefCell<SlCache> = RefCell::new(SlCache::default());
}

/// Coefficients of `∏ (h + shift)` over the given shifts, lowest degree first.
fn h_poly(shifts: impl IntoIterator<Item = i64>) -> Vec<BigInt> {
    let mut poly = vec![BigInt::one()];
    for s in shifts {
        let mut next = vec![BigInt::zero(); poly.len() + 1];
        for (i, c) in poly.iter().enumerate() {
            next[i + 1] += c;
            next[i] += c * s;
        }
        poly = next;
    }
    poly
}

/// Normal form of `f^b e^a` in a single `U(sl2)`.
fn fe_power(b: u32, a: u32) -> SlTerms {
    if let Some(hit) = SL_CACHE.with(|c| c.borrow().fe.get(&(b, a)).cloned()) {
        return hit;
    }
    let result: SlTerms = if b == 0 {
        Rc::new(vec![([a, 0, 0], BigInt::one())])
    } else {
        // f · e^x f^y h^z = e^x f^{y+1} h^z - x e^{x-1} f^y (h + x - 1 - 2y) h^z
        let prev = fe_power(b - 1, a);
        let mut acc: BTreeMap<Triple, BigInt> = BTreeMap::new();
        for ([x, y, z], c) in prev.iter() {
            *acc.entry([*x, y + 1, *z]).or_default() += c;
            if *x > 0 {
                let shift = *x as i64 - 1 - 2 * *y as i64;
                let xc = c * BigInt::from(*x);
                *acc.entry([x - 1, *y, z + 1]).or_default() -= &xc;
                *acc.entry([x - 1, *y, *z]).or_default() -= xc * shift;
            }
        }
        Rc::new(acc.into_iter().filter(|(_, c)| !c.is_zero()).collect())
    };
    SL_CACHE.with(|c| c.borrow_mut().fe.insert((b, a), result.clone()));
    result
}

/// Normal form of the product of two single-factor monomials.
fn sl_product(left: Triple, right: Triple) -> SlTerms {
    if let Some(hit) = SL_CACHE.with(|c| c.borrow().products.get(&(left, right)).cloned()) {
        return hit;
    }
    let [a, b, c] = left;
    let [a2, b2, c2] = right;
    // e^a f^b h^c e^{a2} f^{b2} h^{c2}
    //   = e^a (f^b e^{a2}) f^{b2} (h + 2a2 - 2b2)^c h^{c2}
    //   = Σ κ e^{a+x} f^{y+b2} (h - 2b2)^z (h + 2a2 - 2b2)^c h^{c2}
    let shift = 2 * a2 as i64 - 2 * b2 as i64;
    let mut acc: BTreeMap<Triple, BigInt> = BTreeMap::new();
    for ([x, y, z], kappa) in fe_power(b, a2).iter() {
        let shifts = std::iter::repeat_n(-2 * b2 as i64, *z as usize)
            .chain(std::iter::repeat_n(shift, c as usize));
        let poly = h_poly(shifts);
        for (deg, pc) in poly.iter().enumerate() {
            if pc.is_zero() {
                continue;
            }
            *acc.entry([a + x, y + b2, deg as u32 + c2]).or_default() += kappa * pc;
        }
    }
    let result: SlTerms = Rc::new(acc.into_iter().filter(|(_, c)| !c.is_zero()).collect());
    SL_CACHE.with(|c| c.borrow_mut().products.insert((left, right), result.clone()));
    result
}

/// Normal form of the product of two PBW monomials, with integer coefficients.
pub fn monomial_product(left: &PbwMonomial, right: &PbwMonomial) -> Vec<(PbwMonomial, BigInt)> {
    let n = left.len().max(right.len());
    let mut partial: Vec<(Vec<Triple>, BigInt)> = vec![(Vec::with_capacity(n), BigInt::one())];
    for i in 0..n {
        let (l, r) = (left.factor(i), right.factor(i));
        let factor_terms: SlTerms = if l == [0; 3] {
            Rc::new(vec![(r, BigInt::one())])
        } else if r == [0; 3] {
            Rc::new(vec![(l, BigInt::one())])
        } else {
            sl_product(l, r)
        };
        let mut next = Vec::with_capacity(partial.len() * factor_terms.len());
        for (prefix, c) in &partial {
            for (t, k) in factor_terms.iter() {
                let mut p = prefix.clone();
                p.push(*t);
                next.push((p, c * k));
            }
        }
        partial = next;
    }
    partial
        .into_iter()
        .map(|(t, c)| (PbwMonomial::from_triples(t), c))
        .collect()
}

/// An element of `U(sl2)^{⊗ rank}` in PBW normal form.
#[derive(Clone, Debug)]
pub struct Element {
    rank: usize,
    terms: BTreeMap<PbwMonomial, Rational>,
}

impl PartialEq for Element {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms
    }
}

impl Eq for Element {}

impl Element {
    pub fn zero(rank: usize) -> Self {
        Element {
            rank,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(rank: usize) -> Self {
        Self::scalar(rank, Rational::one())
    }

    pub fn scalar(rank: usize, c: Rational) -> Self {
        Self::from_terms(rank, [(PbwMonomial::one(), c)])
    }

    /// Builds an element, merging repeated monomials and dropping zeros.
    /// The rank is raised if a monomial uses more factors.
    pub fn from_terms(rank: usize, terms: impl IntoIterator<Item = (PbwMonomial, Rational)>) -> Self {
        let mut map: BTreeMap<PbwMonomial, Rational> = BTreeMap::new();
        let mut rank = rank;
        for (m, c) in terms {
            rank = rank.max(m.len());
            *map.entry(m).or_insert_with(Rational::zero) += c;
        }
        map.retain(|_, c| !c.is_zero());
        Element { rank, terms: map }
    }

    pub fn monomial(rank: usize, m: PbwMonomial) -> Self {
        Self::from_terms(rank, [(m, Rational::one())])
    }

    pub fn generator(rank: usize, g: Generator) -> Result<Self> {
        if g.factor >= rank {
            return Err(Error::FactorOutOfRange {
                index: g.factor + 1,
                rank,
            });
        }
        Ok(Self::monomial(rank, PbwMonomial::generator(g)))
    }

    /// `e_{i+1}` as an element of the smallest algebra containing it.
    pub fn e(i: usize) -> Self {
        Self::monomial(i + 1, PbwMonomial::generator(Generator::new(i, Letter::E)))
    }

    pub fn f(i: usize) -> Self {
        Self::monomial(i + 1, PbwMonomial::generator(Generator::new(i, Letter::F)))
    }

    pub fn h(i: usize) -> Self {
        Self::monomial(i + 1, PbwMonomial::generator(Generator::new(i, Letter::H)))
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Same element viewed in a larger tensor power.
    pub fn with_rank(mut self, rank: usize) -> Self {
        self.rank = self.rank.max(rank);
        self
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

    pub fn terms(&self) -> impl Iterator<Item = (&PbwMonomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &PbwMonomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn into_terms(self) -> BTreeMap<PbwMonomial, Rational> {
        self.terms
    }

    pub fn scale(&self, c: &Rational) -> Element {
        Element::from_terms(self.rank, self.terms.iter().map(|(m, x)| (m.clone(), x * c)))
    }

    pub fn map_coefficients(&self, f: impl Fn(&Rational) -> Rational) -> Element {
        Element::from_terms(self.rank, self.terms.iter().map(|(m, x)| (m.clone(), f(x))))
    }

    /// Keeps only the terms accepted by `keep`.
    pub fn filter_terms(&self, keep: impl Fn(&PbwMonomial, &Rational) -> bool) -> Element {
        Element {
            rank: self.rank,
            terms: self
                .terms
                .iter()
                .filter(|(m, c)| keep(m, c))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Product in the enveloping algebra.
    pub fn multiply(&self, other: &Element) -> Element {
        let mut acc: HashMap<PbwMonomial, Rational> = HashMap::new();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let c12 = c1 * c2;
                for (m, k) in monomial_product(m1, m2) {
                    let v = acc.entry(m).or_insert_with(Rational::zero);
                    *v += &c12 * Rational::from_integer(k);
                }
            }
        }
        Element::from_terms(self.rank.max(other.rank), acc)
    }

    pub fn pow(&self, mut n: u32) -> Element {
        let mut base = self.clone();
        let mut acc = Element::one(self.rank);
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

    /// `a b - b a`.
    pub fn commutator(&self, other: &Element) -> Element {
        &self.multiply(other) - &other.multiply(self)
    }

    /// Smallest `λ` (componentwise) with `self ∈ F_λ`.
    pub fn multidegree(&self) -> Result<MultiDegree> {
        if self.is_zero() {
            return Err(Error::ZeroElement);
        }
        let mut d = vec![0u32; self.rank];
        for m in self.terms.keys() {
            for (i, slot) in d.iter_mut().enumerate() {
                *slot = (*slot).max(m.factor_degree(i));
            }
        }
        Ok(MultiDegree(d))
    }

    /// Degree in the total (`Z`-indexed) PBW filtration.
    pub fn total_degree(&self) -> Result<u32> {
        self.terms
            .keys()
            .map(PbwMonomial::total_degree)
            .max()
            .ok_or(Error::ZeroElement)
    }

    /// Top homogeneous part, read in the commutative ring `gr U = K[e_i, f_i, h_i]`.
    pub fn gr_leading(&self) -> Result<GradedElement> {
        let top = self.total_degree()?;
        Ok(GradedElement {
            rank: self.rank,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.total_degree() == top)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        })
    }

    /// JSON object mapping padded exponent vectors to `"num/den"` strings.
    pub fn to_json(&self) -> Value {
        let mut map = Map::new();
        for (m, c) in &self.terms {
            map.insert(m.key(self.rank), Value::String(arith::fmt_rational(c)));
        }
        Value::Object(map)
    }

    pub fn from_json(rank: usize, value: &Value) -> Result<Element> {
        let obj = value
            .as_object()
            .ok_or_else(|| Error::InvalidInput("expected a JSON object".into()))?;
        let mut terms = Vec::with_capacity(obj.len());
        for (k, v) in obj {
            let c = v
                .as_str()
                .ok_or_else(|| Error::InvalidInput(format!("coefficient of `{k}` is not a string")))?;
            terms.push((PbwMonomial::from_key(k)?, arith::parse_rational(c)?));
        }
        Ok(Element::from_terms(rank, terms))
    }
}

/// Writes `Σ c·m` with terms ordered by descending total degree.
pub(crate) fn write_sum<'a>(
    f: &mut fmt::Formatter<'_>,
    terms: impl Iterator<Item = (&'a PbwMonomial, &'a Rational)>,
) -> fmt::Result {
    let mut sorted: Vec<_> = terms.collect();
    if sorted.is_empty() {
        return write!(f, "0");
    }
    sorted.sort_by(|(a, _), (b, _)| b.total_degree().cmp(&a.total_degree()).then(a.cmp(b)));
    for (i, (m, c)) in sorted.into_iter().enumerate() {
        let neg = c.is_negative();
        let abs = c.abs();
        if i == 0 {
            if neg {
                write!(f, "-")?;
            }
        } else {
            write!(f, " {} ", if neg { '-' } else { '+' })?;
        }
        if m.is_empty() {
            write!(f, "{}", arith::fmt_rational_short(&abs))?;
        } else if abs.is_one() {
            write!(f, "{m}")?;
        } else {
            write!(f, "{}*{m}", arith::fmt_rational_short(&abs))?;
        }
    }
    Ok(())
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_sum(f, self.terms.iter())
    }
}

impl Add for &Element {
    type Output = Element;

    fn add(self, rhs: &Element) -> Element {
        Element::from_terms(
            self.rank.max(rhs.rank),
            self.terms.iter().chain(rhs.terms.iter()).map(|(m, c)| (m.clone(), c.clone())),
        )
    }
}

impl Sub for &Element {
    type Output = Element;

    fn sub(self, rhs: &Element) -> Element {
        Element::from_terms(
            self.rank.max(rhs.rank),
            self.terms
                .iter()
                .map(|(m, c)| (m.clone(), c.clone()))
                .chain(rhs.terms.iter().map(|(m, c)| (m.clone(), -c))),
        )
    }
}

impl Neg for &Element {
    type Output = Element;

    fn neg(self) -> Element {
        self.map_coefficients(|c| -c)
    }
}

impl Mul for &Element {
    type Output = Element;

    fn mul(self, rhs: &Element) -> Element {
        self.multiply(rhs)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl $tr for Element {
            type Output = Element;

            fn $method(self, rhs: Element) -> Element {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

/// An element of the commutative associated graded ring `K[e_i, f_i, h_i]`.
#[derive(Clone, Debug)]
pub struct GradedElement {
    rank: usize,
    terms: BTreeMap<PbwMonomial, Rational>,
}

impl PartialEq for GradedElement {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms
    }
}

impl GradedElement {
    pub fn from_element(e: &Element) -> Self {
        GradedElement {
            rank: e.rank,
            terms: e.terms.clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&PbwMonomial, &Rational)> {
        self.terms.iter()
    }

    /// Commutative product: exponents simply add.
    pub fn multiply(&self, other: &GradedElement) -> GradedElement {
        let mut acc: BTreeMap<PbwMonomial, Rational> = BTreeMap::new();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let n = m1.len().max(m2.len());
                let t = (0..n)
                    .map(|i| {
                        let (x, y) = (m1.factor(i), m2.factor(i));
                        [x[0] + y[0], x[1] + y[1], x[2] + y[2]]
                    })
                    .collect();
                *acc.entry(PbwMonomial::from_triples(t)).or_insert_with(Rational::zero) += c1 * c2;
            }
        }
        acc.retain(|_, c| !c.is_zero());
        GradedElement {
            rank: self.rank.max(other.rank),
            terms: acc,
        }
    }
}

impl fmt::Display for GradedElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_sum(f, self.terms.iter())
    }
}

/// The Casimir `Δ_i = ½h_i² − h_i + 2e_i f_i` of factor `i` (0-based).
pub fn casimir(i: usize, rank: usize) -> Result<Element> {
    if i >= rank {
        return Err(Error::FactorOutOfRange { index: i + 1, rank });
    }
    let mono = |letters: &[(Letter, u32)]| {
        let mut t = vec![[0u32; 3]; i + 1];
        for (l, x) in letters {
            t[i][l.slot()] = *x;
        }
        PbwMonomial::from_triples(t)
    };
    Ok(Element::from_terms(
        rank,
        [
            (mono(&[(Letter::H, 2)]), arith::ratio(1, 2)),
            (mono(&[(Letter::H, 1)]), arith::rat(-1)),
            (mono(&[(Letter::E, 1), (Letter::F, 1)]), arith::rat(2)),
        ],
    ))
}

/// Number of PBW monomials with per-factor degree `≤ λ_i`, i.e. `∏ C(λ_i + 3, 3)`.
pub fn filtration_rank_u(lambda: &MultiDegree) -> u64 {
    lambda
        .0
        .iter()
        .map(|&l| {
            let l = l as u64;
            (l + 1) * (l + 2) * (l + 3) / 6
        })
        .product()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{rat, ratio};

    fn e() -> Element {
        Element::e(0)
    }
    fn f() -> Element {
        Element::f(0)
    }
    fn h() -> Element {
        Element::h(0)
    }

    #[test]
    fn basic_relations() {
        assert_eq!(&f() * &e(), &(&e() * &f()) - &h());
        assert_eq!(&h() * &e(), &(&e() * &h()) + &e().scale(&rat(2)));
        assert_eq!(&h() * &f(), &(&f() * &h()) - &f().scale(&rat(2)));
        assert_eq!(e().commutator(&f()), h());
    }

    #[test]
    fn identity_is_neutral() {
        let a = &(&f() * &e()) + &h().pow(3);
        assert_eq!(&Element::one(1) * &a, a);
        assert_eq!(&a * &Element::one(1), a);
    }

    #[test]
    fn fe_power_small_cases() {
        // f^2 e = e f^2 - 2 f h + 2 f, from [e, f^2] = 2 f (h - 1)
        let lhs = &f().pow(2) * &e();
        let rhs = &(&(&e() * &f().pow(2)) - &(&f() * &h()).scale(&rat(2))) + &f().scale(&rat(2));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn distinct_factors_commute() {
        let e1 = Element::e(0);
        let f2 = Element::f(1);
        let h2 = Element::h(1);
        assert_eq!(&f2 * &e1, &e1 * &f2);
        assert_eq!(&h2 * &e1, &e1 * &h2);
    }

    #[test]
    fn casimir_forms_agree() {
        let delta = casimir(0, 1).unwrap();
        let alt = &(&h().pow(2).scale(&ratio(1, 2)) + &(&e() * &f())) + &(&f() * &e());
        assert_eq!(delta, alt);
        assert_eq!(delta.to_string(), "1/2*h1^2 + 2*e1*f1 - h1");
        for g in [e(), f(), h()] {
            assert!(delta.commutator(&g).is_zero());
        }
        assert!(casimir(1, 1).is_err());
    }

    #[test]
    fn multidegree_cases() {
        let m = &(&Element::e(0) * &Element::f(0)) * &Element::h(1);
        assert_eq!(m.multidegree().unwrap(), MultiDegree(vec![2, 1]));
        assert_eq!(casimir(0, 1).unwrap().multidegree().unwrap(), MultiDegree(vec![2]));
        assert_eq!(Element::one(3).multidegree().unwrap(), MultiDegree(vec![0, 0, 0]));
        assert_eq!(Element::zero(1).multidegree(), Err(Error::ZeroElement));
    }

    #[test]
    fn filtration_rank_values() {
        assert_eq!(filtration_rank_u(&MultiDegree(vec![0])), 1);
        assert_eq!(filtration_rank_u(&MultiDegree(vec![1])), 4);
        assert_eq!(filtration_rank_u(&MultiDegree(vec![2, 1])), 40);
    }

    #[test]
    fn gr_leading_cases() {
        let g = casimir(0, 1).unwrap().gr_leading().unwrap();
        let expect = GradedElement::from_element(
            &(&h().pow(2).scale(&ratio(1, 2)) + &(&e() * &f()).scale(&rat(2))),
        );
        assert_eq!(g, expect);
        let g = (&h() + &Element::one(1)).gr_leading().unwrap();
        assert_eq!(g, GradedElement::from_element(&h()));
        assert!(Element::zero(1).gr_leading().is_err());
    }

    #[test]
    fn json_round_trip() {
        let a = &casimir(1, 2).unwrap() + &Element::e(0).scale(&ratio(-3, 4));
        let j = a.to_json();
        assert_eq!(j["0,0,0,0,0,2"], "1/2");
        assert_eq!(Element::from_json(2, &j).unwrap(), a);
    }

    #[test]
    fn rank_padding_keeps_equality() {
        let a = Element::h(0);
        let b = Element::h(0).with_rank(3);
        assert_eq!(a, b);
        assert_eq!((&a * &b).rank(), 3);
    }
}
