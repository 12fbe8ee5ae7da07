//! Central quotients `U_λ = U(g) / (Δ_i − λ_i)`.
//!
//! In each factor the monomials `e^a f^b h^c` with `c ∈ {0, 1}` form a basis
//! of the quotient. Reduction rewrites `h² → 2λ + 2h − 4ef`, which is
//! `Δ = λ` solved for `h²`; the product `e^a f^b h^{c-2} · (2λ + 2h − 4ef)` is
//! normal-ordered in the enveloping algebra and reduced again. Each step
//! lowers the `h`-exponent of the monomial being rewritten, so the process
//! terminates. Factors are reduced independently.
//!
//! A character can also carry a modulus `p^m`, in which case coefficients
//! are residues and the quotient is `U_λ° / p^m`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde_json::{json, Map, Value};

use crate::arith::{self, Rational};
use crate::error::{Error, Result};
use crate::linalg;
use crate::pbw::{Element, MultiDegree, PbwMonomial, Triple};

/// A prime power `p^m` with `p` odd.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PModulus {
    pub p: u64,
    pub m: u32,
}

impl PModulus {
    pub fn new(p: u64, m: u32) -> Result<Self> {
        if p == 2 || !arith::is_prime(p) {
            return Err(Error::InvalidPrime(p));
        }
        if m == 0 {
            return Err(Error::InvalidInput("modulus exponent must be at least 1".into()));
        }
        Ok(PModulus { p, m })
    }

    pub fn value(&self) -> BigInt {
        arith::pow_big(self.p, self.m)
    }
}

impl fmt::Display for PModulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}^{}", self.p, self.m)
    }
}

/// Values `λ_i` of the Casimirs, one per factor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CentralCharacter {
    values: Vec<Rational>,
    modulus: Option<PModulus>,
}

impl CentralCharacter {
    pub fn rational(values: Vec<Rational>) -> Self {
        CentralCharacter {
            values,
            modulus: None,
        }
    }

    /// The character of `W_k`: `λ_i = ½ k_i (k_i + 2)`.
    pub fn weight(k: &[u32]) -> Self {
        Self::rational(k.iter().map(|&k| weight_value(k)).collect())
    }

    /// A character of `U_λ° / p^m`; values are stored as residues in `[0, p^m)`.
    pub fn padic(values: &[BigInt], p: u64, m: u32) -> Result<Self> {
        let modulus = PModulus::new(p, m)?;
        let pm = modulus.value();
        Ok(CentralCharacter {
            values: values
                .iter()
                .map(|v| Rational::from_integer(v.mod_floor(&pm)))
                .collect(),
            modulus: Some(modulus),
        })
    }

    /// Reinterprets a rational character modulo `p^m`.
    pub fn to_padic(&self, p: u64, m: u32) -> Result<Self> {
        let residues = self
            .values
            .iter()
            .map(|v| arith::reduce_mod_pm(v, p, m))
            .collect::<Result<Vec<_>>>()?;
        Self::padic(&residues, p, m)
    }

    pub fn rank(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn modulus(&self) -> Option<PModulus> {
        self.modulus
    }
}

impl fmt::Display for CentralCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.values.iter().map(arith::fmt_rational_short).collect();
        write!(f, "({})", parts.join(","))?;
        if let Some(m) = self.modulus {
            write!(f, " mod {m}")?;
        }
        Ok(())
    }
}

/// `½ k (k + 2)`, the Casimir eigenvalue on `Sym^k`.
pub fn weight_value(k: u32) -> Rational {
    let k = k as i64;
    arith::ratio(k * (k + 2), 2)
}

/// An element of `U_λ` written in the reduced basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotElement {
    character: CentralCharacter,
    terms: BTreeMap<PbwMonomial, Rational>,
}

impl QuotElement {
    pub fn zero(character: &CentralCharacter) -> Self {
        QuotElement {
            character: character.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(character: &CentralCharacter) -> Self {
        let mut q = Self::zero(character);
        q.terms.insert(PbwMonomial::one(), normalise(character, Rational::one()));
        q.terms.retain(|_, c| !c.is_zero());
        q
    }

    pub fn character(&self) -> &CentralCharacter {
        &self.character
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

    /// The same linear combination read in `U(g)`.
    pub fn lift(&self) -> Element {
        Element::from_terms(self.character.rank(), self.terms.clone())
    }

    pub fn multiply(&self, other: &QuotElement) -> Result<QuotElement> {
        if self.character != other.character {
            return Err(Error::CharacterMismatch);
        }
        reduce(&self.lift().multiply(&other.lift()), &self.character)
    }

    /// Smallest `p`-adic valuation among the coefficients; `None` for zero.
    pub fn min_valuation(&self, p: u64) -> Option<i64> {
        self.terms.values().filter_map(|c| arith::vp_rat(c, p)).min()
    }

    pub fn to_json(&self) -> Value {
        let rank = self.character.rank();
        let mut terms = Map::new();
        for (m, c) in &self.terms {
            let v = match self.character.modulus {
                Some(pm) => format!("{} mod {pm}", c.numer()),
                None => arith::fmt_rational(c),
            };
            terms.insert(m.key(rank), Value::String(v));
        }
        json!({
            "reduced": true,
            "character": self.character.values.iter().map(arith::fmt_rational).collect::<Vec<_>>(),
            "modulus": self.character.modulus.map(|m| m.to_string()),
            "terms": Value::Object(terms),
        })
    }
}

impl fmt::Display for QuotElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        crate::pbw::write_sum(f, self.terms.iter())?;
        if let Some(m) = self.character.modulus {
            write!(f, " (mod {m})")?;
        }
        Ok(())
    }
}

fn normalise(character: &CentralCharacter, c: Rational) -> Rational {
    match character.modulus {
        None => c,
        Some(pm) => match arith::reduce_mod_pm(&c, pm.p, pm.m) {
            Ok(r) => Rational::from_integer(r),
            Err(_) => c,
        },
    }
}

/// Reduction of single-factor monomials for one value of `λ`.
struct FactorReducer {
    relation: Element,
    memo: HashMap<Triple, Vec<(Triple, Rational)>>,
}

impl FactorReducer {
    fn new(lambda: Rational) -> Self {
        // h² ≡ 2λ + 2h − 4ef
        let relation = &(&Element::scalar(1, &lambda * arith::rat(2)) + &Element::h(0).scale(&arith::rat(2)))
            - &(&Element::e(0) * &Element::f(0)).scale(&arith::rat(4));
        FactorReducer {
            relation,
            memo: HashMap::new(),
        }
    }

    fn reduce(&mut self, t: Triple) -> Vec<(Triple, Rational)> {
        if t[2] <= 1 {
            return vec![(t, Rational::one())];
        }
        if let Some(hit) = self.memo.get(&t) {
            return hit.clone();
        }
        let lower = Element::monomial(1, PbwMonomial::from_triples(vec![[t[0], t[1], t[2] - 2]]));
        let rewritten = lower.multiply(&self.relation);
        let mut acc: BTreeMap<Triple, Rational> = BTreeMap::new();
        for (m, c) in rewritten.terms() {
            let inner = m.factor(0);
            debug_assert!(inner[2] < t[2]);
            for (r, k) in self.reduce(inner) {
                *acc.entry(r).or_insert_with(Rational::zero) += c * k;
            }
        }
        let out: Vec<_> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        self.memo.insert(t, out.clone());
        out
    }
}

/// Image of `a` in `U_λ` (or `U_λ° / p^m` for a modular character).
pub fn reduce(a: &Element, lambda: &CentralCharacter) -> Result<QuotElement> {
    let rank = lambda.rank();
    if a.rank() > rank {
        let used = a.terms().map(|(m, _)| m.len()).max().unwrap_or(0);
        if used > rank {
            return Err(Error::Incompatible(format!(
                "element uses {used} factors but the character has {rank}"
            )));
        }
    }
    let mut reducers: Vec<FactorReducer> =
        lambda.values.iter().cloned().map(FactorReducer::new).collect();
    let mut acc: BTreeMap<PbwMonomial, Rational> = BTreeMap::new();
    for (m, c) in a.terms() {
        let mut partial: Vec<(Vec<Triple>, Rational)> = vec![(Vec::new(), c.clone())];
        for (i, reducer) in reducers.iter_mut().enumerate().take(m.len()) {
            let pieces = reducer.reduce(m.factor(i));
            let mut next = Vec::with_capacity(partial.len() * pieces.len());
            for (prefix, pc) in &partial {
                for (t, k) in &pieces {
                    let mut p = prefix.clone();
                    p.push(*t);
                    next.push((p, pc * k));
                }
            }
            partial = next;
        }
        for (t, k) in partial {
            *acc.entry(PbwMonomial::from_triples(t)).or_insert_with(Rational::zero) += k;
        }
    }
    if let Some(pm) = lambda.modulus {
        let mut reduced = BTreeMap::new();
        for (m, c) in acc {
            let r = arith::reduce_mod_pm(&c, pm.p, pm.m)?;
            if !r.is_zero() {
                reduced.insert(m, Rational::from_integer(r));
            }
        }
        acc = reduced;
    } else {
        acc.retain(|_, c| !c.is_zero());
    }
    Ok(QuotElement {
        character: lambda.clone(),
        terms: acc,
    })
}

/// Product in `U_λ`; both operands must live over `lambda`.
pub fn quot_multiply(a: &QuotElement, b: &QuotElement, lambda: &CentralCharacter) -> Result<QuotElement> {
    if &a.character != lambda || &b.character != lambda {
        return Err(Error::CharacterMismatch);
    }
    a.multiply(b)
}

/// Image of a `p`-integral element in `U_λ° / p^m`, `λ` given by integer representatives.
pub fn reduce_mod_pm(a: &Element, lambda: &[BigInt], p: u64, m: u32) -> Result<QuotElement> {
    for (_, c) in a.terms() {
        if arith::vp_rat(c, p).is_some_and(|v| v < 0) {
            return Err(Error::NotIntegral {
                value: arith::fmt_rational(c),
                prime: p,
            });
        }
    }
    reduce(a, &CentralCharacter::padic(lambda, p, m)?)
}

/// `dim F_d U_λ = ∏ (d_i + 1)²`.
pub fn quot_filtration_dim(d: &MultiDegree) -> u64 {
    d.0.iter().map(|&x| (x as u64 + 1).pow(2)).product()
}

/// Reduced monomials (`c_i ≤ 1`) with per-factor degree `≤ d_i`.
pub fn reduced_monomials(d: &MultiDegree) -> Vec<PbwMonomial> {
    let per_factor: Vec<Vec<Triple>> = d
        .0
        .iter()
        .map(|&di| {
            let mut v = Vec::new();
            for c in 0..=1.min(di) {
                for a in 0..=di - c {
                    for b in 0..=di - c - a {
                        v.push([a, b, c]);
                    }
                }
            }
            v
        })
        .collect();
    let mut out: Vec<Vec<Triple>> = vec![Vec::new()];
    for choices in &per_factor {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                choices.iter().map(move |t| {
                    let mut p = prefix.clone();
                    p.push(*t);
                    p
                })
            })
            .collect();
    }
    out.into_iter().map(PbwMonomial::from_triples).collect()
}

/// Dimension of the degree-`n` piece of `gr U_λ` for one factor: `2n + 1`.
pub fn gr_hilbert(n: u32) -> u64 {
    2 * n as u64 + 1
}

/// Hilbert function of `K[h, e, f] / (½h² + 2ef)` in degree `n`, computed as
/// `dim S_n − rank(q · S_{n−2})` by exact linear algebra.
pub fn quadric_hilbert_function(n: u32) -> u64 {
    let monos = |deg: u32| -> Vec<Triple> {
        let mut v = Vec::new();
        for a in 0..=deg {
            for b in 0..=deg - a {
                v.push([a, b, deg - a - b]);
            }
        }
        v
    };
    let top = monos(n);
    if n < 2 {
        return top.len() as u64;
    }
    let index: HashMap<Triple, usize> = top.iter().enumerate().map(|(i, t)| (*t, i)).collect();
    let quadric = [([0, 0, 2], arith::ratio(1, 2)), ([1, 1, 0], arith::rat(2))];
    let rows: Vec<linalg::SparseVec> = monos(n - 2)
        .into_iter()
        .map(|[a, b, c]| {
            quadric
                .iter()
                .map(|([x, y, z], k)| (index[&[a + x, b + y, c + z]], k.clone()))
                .collect()
        })
        .collect();
    (top.len() - linalg::span_rank(&rows)) as u64
}
