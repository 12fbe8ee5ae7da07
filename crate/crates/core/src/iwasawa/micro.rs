//! The microlocalisation `b ↦ exp(p·x) − 1` into the enveloping algebra.
//!
//! Variables are grouped in threes per factor, in the order `F, H, E`:
//! `b_{3i+1} ↦ exp(p f_i) − 1`, `b_{3i+2} ↦ exp(p h_i) − 1`,
//! `b_{3i+3} ↦ exp(p e_i) − 1`. Images are multiplied in PBW normal form and
//! reduced mod `p^N` after every step.
//!
//! Every image has the shape `Σ λ_m m` with `v_p(λ_m) ≥ deg(m)(p−2)/(p−1)`:
//! the degree-`j` part of `exp(px) − 1` has valuation `j − v_p(j!)`, and
//! reordering only lowers degree. Truncating at PBW degree `D` therefore
//! loses only terms of valuation at least `⌈(D+1)(p−2)/(p−1)⌉`.

use std::collections::HashMap;
use std::fmt;

use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::arith::{self, Rational};
use crate::error::{Error, Result};
use crate::iwasawa::{check_prime, NcSeries, Word};
use crate::pbw::{Element, Generator, Letter};

const LETTERS: [Letter; 3] = [Letter::F, Letter::H, Letter::E];

/// The generator that variable `b_{v+1}` exponentiates.
pub fn variable_generator(v: usize) -> Generator {
    Generator::new(v / 3, LETTERS[v % 3])
}

/// A truncated element of the completed enveloping algebra: integral
/// coefficients known mod `p^precision`, PBW degree at most `cutoff`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PadicElement {
    p: u64,
    precision: u32,
    cutoff: u32,
    element: Element,
}

/// Coefficients reduced to `[0, p^m)`.
pub(crate) fn reduce_coefficients(e: &Element, p: u64, m: u32) -> Result<Element> {
    let modulus = Rational::from_integer(arith::pow_big(p, m));
    let mut terms = Vec::with_capacity(e.len());
    for (mono, c) in e.terms() {
        let r = arith::reduce_mod_pm(c, p, m)?;
        if !r.is_zero() {
            terms.push((mono.clone(), Rational::from_integer(r)));
        }
    }
    debug_assert!(terms.iter().all(|(_, c)| c < &modulus));
    Ok(Element::from_terms(e.rank(), terms))
}

/// `⌈(D+1)(p−2)/(p−1)⌉`: valuation floor of everything beyond degree `D`.
pub fn tail_valuation(p: u64, cutoff: u32) -> u32 {
    let num = (cutoff as u64 + 1) * (p - 2);
    num.div_ceil(p - 1) as u32
}

impl PadicElement {
    pub fn new(p: u64, precision: u32, cutoff: u32, element: &Element) -> Result<Self> {
        check_prime(p)?;
        let truncated = element.filter_terms(|m, _| m.total_degree() <= cutoff);
        Ok(PadicElement {
            p,
            precision,
            cutoff,
            element: reduce_coefficients(&truncated, p, precision)?,
        })
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn cutoff(&self) -> u32 {
        self.cutoff
    }

    pub fn element(&self) -> &Element {
        &self.element
    }

    /// Product of two microlocalised images. The result is known to
    /// precision `min(N_a, N_b, tail(min(D_a, D_b)))`.
    pub fn multiply(&self, other: &PadicElement) -> Result<PadicElement> {
        if self.p != other.p {
            return Err(Error::Incompatible(format!(
                "elements over p={} and p={}",
                self.p, other.p
            )));
        }
        let cutoff = self.cutoff.min(other.cutoff);
        let precision = self
            .precision
            .min(other.precision)
            .min(tail_valuation(self.p, cutoff));
        if precision == 0 {
            return Err(Error::PrecisionExhausted(
                "degree cutoff too small to control the product".into(),
            ));
        }
        PadicElement::new(
            self.p,
            precision,
            cutoff,
            &self.element.multiply(&other.element),
        )
    }

    /// Equality modulo the coarser precision and degree.
    pub fn agrees_with(&self, other: &PadicElement) -> bool {
        if self.p != other.p {
            return false;
        }
        let m = self.precision.min(other.precision);
        let d = self.cutoff.min(other.cutoff);
        let a = PadicElement::new(self.p, m, d, &self.element);
        let b = PadicElement::new(self.p, m, d, &other.element);
        matches!((a, b), (Ok(a), Ok(b)) if a.element == b.element)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "prime": self.p,
            "precision": self.precision,
            "degree_cutoff": self.cutoff,
            "terms": self.element.to_json(),
        })
    }
}

impl fmt::Display for PadicElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} mod ({}^{}, deg > {})",
            self.element, self.p, self.precision, self.cutoff
        )
    }
}

/// `Σ_{j ≥ 1} p^j x^j / j!` mod `p^m`, for a single generator `x`.
fn exp_minus_one(rank: usize, g: Generator, p: u64, m: u32) -> Result<Element> {
    let x = Element::generator(rank, g)?;
    let mut acc = Element::zero(rank);
    let mut power = Element::one(rank);
    let mut coeff = Rational::one();
    // v_p(p^j/j!) ≥ j(p−2)/(p−1) ≥ j/2 ≥ m once j ≥ 2m.
    for j in 1..=2 * m as i64 {
        power = power.multiply(&x);
        coeff = coeff * arith::rat(p as i64) / arith::rat(j);
        acc = &acc + &power.scale(&coeff);
    }
    reduce_coefficients(&acc, p, m)
}

/// Images of words, built left to right from memoised prefixes.
struct WordImages {
    p: u64,
    modulus_exp: u32,
    generators: Vec<Element>,
    memo: HashMap<Word, Element>,
}

impl WordImages {
    fn image(&mut self, w: &[u8]) -> Result<Element> {
        if let Some(e) = self.memo.get(w) {
            return Ok(e.clone());
        }
        let rank = self.generators[0].rank();
        let e = match w.split_last() {
            None => Element::one(rank),
            // images of words of length ≥ m vanish mod p^m
            Some(_) if w.len() as u32 >= self.modulus_exp => Element::zero(rank),
            Some((&last, prefix)) => {
                let head = self.image(prefix)?;
                let prod = head.multiply(&self.generators[last as usize]);
                reduce_coefficients(&prod, self.p, self.modulus_exp)?
            }
        };
        self.memo.insert(w.to_vec(), e.clone());
        Ok(e)
    }
}

/// Image of `s` under `b ↦ exp(p·x) − 1`, truncated at PBW degree `cutoff`
/// and precision `p^precision`.
///
/// The reported precision also accounts for the coefficient precisions of
/// `s` (a coefficient known to `p^P` on a word of length `|w|` is good to
/// `p^{P+|w|}` after substitution) and for the words `s` has discarded
/// beyond its own cutoff.
pub fn microlocalise(s: &NcSeries, cutoff: u32, precision: u32) -> Result<PadicElement> {
    let p = s.prime();
    if p == 2 {
        return Err(Error::InvalidPrime(p));
    }
    check_prime(p)?;
    if precision == 0 {
        return Err(Error::InvalidInput("precision must be at least 1".into()));
    }
    if s.nvars() == 0 || !s.nvars().is_multiple_of(3) {
        return Err(Error::InvalidInput(format!(
            "microlocalisation needs 3 variables per factor, got {}",
            s.nvars()
        )));
    }
    let rank = s.nvars() / 3;

    let mut out_prec = precision as i64;
    out_prec = out_prec.min(s.cutoff() as i64 + 1);
    let mut extra = 0i64;
    for (w, c) in s.terms() {
        out_prec = out_prec.min(c.precision() + w.len() as i64);
        if let Some(v) = c.valuation() {
            if v + (w.len() as i64) < 0 {
                return Err(Error::NotIntegral {
                    value: format!("{} on word {}", c, super::word_key(w)),
                    prime: p,
                });
            }
            extra = extra.max(-v);
        }
    }
    if out_prec < 1 {
        return Err(Error::PrecisionExhausted(
            "coefficients carry no usable digits".into(),
        ));
    }
    let out_prec = out_prec as u32;
    // Work with enough digits that dividing by a coefficient's p-part
    // still leaves `out_prec` good ones.
    let working = out_prec + extra as u32;

    let generators = (0..s.nvars())
        .map(|v| exp_minus_one(rank, variable_generator(v), p, working))
        .collect::<Result<Vec<_>>>()?;
    let mut images = WordImages {
        p,
        modulus_exp: working,
        generators,
        memo: HashMap::new(),
    };

    let mut total = Element::zero(rank);
    for (w, c) in s.terms() {
        let Some(v) = c.valuation() else { continue };
        if v + w.len() as i64 >= out_prec as i64 {
            continue;
        }
        let img = images.image(w)?;
        total = &total + &img.scale(&c.to_rational());
    }
    PadicElement::new(p, out_prec, cutoff, &total)
}
