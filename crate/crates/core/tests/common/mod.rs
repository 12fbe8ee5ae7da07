#![allow(dead_code)]

pub mod suites;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

use sl2_uea::arith::{ratio, Rational};
use sl2_uea::iwasawa::NcSeries;
use sl2_uea::pbw::{Element, PbwMonomial};

/// Seeds are fixed so every run sees the same cases.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn small_rational(rng: &mut ChaCha8Rng) -> Rational {
    let mut n = rng.gen_range(-5i64..=5);
    if n == 0 {
        n = 1;
    }
    ratio(n, rng.gen_range(1i64..=3))
}

pub fn random_monomial(rng: &mut ChaCha8Rng, rank: usize, max_degree: u32) -> PbwMonomial {
    let mut budget = rng.gen_range(0..=max_degree);
    let mut triples = vec![[0u32; 3]; rank];
    while budget > 0 {
        let i = rng.gen_range(0..rank);
        let slot = rng.gen_range(0..3);
        triples[i][slot] += 1;
        budget -= 1;
    }
    PbwMonomial::from_triples(triples)
}

pub fn random_element(rng: &mut ChaCha8Rng, rank: usize, max_degree: u32, max_terms: usize) -> Element {
    let n = rng.gen_range(1..=max_terms);
    let terms: Vec<_> = (0..n)
        .map(|_| (random_monomial(rng, rank, max_degree), small_rational(rng)))
        .collect();
    let mut e = Element::zero(rank);
    for (m, c) in terms {
        e = &e + &Element::monomial(rank, m).scale(&c);
    }
    e
}

/// A series in `3·rank` variables with integral coefficients and words of
/// length at most `max_len`.
pub fn random_series(
    rng: &mut ChaCha8Rng,
    template: &NcSeries,
    max_len: usize,
    max_terms: usize,
) -> NcSeries {
    let mut s = template.clone();
    for _ in 0..rng.gen_range(1..=max_terms) {
        let len = rng.gen_range(0..=max_len);
        let word: Vec<u8> = (0..len)
            .map(|_| rng.gen_range(0..template.nvars()) as u8)
            .collect();
        let c = Rational::from_integer(rng.gen_range(-20i64..=20).into());
        s.add_rational(word, &c).unwrap();
    }
    s
}

pub fn random_weight(rng: &mut ChaCha8Rng, rank: usize, max_k: u32) -> Vec<u32> {
    (0..rank).map(|_| rng.gen_range(0..=max_k)).collect()
}
