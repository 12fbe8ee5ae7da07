//! The named property suites, shared by the property and acceptance targets.
//! Each returns the number of cases checked or a description of the first
//! counterexample.

use sl2_uea::arith;
use sl2_uea::iwasawa::NcSeries;
use sl2_uea::pbw::casimir;
use sl2_uea::rep::{act, multiplicity, multiplicity_via_quotient};

use super::*;

pub const CASES: usize = 100;

pub const SEED_ASSOCIATIVITY: u64 = 0x5EED_0001;
pub const SEED_CENTRALITY: u64 = 0x5EED_0002;
pub const SEED_HOMOMORPHISM: u64 = 0x5EED_0004;
pub const SEED_ORACLES: u64 = 0x5EED_0005;
pub const SEED_NORMS: u64 = 0x5EED_0006;

pub type Outcome = Result<usize, String>;

pub fn associativity() -> Outcome {
    let mut rng = rng(SEED_ASSOCIATIVITY);
    for case in 0..CASES {
        let rank = 1 + case % 2;
        let a = random_element(&mut rng, rank, 3, 3);
        let b = random_element(&mut rng, rank, 3, 3);
        let c = random_element(&mut rng, rank, 3, 3);
        if a.multiply(&b).multiply(&c) != a.multiply(&b.multiply(&c)) {
            return Err(format!("(ab)c ≠ a(bc) for a={a}, b={b}, c={c}"));
        }
    }
    Ok(CASES)
}

pub fn centrality() -> Outcome {
    let mut rng = rng(SEED_CENTRALITY);
    for _ in 0..CASES {
        let a = random_element(&mut rng, 2, 3, 3);
        for i in 0..2 {
            if !casimir(i, 2).unwrap().commutator(&a).is_zero() {
                return Err(format!("Δ{} does not commute with {a}", i + 1));
            }
        }
    }
    Ok(CASES)
}

pub fn representation_homomorphism() -> Outcome {
    let mut rng = rng(SEED_HOMOMORPHISM);
    for case in 0..CASES {
        let rank = 1 + case % 2;
        let k = random_weight(&mut rng, rank, if rank == 1 { 6 } else { 3 });
        let a = random_element(&mut rng, rank, 3, 3);
        let b = random_element(&mut rng, rank, 3, 3);
        let lhs = act(&a.multiply(&b), &k).map_err(|e| e.to_string())?;
        let rhs = &act(&a, &k).unwrap() * &act(&b, &k).unwrap();
        if lhs != rhs {
            return Err(format!("ρ(ab) ≠ ρ(a)ρ(b) on k={k:?} for a={a}, b={b}"));
        }
    }
    Ok(CASES)
}

pub fn oracle_equivalence() -> Outcome {
    let mut rng = rng(SEED_ORACLES);
    for case in 0..CASES {
        let rank = 1 + case % 2;
        let k = random_weight(&mut rng, rank, if rank == 1 { 8 } else { 3 });
        let delta = random_element(&mut rng, rank, 3, 2);
        let direct = multiplicity(&delta, &k).map_err(|e| e.to_string())?.value;
        let via = multiplicity_via_quotient(&delta, &k).map_err(|e| e.to_string())?;
        if direct != via {
            return Err(format!("δ={delta}, k={k:?}: kernel {direct} vs quotient {via}"));
        }
    }
    Ok(CASES)
}

pub fn norm_submultiplicativity() -> Outcome {
    let mut rng = rng(SEED_NORMS);
    let t = NcSeries::new(3, 3, 6, 6).unwrap();
    for _ in 0..CASES {
        let mut a = random_series(&mut rng, &t, 3, 4);
        let b = random_series(&mut rng, &t, 3, 4);
        // one non-integral coefficient
        a.add_rational(vec![0], &arith::ratio(1, 3)).unwrap();
        let ab = a.multiply(&b).map_err(|e| e.to_string())?;
        for n in 0..=3 {
            if ab.norm_r(n) > &a.norm_r(n) + &b.norm_r(n) {
                return Err(format!("‖ab‖ > ‖a‖‖b‖ at n={n} for a={a}, b={b}"));
            }
        }
    }
    Ok(CASES)
}
