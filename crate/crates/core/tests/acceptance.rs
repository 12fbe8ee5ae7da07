//! One PASS/FAIL line per acceptance criterion.
//!
//! Criteria that cannot hold as literally stated are listed in
//! `KNOWN_UNATTAINABLE`; they are still checked literally and print FAIL with
//! the reason. The run fails if any other criterion fails, or if a listed one
//! unexpectedly passes.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use rand::Rng;

use sl2_uea::arith::{self, rat, ratio, Rational};
use sl2_uea::iwasawa::lazard::{exp_p_generator, lazard_ops, PMatrix2};
use sl2_uea::iwasawa::{self, genericity_probe, microlocalise, NcSeries, ProbeReport};
use sl2_uea::linalg::{span_rank, SparseVec};
use sl2_uea::pbw::{casimir, Element, MultiDegree, PbwMonomial};
use sl2_uea::quotient::{gr_hilbert, quadric_hilbert_function, quot_filtration_dim, reduce, reduced_monomials, CentralCharacter};
use sl2_uea::rep::{act, bound_table, filtered_image_dim, multiplicity, multiplicity_via_quotient, peter_weyl_multiplicity, RepMatrix};

use common::suites;

/// Criterion 5 asks for multiplicity > bound at k = 1 as well, where k < α
/// makes the bound the trivial dim W_k = 4 = multiplicity.
const KNOWN_UNATTAINABLE: &[u32] = &[5];

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err(e: sl2_uea::Error) -> String {
    e.to_string()
}

/// Criterion-3 weight grid: r = 1 with k ≤ 10, and r = 2 with k ≤ (3,3).
fn weight_grid() -> Vec<Vec<u32>> {
    let mut ks: Vec<Vec<u32>> = (0..=10).map(|k| vec![k]).collect();
    for a in 0..=3 {
        for b in 0..=3 {
            ks.push(vec![a, b]);
        }
    }
    ks
}

fn dim(k: &[u32]) -> usize {
    k.iter().map(|&x| x as usize + 1).product()
}

/// All PBW monomials e^a f^b h^c per factor with a+b+c ≤ d_i.
fn all_monomials(d: &MultiDegree) -> Vec<PbwMonomial> {
    let mut out: Vec<Vec<[u32; 3]>> = vec![Vec::new()];
    for &di in &d.0 {
        let mut next = Vec::new();
        for prefix in &out {
            for a in 0..=di {
                for b in 0..=di - a {
                    for c in 0..=di - a - b {
                        let mut p = prefix.clone();
                        p.push([a, b, c]);
                        next.push(p);
                    }
                }
            }
        }
        out = next;
    }
    out.into_iter().map(PbwMonomial::from_triples).collect()
}

fn criterion_1() -> Check {
    for k in 0..=10i64 {
        let lambda = CentralCharacter::rational(vec![ratio(k * (k + 2), 2)]);
        let lk = Element::scalar(1, ratio(k * (k + 2), 4));
        let h = Element::h(0);
        let h2 = h.multiply(&h);
        let left = &(&(&lk - &Element::scalar(1, rat(2))) + &h.scale(&ratio(3, 2))) - &h2.scale(&ratio(1, 4));
        let right = &(&lk + &h.scale(&ratio(1, 2))) - &h2.scale(&ratio(1, 4));
        let expected = reduce(&left.multiply(&right), &lambda).map_err(err)?;
        let e2f2 = Element::e(0).pow(2).multiply(&Element::f(0).pow(2));
        let got = reduce(&e2f2, &lambda).map_err(err)?;
        ensure(got == expected, || format!("k={k}: {} vs {}", got.lift(), expected.lift()))?;
    }
    Ok("k = 0..10".into())
}

fn criterion_2() -> Check {
    let characters: Vec<(&str, [Rational; 2])> = vec![
        ("weight (1,2)", [arith::rat(3) / rat(2), rat(4)]),
        ("weight (3,0)", [ratio(15, 2), rat(0)]),
        ("(0,0)", [rat(0), rat(0)]),
        ("(-7/5,1/3)", [ratio(-7, 5), ratio(1, 3)]),
        ("(2,-1)", [rat(2), rat(-1)]),
    ];
    let mut checked = 0;
    for (name, values) in &characters {
        for r in 1..=2usize {
            let lambda = CentralCharacter::rational(values[..r].to_vec());
            let top = MultiDegree(vec![4; r]);
            let all = all_monomials(&top);
            let images: Vec<(MultiDegree, SparseVec)> = all
                .iter()
                .map(|m| {
                    let q = reduce(&Element::monomial(r, m.clone()), &lambda).unwrap();
                    let md = MultiDegree((0..r).map(|i| m.factor_degree(i)).collect());
                    (md, q)
                })
                .map(|(md, q)| {
                    // coordinates in the reduced basis of degree ≤ (4,…,4)
                    let v: SparseVec = q
                        .terms()
                        .map(|(mono, c)| (basis_index(mono, r), c.clone()))
                        .collect();
                    (md, v)
                })
                .collect();
            let grid: Vec<MultiDegree> = if r == 1 {
                (0..=4).map(|d| MultiDegree(vec![d])).collect()
            } else {
                (0..=4).flat_map(|a| (0..=4).map(move |b| MultiDegree(vec![a, b]))).collect()
            };
            for d in grid {
                let formula = quot_filtration_dim(&d);
                let vectors: Vec<SparseVec> =
                    images.iter().filter(|(md, _)| md.le(&d)).map(|(_, v)| v.clone()).collect();
                let brute = span_rank(&vectors) as u64;
                let enumerated = reduced_monomials(&d).len() as u64;
                let product: u64 = d.0.iter().map(|&x| (x as u64 + 1).pow(2)).product();
                ensure(formula == product && brute == product && enumerated == product, || {
                    format!("λ={name} d={d}: formula {formula}, span rank {brute}, enumerated {enumerated}, ∏ {product}")
                })?;
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} (λ, d) pairs, span rank of reduced images"))
}

/// Index of a reduced monomial (c ≤ 1, degree ≤ 4 per factor) in a fixed
/// enumeration; independent of `reduced_monomials`.
fn basis_index(m: &PbwMonomial, r: usize) -> usize {
    (0..r).fold(0, |acc, i| {
        let [a, b, c] = m.factor(i);
        assert!(c <= 1 && a + b + c <= 4, "{m:?} is not reduced");
        acc * 50 + (c as usize * 25 + a as usize * 5 + b as usize)
    })
}

fn criterion_3() -> Check {
    for k in weight_grid() {
        let got = filtered_image_dim(&k, &MultiDegree(k.clone())).map_err(err)?;
        let n = dim(&k);
        ensure(got == n * n, || format!("k={k:?}: {got} vs {}", n * n))?;
    }
    Ok("r=1 k≤10, r=2 k≤(3,3)".into())
}

fn criterion_4() -> Check {
    let mut count = 0;
    for k in weight_grid() {
        let r = k.len();
        let (e, f, h) = (
            Element::e(0).with_rank(r),
            Element::f(0).with_rank(r),
            Element::h(0).with_rank(r),
        );
        let mut deltas = vec![h.clone(), e.clone(), f.clone(), &e + &f, e.multiply(&f)];
        if r == 2 {
            deltas.push(&casimir(0, 2).unwrap() - &casimir(1, 2).unwrap());
        }
        for delta in deltas {
            let a = multiplicity(&delta, &k).map_err(err)?.value;
            let b = multiplicity_via_quotient(&delta, &k).map_err(err)?;
            ensure(a == b, || format!("δ={delta} k={k:?}: {a} vs {b}"))?;
            count += 1;
        }
    }
    Ok(format!("{count} (δ, k) pairs"))
}

fn criterion_5() -> Check {
    let h = Element::h(0);
    let ks: Vec<Vec<u32>> = (0..=20).map(|k| vec![k]).collect();
    let rows = bound_table(&h, &ks, &MultiDegree(vec![1])).map_err(err)?;
    let violations = rows.iter().filter(|r| !r.ok).count();
    ensure(violations == 0, || format!("δ=h has {violations} violations"))?;

    let delta = &casimir(0, 2).unwrap() - &casimir(1, 2).unwrap();
    let ks: Vec<Vec<u32>> = (0..=4).map(|k| vec![k, k]).collect();
    let rows = bound_table(&delta, &ks, &MultiDegree(vec![2, 2])).map_err(err)?;
    let mut report = Vec::new();
    let mut missing = Vec::new();
    for row in &rows {
        let k = row.k[0];
        let square = (k as usize + 1).pow(2);
        ensure(row.multiplicity == square, || {
            format!("k={k}: multiplicity {} is not (k+1)²", row.multiplicity)
        })?;
        report.push(format!("k={k}: {} vs {}", row.multiplicity, row.bound));
        if k >= 1 && row.ok {
            missing.push(k);
        }
    }
    let detail = report.join(", ");
    if missing.is_empty() {
        Ok(format!("δ=h clean for k≤20; Δ₁−Δ₂ {detail}"))
    } else {
        Err(format!(
            "δ=h clean for k≤20, but Δ₁−Δ₂ does not exceed the bound at k={missing:?} \
             (there k < α, so the bound is the trivial dim W_k); {detail}"
        ))
    }
}

fn criterion_6() -> Check {
    for k in weight_grid() {
        let n = dim(&k);
        let free = multiplicity(&Element::zero(k.len()), &k).map_err(err)?;
        ensure(peter_weyl_multiplicity(&k) == n && free.value == n && free.free, || {
            format!("k={k:?}: {} / {} vs {n}", peter_weyl_multiplicity(&k), free.value)
        })?;
    }
    Ok("∏(kᵢ+1) on the grid".into())
}

fn criterion_7() -> Check {
    for k in weight_grid() {
        for i in 0..k.len() {
            let ki = k[i] as i64;
            let expected = RepMatrix::scalar(dim(&k), ratio(ki * (ki + 2), 2));
            let got = act(&casimir(i, k.len()).unwrap(), &k).map_err(err)?;
            ensure(got == expected, || format!("Δ{} on k={k:?}", i + 1))?;
        }
    }
    Ok("½kᵢ(kᵢ+2)·I on the grid".into())
}

fn criterion_8() -> Check {
    for n in 0..=20u32 {
        let enumerated = (0..=1u32.min(n)).map(|c| (n - c + 1) as u64).sum::<u64>();
        let (g, q) = (gr_hilbert(n), quadric_hilbert_function(n));
        ensure(g == 2 * n as u64 + 1 && g == enumerated && g == q, || {
            format!("n={n}: gr_hilbert {g}, enumerated {enumerated}, quadric {q}")
        })?;
    }
    Ok("n ≤ 20".into())
}

fn criterion_9() -> Check {
    for p in [3u64, 5] {
        for n in 1..=3u32 {
            let d = p.pow(n) as u32;
            let t = NcSeries::new(p, 3, d, 6).map_err(err)?;
            for i in 0..3 {
                let l = t.log_one_plus(i).map_err(err)?;
                let got = l.norm_r(n);
                ensure(got.value() == Some(&rat(n as i64 - 1)), || {
                    format!("p={p} n={n} b{}: log norm {got}", i + 1)
                })?;
            }
        }
    }
    for p in [3u64, 5, 7] {
        for n in 1..=3u32 {
            let values = iwasawa::exp_pn_decay(p, n, 200).map_err(err)?;
            for (k, v) in values.iter().enumerate() {
                // v_p(k!) by counting factors of p in 1..=k
                let count: i64 = (1..=k as u64)
                    .map(|mut j| {
                        let mut c = 0;
                        while j % p == 0 {
                            j /= p;
                            c += 1;
                        }
                        c
                    })
                    .sum();
                let direct = arith::vp_int(&arith::factorial(k as u64), p).unwrap() as i64;
                let expected = rat(-(n as i64) * k as i64 + count + (n as i64 - 1) * k as i64);
                ensure(count == direct && *v == expected, || {
                    format!("p={p} n={n} k={k}: {v} vs {expected}")
                })?;
            }
            let tail_max = |from: usize| values[from..].iter().max().unwrap().clone();
            ensure(tail_max(200) < tail_max(100) && tail_max(100) < tail_max(10), || {
                format!("p={p} n={n}: tail maxima do not decrease")
            })?;
        }
    }
    Ok("‖log(1+bᵢ)‖ = p^(n−1); Legendre = direct count for k ≤ 200".into())
}

/// Seed for the microlocalisation pairs.
const SEED_MICRO: u64 = 0x5EED_0010;

fn criterion_10() -> Check {
    let mut rng = common::rng(SEED_MICRO);
    let t = NcSeries::new(3, 3, 6, 4).map_err(err)?;
    for case in 0..20 {
        let len = rng.gen_range(1..=3);
        let s = common::random_series(&mut rng, &t, len, 4);
        let u = common::random_series(&mut rng, &t, 3, 4);
        let whole = microlocalise(&s.multiply(&u).map_err(err)?, 6, 4).map_err(err)?;
        let parts = microlocalise(&s, 6, 4)
            .map_err(err)?
            .multiply(&microlocalise(&u, 6, 4).map_err(err)?)
            .map_err(err)?;
        ensure(whole.agrees_with(&parts), || format!("pair {case}: s={s}, t={u}"))?;
    }
    Ok(format!("20 pairs, seed {SEED_MICRO:#x}"))
}

fn criterion_11() -> Check {
    const P: u64 = 3;
    const N: i64 = 12;
    let g = exp_p_generator(P, 'e', N).map_err(err)?;
    let h = exp_p_generator(P, 'f', N).map_err(err)?;
    // exp(p²·diag(1, −1)), built directly
    let limit = PMatrix2::from_ints(P, [[9, 0], [0, -9]], N).exp().map_err(err)?;
    let mut digits = Vec::new();
    let mut last: Option<i64> = None;
    for i in 1..=4 {
        let approx = lazard_ops(&g, &h, i).map_err(err)?;
        let available = approx.bracket.precision();
        let d = approx.bracket.agreement(&limit);
        if let Some(prev) = last {
            ensure(d > prev || d >= available, || {
                format!("i={i}: {d} digits after {prev}, {available} available")
            })?;
        }
        digits.push(format!("{d}/{available}"));
        last = Some(d);
    }
    ensure(lazard_ops(&g, &h, 6).is_err(), || "i=6 should exhaust precision".into())?;
    Ok(format!("digits/available for i=1..4: {}", digits.join(" ")))
}

/// `f(λ') ≤ f(λ)` whenever `λ' ≡ λ mod p^{f(λ)}`, checked between grids.
fn refinement_respected(coarse: &ProbeReport, fine: &ProbeReport) -> bool {
    let p = BigInt::from(coarse.prime);
    let modulus = p.pow(coarse.grid_exponent);
    fine.rows.iter().all(|row| {
        let base = coarse
            .rows
            .iter()
            .find(|c| c.lambda.iter().zip(&row.lambda).all(|(a, b)| a == &(b % &modulus)))
            .expect("coarse grid covers the fine one");
        match (base.first_nonvanishing, row.first_nonvanishing) {
            (Some(fb), f) if fb <= coarse.grid_exponent => f.is_some_and(|f| f <= fb),
            _ => true,
        }
    })
}

fn criterion_12() -> Check {
    let p = 3;
    let one = Element::one(1);
    let ph = Element::h(0).scale(&rat(3));
    let delta = &casimir(0, 1).unwrap() - &Element::scalar(1, rat(4));
    for (name, e, want) in [("1", &one, 1), ("3h", &ph, 2)] {
        let report = genericity_probe(e, p, 4, 2).map_err(err)?;
        ensure(report.rows.iter().all(|r| r.first_nonvanishing == Some(want)), || {
            format!("probe({name}) is not {want} everywhere")
        })?;
    }
    let coarse = genericity_probe(&delta, p, 4, 2).map_err(err)?;
    let fine = genericity_probe(&delta, p, 4, 3).map_err(err)?;
    let four = vec![BigInt::from(4)];
    for report in [&coarse, &fine] {
        ensure(report.witnesses() == vec![four.as_slice()], || {
            format!("witnesses at g={}: {:?}", report.grid_exponent, report.witnesses())
        })?;
    }
    ensure(refinement_respected(&coarse, &fine), || "refinement raised f(λ)".into())?;
    Ok("n=1 for 1, n=2 for 3h, Δ−4 vanishes at λ₀=4 only; refinement 9→27 monotone".into())
}

fn criterion_13() -> Check {
    let named: [(&str, fn() -> suites::Outcome, u64); 5] = [
        ("associativity", suites::associativity, suites::SEED_ASSOCIATIVITY),
        ("centrality", suites::centrality, suites::SEED_CENTRALITY),
        ("homomorphism", suites::representation_homomorphism, suites::SEED_HOMOMORPHISM),
        ("oracles", suites::oracle_equivalence, suites::SEED_ORACLES),
        ("submultiplicativity", suites::norm_submultiplicativity, suites::SEED_NORMS),
    ];
    let mut parts = Vec::new();
    for (name, suite, seed) in named {
        let n = suite().map_err(|e| format!("{name}: {e}"))?;
        ensure(n >= 100, || format!("{name}: only {n} cases"))?;
        parts.push(format!("{name} {n}@{seed:#x}"));
    }
    Ok(parts.join(", "))
}

fn main() -> ExitCode {
    let criteria: [(u32, fn() -> Check, u64); 13] = [
        (1, criterion_1, 1),
        (2, criterion_2, 1),
        (3, criterion_3, 30),
        (4, criterion_4, 30),
        (5, criterion_5, 10),
        (6, criterion_6, 1),
        (7, criterion_7, 1),
        (8, criterion_8, 1),
        (9, criterion_9, 1),
        (10, criterion_10, 30),
        (11, criterion_11, 5),
        (12, criterion_12, 10),
        (13, criterion_13, 60),
    ];
    let mut unexpected = Vec::new();
    for (n, check, budget) in criteria {
        let start = Instant::now();
        let result = check();
        let elapsed = start.elapsed();
        let within = elapsed <= Duration::from_secs(budget);
        let (pass, detail) = match result {
            Ok(d) if within => (true, d),
            Ok(d) => (false, format!("{d}; over the {budget} s budget")),
            Err(d) => (false, d),
        };
        println!(
            "criterion {n} {} ({:.2} s) {detail}",
            if pass { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64()
        );
        if pass == KNOWN_UNATTAINABLE.contains(&n) {
            unexpected.push(n);
        }
    }
    if unexpected.is_empty() {
        ExitCode::SUCCESS
    } else {
        println!("unexpected outcome for criteria {unexpected:?}");
        ExitCode::FAILURE
    }
}
