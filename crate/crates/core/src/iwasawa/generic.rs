//! Probing how generic a central character is for a fixed element.
//!
//! For `δ` with `p`-integral coefficients and an integral character `λ`,
//! `f_δ(λ)` is the least `m′` such that the image of `δ` in `U_λ` is nonzero
//! mod `p^{m′}`, i.e. one more than the minimal valuation of the reduced
//! coefficients. Since `f_δ(λ + x) ≤ f_δ(λ)` whenever `x ≡ 0 mod p^{f_δ(λ)}`,
//! sampling `λ` on the grid `(Z/p^g)^r` with `g` at least the observed
//! maximum sees every value `f_δ` takes.

use num_bigint::BigInt;
use serde_json::{json, Value};

use crate::arith::{self, Rational};
use crate::error::{Error, Result};
use crate::iwasawa::check_prime;
use crate::pbw::Element;
use crate::quotient::{reduce, CentralCharacter};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProbeRow {
    pub lambda: Vec<BigInt>,
    /// Least precision at which the image is nonzero; `None` if it
    /// vanishes to the probed precision.
    pub first_nonvanishing: Option<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProbeReport {
    pub prime: u64,
    pub max_precision: u32,
    pub grid_exponent: u32,
    pub rows: Vec<ProbeRow>,
}

impl ProbeReport {
    /// Largest finite `f_δ(λ)` seen on the grid.
    pub fn n_delta(&self) -> Option<u32> {
        self.rows.iter().filter_map(|r| r.first_nonvanishing).max()
    }

    /// Grid points where `δ` vanishes to precision `m`.
    pub fn witnesses(&self) -> Vec<&[BigInt]> {
        self.rows
            .iter()
            .filter(|r| r.first_nonvanishing.is_none())
            .map(|r| r.lambda.as_slice())
            .collect()
    }

    pub fn to_json(&self) -> Value {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| {
                json!({
                    "lambda": r.lambda.iter().map(ToString::to_string).collect::<Vec<_>>(),
                    "first_nonvanishing": r.first_nonvanishing,
                })
            })
            .collect();
        json!({
            "prime": self.prime,
            "m": self.max_precision,
            "grid_exponent": self.grid_exponent,
            "n_delta": self.n_delta(),
            "witnesses": self.witnesses().iter()
                .map(|l| l.iter().map(ToString::to_string).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
            "rows": rows,
        })
    }
}

/// `f_δ(λ)` capped at `m`; `None` when the image vanishes mod `p^m`.
pub fn first_nonvanishing(delta: &Element, lambda: &[BigInt], p: u64, m: u32) -> Result<Option<u32>> {
    let character = CentralCharacter::rational(
        lambda.iter().map(|x| Rational::from_integer(x.clone())).collect(),
    );
    let image = reduce(delta, &character)?;
    Ok(match image.min_valuation(p) {
        Some(v) if v < m as i64 => Some((v + 1).max(1) as u32),
        _ => None,
    })
}

/// Evaluates `f_δ` on every point of `(Z/p^g)^r`, in lexicographic order.
pub fn genericity_probe(delta: &Element, p: u64, m: u32, grid_exponent: u32) -> Result<ProbeReport> {
    check_prime(p)?;
    if m == 0 {
        return Err(Error::InvalidInput("precision m must be at least 1".into()));
    }
    for (_, c) in delta.terms() {
        if arith::vp_rat(c, p).is_some_and(|v| v < 0) {
            return Err(Error::NotIntegral {
                value: arith::fmt_rational_short(c),
                prime: p,
            });
        }
    }
    let rank = delta.rank().max(1);
    let side = p
        .checked_pow(grid_exponent)
        .filter(|&s| (s as u128).pow(rank as u32) <= 1 << 20)
        .ok_or_else(|| Error::InvalidInput("probe grid too large".into()))?;

    let mut rows = Vec::new();
    let mut point = vec![0u64; rank];
    loop {
        let lambda: Vec<BigInt> = point.iter().map(|&x| BigInt::from(x)).collect();
        let f = first_nonvanishing(delta, &lambda, p, m)?;
        rows.push(ProbeRow {
            lambda,
            first_nonvanishing: f,
        });
        // odometer step, last coordinate fastest
        let mut i = rank;
        loop {
            if i == 0 {
                return Ok(ProbeReport {
                    prime: p,
                    max_precision: m,
                    grid_exponent,
                    rows,
                });
            }
            i -= 1;
            point[i] += 1;
            if point[i] < side {
                break;
            }
            point[i] = 0;
        }
    }
}
