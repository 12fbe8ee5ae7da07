//! The representations `W_k = Sym^{k_1} ⊠ … ⊠ Sym^{k_r}` and multiplicity bounds.
//!
//! Each factor uses the basis `v_0, …, v_k` with
//!
//! ```text
//! f v_j = v_{j+1},   e v_j = j (k − j + 1) v_{j−1},   h v_j = (k − 2j) v_j,
//! ```
//!
//! which keeps every matrix integral and satisfies `[h,e] = 2e`, `[h,f] = −2f`,
//! `[e,f] = h` exactly. The tensor basis is ordered with the first factor most
//! significant.
//!
//! A PBW monomial sends each basis vector to a multiple of a single basis
//! vector, so its matrix is a weighted permutation-like "monomial matrix";
//! matrices of elements are sums of these.

use std::fmt;
use std::ops::{Add, Mul, Sub};

use num_traits::{One, Zero};

use crate::arith::{self, Rational};
use crate::error::{Error, Result};
use crate::linalg::{self, SparseVec};
use crate::pbw::{Element, Letter, MultiDegree, PbwMonomial, Triple};
use crate::quotient::{reduced_monomials, weight_value};

/// Dense square matrix with rational entries acting on `W_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RepMatrix {
    n: usize,
    data: Vec<Rational>,
}

impl RepMatrix {
    pub fn zero(n: usize) -> Self {
        RepMatrix {
            n,
            data: vec![Rational::zero(); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::scalar(n, Rational::one())
    }

    pub fn scalar(n: usize, c: Rational) -> Self {
        let mut m = Self::zero(n);
        for i in 0..n {
            m.data[i * n + i] = c.clone();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Self {
        let n = rows.len();
        assert!(rows.iter().all(|r| r.len() == n), "matrix must be square");
        RepMatrix {
            n,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, row: usize, col: usize) -> &Rational {
        &self.data[row * self.n + col]
    }

    fn entry_mut(&mut self, row: usize, col: usize) -> &mut Rational {
        &mut self.data[row * self.n + col]
    }

    pub fn rows(&self) -> Vec<Vec<Rational>> {
        self.data.chunks(self.n.max(1)).map(|r| r.to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn scale(&self, c: &Rational) -> RepMatrix {
        RepMatrix {
            n: self.n,
            data: self.data.iter().map(|x| x * c).collect(),
        }
    }

    pub fn rank(&self) -> usize {
        if self.n == 0 {
            return 0;
        }
        linalg::rank(&self.rows())
    }

    pub fn nullity(&self) -> usize {
        self.n - self.rank()
    }

    pub fn kernel(&self) -> Vec<Vec<Rational>> {
        linalg::kernel_basis(&self.rows(), self.n)
    }

    /// Entries as a sparse vector indexed by `row * n + col`.
    pub fn to_sparse(&self) -> SparseVec {
        self.data
            .iter()
            .enumerate()
            .filter(|(_, x)| !x.is_zero())
            .map(|(i, x)| (i, x.clone()))
            .collect()
    }

    pub fn all_integral(&self) -> bool {
        self.data.iter().all(|x| x.is_integer())
    }
}

impl Mul for &RepMatrix {
    type Output = RepMatrix;

    fn mul(self, rhs: &RepMatrix) -> RepMatrix {
        assert_eq!(self.n, rhs.n, "size mismatch");
        let n = self.n;
        let mut out = RepMatrix::zero(n);
        for i in 0..n {
            for l in 0..n {
                let a = &self.data[i * n + l];
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = &rhs.data[l * n + j];
                    if !b.is_zero() {
                        out.data[i * n + j] += a * b;
                    }
                }
            }
        }
        out
    }
}

impl Add for &RepMatrix {
    type Output = RepMatrix;

    fn add(self, rhs: &RepMatrix) -> RepMatrix {
        assert_eq!(self.n, rhs.n, "size mismatch");
        RepMatrix {
            n: self.n,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &RepMatrix {
    type Output = RepMatrix;

    fn sub(self, rhs: &RepMatrix) -> RepMatrix {
        assert_eq!(self.n, rhs.n, "size mismatch");
        RepMatrix {
            n: self.n,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl fmt::Display for RepMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in self.rows() {
            let cells: Vec<String> = row.iter().map(arith::fmt_rational_short).collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

/// `dim W_k = ∏ (k_i + 1)`.
pub fn dim_w(k: &[u32]) -> usize {
    k.iter().map(|&x| x as usize + 1).product()
}

/// Action of `e^a f^b h^c` on the basis vector `v_j` of `Sym^k`:
/// the target index and the scalar.
fn factor_monomial_image(k: u32, [a, b, c]: Triple, j: u32) -> Option<(u32, Rational)> {
    let (k, ji) = (k as i64, j as i64);
    let mut coef = Rational::from_integer((k - 2 * ji).into()).pow(c as i32);
    if c > 0 && coef.is_zero() {
        return None;
    }
    let m = ji + b as i64;
    if m > k {
        return None;
    }
    if (a as i64) > m {
        return None;
    }
    for t in 0..a as i64 {
        let idx = m - t;
        coef *= Rational::from_integer((idx * (k - idx + 1)).into());
    }
    if coef.is_zero() {
        return None;
    }
    Some(((m - a as i64) as u32, coef))
}

/// Column-by-column images of a PBW monomial: `col -> (row, scalar)`.
fn monomial_images(m: &PbwMonomial, k: &[u32]) -> Vec<Option<(usize, Rational)>> {
    let n = dim_w(k);
    let mut out = Vec::with_capacity(n);
    for col in 0..n {
        let mut rem = col;
        let mut digits = vec![0u32; k.len()];
        for i in (0..k.len()).rev() {
            let base = k[i] as usize + 1;
            digits[i] = (rem % base) as u32;
            rem /= base;
        }
        let mut row = 0usize;
        let mut coef = Rational::one();
        let mut alive = true;
        for (i, &ki) in k.iter().enumerate() {
            match factor_monomial_image(ki, m.factor(i), digits[i]) {
                Some((target, c)) => {
                    row = row * (ki as usize + 1) + target as usize;
                    coef *= c;
                }
                None => {
                    alive = false;
                    break;
                }
            }
        }
        out.push(alive.then_some((row, coef)));
    }
    out
}

fn check_rank(a: &Element, k: &[u32]) -> Result<()> {
    let used = a.terms().map(|(m, _)| m.len()).max().unwrap_or(0);
    if used > k.len() {
        return Err(Error::Incompatible(format!(
            "element uses {used} factors but k has {} entries",
            k.len()
        )));
    }
    Ok(())
}

/// Matrix of `a` on `W_k`.
pub fn act(a: &Element, k: &[u32]) -> Result<RepMatrix> {
    check_rank(a, k)?;
    let mut out = RepMatrix::zero(dim_w(k));
    for (m, c) in a.terms() {
        for (col, img) in monomial_images(m, k).into_iter().enumerate() {
            if let Some((row, x)) = img {
                *out.entry_mut(row, col) += c * x;
            }
        }
    }
    Ok(out)
}

/// Matrices of `e_i`, `f_i`, `h_i` on `W_k`, one triple per factor.
#[derive(Clone, Debug)]
pub struct RepMatrices {
    pub k: Vec<u32>,
    pub e: Vec<RepMatrix>,
    pub f: Vec<RepMatrix>,
    pub h: Vec<RepMatrix>,
}

pub fn rep_matrices(k: &[u32]) -> RepMatrices {
    let gen = |i: usize, l: Letter| {
        act(&Element::generator(k.len(), crate::pbw::Generator::new(i, l)).unwrap(), k).unwrap()
    };
    RepMatrices {
        k: k.to_vec(),
        e: (0..k.len()).map(|i| gen(i, Letter::E)).collect(),
        f: (0..k.len()).map(|i| gen(i, Letter::F)).collect(),
        h: (0..k.len()).map(|i| gen(i, Letter::H)).collect(),
    }
}

/// `½ k_i (k_i + 2)`, the scalar by which `Δ_i` acts on `W_k`.
pub fn casimir_scalar(k: &[u32], i: usize) -> Rational {
    weight_value(k[i])
}

/// Dimension of the image of `F_d U_k` in `End(W_k)`.
pub fn filtered_image_dim(k: &[u32], d: &MultiDegree) -> Result<usize> {
    if d.rank() != k.len() {
        return Err(Error::Incompatible("d and k have different lengths".into()));
    }
    let n = dim_w(k);
    let vectors: Vec<SparseVec> = reduced_monomials(d)
        .iter()
        .map(|m| {
            monomial_images(m, k)
                .into_iter()
                .enumerate()
                .filter_map(|(col, img)| img.map(|(row, c)| (row * n + col, c)))
                .collect()
        })
        .collect();
    Ok(linalg::span_rank(&vectors))
}

/// Multiplicity of `W_k` in the cyclic module `U(g) / U(g)δ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Multiplicity {
    pub value: usize,
    /// Set when `δ = 0`, i.e. the module is free of rank one.
    pub free: bool,
}

/// `dim ker act(δ)`: a map out of `U/Uδ` is fixed by the image `w` of the
/// generator, subject only to `δ w = 0`.
pub fn multiplicity(delta: &Element, k: &[u32]) -> Result<Multiplicity> {
    check_rank(delta, k)?;
    if delta.is_zero() {
        return Ok(Multiplicity {
            value: dim_w(k),
            free: true,
        });
    }
    Ok(Multiplicity {
        value: act(delta, k)?.nullity(),
        free: false,
    })
}

/// `(dim End(W_k) − dim End(W_k)·act(δ)) / dim W_k`, the rank being that of
/// the right-multiplication operator `X ↦ X·act(δ)`.
pub fn multiplicity_via_quotient(delta: &Element, k: &[u32]) -> Result<usize> {
    let a = act(delta, k)?;
    let n = a.size();
    // E_{il} · A has row i equal to row l of A.
    let images: Vec<SparseVec> = (0..n)
        .flat_map(|i| (0..n).map(move |l| (i, l)))
        .map(|(i, l)| {
            (0..n)
                .filter(|&j| !a.get(l, j).is_zero())
                .map(|j| (i * n + j, a.get(l, j).clone()))
                .collect()
        })
        .collect();
    let image_dim = linalg::span_rank(&images);
    let quotient_dim = n * n - image_dim;
    if n == 0 || !quotient_dim.is_multiple_of(n) {
        return Err(Error::Consistency(format!(
            "quotient dimension {quotient_dim} is not a multiple of dim W = {n}"
        )));
    }
    Ok(quotient_dim / n)
}

/// Both routes, failing if they disagree.
pub fn checked_multiplicity(delta: &Element, k: &[u32]) -> Result<Multiplicity> {
    let direct = multiplicity(delta, k)?;
    let via = multiplicity_via_quotient(delta, k)?;
    if direct.value != via {
        return Err(Error::Consistency(format!(
            "kernel dimension {} differs from quotient route {via} for k = {k:?}",
            direct.value
        )));
    }
    Ok(direct)
}

/// `(∏(k_i+1)² − ∏(k_i−α_i+1)²) / ∏(k_i+1)` when `k ≥ α`, else `∏(k_i+1)`.
pub fn bound_value(alpha: &MultiDegree, k: &[u32]) -> Rational {
    let dim = dim_w(k) as i64;
    if !alpha.le(&MultiDegree(k.to_vec())) {
        return arith::rat(dim);
    }
    let shifted: i64 = k
        .iter()
        .enumerate()
        .map(|(i, &ki)| (ki as i64 - alpha.get(i) as i64 + 1).pow(2))
        .product();
    arith::ratio(dim * dim - shifted, dim)
}

/// The multiplicity bound attached to a generator of filtration degree `α`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundPolynomial {
    pub alpha: MultiDegree,
}

impl BoundPolynomial {
    pub fn new(alpha: MultiDegree) -> Self {
        BoundPolynomial { alpha }
    }

    pub fn eval(&self, k: &[u32]) -> Rational {
        bound_value(&self.alpha, k)
    }

    /// Growth degree along parallel weights: at most `r − 1`.
    pub fn degree_bound(&self) -> usize {
        self.alpha.rank().saturating_sub(1)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundRow {
    pub k: Vec<u32>,
    pub multiplicity: usize,
    pub bound: Rational,
    /// `multiplicity ≤ bound`, compared exactly.
    pub ok: bool,
}

/// Multiplicity against the bound for every `k` in `ks`.
pub fn bound_table(delta: &Element, ks: &[Vec<u32>], alpha: &MultiDegree) -> Result<Vec<BoundRow>> {
    if !delta.is_zero() && !delta.multidegree()?.le(alpha) {
        return Err(Error::InvalidInput(format!(
            "α = {alpha} is below the multidegree of δ"
        )));
    }
    ks.iter()
        .map(|k| {
            let m = checked_multiplicity(delta, k)?.value;
            let bound = bound_value(alpha, k);
            Ok(BoundRow {
                k: k.clone(),
                multiplicity: m,
                ok: arith::rat(m as i64) <= bound,
                bound,
            })
        })
        .collect()
}

/// Multiplicity of `W_k` in the free module of rank one: `dim W_k`.
pub fn peter_weyl_multiplicity(k: &[u32]) -> usize {
    dim_w(k)
}
