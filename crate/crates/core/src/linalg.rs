//! Exact rank and kernel computations over the rationals.
//!
//! Ranks use fraction-free (Bareiss) elimination on integer rows, so
//! intermediate entries stay bounded by minors of the input. Spans of sparse
//! vectors are first split into blocks that share no coordinates; the rank of
//! the span is the sum of the block ranks.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::arith::Rational;

/// Clears denominators row by row; the rank is unchanged.
fn integer_rows(rows: &[Vec<Rational>]) -> Vec<Vec<BigInt>> {
    rows.iter()
        .map(|row| {
            let l = row
                .iter()
                .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            row.iter().map(|x| (x * Rational::from_integer(l.clone())).to_integer()).collect()
        })
        .collect()
}

/// Rank of an integer matrix by fraction-free elimination.
pub fn rank_integer(mut m: Vec<Vec<BigInt>>) -> usize {
    let nrows = m.len();
    if nrows == 0 {
        return 0;
    }
    let ncols = m[0].len();
    let mut prev = BigInt::one();
    let mut rank = 0;
    for col in 0..ncols {
        if rank == nrows {
            break;
        }
        let Some(pivot) = (rank..nrows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, pivot);
        let (top, rest) = m.split_at_mut(rank + 1);
        let prow = &top[rank];
        for row in rest.iter_mut() {
            let factor = row[col].clone();
            for j in col + 1..ncols {
                let num = &row[j] * &prow[col] - &factor * &prow[j];
                let (q, r) = num.div_rem(&prev);
                debug_assert!(r.is_zero(), "Bareiss division must be exact");
                row[j] = q;
            }
            row[col] = BigInt::zero();
        }
        prev = m[rank][col].clone();
        rank += 1;
    }
    rank
}

/// Rank over `Q` of a dense matrix given by rows.
pub fn rank(rows: &[Vec<Rational>]) -> usize {
    rank_integer(integer_rows(rows))
}

/// A sparse vector: coordinate index to nonzero value.
pub type SparseVec = BTreeMap<usize, Rational>;

fn find(parent: &mut HashMap<usize, usize>, x: usize) -> usize {
    let p = *parent.entry(x).or_insert(x);
    if p == x {
        return x;
    }
    let root = find(parent, p);
    parent.insert(x, root);
    root
}

/// Dimension of the span of sparse vectors.
pub fn span_rank(vectors: &[SparseVec]) -> usize {
    let mut parent: HashMap<usize, usize> = HashMap::new();
    for v in vectors {
        let mut keys = v.keys();
        if let Some(&first) = keys.next() {
            let root = find(&mut parent, first);
            for &k in keys {
                let other = find(&mut parent, k);
                if other != root {
                    parent.insert(other, root);
                }
            }
        }
    }
    let mut blocks: BTreeMap<usize, Vec<&SparseVec>> = BTreeMap::new();
    for v in vectors {
        if let Some(&first) = v.keys().next() {
            let root = find(&mut parent, first);
            blocks.entry(root).or_default().push(v);
        }
    }
    blocks
        .values()
        .map(|block| {
            let coords: Vec<usize> = {
                let mut c: Vec<usize> = block.iter().flat_map(|v| v.keys().copied()).collect();
                c.sort_unstable();
                c.dedup();
                c
            };
            let index: HashMap<usize, usize> =
                coords.iter().enumerate().map(|(i, &c)| (c, i)).collect();
            let rows: Vec<Vec<Rational>> = block
                .iter()
                .map(|v| {
                    let mut row = vec![Rational::zero(); coords.len()];
                    for (k, x) in v.iter() {
                        row[index[k]] = x.clone();
                    }
                    row
                })
                .collect();
            rank(&rows)
        })
        .sum()
}

/// Basis of `{x : A x = 0}` for a dense matrix `A` given by rows.
pub fn kernel_basis(rows: &[Vec<Rational>], ncols: usize) -> Vec<Vec<Rational>> {
    let mut m: Vec<Vec<Rational>> = rows.to_vec();
    let mut pivots: Vec<usize> = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = Rational::one() / &m[r][col];
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..m.len() {
            if i != r && !m[i][col].is_zero() {
                let factor = m[i][col].clone();
                for j in 0..ncols {
                    let delta = &factor * &m[r][j];
                    m[i][j] -= delta;
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    (0..ncols)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![Rational::zero(); ncols];
            v[free] = Rational::one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -m[row][free].clone();
            }
            v
        })
        .collect()
}
