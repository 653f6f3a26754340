//! Determinantal divisors by brute-force minor enumeration.
//!
//! Shares nothing with the Smith form code beyond the matrix type: minors are
//! evaluated with Bareiss elimination and gcds are folded directly.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::bareiss_determinant;
use super::{IntMatrix, LinalgError};

/// Largest `min(rows, cols)` the oracle accepts.
pub const ORACLE_MAX_DIMENSION: usize = 8;

/// `d_k` = gcd of all k×k minors for k = 1..=min(rows, cols); 0 when all vanish.
pub fn determinantal_divisors(a: &IntMatrix) -> Result<Vec<BigInt>, LinalgError> {
    let n = a.row_count().min(a.col_count());
    if n > ORACLE_MAX_DIMENSION {
        return Err(LinalgError::OracleSizeLimit {
            found: n,
            limit: ORACLE_MAX_DIMENSION,
        });
    }
    let mut out = Vec::with_capacity(n);
    for k in 1..=n {
        let mut g = BigInt::zero();
        'outer: for rows in Combinations::new(a.row_count(), k) {
            for cols in Combinations::new(a.col_count(), k) {
                let minor = bareiss_determinant(submatrix(a, &rows, &cols));
                g = g.gcd(&minor);
                if g.is_one() {
                    break 'outer;
                }
            }
        }
        out.push(g.abs());
    }
    Ok(out)
}

/// Invariant factors `d_k / d_{k-1}` (with `d_0 = 1`); a zero divisor yields 0
/// and stays 0 thereafter.
pub fn invariant_factors_from_divisors(divisors: &[BigInt]) -> Vec<BigInt> {
    let mut prev = BigInt::one();
    divisors
        .iter()
        .map(|d| {
            if d.is_zero() || prev.is_zero() {
                prev = BigInt::zero();
                BigInt::zero()
            } else {
                let f = d / &prev;
                prev = d.clone();
                f
            }
        })
        .collect()
}

fn submatrix(a: &IntMatrix, rows: &[usize], cols: &[usize]) -> IntMatrix {
    let data = rows
        .iter()
        .flat_map(|&i| cols.iter().map(move |&j| a[(i, j)].clone()))
        .collect();
    IntMatrix::from_vec(rows.len(), cols.len(), data).expect("submatrix shape")
}

/// Lexicographic k-subsets of 0..n.
struct Combinations {
    n: usize,
    current: Option<Vec<usize>>,
}

impl Combinations {
    fn new(n: usize, k: usize) -> Self {
        Combinations {
            n,
            current: (k <= n).then(|| (0..k).collect()),
        }
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let cur = self.current.take()?;
        let k = cur.len();
        let mut next = cur.clone();
        let mut i = k;
        while i > 0 {
            i -= 1;
            if next[i] < self.n - k + i {
                next[i] += 1;
                for j in i + 1..k {
                    next[j] = next[j - 1] + 1;
                }
                self.current = Some(next);
                break;
            }
        }
        Some(cur)
    }
}
