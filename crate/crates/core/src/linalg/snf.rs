use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::IntMatrix;

/// Smith normal form `u · a · v = s` with unimodular `u`, `v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithDecomposition {
    pub s: IntMatrix,
    pub u: IntMatrix,
    pub v: IntMatrix,
}

impl SmithDecomposition {
    /// Diagonal of `s`, unit and zero entries included.
    pub fn diagonal(&self) -> Vec<BigInt> {
        self.s.diagonal()
    }

    /// Number of nonzero diagonal entries.
    pub fn rank(&self) -> usize {
        self.s.diagonal().iter().filter(|d| !d.is_zero()).count()
    }

    /// Nonzero diagonal entries different from 1.
    pub fn nonunit_factors(&self) -> Vec<BigInt> {
        self.s
            .diagonal()
            .into_iter()
            .filter(|d| !d.is_zero() && !d.is_one())
            .collect()
    }

    /// Checks every structural invariant against the input matrix.
    pub fn verify(&self, a: &IntMatrix) -> bool {
        let shape_ok = self.s.row_count() == a.row_count()
            && self.s.col_count() == a.col_count()
            && self.u.row_count() == a.row_count()
            && self.u.is_square()
            && self.v.row_count() == a.col_count()
            && self.v.is_square();
        if !shape_ok || !self.s.is_diagonal() {
            return false;
        }
        let unimodular = |m: &IntMatrix| m.determinant().map(|d| d.abs().is_one()).unwrap_or(false);
        if !unimodular(&self.u) || !unimodular(&self.v) {
            return false;
        }
        if &(&self.u * a) * &self.v != self.s {
            return false;
        }
        is_divisibility_chain(&self.s.diagonal())
    }
}

/// Nonnegative entries, each nonzero one dividing the next, zeros last.
pub(crate) fn is_divisibility_chain(diag: &[BigInt]) -> bool {
    if diag.iter().any(Signed::is_negative) {
        return false;
    }
    diag.windows(2).all(|w| {
        if w[0].is_zero() {
            w[1].is_zero()
        } else {
            w[1].is_multiple_of(&w[0])
        }
    })
}

/// Smith normal form by elementary operations, always pivoting on the entry of
/// least absolute value.
pub fn snf(a: &IntMatrix) -> SmithDecomposition {
    let (rows, cols) = (a.row_count(), a.col_count());
    let mut s = a.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);

    for t in 0..rows.min(cols) {
        let Some((pi, pj)) = min_abs_entry(&s, t, rows, t, cols) else {
            break;
        };
        s.swap_rows(t, pi);
        u.swap_rows(t, pi);
        s.swap_cols(t, pj);
        v.swap_cols(t, pj);

        loop {
            let mut clean = true;
            for i in t + 1..rows {
                let q = s[(i, t)].div_floor(&s[(t, t)]);
                if !q.is_zero() {
                    s.add_row_multiple(i, t, &-&q);
                    u.add_row_multiple(i, t, &-&q);
                }
                clean &= s[(i, t)].is_zero();
            }
            for j in t + 1..cols {
                let q = s[(t, j)].div_floor(&s[(t, t)]);
                if !q.is_zero() {
                    s.add_col_multiple(j, t, &-&q);
                    v.add_col_multiple(j, t, &-&q);
                }
                clean &= s[(t, j)].is_zero();
            }

            if !clean {
                // A remainder smaller than the pivot survived; promote it.
                let (pi, pj) = min_abs_in_cross(&s, t, rows, cols);
                s.swap_rows(t, pi);
                u.swap_rows(t, pi);
                s.swap_cols(t, pj);
                v.swap_cols(t, pj);
                continue;
            }

            // Row and column are clear; the pivot must divide the rest.
            let pivot = s[(t, t)].clone();
            let offender = (t + 1..rows).find(|&i| {
                (t + 1..cols).any(|j| !s[(i, j)].is_multiple_of(&pivot))
            });
            match offender {
                Some(i) => {
                    s.add_row_multiple(t, i, &BigInt::one());
                    u.add_row_multiple(t, i, &BigInt::one());
                }
                None => break,
            }
        }

        if s[(t, t)].is_negative() {
            s.negate_row(t);
            u.negate_row(t);
        }
    }

    SmithDecomposition { s, u, v }
}

fn min_abs_entry(
    m: &IntMatrix,
    r0: usize,
    r1: usize,
    c0: usize,
    c1: usize,
) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in r0..r1 {
        for j in c0..c1 {
            let x = &m[(i, j)];
            if x.is_zero() {
                continue;
            }
            if best.is_none_or(|(bi, bj)| x.abs() < m[(bi, bj)].abs()) {
                best = Some((i, j));
            }
        }
    }
    best
}

/// Position of the least nonzero entry among row `t` and column `t` (from `t` on).
fn min_abs_in_cross(m: &IntMatrix, t: usize, rows: usize, cols: usize) -> (usize, usize) {
    let in_col = min_abs_entry(m, t, rows, t, t + 1);
    let in_row = min_abs_entry(m, t, t + 1, t, cols);
    match (in_col, in_row) {
        (Some(a), Some(b)) => {
            if m[a].abs() <= m[b].abs() {
                a
            } else {
                b
            }
        }
        (Some(a), None) | (None, Some(a)) => a,
        (None, None) => unreachable!("pivot position is nonzero"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diag_of(a: &IntMatrix) -> Vec<BigInt> {
        let d = snf(a);
        assert!(d.verify(a), "invariants fail for {a:?}: {d:?}");
        d.diagonal()
    }

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn one_by_one() {
        assert_eq!(diag_of(&IntMatrix::from_rows([[5]])), ints(&[5]));
        assert_eq!(diag_of(&IntMatrix::from_rows([[-5]])), ints(&[5]));
    }

    #[test]
    fn two_by_two_factors() {
        // d1 = gcd(2,4,6,8) = 2, d2 = |det| = 8, factors (2, 4).
        let d = snf(&IntMatrix::from_rows([[2, 4], [6, 8]]));
        assert_eq!(d.nonunit_factors(), ints(&[2, 4]));
        assert_eq!(d.rank(), 2);
    }

    #[test]
    fn zero_row_padding_keeps_diagonal() {
        let a = IntMatrix::from_rows([[2, 4], [6, 8]]);
        assert_eq!(diag_of(&a.pad_rows(1)), ints(&[2, 4]));
        assert_eq!(diag_of(&a.pad_columns(2)), ints(&[2, 4]));
    }

    #[test]
    fn divisibility_repair() {
        // diag(2, 3) is diagonal but not a chain: expect (1, 6).
        assert_eq!(diag_of(&IntMatrix::from_rows([[2, 0], [0, 3]])), ints(&[1, 6]));
        assert_eq!(
            diag_of(&IntMatrix::from_rows([[4, 0, 0], [0, 6, 0], [0, 0, 10]])),
            ints(&[2, 2, 60])
        );
    }

    #[test]
    fn zeros_come_last() {
        let a = IntMatrix::from_rows([[0, 0, 0], [0, 0, 3], [0, 0, 0]]);
        assert_eq!(diag_of(&a), ints(&[3, 0, 0]));
        assert_eq!(diag_of(&IntMatrix::zeros(2, 2)), ints(&[0, 0]));
    }

    #[test]
    fn empty_shapes() {
        for (r, c) in [(0, 0), (3, 0), (0, 2)] {
            let a = IntMatrix::zeros(r, c);
            let d = snf(&a);
            assert!(d.verify(&a));
            assert_eq!(d.u, IntMatrix::identity(r));
            assert_eq!(d.v, IntMatrix::identity(c));
        }
    }

    #[test]
    fn chain_predicate() {
        assert!(is_divisibility_chain(&ints(&[1, 2, 4, 0])));
        assert!(!is_divisibility_chain(&ints(&[2, 3])));
        assert!(!is_divisibility_chain(&ints(&[0, 1])));
        assert!(!is_divisibility_chain(&ints(&[-1, 2])));
    }
}
