use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::{IntMatrix, LinalgError};

/// Row-style Hermite normal form.
///
/// Returns `(h, u)` with `u` unimodular and `u · a = h`. `h` is in row
/// echelon form, every pivot is positive, and the entries above a pivot lie
/// in `[0, pivot)`.
pub fn hnf(a: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let mut h = a.clone();
    let mut u = IntMatrix::identity(a.row_count());
    let (rows, cols) = (a.row_count(), a.col_count());

    let mut pivot_row = 0;
    for col in 0..cols {
        if pivot_row == rows {
            break;
        }
        for r in pivot_row + 1..rows {
            if h[(r, col)].is_zero() {
                continue;
            }
            if h[(pivot_row, col)].is_zero() {
                h.swap_rows(pivot_row, r);
                u.swap_rows(pivot_row, r);
                continue;
            }
            let (x, y, p, q) = bezout_step(&h[(pivot_row, col)], &h[(r, col)]);
            h.combine_rows(pivot_row, r, [&x, &y, &p, &q]);
            u.combine_rows(pivot_row, r, [&x, &y, &p, &q]);
        }
        if h[(pivot_row, col)].is_zero() {
            continue;
        }
        if h[(pivot_row, col)].is_negative() {
            h.negate_row(pivot_row);
            u.negate_row(pivot_row);
        }
        let pivot = h[(pivot_row, col)].clone();
        for r in 0..pivot_row {
            let q = h[(r, col)].div_floor(&pivot);
            if !q.is_zero() {
                h.add_row_multiple(r, pivot_row, &-&q);
                u.add_row_multiple(r, pivot_row, &-&q);
            }
        }
        pivot_row += 1;
    }
    (h, u)
}

/// For nonzero `a`, `b` returns `(x, y, p, q)` such that the row operation
/// `(a, b) ↦ (x·a + y·b, p·a + q·b)` sends `(a, b)` to `(g, 0)` with
/// `g = gcd(a, b) > 0` and determinant `x·q − y·p = 1`.
pub(crate) fn bezout_step(a: &BigInt, b: &BigInt) -> (BigInt, BigInt, BigInt, BigInt) {
    let e = a.extended_gcd(b);
    let (mut g, mut x, mut y) = (e.gcd, e.x, e.y);
    if g.is_negative() {
        g = -g;
        x = -x;
        y = -y;
    }
    let p = -(b / &g);
    let q = a / &g;
    (x, y, p, q)
}

/// Checks the normalization produced by [`hnf`].
pub fn is_hermite_normal_form(h: &IntMatrix) -> bool {
    let mut last_pivot_col: Option<usize> = None;
    let mut seen_zero_row = false;
    for i in 0..h.row_count() {
        let lead = (0..h.col_count()).find(|&j| !h[(i, j)].is_zero());
        match lead {
            None => seen_zero_row = true,
            Some(j) => {
                if seen_zero_row || last_pivot_col.is_some_and(|c| j <= c) {
                    return false;
                }
                let pivot = &h[(i, j)];
                if !pivot.is_positive() {
                    return false;
                }
                for r in 0..i {
                    let above = &h[(r, j)];
                    if above.is_negative() || above >= pivot {
                        return false;
                    }
                }
                last_pivot_col = Some(j);
            }
        }
    }
    true
}

/// Inverse of a unimodular matrix, computed as the transform that brings it
/// to its Hermite form (which is the identity exactly when it is unimodular).
pub fn inverse_unimodular(m: &IntMatrix) -> Result<IntMatrix, LinalgError> {
    if !m.is_square() {
        return Err(LinalgError::NotSquare {
            rows: m.row_count(),
            cols: m.col_count(),
        });
    }
    let (h, u) = hnf(m);
    if h != IntMatrix::identity(m.row_count()) {
        return Err(LinalgError::NotUnimodular);
    }
    debug_assert!((&u * m) == IntMatrix::identity(m.row_count()));
    Ok(u)
}
