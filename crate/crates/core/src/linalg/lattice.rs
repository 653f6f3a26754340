use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::{hnf, snf, FGAbelianGroup, IntMatrix, LinalgError};

/// `Z^ambient_rank / column-span(relations)` together with its isomorphism type.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CokernelPresentation {
    pub ambient_rank: usize,
    pub relations: IntMatrix,
    pub group: FGAbelianGroup,
    /// Unimodular `u` from `u · relations · v = s`; sends ambient coordinates
    /// to Smith coordinates.
    pub change_of_basis: IntMatrix,
    /// Diagonal of `s` padded with zeros to `ambient_rank`, so coordinate `i`
    /// of a Smith vector lives in `Z / diagonal[i]`.
    pub smith_diagonal: Vec<BigInt>,
}

impl CokernelPresentation {
    /// Indices of the Smith coordinates that carry a nontrivial summand, in
    /// the order the group lists them: torsion first, then free.
    pub fn generator_coordinates(&self) -> Vec<usize> {
        let torsion = self
            .smith_diagonal
            .iter()
            .enumerate()
            .filter(|(_, d)| !d.is_zero() && !d.is_one())
            .map(|(i, _)| i);
        let free = self
            .smith_diagonal
            .iter()
            .enumerate()
            .filter(|(_, d)| d.is_zero())
            .map(|(i, _)| i);
        torsion.chain(free).collect()
    }

    /// Canonical coordinates of an ambient vector's class: one entry per
    /// entry of [`generator_coordinates`](Self::generator_coordinates),
    /// torsion entries reduced into `[0, f)`.
    pub fn class_of(&self, ambient: &[BigInt]) -> Result<Vec<BigInt>, LinalgError> {
        let y = self.change_of_basis.mul_vec(ambient)?;
        Ok(self
            .generator_coordinates()
            .into_iter()
            .map(|i| {
                let d = &self.smith_diagonal[i];
                if d.is_zero() {
                    y[i].clone()
                } else {
                    y[i].mod_floor(d)
                }
            })
            .collect())
    }
}

/// Cokernel `Z^rows / column-span(a)`.
pub fn cokernel(a: &IntMatrix) -> CokernelPresentation {
    let d = snf(a);
    let rows = a.row_count();
    let mut diagonal = d.diagonal();
    diagonal.resize(rows, BigInt::zero());
    let rank = diagonal.iter().filter(|x| !x.is_zero()).count();
    let factors = d.nonunit_factors();
    CokernelPresentation {
        ambient_rank: rows,
        relations: a.clone(),
        group: FGAbelianGroup {
            rank: rows - rank,
            invariant_factors: factors,
        },
        change_of_basis: d.u,
        smith_diagonal: diagonal,
    }
}

/// Saturated basis (as columns) of `{x ∈ Z^cols : a·x = 0}`.
///
/// From the Hermite form `u · aᵀ = h`: the rows of `u` facing zero rows of
/// `h` span the left kernel of `aᵀ`, and a unimodular `u` makes the span
/// saturated.
pub fn integer_kernel(a: &IntMatrix) -> IntMatrix {
    let at = a.transpose();
    let (h, u) = hnf(&at);
    let n = a.col_count();
    let nonzero = (0..h.row_count())
        .filter(|&i| h.row(i).iter().any(|x| !x.is_zero()))
        .count();
    let mut k = IntMatrix::zeros(n, n - nonzero);
    for (c, r) in (nonzero..n).enumerate() {
        for j in 0..n {
            k[(j, c)] = u[(r, j)].clone();
        }
    }
    k
}

/// Integer coordinates `c` with `basis · c = target`.
pub fn solve_in_lattice(basis: &IntMatrix, target: &[BigInt]) -> Result<Vec<BigInt>, LinalgError> {
    if target.len() != basis.row_count() {
        return Err(LinalgError::ShapeMismatch {
            expected: basis.row_count(),
            found: target.len(),
        });
    }
    // u·B·v = s, so B·c = t becomes s·z = u·t with c = v·z.
    let d = snf(basis);
    let y = d.u.mul_vec(target)?;
    let diag = d.diagonal();
    let mut z = vec![BigInt::zero(); basis.col_count()];
    for (i, yi) in y.iter().enumerate() {
        match diag.get(i) {
            Some(s) if !s.is_zero() => {
                let (q, r) = yi.div_rem(s);
                if !r.is_zero() {
                    return Err(LinalgError::NotInLattice);
                }
                z[i] = q;
            }
            _ => {
                if !yi.is_zero() {
                    return Err(LinalgError::NotInLattice);
                }
            }
        }
    }
    d.v.mul_vec(&z)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn cokernel_single_relation() {
        let p = cokernel(&IntMatrix::from_rows([[2]]));
        assert_eq!(p.group, FGAbelianGroup::new(0, ints(&[2])).unwrap());
        assert_eq!(p.ambient_rank, 1);
    }

    #[test]
    fn cokernel_without_relations() {
        let p = cokernel(&IntMatrix::zeros(3, 0));
        assert_eq!(p.group, FGAbelianGroup::free(3));
        assert_eq!(p.change_of_basis, IntMatrix::identity(3));
        assert_eq!(p.generator_coordinates(), vec![0, 1, 2]);
    }

    #[test]
    fn class_coordinates() {
        // Z^2 / <(2, 0)> = Z/2 ⊕ Z
        let p = cokernel(&IntMatrix::from_rows([[2], [0]]));
        assert_eq!(p.group, FGAbelianGroup::new(1, ints(&[2])).unwrap());
        assert_eq!(p.class_of(&ints(&[2, 0])).unwrap(), ints(&[0, 0]));
        let c = p.class_of(&ints(&[3, 5])).unwrap();
        assert_eq!(c[0], BigInt::one());
        assert_eq!(c[1].magnitude(), BigInt::from(5).magnitude());
    }

    #[test]
    fn kernel_of_sum_row() {
        let k = integer_kernel(&IntMatrix::from_rows([[1, 1]]));
        assert_eq!(k.col_count(), 1);
        let col = k.column(0);
        assert_eq!(&col[0] + &col[1], BigInt::zero());
        assert!(!col[0].is_zero());
        assert!(col[0].magnitude().is_one());
    }

    #[test]
    fn kernel_of_identity_is_empty() {
        assert_eq!(integer_kernel(&IntMatrix::identity(3)).col_count(), 0);
        assert_eq!(integer_kernel(&IntMatrix::identity(3)).row_count(), 3);
    }

    #[test]
    fn kernel_of_weight_row() {
        let a = IntMatrix::from_rows([[2, 2, 1, 1, 2, 2, 4]]);
        let k = integer_kernel(&a);
        assert_eq!(k.col_count(), 6);
        assert!((&a * &k).is_zero());
        // Saturated: the kernel basis extends to a unimodular matrix, so its
        // 6x6 minors have gcd 1.
        let divs = super::super::determinantal_divisors(&k).unwrap();
        assert_eq!(divs.last().unwrap(), &BigInt::one());
    }

    #[test]
    fn kernel_of_empty_shapes() {
        assert_eq!(integer_kernel(&IntMatrix::zeros(0, 3)), IntMatrix::identity(3));
        assert_eq!(integer_kernel(&IntMatrix::zeros(2, 0)).col_count(), 0);
    }

    #[test]
    fn solve_examples() {
        let t = ints(&[5, -7, 11]);
        assert_eq!(solve_in_lattice(&IntMatrix::identity(3), &t).unwrap(), t);
        let b = IntMatrix::from_rows([[2], [0]]);
        assert_eq!(solve_in_lattice(&b, &ints(&[1, 0])), Err(LinalgError::NotInLattice));
        assert_eq!(solve_in_lattice(&b, &ints(&[4, 0])).unwrap(), ints(&[2]));
        assert_eq!(solve_in_lattice(&b, &ints(&[4, 1])), Err(LinalgError::NotInLattice));
    }

    #[test]
    fn solve_rejects_wrong_length() {
        assert!(matches!(
            solve_in_lattice(&IntMatrix::identity(2), &ints(&[1])),
            Err(LinalgError::ShapeMismatch { .. })
        ));
    }
}
