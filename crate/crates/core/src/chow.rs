//! From a fiber model to `B(X)`, the degree character `ξ̄` on it, and
//! `B(X)₀ = ker ξ̄`.
//!
//! `B(X)` is the cokernel of the specialization matrix. Under the model's
//! hypotheses it is isomorphic to `A₀(X_K)`, and `B(X)₀` to `A₀(X_K)₀`; the
//! report labels these identifications as conditional on the hypotheses.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::galois::{hom_t_basis, xi_weights};
use crate::linalg::{
    cokernel, integer_kernel, inverse_unimodular, solve_in_lattice, CokernelPresentation,
    FGAbelianGroup, IntMatrix, LinalgError,
};
use crate::model::{
    build_specialization_matrix, column_weighted_sums, has_errors, validate, Diagnostic,
    ExpectedResult, FiberModel, Hypotheses,
};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Mode {
    /// Refuse models with validation errors.
    #[default]
    Strict,
    /// Report the formal cokernel of inconsistent models.
    Permissive,
}

/// A generator column whose weighted degree sum is nonzero.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OffendingColumn {
    /// 1-based column number.
    pub column: usize,
    pub generator: String,
    #[serde(with = "crate::serde_int")]
    pub weighted_sum: BigInt,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ChowError {
    #[error("model fails validation with {} error(s)", .diagnostics.iter().filter(|d| d.severity == crate::model::Severity::Error).count())]
    InvalidModel { diagnostics: Vec<Diagnostic> },
    #[error("the degree character does not descend: {} column(s) have nonzero weighted sum", .columns.len())]
    XiNotDescending { columns: Vec<OffendingColumn> },
    #[error("B(X)_0 routes disagree: quotient route gives {quotient}, kernel route gives {kernel}")]
    RouteDisagreement {
        quotient: FGAbelianGroup,
        kernel: FGAbelianGroup,
    },
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl From<LinalgError> for ChowError {
    fn from(e: LinalgError) -> Self {
        ChowError::Internal(e.to_string())
    }
}

fn offending_columns(m: &FiberModel) -> Vec<OffendingColumn> {
    column_weighted_sums(m)
        .into_iter()
        .enumerate()
        .filter(|(_, s)| !s.is_zero())
        .map(|(j, s)| OffendingColumn {
            column: j + 1,
            generator: m.generators[j].name.clone(),
            weighted_sum: s,
        })
        .collect()
}

/// Cokernel presentation of the specialization matrix.
pub fn compute_b(m: &FiberModel, mode: Mode) -> Result<CokernelPresentation, ChowError> {
    if mode == Mode::Strict {
        let diagnostics = validate(m);
        if has_errors(&diagnostics) {
            return Err(ChowError::InvalidModel { diagnostics });
        }
    }
    Ok(cokernel(&build_specialization_matrix(m)))
}

/// `ξ̄` on the canonical generators of `B(X)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct XiBar {
    /// One value per generator of the presentation's group, torsion
    /// generators first (always 0), then free ones.
    pub values: Vec<BigInt>,
    /// Positive generator of the image of `ξ̄` in `Z`.
    pub index: BigInt,
}

impl XiBar {
    /// `ξ̄` of a class given in canonical coordinates.
    pub fn evaluate(&self, coords: &[BigInt]) -> BigInt {
        self.values.iter().zip(coords).map(|(a, b)| a * b).sum()
    }
}

pub fn compute_xi_bar(m: &FiberModel, p: &CokernelPresentation) -> Result<XiBar, ChowError> {
    let columns = offending_columns(m);
    if !columns.is_empty() {
        return Err(ChowError::XiNotDescending { columns });
    }
    let w = xi_weights(&m.orbits);
    // ξ(x) = w·x = (w·u⁻¹)·(u·x): the row w·u⁻¹ is ξ in Smith coordinates.
    let u_inv = inverse_unimodular(&p.change_of_basis)?;
    let in_smith = w.as_row().checked_mul(&u_inv)?;
    let values: Vec<BigInt> = p
        .generator_coordinates()
        .into_iter()
        .map(|i| in_smith[(0, i)].clone())
        .collect();
    let torsion = p.group.invariant_factors.len();
    if values[..torsion].iter().any(|v| !v.is_zero()) {
        return Err(ChowError::Internal(
            "degree character is nonzero on a torsion generator".into(),
        ));
    }
    Ok(XiBar {
        values,
        index: w.index(),
    })
}

/// `B(X)₀` computed two independent ways.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct B0Computation {
    /// `ker ξ / image`, with the image rewritten in a basis of `ker ξ`.
    pub route_quotient: FGAbelianGroup,
    /// `ker(ξ̄ : B(X) → Z)` read off the Smith presentation of `B(X)`.
    pub route_kernel: FGAbelianGroup,
}

impl B0Computation {
    pub fn agree(&self) -> bool {
        self.route_quotient == self.route_kernel
    }
}

pub fn compute_b0(m: &FiberModel) -> Result<B0Computation, ChowError> {
    let diagnostics = validate(m);
    if has_errors(&diagnostics) {
        return Err(ChowError::InvalidModel { diagnostics });
    }
    let a = build_specialization_matrix(m);
    let w = xi_weights(&m.orbits);

    let basis = hom_t_basis(&w);
    let mut coords = Vec::with_capacity(a.col_count());
    for col in a.columns() {
        match solve_in_lattice(&basis, &col) {
            Ok(c) => coords.push(c),
            Err(LinalgError::NotInLattice) => {
                return Err(ChowError::XiNotDescending {
                    columns: offending_columns(m),
                })
            }
            Err(e) => return Err(e.into()),
        }
    }
    let in_ker_basis = IntMatrix::from_columns(basis.col_count(), &coords)?;
    let route_quotient = cokernel(&in_ker_basis).group;

    let p = cokernel(&a);
    let xi = compute_xi_bar(m, &p)?;
    let torsion = p.group.invariant_factors.len();
    let on_free = IntMatrix::from_rows([xi.values[torsion..].to_vec()]);
    let route_kernel = FGAbelianGroup {
        rank: integer_kernel(&on_free).col_count(),
        invariant_factors: p.group.invariant_factors.clone(),
    };

    Ok(B0Computation {
        route_quotient,
        route_kernel,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SpecialCase {
    /// The geometric special fiber is irreducible and reduced: degree is an
    /// isomorphism `A₀(X_K) → Z`.
    #[serde(rename = "irreducible-fiber")]
    IrreducibleFiber,
}

impl SpecialCase {
    pub fn as_str(self) -> &'static str {
        match self {
            SpecialCase::IrreducibleFiber => "irreducible-fiber",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChowReport {
    pub name: String,
    /// `B(X)`, the cokernel of the specialization matrix.
    pub b: FGAbelianGroup,
    /// `B(X)₀`; absent when the degree character does not descend.
    pub b0: Option<FGAbelianGroup>,
    #[serde(with = "crate::serde_int::vec")]
    pub xi_on_generators: Vec<BigInt>,
    /// Absent when the input is invalid.
    #[serde(with = "crate::serde_int::option")]
    pub index: Option<BigInt>,
    pub diagnostics: Vec<Diagnostic>,
    pub special_case: Option<SpecialCase>,
    /// True when validation failed and only the formal cokernel is reported.
    pub formal_only: bool,
    pub hypotheses: Hypotheses,
    pub expected: Option<ExpectedResult>,
}

impl ChowReport {
    /// Whether the fixture's expected `B(X)₀` matches the computed one;
    /// `None` when either side is missing.
    pub fn matches_expected(&self) -> Option<bool> {
        let (b0, e) = (self.b0.as_ref()?, self.expected.as_ref()?);
        Some(b0.rank == e.b0_rank && b0.invariant_factors == e.b0_torsion)
    }
}

fn is_irreducible_fiber(m: &FiberModel) -> bool {
    matches!(m.orbits.as_slice(), [o] if o.size() == 1 && o.multiplicity == 1)
}

/// The full pipeline.
pub fn report(m: &FiberModel, mode: Mode) -> Result<ChowReport, ChowError> {
    let diagnostics = validate(m);
    let invalid = has_errors(&diagnostics);
    if invalid && mode == Mode::Strict {
        return Err(ChowError::InvalidModel { diagnostics });
    }
    let p = cokernel(&build_specialization_matrix(m));

    let mut out = ChowReport {
        name: m.name.clone(),
        b: p.group.clone(),
        b0: None,
        xi_on_generators: Vec::new(),
        index: None,
        diagnostics,
        special_case: None,
        formal_only: invalid,
        hypotheses: m.hypotheses,
        expected: m.expected.clone(),
    };
    if invalid {
        return Ok(out);
    }

    let xi = compute_xi_bar(m, &p)?;
    let b0 = compute_b0(m)?;
    if !b0.agree() {
        return Err(ChowError::RouteDisagreement {
            quotient: b0.route_quotient,
            kernel: b0.route_kernel,
        });
    }
    let b0 = b0.route_quotient;
    if out.b.rank == 0 || b0.rank + 1 != out.b.rank {
        return Err(ChowError::Internal(format!(
            "rank bookkeeping fails: B(X) = {}, B(X)_0 = {b0}",
            out.b
        )));
    }

    if is_irreducible_fiber(m) {
        if out.b != FGAbelianGroup::free(1) || !b0.is_trivial() || !xi.index.is_one() {
            return Err(ChowError::Internal(format!(
                "irreducible fiber must give B(X) = Z, B(X)_0 = 0; got {} and {b0}",
                out.b
            )));
        }
        out.special_case = Some(SpecialCase::IrreducibleFiber);
    }

    out.xi_on_generators = xi.values;
    out.index = Some(xi.index);
    out.b0 = Some(b0);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::galois::ComponentOrbit;
    use crate::model::PicGenerator;

    fn model(orbits: &[(usize, u64)], columns: &[&[i64]]) -> FiberModel {
        let orbits: Vec<ComponentOrbit> = orbits
            .iter()
            .enumerate()
            .map(|(i, &(size, mult))| ComponentOrbit::with_size(format!("Y{i}"), size, mult))
            .collect();
        let generators = columns
            .iter()
            .enumerate()
            .map(|(j, col)| PicGenerator {
                name: format!("g{j}"),
                host: orbits[0].name.clone(),
                degrees: col.iter().map(|&d| BigInt::from(d)).collect(),
            })
            .collect();
        FiberModel::new("t", orbits, generators).unwrap()
    }

    fn z_mod(n: i64) -> FGAbelianGroup {
        FGAbelianGroup::new(0, vec![BigInt::from(n)]).unwrap()
    }

    #[test]
    fn single_orbit_no_generators() {
        let m = model(&[(1, 1)], &[]);
        let p = compute_b(&m, Mode::Strict).unwrap();
        assert_eq!(p.group, FGAbelianGroup::free(1));
        let xi = compute_xi_bar(&m, &p).unwrap();
        assert_eq!(xi.values, vec![BigInt::one()]);
        assert_eq!(xi.index, BigInt::one());
        let b0 = compute_b0(&m).unwrap();
        assert!(b0.route_quotient.is_trivial());
        assert!(b0.route_kernel.is_trivial());
    }

    #[test]
    fn two_orbits_unit_relation() {
        let m = model(&[(1, 1), (1, 1)], &[&[1, -1]]);
        assert_eq!(compute_b(&m, Mode::Strict).unwrap().group, FGAbelianGroup::free(1));
        let b0 = compute_b0(&m).unwrap();
        assert!(b0.agree() && b0.route_quotient.is_trivial());
    }

    #[test]
    fn two_orbits_torsion() {
        let m = model(&[(1, 1), (1, 1)], &[&[2, -2]]);
        let b = compute_b(&m, Mode::Strict).unwrap().group;
        assert_eq!(b, FGAbelianGroup::new(1, vec![BigInt::from(2)]).unwrap());
        let b0 = compute_b0(&m).unwrap();
        assert_eq!(b0.route_quotient, z_mod(2));
        assert_eq!(b0.route_kernel, z_mod(2));
    }

    #[test]
    fn two_orbits_no_generators() {
        let m = model(&[(1, 1), (1, 1)], &[]);
        let b0 = compute_b0(&m).unwrap();
        assert_eq!(b0.route_quotient, FGAbelianGroup::free(1));
        assert_eq!(b0.route_kernel, FGAbelianGroup::free(1));
    }

    #[test]
    fn index_is_gcd_of_weights() {
        let m = model(&[(1, 2), (2, 2)], &[]);
        let p = compute_b(&m, Mode::Strict).unwrap();
        assert_eq!(compute_xi_bar(&m, &p).unwrap().index, BigInt::from(2));
    }

    #[test]
    fn xi_not_descending() {
        let m = model(&[(1, 1), (1, 1)], &[&[1, 0], &[1, -1], &[0, 3]]);
        let p = compute_b(&m, Mode::Permissive).unwrap();
        match compute_xi_bar(&m, &p) {
            Err(ChowError::XiNotDescending { columns }) => {
                let idx: Vec<usize> = columns.iter().map(|c| c.column).collect();
                assert_eq!(idx, vec![1, 3]);
                assert_eq!(columns[1].weighted_sum, BigInt::from(3));
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(compute_b(&m, Mode::Strict), Err(ChowError::InvalidModel { .. })));
        assert!(matches!(compute_b0(&m), Err(ChowError::InvalidModel { .. })));
    }

    #[test]
    fn degree_compatibility_on_basis_vectors() {
        let m = model(&[(2, 1), (1, 3), (1, 1)], &[&[1, 0, -2], &[3, -2, 0]]);
        let p = compute_b(&m, Mode::Strict).unwrap();
        let xi = compute_xi_bar(&m, &p).unwrap();
        let w = xi_weights(&m.orbits);
        for (y, wy) in w.weights.iter().enumerate() {
            let mut e = vec![BigInt::zero(); w.len()];
            e[y] = BigInt::one();
            assert_eq!(&xi.evaluate(&p.class_of(&e).unwrap()), wy);
        }
    }

    #[test]
    fn report_split_orbit_is_not_special() {
        let m = model(&[(2, 1)], &[&[0]]);
        let r = report(&m, Mode::Strict).unwrap();
        assert_eq!(r.b, FGAbelianGroup::free(1));
        assert_eq!(r.b0, Some(FGAbelianGroup::trivial()));
        assert_eq!(r.index, Some(BigInt::from(2)));
        assert_eq!(r.special_case, None);
    }

    #[test]
    fn report_irreducible() {
        let r = report(&model(&[(1, 1)], &[]), Mode::Strict).unwrap();
        assert_eq!(r.special_case, Some(SpecialCase::IrreducibleFiber));
        assert_eq!(r.index, Some(BigInt::one()));
        assert!(!r.formal_only);
        // Multiplicity 2 on a single geometric component is not the special case.
        let r = report(&model(&[(1, 2)], &[]), Mode::Strict).unwrap();
        assert_eq!(r.special_case, None);
        assert_eq!(r.index, Some(BigInt::from(2)));
    }

    #[test]
    fn report_permissive_formal() {
        let m = model(&[(1, 1), (1, 1)], &[&[2, 0]]);
        assert!(report(&m, Mode::Strict).is_err());
        let r = report(&m, Mode::Permissive).unwrap();
        assert!(r.formal_only);
        assert_eq!(r.b, FGAbelianGroup::new(1, vec![BigInt::from(2)]).unwrap());
        assert_eq!(r.b0, None);
        assert_eq!(r.index, None);
        assert!(has_errors(&r.diagnostics));
    }
}
