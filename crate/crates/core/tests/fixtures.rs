use std::fs;
use std::path::PathBuf;

use chowfiber::chow::{compute_b0, report, ChowError, Mode, SpecialCase};
use chowfiber::galois::{invariant_hom_rank, xi_weights};
use chowfiber::linalg::{determinantal_divisors, invariant_factors_from_divisors, FGAbelianGroup, IntMatrix};
use chowfiber::model::{build_specialization_matrix, parse_model, validate, DiagnosticCode, FiberModel, Severity};
use num_bigint::BigInt;

fn fixture(name: &str) -> FiberModel {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name);
    parse_model(&fs::read_to_string(&path).unwrap()).unwrap()
}

fn ints(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

#[test]
fn example31_shape_and_weights() {
    let m = fixture("example31.json");
    assert_eq!(m.orbits.len(), 7);
    assert_eq!(m.generators.len(), 10);
    assert_eq!(invariant_hom_rank(&m.orbits), 7);
    let names: Vec<&str> = m.orbits.iter().map(|o| o.name.as_str()).collect();
    assert_eq!(names, ["A", "B", "C", "D", "R", "S", "M"]);
    assert_eq!(xi_weights(&m.orbits).weights, ints(&[2, 2, 1, 1, 2, 2, 4]));
}

#[test]
fn example31_matrix_is_the_transcription() {
    let a = build_specialization_matrix(&fixture("example31.json"));
    let expect = IntMatrix::from_rows([
        [-2, -1, -1, -2, 1, 1, 0, 0, 0, 0],
        [0, 1, 0, 0, 0, -2, -1, -1, -2, 1],
        [0, 0, 0, 0, 0, 2, 0, 0, 0, -2],
        [0, 2, 0, 0, -2, 0, 0, 0, 0, 0],
        [0, 0, 1, 0, 0, 0, 1, 0, 0, 0],
        [0, 0, 0, 1, 0, 0, 0, 1, 0, 0],
        [0, 0, 0, 0, 1, 0, 0, 0, 1, 0],
    ]);
    assert_eq!(a, expect);
    // Column 3: −1 at A, +1 at R.
    assert_eq!(a.column(2), ints(&[-1, 0, 0, 0, 1, 0, 0]));
    let text = fs::read_to_string(
        PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures/example31-matrix.txt"),
    )
    .unwrap();
    assert_eq!(IntMatrix::parse_text(&text).unwrap(), a);
}

#[test]
fn example31_orthogonality_failures() {
    let diags = validate(&fixture("example31.json"));
    let errors: Vec<_> = diags.iter().filter(|d| d.severity == Severity::Error).collect();
    assert_eq!(errors.len(), 4);
    assert!(errors.iter().all(|d| d.code == DiagnosticCode::XiOrthogonality));
    let subjects: Vec<&str> = errors.iter().map(|d| d.subject.as_str()).collect();
    assert_eq!(subjects, ["c1", "c2", "c4", "c5"]);
    for (d, sum) in errors.iter().zip(["-4", "2", "-2", "4"]) {
        assert!(d.message.contains(&format!("sum {sum} ")), "{}", d.message);
    }
}

#[test]
fn example31_modes() {
    let m = fixture("example31.json");
    assert!(matches!(report(&m, Mode::Strict), Err(ChowError::InvalidModel { .. })));
    let r = report(&m, Mode::Permissive).unwrap();
    assert!(r.formal_only);
    // Oracle: d = (1,1,1,1,1,2,4) gives nonunit factors (2, 2).
    let divs = determinantal_divisors(&build_specialization_matrix(&m)).unwrap();
    let oracle: Vec<BigInt> = invariant_factors_from_divisors(&divs)
        .into_iter()
        .filter(|f| *f > BigInt::from(1))
        .collect();
    assert_eq!(r.b, FGAbelianGroup::new(0, oracle).unwrap());
    assert_eq!(r.b, FGAbelianGroup::new(0, ints(&[2, 2])).unwrap());
    let expected = r.expected.as_ref().unwrap();
    assert_eq!(expected.b0_torsion, ints(&[2]));
    assert_eq!(r.matches_expected(), None);
}

#[test]
fn trivial_and_irreducible() {
    for name in ["trivial.json", "irreducible.json"] {
        let m = fixture(name);
        assert!(validate(&m).is_empty());
        let r = report(&m, Mode::Strict).unwrap();
        assert_eq!(r.b, FGAbelianGroup::free(1));
        assert_eq!(r.b0, Some(FGAbelianGroup::trivial()));
        assert_eq!(r.index, Some(BigInt::from(1)));
        assert_eq!(r.special_case, Some(SpecialCase::IrreducibleFiber));
    }
}

#[test]
fn split_orbit_is_boundary_case() {
    let m = fixture("split-orbit.json");
    assert!(m.geometric.is_some());
    assert_eq!(m.orbits[0].members, ["Y1", "Y2"]);
    let r = report(&m, Mode::Strict).unwrap();
    assert_eq!(r.b, FGAbelianGroup::free(1));
    assert_eq!(r.b0, Some(FGAbelianGroup::trivial()));
    assert_eq!(r.index, Some(BigInt::from(2)));
    assert_eq!(r.special_case, None);
    assert_eq!(r.matches_expected(), Some(true));
}

#[test]
fn synthetic_z2_both_routes() {
    let m = fixture("synthetic-z2.json");
    let b0 = compute_b0(&m).unwrap();
    let z2 = FGAbelianGroup::new(0, ints(&[2])).unwrap();
    assert_eq!(b0.route_quotient, z2);
    assert_eq!(b0.route_kernel, z2);
    let divs = determinantal_divisors(&build_specialization_matrix(&m)).unwrap();
    assert_eq!(divs, ints(&[2]));
    let r = report(&m, Mode::Strict).unwrap();
    assert_eq!(r.matches_expected(), Some(true));
}
