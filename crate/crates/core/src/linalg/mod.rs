//! Exact integer linear algebra.
//!
//! Everything here works over arbitrary-precision integers: Hermite and Smith
//! normal forms with their unimodular transforms, integer kernels, lattice
//! membership, cokernel presentations, and a deliberately naive
//! gcd-of-minors oracle used to cross-check the Smith form.

mod group;
mod hnf;
mod lattice;
mod matrix;
mod oracle;
mod snf;

pub use group::FGAbelianGroup;
pub use hnf::{hnf, inverse_unimodular, is_hermite_normal_form};
pub use lattice::{cokernel, integer_kernel, solve_in_lattice, CokernelPresentation};
pub use matrix::{gcd_all, IntMatrix};
pub use oracle::{determinantal_divisors, invariant_factors_from_divisors, ORACLE_MAX_DIMENSION};
pub use snf::{snf, SmithDecomposition};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("shape mismatch: expected {expected}, found {found}")]
    ShapeMismatch { expected: usize, found: usize },
    #[error("matrix is {rows}x{cols}, not square")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not unimodular")]
    NotUnimodular,
    #[error("target vector is not in the lattice spanned by the basis")]
    NotInLattice,
    #[error("oracle size limit: min dimension {found} exceeds {limit}")]
    OracleSizeLimit { found: usize, limit: usize },
    #[error("invariant factors must be at least 2 and form a divisibility chain")]
    NotInvariantChain,
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}
