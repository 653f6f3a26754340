//! Chow groups of 0-cycles on rational surfaces over p-adic fields, computed
//! from the combinatorics of a regular model's special fiber.
//!
//! The pipeline: a [`FiberModel`](model::FiberModel) lists the Galois orbits of
//! geometric fiber components with their multiplicities and, for each chosen
//! Picard generator of a component, its intersection degrees against every
//! component. The cokernel of the resulting integer matrix is `B(X)`, which
//! under the model's hypotheses is isomorphic to `A₀(X_K)`; the kernel of the
//! induced degree character on it is `B(X)₀ ≅ A₀(X_K)₀`.

pub mod chow;
pub mod galois;
pub mod linalg;
pub mod model;
pub mod serde_int;

pub use chow::{report, ChowError, ChowReport, Mode};
pub use linalg::{FGAbelianGroup, IntMatrix};
pub use model::{parse_model, validate, Diagnostic, FiberModel, Severity};
