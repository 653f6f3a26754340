//! Frobenius action on the geometric components of the special fiber.
//!
//! The Galois group of the maximal unramified extension is procyclic, and the
//! set of geometric components is finite, so a single permutation (the image
//! of Frobenius) determines the action. Equivariant homomorphisms `Z^S → Z`
//! are exactly the functions constant on orbits, with basis `b_Y` indexed by
//! the orbits `Y`.

use std::collections::{HashMap, HashSet};

use num_bigint::BigInt;
use thiserror::Error;

use crate::linalg::{gcd_all, integer_kernel, IntMatrix};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ActionError {
    #[error("ground set is empty")]
    EmptyGroundSet,
    #[error("component {0:?} listed twice")]
    DuplicateComponent(String),
    #[error("frobenius image list has {found} entries for {expected} components")]
    LengthMismatch { expected: usize, found: usize },
    #[error("frobenius image {0:?} is not a component")]
    UnknownImage(String),
    #[error("frobenius is not a bijection: {0:?} is hit twice")]
    NotBijective(String),
}

/// A permutation of the geometric components, given as an image list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PermutationAction {
    ground_set: Vec<String>,
    frobenius: Vec<String>,
    image_index: Vec<usize>,
}

impl PermutationAction {
    pub fn new(ground_set: Vec<String>, frobenius: Vec<String>) -> Result<Self, ActionError> {
        if ground_set.is_empty() {
            return Err(ActionError::EmptyGroundSet);
        }
        if frobenius.len() != ground_set.len() {
            return Err(ActionError::LengthMismatch {
                expected: ground_set.len(),
                found: frobenius.len(),
            });
        }
        let mut position = HashMap::with_capacity(ground_set.len());
        for (i, z) in ground_set.iter().enumerate() {
            if position.insert(z.as_str(), i).is_some() {
                return Err(ActionError::DuplicateComponent(z.clone()));
            }
        }
        let mut hit = HashSet::with_capacity(frobenius.len());
        let mut image_index = Vec::with_capacity(frobenius.len());
        for img in &frobenius {
            let &j = position
                .get(img.as_str())
                .ok_or_else(|| ActionError::UnknownImage(img.clone()))?;
            if !hit.insert(j) {
                return Err(ActionError::NotBijective(img.clone()));
            }
            image_index.push(j);
        }
        Ok(PermutationAction {
            ground_set,
            frobenius,
            image_index,
        })
    }

    /// The trivial action on the given components.
    pub fn identity(ground_set: Vec<String>) -> Result<Self, ActionError> {
        let frobenius = ground_set.clone();
        Self::new(ground_set, frobenius)
    }

    pub fn ground_set(&self) -> &[String] {
        &self.ground_set
    }

    pub fn frobenius(&self) -> &[String] {
        &self.frobenius
    }

    pub fn image_of(&self, component: &str) -> Option<&str> {
        let i = self.ground_set.iter().position(|z| z == component)?;
        Some(&self.frobenius[i])
    }

    /// Frobenius cycles, each starting at its first element in ground-set
    /// order, listed in order of first appearance.
    pub fn orbits(&self) -> Vec<Vec<String>> {
        let mut seen = vec![false; self.ground_set.len()];
        let mut out = Vec::new();
        for start in 0..self.ground_set.len() {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                cycle.push(self.ground_set[i].clone());
                i = self.image_index[i];
            }
            out.push(cycle);
        }
        out
    }
}

/// A component of the fiber over the residue field: one Frobenius orbit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentOrbit {
    pub name: String,
    pub members: Vec<String>,
    pub multiplicity: u64,
}

impl ComponentOrbit {
    /// An orbit known only by its size; members get positional names
    /// `name[0]`, `name[1]`, ….
    pub fn with_size(name: impl Into<String>, size: usize, multiplicity: u64) -> Self {
        let name = name.into();
        let members = (0..size).map(|i| format!("{name}[{i}]")).collect();
        ComponentOrbit {
            name,
            members,
            multiplicity,
        }
    }

    pub fn size(&self) -> usize {
        self.members.len()
    }

    /// `b_Y(P) = m_Y · |Y|`.
    pub fn weight(&self) -> BigInt {
        BigInt::from(self.multiplicity) * BigInt::from(self.size())
    }
}

/// Values of `ξ` on the basis `b_Y`, in orbit order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightVector {
    pub weights: Vec<BigInt>,
}

impl WeightVector {
    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// `ξ(h) = Σ_Y w_Y · h_Y`.
    pub fn pair(&self, h: &[BigInt]) -> BigInt {
        self.weights.iter().zip(h).map(|(w, x)| w * x).sum()
    }

    /// Generator of the image of `ξ` in `Z`.
    pub fn index(&self) -> BigInt {
        gcd_all(&self.weights)
    }

    /// The weights as a 1×n matrix.
    pub fn as_row(&self) -> IntMatrix {
        IntMatrix::from_rows([self.weights.clone()])
    }
}

/// Rank of the lattice of equivariant homomorphisms: the orbit count.
pub fn invariant_hom_rank(orbits: &[ComponentOrbit]) -> usize {
    orbits.len()
}

pub fn xi_weights(orbits: &[ComponentOrbit]) -> WeightVector {
    WeightVector {
        weights: orbits.iter().map(ComponentOrbit::weight).collect(),
    }
}

/// Saturated basis (columns) of `ker ξ`, the equivariant homomorphisms that
/// factor through `Z^S / Z·P`.
pub fn hom_t_basis(w: &WeightVector) -> IntMatrix {
    if w.is_empty() {
        return IntMatrix::zeros(0, 0);
    }
    integer_kernel(&w.as_row())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    fn names(xs: &[&str]) -> Vec<String> {
        xs.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn swap_and_fixed_point() {
        let a = PermutationAction::new(names(&["a", "b", "c"]), names(&["b", "a", "c"])).unwrap();
        assert_eq!(a.orbits(), vec![names(&["a", "b"]), names(&["c"])]);
        assert_eq!(a.image_of("a"), Some("b"));
        assert_eq!(a.image_of("z"), None);
    }

    #[test]
    fn identity_gives_singletons() {
        let a = PermutationAction::identity(names(&["x", "y", "z", "w"])).unwrap();
        assert_eq!(a.orbits().len(), 4);
        assert!(a.orbits().iter().all(|o| o.len() == 1));
    }

    #[test]
    fn single_cycle() {
        let a = PermutationAction::new(names(&["1", "2", "3", "4", "5"]), names(&["3", "4", "5", "1", "2"]))
            .unwrap();
        let o = a.orbits();
        assert_eq!(o.len(), 1);
        assert_eq!(o[0], names(&["1", "3", "5", "2", "4"]));
    }

    #[test]
    fn invalid_actions() {
        assert_eq!(PermutationAction::new(vec![], vec![]), Err(ActionError::EmptyGroundSet));
        assert_eq!(
            PermutationAction::new(names(&["a", "a"]), names(&["a", "a"])),
            Err(ActionError::DuplicateComponent("a".into()))
        );
        assert_eq!(
            PermutationAction::new(names(&["a", "b"]), names(&["a", "a"])),
            Err(ActionError::NotBijective("a".into()))
        );
        assert_eq!(
            PermutationAction::new(names(&["a", "b"]), names(&["a", "c"])),
            Err(ActionError::UnknownImage("c".into()))
        );
        assert!(matches!(
            PermutationAction::new(names(&["a", "b"]), names(&["a"])),
            Err(ActionError::LengthMismatch { .. })
        ));
    }

    fn example_orbits() -> Vec<ComponentOrbit> {
        // A, B, R, S split into two geometric components; C, D are
        // geometrically irreducible; M splits in two and has multiplicity 2.
        vec![
            ComponentOrbit::with_size("A", 2, 1),
            ComponentOrbit::with_size("B", 2, 1),
            ComponentOrbit::with_size("C", 1, 1),
            ComponentOrbit::with_size("D", 1, 1),
            ComponentOrbit::with_size("R", 2, 1),
            ComponentOrbit::with_size("S", 2, 1),
            ComponentOrbit::with_size("M", 2, 2),
        ]
    }

    #[test]
    fn example_weights_and_rank() {
        let orbits = example_orbits();
        assert_eq!(invariant_hom_rank(&orbits), 7);
        let w = xi_weights(&orbits);
        let expect: Vec<BigInt> = [2, 2, 1, 1, 2, 2, 4].into_iter().map(BigInt::from).collect();
        assert_eq!(w.weights, expect);
        assert_eq!(w.index(), BigInt::from(1));
    }

    #[test]
    fn small_weights() {
        assert_eq!(
            xi_weights(&[ComponentOrbit::with_size("Y", 1, 1)]).weights,
            vec![BigInt::from(1)]
        );
        assert_eq!(
            xi_weights(&[ComponentOrbit::with_size("Y", 3, 2)]).weights,
            vec![BigInt::from(6)]
        );
    }

    #[test]
    fn hom_t_basis_examples() {
        let w = WeightVector { weights: vec![1.into(), 1.into()] };
        let b = hom_t_basis(&w);
        assert_eq!(b.col_count(), 1);
        assert!(w.pair(&b.column(0)).is_zero());

        let w = xi_weights(&example_orbits());
        let b = hom_t_basis(&w);
        assert_eq!(b.col_count(), 6);
        for col in b.columns() {
            assert!(w.pair(&col).is_zero());
        }

        let w = WeightVector { weights: vec![1.into()] };
        assert_eq!(hom_t_basis(&w).col_count(), 0);
    }
}
