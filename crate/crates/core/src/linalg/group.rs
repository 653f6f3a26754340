use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use serde::{Deserialize, Serialize};

use super::{cokernel, IntMatrix, LinalgError};

/// `Z^rank ⊕ Z/f_1 ⊕ … ⊕ Z/f_n` with `2 ≤ f_1 | f_2 | … | f_n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FGAbelianGroup {
    pub rank: usize,
    #[serde(rename = "torsion", with = "crate::serde_int::vec")]
    pub invariant_factors: Vec<BigInt>,
}

impl FGAbelianGroup {
    pub fn trivial() -> Self {
        FGAbelianGroup {
            rank: 0,
            invariant_factors: Vec::new(),
        }
    }

    pub fn free(rank: usize) -> Self {
        FGAbelianGroup {
            rank,
            invariant_factors: Vec::new(),
        }
    }

    /// Checked constructor; factors must already form a divisibility chain of
    /// entries ≥ 2.
    pub fn new(rank: usize, invariant_factors: Vec<BigInt>) -> Result<Self, LinalgError> {
        let g = FGAbelianGroup {
            rank,
            invariant_factors,
        };
        if g.is_well_formed() {
            Ok(g)
        } else {
            Err(LinalgError::NotInvariantChain)
        }
    }

    /// Canonical form of `Z^rank ⊕ ⊕ Z/c_i` for arbitrary cyclic orders `c_i`
    /// (units allowed; a zero order contributes a free summand).
    pub fn from_cyclic_orders(rank: usize, orders: &[BigInt]) -> Self {
        let n = orders.len();
        let mut diag = IntMatrix::zeros(n, n);
        for (i, c) in orders.iter().enumerate() {
            diag[(i, i)] = c.clone();
        }
        let mut g = cokernel(&diag).group;
        g.rank += rank;
        g
    }

    pub fn is_well_formed(&self) -> bool {
        let two = BigInt::from(2);
        self.invariant_factors.iter().all(|f| *f >= two)
            && self
                .invariant_factors
                .windows(2)
                .all(|w| w[1].is_multiple_of(&w[0]))
    }

    pub fn is_trivial(&self) -> bool {
        self.rank == 0 && self.invariant_factors.is_empty()
    }

    pub fn is_free(&self) -> bool {
        self.invariant_factors.is_empty()
    }

    /// Order of the torsion subgroup.
    pub fn torsion_order(&self) -> BigInt {
        self.invariant_factors.iter().product()
    }
}

impl fmt::Display for FGAbelianGroup {
    /// `0`, `Z`, `Z^3`, `Z/2 ⊕ Z/4`, `Z^2 ⊕ Z/6`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.invariant_factors.iter().map(|d| format!("Z/{d}")));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" ⊕ "))
        }
    }
}
