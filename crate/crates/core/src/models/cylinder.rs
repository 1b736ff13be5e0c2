//! Cylinder subgroups of the full product `F^N` (one-sided) or `F^Z`
//! (two-sided). Everything is closed-form in `|F|`, `k` and `n`; no element
//! of the product is ever built.

use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::abelian::FgAbGroup;
use crate::error::{Error, Result};
use crate::index::Index;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sidedness {
    OneSided,
    TwoSided,
}

/// `U_k` = elements vanishing on the first `k` coordinates (one-sided) or
/// on the window `[-k, k]` (two-sided).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CylinderFamily {
    cell_order: BigInt,
    sides: Sidedness,
}

impl CylinderFamily {
    pub fn new(cell: &FgAbGroup, sides: Sidedness) -> Result<Self> {
        match cell.order() {
            Index::Finite(n) => Ok(Self { cell_order: n, sides }),
            Index::Infinite => Err(Error::InvalidGroup(format!("cylinder cell {cell} is not finite"))),
        }
    }

    pub fn one_sided(cell: &FgAbGroup) -> Result<Self> {
        Self::new(cell, Sidedness::OneSided)
    }

    pub fn two_sided(cell: &FgAbGroup) -> Result<Self> {
        Self::new(cell, Sidedness::TwoSided)
    }

    pub fn cell_order(&self) -> &BigInt {
        &self.cell_order
    }

    pub fn sides(&self) -> Sidedness {
        self.sides
    }

    /// `[U_j : U_k]` for `j ≤ k`: `|F|^{k-j}` one-sided, `|F|^{2(k-j)}`
    /// two-sided (the window grows at both ends).
    pub fn index(&self, j: usize, k: usize) -> Result<BigInt> {
        if j > k {
            return Err(Error::InvalidArgument(format!("U_{k} does not contain U_{j}")));
        }
        let steps = (k - j) as u32;
        Ok(match self.sides {
            Sidedness::OneSided => self.cell_order.pow(steps),
            Sidedness::TwoSided => self.cell_order.pow(2 * steps),
        })
    }
}

/// `[U_k : C_n(ψ, U_k)]` for the left shift `ψ`, where
/// `C_n = U_k ∩ ψ^{-1} U_k ∩ … ∩ ψ^{-(n-1)} U_k = U_{k+n-1}`.
pub fn cylinder_cotrajectory_index(fam: &CylinderFamily, k: usize, n: usize) -> Result<BigInt> {
    if fam.sides != Sidedness::OneSided {
        return Err(Error::InvalidArgument("cotrajectory needs a one-sided family".into()));
    }
    if n == 0 {
        return Err(Error::InvalidArgument("cotrajectory length must be at least 1".into()));
    }
    fam.index(k, k + n - 1)
}

/// `[σ(U_k) : σ(U_k) ∩ U_k]` for the two-sided shift `σ`: the window moves
/// by one, freeing exactly one coordinate.
pub fn two_sided_shift_inert_index(fam: &CylinderFamily, _k: usize) -> Result<BigInt> {
    if fam.sides != Sidedness::TwoSided {
        return Err(Error::InvalidArgument("shift inert index needs a two-sided family".into()));
    }
    Ok(if fam.cell_order.is_one() { BigInt::one() } else { fam.cell_order.clone() })
}
