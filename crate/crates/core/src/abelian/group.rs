use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::index::Index;
use crate::lattice::{smith_diagonal, unit_vec, IntLattice};

/// A finitely generated abelian group `Z/d_1 ⊕ … ⊕ Z/d_k ⊕ Z^r` with
/// `d_1 | d_2 | … | d_k` and every `d_i ≥ 2`.
///
/// Coordinates are ordered torsion first, then free.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FgAbGroup {
    invariant_factors: Vec<BigInt>,
    free_rank: usize,
}

impl FgAbGroup {
    pub fn new(invariant_factors: Vec<BigInt>, free_rank: usize) -> Result<Self> {
        if let Some(d) = invariant_factors.iter().find(|d| **d < BigInt::from(2)) {
            return Err(Error::InvalidGroup(format!("invariant factor {d} is below 2")));
        }
        for w in invariant_factors.windows(2) {
            if !w[1].is_multiple_of(&w[0]) {
                return Err(Error::InvalidGroup(format!("{} does not divide {}", w[0], w[1])));
            }
        }
        Ok(Self { invariant_factors, free_rank })
    }

    /// `Z^r`.
    pub fn free(rank: usize) -> Self {
        Self { invariant_factors: Vec::new(), free_rank: rank }
    }

    /// `Z/n`, or the trivial group for `n = 1`.
    pub fn cyclic(n: u64) -> Self {
        Self::from_cyclic_orders(&[BigInt::from(n)], 0)
    }

    /// Normalize an arbitrary list of cyclic orders (plus free rank) into
    /// invariant-factor form.
    pub fn from_cyclic_orders(orders: &[BigInt], free_rank: usize) -> Self {
        let n = orders.len();
        let rows: Vec<Vec<BigInt>> = orders
            .iter()
            .enumerate()
            .map(|(i, d)| {
                let mut r = unit_vec(n, i);
                r[i] = d.clone();
                r
            })
            .collect();
        let g = canonicalize_presentation(&rows, n);
        Self { invariant_factors: g.invariant_factors, free_rank: g.free_rank + free_rank }
    }

    pub fn invariant_factors(&self) -> &[BigInt] {
        &self.invariant_factors
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn torsion_len(&self) -> usize {
        self.invariant_factors.len()
    }

    /// Number of coordinates, `k + r`.
    pub fn dim(&self) -> usize {
        self.invariant_factors.len() + self.free_rank
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank == 0
    }

    pub fn is_free(&self) -> bool {
        self.invariant_factors.is_empty()
    }

    pub fn order(&self) -> Index {
        if self.free_rank > 0 {
            Index::Infinite
        } else {
            Index::Finite(self.invariant_factors.iter().product())
        }
    }

    /// Exponent of the torsion subgroup (1 when torsion-free).
    pub fn torsion_exponent(&self) -> BigInt {
        self.invariant_factors.last().cloned().unwrap_or_else(BigInt::one)
    }

    /// The relation lattice spanned by `d_i e_i`.
    pub fn relation_lattice(&self) -> IntLattice {
        let n = self.dim();
        let gens: Vec<_> = self
            .invariant_factors
            .iter()
            .enumerate()
            .map(|(i, d)| {
                let mut r = unit_vec(n, i);
                r[i] = d.clone();
                r
            })
            .collect();
        IntLattice::from_generators(n, &gens).expect("dimensions agree")
    }

    /// Reduce a coordinate vector: torsion coordinates into `[0, d_i)`.
    pub fn reduce(&self, coords: &mut [BigInt]) {
        for (x, d) in coords.iter_mut().zip(&self.invariant_factors) {
            *x = x.mod_floor(d);
        }
    }

    pub fn check_dim(&self, len: usize) -> Result<()> {
        if len != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: len });
        }
        Ok(())
    }
}

impl fmt::Display for FgAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self.invariant_factors.iter().map(|d| format!("Z/{d}")).collect();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".into()),
            r => parts.push(format!("Z^{r}")),
        }
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}

/// Invariant factors and free rank of `Z^ncols / ⟨relations⟩`.
///
/// Unit factors are dropped; an empty relation set presents a free group.
pub fn canonicalize_presentation(relations: &[Vec<BigInt>], ncols: usize) -> FgAbGroup {
    let diag = smith_diagonal(relations, ncols);
    let free_rank = ncols - diag.len();
    let invariant_factors = diag.into_iter().filter(|d| !d.is_one()).collect();
    FgAbGroup { invariant_factors, free_rank }
}

/// An element of an [`FgAbGroup`], with torsion coordinates reduced.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GroupElement {
    coords: Vec<BigInt>,
}

impl GroupElement {
    pub fn new(group: &FgAbGroup, mut coords: Vec<BigInt>) -> Result<Self> {
        group.check_dim(coords.len())?;
        group.reduce(&mut coords);
        Ok(Self { coords })
    }

    pub fn from_i64(group: &FgAbGroup, coords: &[i64]) -> Result<Self> {
        Self::new(group, coords.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn zero(group: &FgAbGroup) -> Self {
        Self { coords: vec![BigInt::zero(); group.dim()] }
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    pub fn add(&self, other: &GroupElement, group: &FgAbGroup) -> GroupElement {
        let mut coords: Vec<BigInt> = self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect();
        group.reduce(&mut coords);
        GroupElement { coords }
    }

    pub fn neg(&self, group: &FgAbGroup) -> GroupElement {
        let mut coords: Vec<BigInt> = self.coords.iter().map(|a| -a).collect();
        group.reduce(&mut coords);
        GroupElement { coords }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rows(rs: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rs.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    #[test]
    fn presentation_examples() {
        let g = canonicalize_presentation(&rows(&[&[2, 0], &[0, 3]]), 2);
        assert_eq!(g.invariant_factors(), &[BigInt::from(6)]);
        assert_eq!(g.free_rank(), 0);

        let g = canonicalize_presentation(&rows(&[&[0, 0], &[0, 0]]), 2);
        assert!(g.invariant_factors().is_empty());
        assert_eq!(g.free_rank(), 2);

        let g = canonicalize_presentation(&rows(&[&[1, 0], &[0, 4]]), 2);
        assert_eq!(g.invariant_factors(), &[BigInt::from(4)]);

        let g = canonicalize_presentation(&[], 3);
        assert_eq!(g, FgAbGroup::free(3));
    }

    #[test]
    fn rejects_broken_chains() {
        assert!(FgAbGroup::new(vec![BigInt::from(2), BigInt::from(3)], 0).is_err());
        assert!(FgAbGroup::new(vec![BigInt::from(1)], 0).is_err());
        assert!(FgAbGroup::new(vec![BigInt::from(2), BigInt::from(4)], 1).is_ok());
    }

    #[test]
    fn elements_are_reduced() {
        let g = FgAbGroup::new(vec![BigInt::from(4)], 1).unwrap();
        let x = GroupElement::from_i64(&g, &[-1, -7]).unwrap();
        assert_eq!(x.coords(), &[BigInt::from(3), BigInt::from(-7)]);
        assert!(GroupElement::from_i64(&g, &[1]).is_err());
    }

    #[test]
    fn display() {
        let g = FgAbGroup::new(vec![BigInt::from(2), BigInt::from(4)], 2).unwrap();
        assert_eq!(g.to_string(), "Z/2 + Z/4 + Z^2");
        assert_eq!(FgAbGroup::cyclic(1).to_string(), "0");
    }
}
