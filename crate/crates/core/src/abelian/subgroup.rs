use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::group::{FgAbGroup, GroupElement};
use crate::error::{Error, Result};
use crate::index::Index;
use crate::lattice::{IntLattice, IntMatrix};
use crate::model::SubgroupLattice;

/// A subgroup `H ≤ A`, stored as its preimage lattice `L_H ⊆ Z^{k+r}`,
/// which always contains the relation lattice of `A`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Subgroup {
    ambient: FgAbGroup,
    lattice: IntLattice,
}

impl Subgroup {
    pub fn from_generators(ambient: &FgAbGroup, gens: &[GroupElement]) -> Result<Self> {
        let rows: Vec<_> = gens.iter().map(|g| g.coords().to_vec()).collect();
        Self::from_rows(ambient, &rows)
    }

    /// Generators given as raw coordinate rows (not necessarily reduced).
    pub fn from_rows(ambient: &FgAbGroup, rows: &[Vec<BigInt>]) -> Result<Self> {
        let lattice = IntLattice::from_generators(ambient.dim(), rows)?;
        Ok(Self::from_lattice(ambient, lattice))
    }

    pub fn from_i64_rows(ambient: &FgAbGroup, rows: &[&[i64]]) -> Result<Self> {
        let rows: Vec<Vec<BigInt>> =
            rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
        Self::from_rows(ambient, &rows)
    }

    pub(crate) fn from_lattice(ambient: &FgAbGroup, lattice: IntLattice) -> Self {
        let lattice = lattice.sum(&ambient.relation_lattice()).expect("dimensions agree");
        Self { ambient: ambient.clone(), lattice }
    }

    pub fn whole(ambient: &FgAbGroup) -> Self {
        Self { ambient: ambient.clone(), lattice: IntLattice::full(ambient.dim()) }
    }

    pub fn zero(ambient: &FgAbGroup) -> Self {
        Self { ambient: ambient.clone(), lattice: ambient.relation_lattice() }
    }

    /// The torsion subgroup `t(A)`.
    pub fn torsion(ambient: &FgAbGroup) -> Self {
        let k = ambient.torsion_len();
        let rows: Vec<_> = (0..k).map(|i| crate::lattice::unit_vec(ambient.dim(), i)).collect();
        Self::from_rows(ambient, &rows).expect("dimensions agree")
    }

    pub fn ambient(&self) -> &FgAbGroup {
        &self.ambient
    }

    pub fn lattice(&self) -> &IntLattice {
        &self.lattice
    }

    /// Canonical HNF basis of the preimage lattice.
    pub fn basis(&self) -> &IntMatrix {
        self.lattice.basis()
    }

    /// Nonzero reduced elements of the canonical basis; they generate `H`.
    pub fn generators(&self) -> Vec<GroupElement> {
        self.basis()
            .iter()
            .map(|r| GroupElement::new(&self.ambient, r.clone()).expect("dimensions agree"))
            .filter(|g| !g.is_zero())
            .collect()
    }

    /// Torsion-free rank of `H`.
    pub fn rank(&self) -> usize {
        self.lattice.rank() - self.ambient.torsion_len()
    }

    pub fn order(&self) -> Index {
        self.lattice.index_of_sublattice(&self.ambient.relation_lattice())
    }

    pub fn is_zero(&self) -> bool {
        self.lattice == self.ambient.relation_lattice()
    }

    pub fn contains(&self, x: &GroupElement) -> bool {
        self.lattice.contains(x.coords())
    }

    pub fn contains_subgroup(&self, other: &Subgroup) -> bool {
        self.ambient == other.ambient && self.lattice.contains_lattice(&other.lattice)
    }

    fn check(&self, other: &Subgroup) -> Result<()> {
        if self.ambient != other.ambient {
            return Err(Error::AmbientMismatch);
        }
        Ok(())
    }

    pub fn sum(&self, other: &Subgroup) -> Result<Subgroup> {
        self.check(other)?;
        let lattice = self.lattice.sum(&other.lattice)?;
        Ok(Subgroup { ambient: self.ambient.clone(), lattice })
    }

    pub fn intersect(&self, other: &Subgroup) -> Result<Subgroup> {
        self.check(other)?;
        let lattice = self.lattice.intersect(&other.lattice)?;
        Ok(Subgroup { ambient: self.ambient.clone(), lattice })
    }

    /// `[self : self ∩ other]`.
    pub fn index(&self, other: &Subgroup) -> Result<Index> {
        self.check(other)?;
        self.lattice.relative_index(&other.lattice)
    }

    /// `[A : self]`.
    pub fn index_in_ambient(&self) -> Index {
        IntLattice::full(self.ambient.dim()).index_of_sublattice(&self.lattice)
    }
}

impl SubgroupLattice for FgAbGroup {
    type Sub = Subgroup;

    fn sum(&self, a: &Subgroup, b: &Subgroup) -> Result<Subgroup> {
        if a.ambient() != self {
            return Err(Error::AmbientMismatch);
        }
        a.sum(b)
    }

    fn intersect(&self, a: &Subgroup, b: &Subgroup) -> Result<Subgroup> {
        if a.ambient() != self {
            return Err(Error::AmbientMismatch);
        }
        a.intersect(b)
    }

    fn relative_index(&self, a: &Subgroup, b: &Subgroup) -> Result<Index> {
        if a.ambient() != self {
            return Err(Error::AmbientMismatch);
        }
        a.index(b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(n: usize) -> FgAbGroup {
        FgAbGroup::free(n)
    }

    #[test]
    fn generator_examples() {
        let h = Subgroup::from_i64_rows(&z(2), &[&[2, 0], &[0, 2]]).unwrap();
        assert_eq!(h.basis(), &vec![vec![BigInt::from(2), BigInt::from(0)], vec![BigInt::from(0), BigInt::from(2)]]);

        let z4 = FgAbGroup::cyclic(4);
        let h = Subgroup::from_i64_rows(&z4, &[&[2]]).unwrap();
        assert_eq!(h.order(), Index::finite(2));

        let h = Subgroup::from_i64_rows(&z(2), &[&[2, 0], &[3, 0]]).unwrap();
        assert!(h.basis().contains(&vec![BigInt::from(1), BigInt::from(0)]));
    }

    #[test]
    fn generators_outside_dimension_fail() {
        assert!(Subgroup::from_i64_rows(&z(2), &[&[1]]).is_err());
    }

    #[test]
    fn sum_and_meet_examples() {
        let a = Subgroup::from_i64_rows(&z(1), &[&[2]]).unwrap();
        let b = Subgroup::from_i64_rows(&z(1), &[&[3]]).unwrap();
        assert_eq!(a.sum(&b).unwrap(), Subgroup::whole(&z(1)));
        assert_eq!(a.intersect(&b).unwrap(), Subgroup::from_i64_rows(&z(1), &[&[6]]).unwrap());
        let e1 = Subgroup::from_i64_rows(&z(2), &[&[1, 0]]).unwrap();
        let e2 = Subgroup::from_i64_rows(&z(2), &[&[0, 1]]).unwrap();
        assert!(e1.intersect(&e2).unwrap().is_zero());
        assert_eq!(a.sum(&e1), Err(Error::AmbientMismatch));
    }

    #[test]
    fn index_examples() {
        let whole = Subgroup::whole(&z(2));
        let two = Subgroup::from_i64_rows(&z(2), &[&[2, 0], &[0, 2]]).unwrap();
        assert_eq!(whole.index(&two).unwrap(), Index::finite(4));
        assert_eq!(
            Subgroup::whole(&z(1)).index(&Subgroup::zero(&z(1))).unwrap(),
            Index::Infinite
        );
        let h = Subgroup::from_i64_rows(&z(2), &[&[2, 0], &[0, 3]]).unwrap();
        let k = Subgroup::from_i64_rows(&z(2), &[&[4, 0], &[0, 3]]).unwrap();
        assert_eq!(h.index(&k).unwrap(), Index::finite(2));
    }

    #[test]
    fn torsion_subgroup_of_mixed_group() {
        let g = FgAbGroup::new(vec![BigInt::from(2), BigInt::from(6)], 1).unwrap();
        let t = Subgroup::torsion(&g);
        assert_eq!(t.order(), Index::finite(12));
        assert_eq!(t.rank(), 0);
        assert_eq!(Subgroup::whole(&g).rank(), 1);
        assert_eq!(t.index_in_ambient(), Index::Infinite);
    }
}
