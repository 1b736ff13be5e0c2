use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::index::Index;
use crate::lattice::IntLattice;
use crate::model::SubgroupLattice;

/// The divisible group `Q^n`; its representable subgroups are the
/// finitely generated ones.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RationalSpace {
    pub dim: usize,
}

impl RationalSpace {
    pub fn new(dim: usize) -> Self {
        Self { dim }
    }
}

/// A finitely generated subgroup `L ≤ Q^n`, represented by the unique pair
/// `(d, d·L)` where `d` is the least positive integer with `d·L ⊆ Z^n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RationalLattice {
    denominator: BigInt,
    scaled: IntLattice,
}

pub(crate) fn lcm_of_denominators<'a>(xs: impl IntoIterator<Item = &'a BigRational>) -> BigInt {
    xs.into_iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()))
}

impl RationalLattice {
    pub fn from_generators(dim: usize, gens: &[Vec<BigRational>]) -> Result<Self> {
        if let Some(g) = gens.iter().find(|g| g.len() != dim) {
            return Err(Error::DimensionMismatch { expected: dim, found: g.len() });
        }
        let d = lcm_of_denominators(gens.iter().flatten());
        let rows: Vec<Vec<BigInt>> = gens
            .iter()
            .map(|g| g.iter().map(|x| (x * &d).to_integer()).collect())
            .collect();
        Ok(Self::normalized(d, IntLattice::from_generators(dim, &rows)?))
    }

    pub fn from_i64_rows(dim: usize, rows: &[&[i64]]) -> Result<Self> {
        let gens: Vec<Vec<BigRational>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| BigRational::from_integer(x.into())).collect())
            .collect();
        Self::from_generators(dim, &gens)
    }

    fn normalized(d: BigInt, scaled: IntLattice) -> Self {
        let g = d.gcd(&scaled.content());
        if g.is_one() {
            Self { denominator: d, scaled }
        } else {
            Self { denominator: &d / &g, scaled: scaled.divided(&g) }
        }
    }

    /// `Z^n`.
    pub fn standard(dim: usize) -> Self {
        Self { denominator: BigInt::one(), scaled: IntLattice::full(dim) }
    }

    pub fn zero(dim: usize) -> Self {
        Self { denominator: BigInt::one(), scaled: IntLattice::zero(dim) }
    }

    /// `c · self` for a nonzero rational `c`.
    pub fn scaled_by(&self, c: &BigRational) -> Result<Self> {
        let gens: Vec<Vec<BigRational>> =
            self.basis().into_iter().map(|r| r.into_iter().map(|x| x * c).collect()).collect();
        Self::from_generators(self.dim(), &gens)
    }

    pub fn dim(&self) -> usize {
        self.scaled.dim()
    }

    pub fn rank(&self) -> usize {
        self.scaled.rank()
    }

    pub fn is_zero(&self) -> bool {
        self.scaled.is_zero()
    }

    pub fn is_full_rank(&self) -> bool {
        self.rank() == self.dim()
    }

    pub fn denominator(&self) -> &BigInt {
        &self.denominator
    }

    /// `d·L` as an integer lattice.
    pub fn scaled_lattice(&self) -> &IntLattice {
        &self.scaled
    }

    /// Canonical rational basis rows.
    pub fn basis(&self) -> Vec<Vec<BigRational>> {
        self.scaled
            .basis()
            .iter()
            .map(|r| r.iter().map(|x| BigRational::new(x.clone(), self.denominator.clone())).collect())
            .collect()
    }

    /// Integer lattice `e·L` for a common multiple `e` of the denominator.
    pub(crate) fn at_scale(&self, e: &BigInt) -> IntLattice {
        debug_assert!(e.is_multiple_of(&self.denominator));
        self.scaled.scaled(&(e / &self.denominator))
    }

    pub fn contains(&self, v: &[BigRational]) -> bool {
        if v.len() != self.dim() {
            return false;
        }
        let e = lcm_of_denominators(v).lcm(&self.denominator);
        let iv: Vec<BigInt> = v.iter().map(|x| (x * &e).to_integer()).collect();
        self.at_scale(&e).contains(&iv)
    }

    fn check(&self, other: &RationalLattice) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: other.dim() });
        }
        Ok(())
    }

    pub fn sum(&self, other: &RationalLattice) -> Result<RationalLattice> {
        self.check(other)?;
        let e = self.denominator.lcm(&other.denominator);
        let s = self.at_scale(&e).sum(&other.at_scale(&e))?;
        Ok(Self::normalized(e, s))
    }

    pub fn intersect(&self, other: &RationalLattice) -> Result<RationalLattice> {
        self.check(other)?;
        let e = self.denominator.lcm(&other.denominator);
        let s = self.at_scale(&e).intersect(&other.at_scale(&e))?;
        Ok(Self::normalized(e, s))
    }

    /// `[self : self ∩ other]`; infinite when the intersection drops rank.
    pub fn index(&self, other: &RationalLattice) -> Result<Index> {
        self.check(other)?;
        let e = self.denominator.lcm(&other.denominator);
        self.at_scale(&e).relative_index(&other.at_scale(&e))
    }

    pub fn contains_lattice(&self, other: &RationalLattice) -> bool {
        self.dim() == other.dim() && other.basis().iter().all(|b| self.contains(b))
    }
}

impl SubgroupLattice for RationalSpace {
    type Sub = RationalLattice;

    fn sum(&self, a: &RationalLattice, b: &RationalLattice) -> Result<RationalLattice> {
        if a.dim() != self.dim {
            return Err(Error::AmbientMismatch);
        }
        a.sum(b)
    }

    fn intersect(&self, a: &RationalLattice, b: &RationalLattice) -> Result<RationalLattice> {
        if a.dim() != self.dim {
            return Err(Error::AmbientMismatch);
        }
        a.intersect(b)
    }

    fn relative_index(&self, a: &RationalLattice, b: &RationalLattice) -> Result<Index> {
        if a.dim() != self.dim {
            return Err(Error::AmbientMismatch);
        }
        a.index(b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn lat1(x: BigRational) -> RationalLattice {
        RationalLattice::from_generators(1, &[vec![x]]).unwrap()
    }

    #[test]
    fn canonical_pair_is_unique() {
        let a = RationalLattice::from_generators(1, &[vec![q(1, 2)], vec![q(1, 1)]]).unwrap();
        let b = lat1(q(1, 2));
        assert_eq!(a, b);
        assert_eq!(b.denominator(), &BigInt::from(2));
        let c = RationalLattice::from_generators(1, &[vec![q(1, 2)], vec![q(1, 3)]]).unwrap();
        assert_eq!(c, lat1(q(1, 6)));
        // 2·(1/2)Z = Z has denominator 1 after normalization
        assert_eq!(lat1(q(2, 2)), RationalLattice::standard(1));
    }

    #[test]
    fn index_examples() {
        let half = lat1(q(1, 2));
        let z = RationalLattice::standard(1);
        assert_eq!(half.index(&z).unwrap(), Index::finite(2));
        assert_eq!(z.intersect(&lat1(q(1, 3))).unwrap(), z);
        // [<1> : <1> ∩ <3/2>] = [Z : 3Z]
        assert_eq!(z.index(&lat1(q(3, 2))).unwrap(), Index::finite(3));
        assert_eq!(z.index(&z).unwrap(), Index::one());
    }

    #[test]
    fn rank_deficient_index_is_infinite() {
        let e1 = RationalLattice::from_i64_rows(2, &[&[1, 0]]).unwrap();
        let e2 = RationalLattice::from_i64_rows(2, &[&[0, 1]]).unwrap();
        assert_eq!(e1.index(&e2).unwrap(), Index::Infinite);
        assert_eq!(e1.index(&RationalLattice::standard(2)).unwrap(), Index::one());
    }

    #[test]
    fn containment() {
        let l = RationalLattice::from_generators(2, &[vec![q(1, 2), q(1, 3)]]).unwrap();
        assert!(l.contains(&[q(3, 2), q(1, 1)]));
        assert!(!l.contains(&[q(1, 2), q(0, 1)]));
    }
}
