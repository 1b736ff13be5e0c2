//! Almost containment, commensurability, inertness and inertial
//! endomorphisms.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::abelian::{Endo, FgAbGroup, Subgroup};
use crate::error::{Error, Result};
use crate::index::Index;
use crate::model::{EndoAction, Powers, SubOf, SubgroupLattice};
use crate::rational::{RationalEndo, RationalLattice};

/// Default coordinate height for the non-inertiality witness search.
pub const WITNESS_HEIGHT: u32 = 8;

/// `[H^φ : H^φ ∩ H]` and whether it is finite.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InertVerdict {
    pub inert: bool,
    pub index: Index,
}

impl From<Index> for InertVerdict {
    fn from(index: Index) -> Self {
        Self { inert: index.is_finite(), index }
    }
}

/// `H ≤_a K`: `[H : H ∩ K]` finite.
pub fn almost_contained<S: SubgroupLattice>(space: &S, h: &S::Sub, k: &S::Sub) -> Result<bool> {
    Ok(space.relative_index(h, k)?.is_finite())
}

pub fn commensurable<S: SubgroupLattice>(space: &S, h: &S::Sub, k: &S::Sub) -> Result<bool> {
    Ok(almost_contained(space, h, k)? && almost_contained(space, k, h)?)
}

/// `[φ(H) : φ(H) ∩ H]`.
pub fn inert_index<E: EndoAction>(phi: &E, h: &SubOf<E>) -> Result<InertVerdict> {
    let img = phi.image(h)?;
    Ok(phi.space().relative_index(&img, h)?.into())
}

/// Additive form: `|(H + φ(H)) / H|`.
pub fn strict_inert_index<E: EndoAction>(phi: &E, h: &SubOf<E>) -> Result<Index> {
    let img = phi.image(h)?;
    let s = phi.space().sum(h, &img)?;
    phi.space().relative_index(&s, h)
}

/// `strict_inert_index(H, φ^k)`; negative `k` needs `φ` invertible.
pub fn iterated_inert_index<E: EndoAction + Powers>(phi: &E, h: &SubOf<E>, k: i64) -> Result<Index> {
    strict_inert_index(&phi.power(k)?, h)
}

/// Outcome of the inertial-endomorphism decision on a f.g. abelian group.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InertialCertificate {
    /// `φ = m` on the `φ`-invariant finite-index subgroup `A_0 = ker(φ - m)`.
    MultiplicationInteger { m: BigInt, a0: Subgroup },
    /// A subgroup with infinite `|(W + φW)/W|`.
    NonInertialWitness { witness: Subgroup, strict_index: Index },
}

impl InertialCertificate {
    pub fn is_inertial(&self) -> bool {
        matches!(self, InertialCertificate::MultiplicationInteger { .. })
    }
}

/// Decide whether every subgroup of `A` is `φ`-inert.
///
/// On a f.g. group this happens exactly when `φ` acts on `A / t(A)` as an
/// integer scalar `m`.
pub fn is_inertial_endomorphism(phi: &Endo) -> Result<InertialCertificate> {
    is_inertial_endomorphism_with(phi, WITNESS_HEIGHT)
}

pub fn is_inertial_endomorphism_with(phi: &Endo, height: u32) -> Result<InertialCertificate> {
    let a = phi.ambient();
    let b = phi.free_block();
    let r = b.len();
    let m = if r == 0 { Some(BigInt::zero()) } else { scalar_of(&b) };
    if let Some(m) = m {
        let a0 = phi.sub(&Endo::scalar(a, &m))?.kernel();
        return Ok(InertialCertificate::MultiplicationInteger { m, a0 });
    }
    find_witness(phi, height)?.ok_or(Error::CapExceeded { cap: height as usize })
}

fn scalar_of(b: &[Vec<BigInt>]) -> Option<BigInt> {
    let m = b[0][0].clone();
    let ok = b.iter().enumerate().all(|(i, row)| {
        row.iter().enumerate().all(|(j, x)| if i == j { *x == m } else { x.is_zero() })
    });
    ok.then_some(m)
}

/// Cyclic subgroups `⟨v⟩` on the free coordinates, by increasing height
/// then by coordinates in the order 0, 1, -1, 2, -2, …, until one has infinite strict inert index.
pub fn find_witness(phi: &Endo, height: u32) -> Result<Option<InertialCertificate>> {
    let a = phi.ambient();
    let k = a.torsion_len();
    let r = a.free_rank();
    for hgt in 1..=height as i64 {
        let base = (2 * hgt + 1) as u64;
        let count = base.checked_pow(r as u32).ok_or(Error::CapExceeded { cap: height as usize })?;
        for idx in 0..count {
            let mut rest = idx;
            let v: Vec<i64> = (0..r)
                .map(|_| {
                    // digits 0, 1, 2, 3, … read as 0, 1, -1, 2, -2, …
                    let d = (rest % base) as i64;
                    rest /= base;
                    if d % 2 == 1 { (d + 1) / 2 } else { -d / 2 }
                })
                .rev()
                .collect();
            if !v.iter().any(|x| x.abs() == hgt) || !first_nonzero_positive(&v) {
                continue;
            }
            let mut coords = vec![BigInt::zero(); k];
            coords.extend(v.iter().map(|&x| BigInt::from(x)));
            let w = Subgroup::from_rows(a, &[coords])?;
            let idx = strict_inert_index(phi, &w)?;
            if !idx.is_finite() {
                return Ok(Some(InertialCertificate::NonInertialWitness { witness: w, strict_index: idx }));
            }
        }
    }
    Ok(None)
}

fn first_nonzero_positive(v: &[i64]) -> bool {
    v.iter().find(|x| **x != 0).is_some_and(|x| *x > 0)
}

/// Multiplication by the integer `m` on `A`.
pub fn make_multiplication(a: &FgAbGroup, m: &BigInt) -> Endo {
    Endo::scalar(a, m)
}

/// Multiplication by `m/n` on `A`: needs `A = nA` and no `n`-torsion, which
/// for a f.g. group means `A` finite with exponent prime to `n`.
pub fn make_rational_multiplication(a: &FgAbGroup, m: &BigInt, n: &BigInt) -> Result<Endo> {
    if n.is_zero() {
        return Err(Error::InvalidArgument("zero denominator".into()));
    }
    let g = m.gcd(n);
    let (m, n) = (m / &g, n / &g);
    if n == BigInt::one() || n == -BigInt::one() {
        return Ok(Endo::scalar(a, &(m * n)));
    }
    let e = a.torsion_exponent();
    if !a.is_finite() || !n.gcd(&e).is_one() {
        return Err(Error::NotDivisible(n.to_string()));
    }
    // n is a unit mod the exponent
    let inv = n.modinv(&e).ok_or_else(|| Error::NotDivisible(n.to_string()))?;
    Ok(Endo::scalar(a, &(m * inv)))
}

pub fn make_rational_space_multiplication(dim: usize, q: &BigRational) -> RationalEndo {
    RationalEndo::scalar(dim, q)
}

/// The integer `m` (least non-negative on a finite group) with `φ = m·id`.
pub fn is_multiplication(phi: &Endo) -> Option<BigInt> {
    let a = phi.ambient();
    let b = phi.free_block();
    let m = if !b.is_empty() {
        b[0][0].clone()
    } else if a.torsion_len() > 0 {
        // d_1 | … | d_k, so m mod d_k decides every coordinate
        let k = a.torsion_len() - 1;
        phi.matrix()[k][k].clone()
    } else {
        BigInt::zero()
    };
    (Endo::scalar(a, &m) == *phi).then_some(m)
}

/// Outcome of the inertial decision for `φ` on `Q^n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RationalInertialCertificate {
    MultiplicationRational { q: BigRational },
    NonInertialWitness { witness: RationalLattice, strict_index: Index },
}

impl RationalInertialCertificate {
    pub fn is_inertial(&self) -> bool {
        matches!(self, RationalInertialCertificate::MultiplicationRational { .. })
    }
}

/// Every f.g. subgroup of `Q^n` is `φ`-inert iff `φ` is a rational scalar.
/// Otherwise some `e_i` or `e_i + e_j` is not an eigenvector, and its
/// cyclic lattice is the witness.
pub fn is_inertial_rational(phi: &RationalEndo) -> Result<RationalInertialCertificate> {
    if let Some(q) = phi.scalar_value() {
        return Ok(RationalInertialCertificate::MultiplicationRational { q });
    }
    let n = phi.dim();
    let unit = |i: usize| -> Vec<BigRational> {
        (0..n).map(|k| if k == i { BigRational::one() } else { BigRational::zero() }).collect()
    };
    let mut candidates: Vec<Vec<BigRational>> = (0..n).map(unit).collect();
    for i in 0..n {
        for j in i + 1..n {
            candidates.push(unit(i).iter().zip(unit(j)).map(|(a, b)| a + b).collect());
        }
    }
    for v in candidates {
        let w = RationalLattice::from_generators(n, &[v])?;
        let idx = strict_inert_index(phi, &w)?;
        if !idx.is_finite() {
            return Ok(RationalInertialCertificate::NonInertialWitness { witness: w, strict_index: idx });
        }
    }
    unreachable!("a non-scalar matrix moves some e_i or e_i + e_j off its line")
}

/// `ker(φ - 1)` has finite index.
pub fn is_finitary(phi: &Endo) -> bool {
    let a = phi.ambient();
    phi.sub(&Endo::identity(a)).map(|d| d.kernel().index_in_ambient().is_finite()).unwrap_or(false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::RationalSpace;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn commensurability_examples() {
        let z = FgAbGroup::free(1);
        let two = Subgroup::from_i64_rows(&z, &[&[2]]).unwrap();
        let three = Subgroup::from_i64_rows(&z, &[&[3]]).unwrap();
        assert!(commensurable(&z, &two, &three).unwrap());
        assert_eq!(two.index(&three).unwrap(), Index::finite(3));
        assert!(!almost_contained(&z, &Subgroup::whole(&z), &Subgroup::zero(&z)).unwrap());
        let z2 = FgAbGroup::free(2);
        let e1 = Subgroup::from_i64_rows(&z2, &[&[1, 0]]).unwrap();
        let d = Subgroup::from_i64_rows(&z2, &[&[1, 2]]).unwrap();
        assert!(!commensurable(&z2, &e1, &d).unwrap());
        let z1 = FgAbGroup::free(1);
        assert_eq!(almost_contained(&z2, &e1, &Subgroup::whole(&z1)), Err(Error::AmbientMismatch));
    }

    #[test]
    fn inert_index_examples() {
        let half = RationalEndo::scalar(1, &q(1, 2));
        let z = RationalLattice::standard(1);
        assert_eq!(inert_index(&half, &z).unwrap(), InertVerdict { inert: true, index: Index::finite(2) });

        let z2 = FgAbGroup::free(2);
        let shear = Endo::from_i64(&z2, &[&[1, 1], &[0, 1]]).unwrap();
        let e2 = Subgroup::from_i64_rows(&z2, &[&[0, 1]]).unwrap();
        // x ↦ Mx sends e2 to e1 + e2, meeting <e2> trivially
        assert_eq!(inert_index(&shear, &e2).unwrap().index, Index::Infinite);
        let e1 = Subgroup::from_i64_rows(&z2, &[&[1, 0]]).unwrap();
        assert_eq!(inert_index(&shear, &e1).unwrap().index, Index::one());

        let z1 = FgAbGroup::free(1);
        let three = Endo::scalar(&z1, &BigInt::from(3));
        let two = Subgroup::from_i64_rows(&z1, &[&[2]]).unwrap();
        assert_eq!(inert_index(&three, &two).unwrap().index, Index::one());
    }

    #[test]
    fn strict_index_examples() {
        let z = RationalLattice::standard(1);
        let three_halves = RationalEndo::scalar(1, &q(3, 2));
        assert_eq!(strict_inert_index(&three_halves, &z).unwrap(), Index::finite(2));
        let z2 = FgAbGroup::free(2);
        let shear = Endo::from_i64(&z2, &[&[1, 1], &[0, 1]]).unwrap();
        let e2 = Subgroup::from_i64_rows(&z2, &[&[0, 1]]).unwrap();
        assert_eq!(strict_inert_index(&shear, &e2).unwrap(), Index::Infinite);
        let e1 = Subgroup::from_i64_rows(&z2, &[&[1, 0]]).unwrap();
        assert_eq!(strict_inert_index(&shear, &e1).unwrap(), Index::one());
    }

    #[test]
    fn iterated_examples() {
        let z = RationalLattice::standard(1);
        let half = RationalEndo::scalar(1, &q(1, 2));
        assert_eq!(iterated_inert_index(&half, &z, 3).unwrap(), Index::finite(8));
        assert_eq!(iterated_inert_index(&half, &z, 0).unwrap(), Index::one());
        let two = RationalEndo::scalar(1, &q(2, 1));
        assert_eq!(iterated_inert_index(&two, &z, 2).unwrap(), Index::one());
        assert_eq!(iterated_inert_index(&two, &z, -2).unwrap(), Index::finite(4));
        let zero = RationalEndo::scalar(1, &q(0, 1));
        assert!(iterated_inert_index(&zero, &z, -1).is_err());
        let _ = RationalSpace::new(1);
    }

    #[test]
    fn inertial_endomorphism_examples() {
        let a = FgAbGroup::new(vec![BigInt::from(4)], 2).unwrap();
        let five = make_multiplication(&a, &BigInt::from(5));
        match is_inertial_endomorphism(&five).unwrap() {
            InertialCertificate::MultiplicationInteger { m, a0 } => {
                assert_eq!(m, BigInt::from(5));
                assert_eq!(a0, Subgroup::whole(&a));
            }
            other => panic!("{other:?}"),
        }
        let z2 = FgAbGroup::free(2);
        let shear = Endo::from_i64(&z2, &[&[1, 1], &[0, 1]]).unwrap();
        match is_inertial_endomorphism(&shear).unwrap() {
            InertialCertificate::NonInertialWitness { witness, strict_index } => {
                assert_eq!(witness, Subgroup::from_i64_rows(&z2, &[&[0, 1]]).unwrap());
                assert_eq!(strict_index, Index::Infinite);
            }
            other => panic!("{other:?}"),
        }
        let fin = FgAbGroup::new(vec![BigInt::from(2), BigInt::from(4)], 0).unwrap();
        let phi = Endo::from_i64(&fin, &[&[1, 0], &[2, 3]]).unwrap();
        assert!(is_inertial_endomorphism(&phi).unwrap().is_inertial());
        // diagonal non-scalar needs the e1 + e2 witness
        let diag = Endo::from_i64(&z2, &[&[2, 0], &[0, 3]]).unwrap();
        match is_inertial_endomorphism(&diag).unwrap() {
            InertialCertificate::NonInertialWitness { witness, .. } => {
                assert_eq!(witness, Subgroup::from_i64_rows(&z2, &[&[1, 1]]).unwrap())
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn scalar_with_torsion_noise_keeps_finite_index_a0() {
        // φ = 3 on the free part but mixes torsion into it
        let a = FgAbGroup::new(vec![BigInt::from(6)], 1).unwrap();
        let phi = Endo::from_i64(&a, &[&[1, 2], &[0, 3]]).unwrap();
        let InertialCertificate::MultiplicationInteger { m, a0 } = is_inertial_endomorphism(&phi).unwrap() else {
            panic!()
        };
        assert_eq!(m, BigInt::from(3));
        assert!(a0.index_in_ambient().is_finite());
        assert_eq!(phi.image_of(&a0).unwrap().sum(&a0).unwrap(), a0);
    }

    #[test]
    fn multiplications() {
        let z5 = FgAbGroup::cyclic(5);
        let three = make_multiplication(&z5, &BigInt::from(3));
        assert_eq!(is_multiplication(&three), Some(BigInt::from(3)));
        let z = FgAbGroup::free(1);
        assert_eq!(
            make_rational_multiplication(&z, &BigInt::one(), &BigInt::from(2)),
            Err(Error::NotDivisible("2".into()))
        );
        // 1/2 on Z/5 is 3
        assert_eq!(make_rational_multiplication(&z5, &BigInt::one(), &BigInt::from(2)).unwrap(), three);
        let q = make_rational_space_multiplication(1, &BigRational::new(3.into(), 2.into()));
        assert_eq!(q.scalar_value(), Some(BigRational::new(3.into(), 2.into())));
        let z2 = FgAbGroup::free(2);
        assert_eq!(is_multiplication(&Endo::from_i64(&z2, &[&[2, 1], &[0, 2]]).unwrap()), None);
        assert_eq!(is_multiplication(&Endo::identity(&FgAbGroup::free(0))), Some(BigInt::zero()));
    }

    #[test]
    fn finitary_examples() {
        let z = FgAbGroup::free(1);
        assert!(is_finitary(&Endo::identity(&z)));
        assert!(!is_finitary(&Endo::scalar(&z, &BigInt::from(2))));
        let a = FgAbGroup::new(vec![BigInt::from(8)], 2).unwrap();
        let phi = Endo::from_i64(&a, &[&[3, 1, 5], &[0, 1, 0], &[0, 0, 1]]).unwrap();
        assert!(is_finitary(&phi));
        let shear = Endo::from_i64(&FgAbGroup::free(2), &[&[1, 1], &[0, 1]]).unwrap();
        assert!(!is_finitary(&shear));
    }

    #[test]
    fn rational_inertial() {
        let half = RationalEndo::from_i64(&[&[1, 0], &[0, 1]], 2).unwrap();
        assert!(is_inertial_rational(&half).unwrap().is_inertial());
        let diag = RationalEndo::from_i64(&[&[1, 0], &[0, 2]], 1).unwrap();
        let RationalInertialCertificate::NonInertialWitness { witness, strict_index } = is_inertial_rational(&diag).unwrap()
        else {
            panic!("distinct eigenvalues are not inertial")
        };
        assert_eq!(strict_index, Index::Infinite);
        assert_eq!(witness, RationalLattice::from_i64_rows(2, &[&[1, 1]]).unwrap());
    }
}
