use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::charpoly::charpoly_integer;
use super::lattice::{lcm_of_denominators, RationalLattice, RationalSpace};
use crate::error::{Error, Result};
use crate::lattice::IntLattice;
use crate::model::{EndoAction, Powers};
use crate::poly::IntPolynomial;

pub type RatMatrix = Vec<Vec<BigRational>>;

/// An endomorphism of `Q^n` given by a rational matrix acting on columns.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RationalEndo {
    space: RationalSpace,
    matrix: RatMatrix,
}

fn rat(x: i64) -> BigRational {
    BigRational::from_integer(x.into())
}

impl RationalEndo {
    pub fn new(matrix: RatMatrix) -> Result<Self> {
        let n = matrix.len();
        if let Some(r) = matrix.iter().find(|r| r.len() != n) {
            return Err(Error::DimensionMismatch { expected: n, found: r.len() });
        }
        Ok(Self { space: RationalSpace::new(n), matrix })
    }

    /// Integer matrix divided entrywise by `den`.
    pub fn from_i64(rows: &[&[i64]], den: i64) -> Result<Self> {
        if den == 0 {
            return Err(Error::InvalidArgument("zero denominator".into()));
        }
        Self::new(
            rows.iter()
                .map(|r| r.iter().map(|&x| BigRational::new(x.into(), den.into())).collect())
                .collect(),
        )
    }

    pub fn scalar(dim: usize, c: &BigRational) -> Self {
        let matrix = (0..dim)
            .map(|i| (0..dim).map(|j| if i == j { c.clone() } else { BigRational::zero() }).collect())
            .collect();
        Self { space: RationalSpace::new(dim), matrix }
    }

    pub fn identity(dim: usize) -> Self {
        Self::scalar(dim, &BigRational::one())
    }

    pub fn dim(&self) -> usize {
        self.space.dim
    }

    pub fn matrix(&self) -> &RatMatrix {
        &self.matrix
    }

    /// `(A, d)` with `A` integral and `M = A / d`, `d` minimal.
    pub fn integer_form(&self) -> (Vec<Vec<BigInt>>, BigInt) {
        let d = lcm_of_denominators(self.matrix.iter().flatten());
        let a = self
            .matrix
            .iter()
            .map(|r| r.iter().map(|x| (x * &d).to_integer()).collect())
            .collect();
        (a, d)
    }

    pub fn apply(&self, v: &[BigRational]) -> Vec<BigRational> {
        self.matrix
            .iter()
            .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn image_of(&self, l: &RationalLattice) -> Result<RationalLattice> {
        if l.dim() != self.dim() {
            return Err(Error::AmbientMismatch);
        }
        let gens: Vec<_> = l.basis().iter().map(|b| self.apply(b)).collect();
        RationalLattice::from_generators(self.dim(), &gens)
    }

    /// `{x ∈ H : φ(x) ∈ K}`, computed on coefficient vectors over the basis of `H`.
    pub fn preimage_in(&self, h: &RationalLattice, k: &RationalLattice) -> Result<RationalLattice> {
        if h.dim() != self.dim() || k.dim() != self.dim() {
            return Err(Error::AmbientMismatch);
        }
        let hb = h.basis();
        let images: Vec<Vec<BigRational>> = hb.iter().map(|b| self.apply(b)).collect();
        let e = lcm_of_denominators(images.iter().flatten()).lcm(k.denominator());
        // column j of `q` is the scaled image of basis vector j
        let n = self.dim();
        let q: Vec<Vec<BigInt>> = (0..n)
            .map(|i| images.iter().map(|img| (&img[i] * &e).to_integer()).collect())
            .collect();
        let coeffs = IntLattice::full(hb.len()).preimage_within(&q, &k.at_scale(&e))?;
        let gens: Vec<Vec<BigRational>> = coeffs
            .basis()
            .iter()
            .map(|a| {
                (0..n)
                    .map(|j| {
                        a.iter()
                            .zip(&hb)
                            .map(|(c, b)| BigRational::from_integer(c.clone()) * &b[j])
                            .sum()
                    })
                    .collect()
            })
            .collect();
        RationalLattice::from_generators(n, &gens)
    }

    pub fn compose(&self, other: &RationalEndo) -> Result<RationalEndo> {
        if self.dim() != other.dim() {
            return Err(Error::AmbientMismatch);
        }
        let n = self.dim();
        let m = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| (0..n).map(|k| &self.matrix[i][k] * &other.matrix[k][j]).sum())
                    .collect()
            })
            .collect();
        RationalEndo::new(m)
    }

    pub fn add(&self, other: &RationalEndo) -> Result<RationalEndo> {
        if self.dim() != other.dim() {
            return Err(Error::AmbientMismatch);
        }
        RationalEndo::new(
            self.matrix
                .iter()
                .zip(&other.matrix)
                .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x + y).collect())
                .collect(),
        )
    }

    /// Gauss-Jordan inverse over `Q`.
    pub fn inverse_endo(&self) -> Result<RationalEndo> {
        let n = self.dim();
        let mut a: Vec<Vec<BigRational>> = self
            .matrix
            .iter()
            .enumerate()
            .map(|(i, r)| {
                let mut row = r.clone();
                row.extend((0..n).map(|j| if i == j { rat(1) } else { rat(0) }));
                row
            })
            .collect();
        for c in 0..n {
            let p = (c..n).find(|&i| !a[i][c].is_zero()).ok_or(Error::NotInvertible)?;
            a.swap(c, p);
            let inv = a[c][c].recip();
            for x in a[c].iter_mut() {
                *x *= &inv;
            }
            for i in 0..n {
                if i != c && !a[i][c].is_zero() {
                    let f = a[i][c].clone();
                    let (pivot, other) = if i < c {
                        let (lo, hi) = a.split_at_mut(c);
                        (&hi[0], &mut lo[i])
                    } else {
                        let (lo, hi) = a.split_at_mut(i);
                        (&lo[c], &mut hi[0])
                    };
                    for (x, y) in other.iter_mut().zip(pivot) {
                        *x -= &f * y;
                    }
                }
            }
        }
        RationalEndo::new(a.into_iter().map(|r| r[n..].to_vec()).collect())
    }

    /// `P φ P^{-1}`.
    pub fn conjugate_by(&self, p: &RationalEndo) -> Result<RationalEndo> {
        p.compose(self)?.compose(&p.inverse_endo()?)
    }

    /// Is this `c · id` for some rational `c`?
    pub fn scalar_value(&self) -> Option<BigRational> {
        let n = self.dim();
        if n == 0 {
            return Some(BigRational::zero());
        }
        let c = self.matrix[0][0].clone();
        for i in 0..n {
            for j in 0..n {
                let want = if i == j { &c } else { &BigRational::zero() };
                if &self.matrix[i][j] != want {
                    return None;
                }
            }
        }
        Some(c)
    }

    /// Characteristic polynomial with denominators cleared and content
    /// removed, leading coefficient positive.
    pub fn charpoly_primitive(&self) -> IntPolynomial {
        let (a, d) = self.integer_form();
        let n = self.dim();
        // det(tI - A/d) = d^{-n} χ_A(d t); multiply through by d^n.
        let chi = charpoly_integer(&a);
        let mut coeffs = Vec::with_capacity(n + 1);
        let mut dp = BigInt::one();
        for c in chi.coeffs() {
            coeffs.push(c * &dp);
            dp *= &d;
        }
        IntPolynomial::new(coeffs).primitive_part().expect("characteristic polynomials are nonzero")
    }

    /// Block upper-triangular matrix `[[a, c], [0, b]]`.
    pub fn block_upper(a: &RationalEndo, b: &RationalEndo, corner: &RatMatrix) -> Result<RationalEndo> {
        let (n, m) = (a.dim(), b.dim());
        if corner.len() != n || corner.iter().any(|r| r.len() != m) {
            return Err(Error::DimensionMismatch { expected: m, found: corner.first().map_or(0, Vec::len) });
        }
        let mut rows = Vec::with_capacity(n + m);
        for i in 0..n {
            let mut r = a.matrix[i].clone();
            r.extend(corner[i].iter().cloned());
            rows.push(r);
        }
        for i in 0..m {
            let mut r = vec![BigRational::zero(); n];
            r.extend(b.matrix[i].iter().cloned());
            rows.push(r);
        }
        RationalEndo::new(rows)
    }
}

impl Powers for RationalEndo {
    fn compose(&self, other: &Self) -> Result<Self> {
        RationalEndo::compose(self, other)
    }

    fn identity_like(&self) -> Self {
        RationalEndo::identity(self.dim())
    }

    fn inverse(&self) -> Result<Self> {
        self.inverse_endo()
    }
}

impl EndoAction for RationalEndo {
    type Space = RationalSpace;

    fn space(&self) -> &RationalSpace {
        &self.space
    }

    fn image(&self, h: &RationalLattice) -> Result<RationalLattice> {
        self.image_of(h)
    }

    fn preimage_within(&self, h: &RationalLattice, k: &RationalLattice) -> Result<RationalLattice> {
        self.preimage_in(h, k)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn image_examples() {
        let half = RationalEndo::scalar(1, &q(1, 2));
        let z = RationalLattice::standard(1);
        assert_eq!(
            half.image_of(&z).unwrap(),
            RationalLattice::from_generators(1, &[vec![q(1, 2)]]).unwrap()
        );
        let zero = RationalEndo::scalar(1, &q(0, 1));
        assert!(zero.image_of(&z).unwrap().is_zero());
        let shear = RationalEndo::from_i64(&[&[1, 1], &[0, 1]], 1).unwrap();
        assert_eq!(shear.image_of(&RationalLattice::standard(2)).unwrap(), RationalLattice::standard(2));
    }

    #[test]
    fn preimage_within_lattice() {
        // Z ∩ (1/p)^{-1} Z = pZ
        let phi = RationalEndo::scalar(1, &q(1, 3));
        let z = RationalLattice::standard(1);
        let c = phi.preimage_in(&z, &z).unwrap();
        assert_eq!(c, RationalLattice::from_i64_rows(1, &[&[3]]).unwrap());
        // zero map: everything maps into any lattice
        let zero = RationalEndo::scalar(2, &q(0, 1));
        let l = RationalLattice::standard(2);
        assert_eq!(zero.preimage_in(&l, &RationalLattice::zero(2)).unwrap(), l);
    }

    #[test]
    fn inverse_roundtrip() {
        let m = RationalEndo::from_i64(&[&[2, 1], &[1, 1]], 3).unwrap();
        let inv = m.inverse_endo().unwrap();
        assert_eq!(m.compose(&inv).unwrap(), RationalEndo::identity(2));
        assert!(RationalEndo::from_i64(&[&[1, 2], &[2, 4]], 1).unwrap().inverse_endo().is_err());
    }

    #[test]
    fn charpoly_examples() {
        let m = RationalEndo::scalar(1, &q(3, 2));
        assert_eq!(m.charpoly_primitive(), IntPolynomial::from_i64(&[-3, 2]));
        assert_eq!(RationalEndo::identity(2).charpoly_primitive(), IntPolynomial::from_i64(&[1, -2, 1]));
        let fib = RationalEndo::from_i64(&[&[0, 1], &[1, 1]], 1).unwrap();
        assert_eq!(fib.charpoly_primitive(), IntPolynomial::from_i64(&[-1, -1, 1]));
        let d = RationalEndo::new(vec![vec![q(5, 3), q(0, 1)], vec![q(0, 1), q(7, 2)]]).unwrap();
        // (3t - 5)(2t - 7)
        assert_eq!(d.charpoly_primitive(), IntPolynomial::from_i64(&[35, -31, 6]));
    }
}
