//! Finitely supported sequences over a field with the right shift; the
//! dimension model for i-entropy.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::index::Index;
use crate::model::{EndoAction, SubgroupLattice};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Field {
    Prime(u64),
    Rationals,
}

/// `⊕_{n≥0} K` over a prime field or `Q`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LinearShiftSpace {
    field: Field,
}

/// A finite-dimensional subspace, as a reduced row echelon basis over a
/// window of coordinates `[0, window)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LinearSubspace {
    window: usize,
    basis: Vec<Vec<BigRational>>,
}

impl LinearShiftSpace {
    pub fn new(field: Field) -> Result<Self> {
        if let Field::Prime(p) = field {
            if p < 2 || !is_prime(p) {
                return Err(Error::InvalidArgument(format!("{p} is not prime")));
            }
        }
        Ok(Self { field })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    fn norm(&self, x: BigRational) -> BigRational {
        match self.field {
            Field::Rationals => x,
            Field::Prime(p) => {
                let p = BigInt::from(p);
                let den = x.denom().mod_floor(&p);
                let inv = den.modpow(&(&p - 2u32), &p);
                BigRational::from_integer((x.numer() * inv).mod_floor(&p))
            }
        }
    }

    fn inv(&self, x: &BigRational) -> BigRational {
        match self.field {
            Field::Rationals => x.recip(),
            Field::Prime(p) => {
                let p = BigInt::from(p);
                BigRational::from_integer(x.to_integer().modpow(&(&p - 2u32), &p))
            }
        }
    }

    /// Reduced row echelon form; zero rows dropped.
    fn rref(&self, rows: Vec<Vec<BigRational>>, ncols: usize) -> Vec<Vec<BigRational>> {
        let mut m: Vec<Vec<BigRational>> =
            rows.into_iter().map(|r| r.into_iter().map(|x| self.norm(x)).collect()).collect();
        let mut r = 0;
        for c in 0..ncols {
            let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else { continue };
            m.swap(r, p);
            let inv = self.inv(&m[r][c]);
            m[r] = m[r].iter().map(|x| self.norm(x * &inv)).collect();
            for i in 0..m.len() {
                if i != r && !m[i][c].is_zero() {
                    let f = m[i][c].clone();
                    let pivot_row = m[r].clone();
                    for (x, y) in m[i].iter_mut().zip(&pivot_row) {
                        *x = self.norm(&*x - &f * y);
                    }
                }
            }
            r += 1;
        }
        m.truncate(r);
        m
    }

    fn make(&self, window: usize, rows: Vec<Vec<BigRational>>) -> LinearSubspace {
        let basis = self.rref(rows, window);
        // trim trailing all-zero columns
        let used = basis
            .iter()
            .filter_map(|r| r.iter().rposition(|x| !x.is_zero()))
            .max()
            .map_or(0, |i| i + 1);
        let basis = basis.into_iter().map(|mut r| {
            r.truncate(used);
            r
        });
        LinearSubspace { window: used, basis: basis.collect() }
    }

    fn padded(&self, s: &LinearSubspace, len: usize) -> Vec<Vec<BigRational>> {
        s.basis
            .iter()
            .map(|r| {
                let mut r = r.clone();
                r.resize(len, BigRational::zero());
                r
            })
            .collect()
    }

    pub fn subspace(&self, gens: &[Vec<BigRational>]) -> LinearSubspace {
        let len = gens.iter().map(Vec::len).max().unwrap_or(0);
        let rows = gens
            .iter()
            .map(|g| {
                let mut r = g.clone();
                r.resize(len, BigRational::zero());
                r
            })
            .collect();
        self.make(len, rows)
    }

    pub fn subspace_i64(&self, gens: &[&[i64]]) -> LinearSubspace {
        let g: Vec<Vec<BigRational>> =
            gens.iter().map(|r| r.iter().map(|&x| BigRational::from_integer(x.into())).collect()).collect();
        self.subspace(&g)
    }

    /// The line spanned by `e_pos`.
    pub fn coordinate_line(&self, pos: usize) -> LinearSubspace {
        let mut r = vec![BigRational::zero(); pos + 1];
        r[pos] = BigRational::one();
        self.make(pos + 1, vec![r])
    }

    pub fn dimension(&self, s: &LinearSubspace) -> usize {
        s.basis.len()
    }

    pub fn shift(&self, s: &LinearSubspace) -> LinearSubspace {
        let rows = s
            .basis
            .iter()
            .map(|r| {
                let mut v = vec![BigRational::zero()];
                v.extend(r.iter().cloned());
                v
            })
            .collect();
        self.make(s.window + 1, rows)
    }

    fn sum_sub(&self, a: &LinearSubspace, b: &LinearSubspace) -> LinearSubspace {
        let len = a.window.max(b.window);
        let mut rows = self.padded(a, len);
        rows.extend(self.padded(b, len));
        self.make(len, rows)
    }

    /// Zassenhaus: rows `[a | a]` and `[b | 0]`; echelon rows with zero left
    /// half span the intersection.
    fn intersect_sub(&self, a: &LinearSubspace, b: &LinearSubspace) -> LinearSubspace {
        let len = a.window.max(b.window);
        let mut rows = Vec::new();
        for r in self.padded(a, len) {
            let mut v = r.clone();
            v.extend(r);
            rows.push(v);
        }
        for r in self.padded(b, len) {
            let mut v = r;
            v.extend(std::iter::repeat_n(BigRational::zero(), len));
            rows.push(v);
        }
        let e = self.rref(rows, 2 * len);
        let meet = e.into_iter().filter(|r| r[..len].iter().all(Zero::is_zero)).map(|r| r[len..].to_vec()).collect();
        self.make(len, meet)
    }

    fn index_sub(&self, a: &LinearSubspace, b: &LinearSubspace) -> Index {
        let codim = a.basis.len() - self.intersect_sub(a, b).basis.len();
        match self.field {
            Field::Prime(p) => Index::Finite(BigInt::from(p).pow(codim as u32)),
            Field::Rationals if codim == 0 => Index::one(),
            Field::Rationals => Index::Infinite,
        }
    }

    /// `{x ∈ h : shift(x) ∈ k}`.
    fn preimage_sub(&self, h: &LinearSubspace, k: &LinearSubspace) -> LinearSubspace {
        // shift is injective with image the sequences vanishing at 0
        let at0 = {
            let mut rows = Vec::new();
            for j in 1..k.window.max(1) {
                let mut r = vec![BigRational::zero(); k.window.max(1)];
                r[j] = BigRational::one();
                rows.push(r);
            }
            self.make(k.window.max(1), rows)
        };
        let cut = self.intersect_sub(k, &at0);
        let rows = cut.basis.iter().map(|r| r.get(1..).map(<[_]>::to_vec).unwrap_or_default()).collect();
        let back = self.make(cut.window.saturating_sub(1), rows);
        self.intersect_sub(h, &back)
    }
}

fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

impl LinearSubspace {
    pub fn window(&self) -> usize {
        self.window
    }

    pub fn basis(&self) -> &[Vec<BigRational>] {
        &self.basis
    }
}

impl SubgroupLattice for LinearShiftSpace {
    type Sub = LinearSubspace;

    fn sum(&self, a: &LinearSubspace, b: &LinearSubspace) -> Result<LinearSubspace> {
        Ok(self.sum_sub(a, b))
    }

    fn intersect(&self, a: &LinearSubspace, b: &LinearSubspace) -> Result<LinearSubspace> {
        Ok(self.intersect_sub(a, b))
    }

    fn relative_index(&self, a: &LinearSubspace, b: &LinearSubspace) -> Result<Index> {
        Ok(self.index_sub(a, b))
    }
}

/// The right shift on a [`LinearShiftSpace`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinearShift {
    space: LinearShiftSpace,
}

impl LinearShift {
    pub fn new(space: LinearShiftSpace) -> Self {
        Self { space }
    }
}

impl EndoAction for LinearShift {
    type Space = LinearShiftSpace;

    fn space(&self) -> &LinearShiftSpace {
        &self.space
    }

    fn image(&self, h: &LinearSubspace) -> Result<LinearSubspace> {
        Ok(self.space.shift(h))
    }

    fn preimage_within(&self, h: &LinearSubspace, k: &LinearSubspace) -> Result<LinearSubspace> {
        Ok(self.space.preimage_sub(h, k))
    }
}
