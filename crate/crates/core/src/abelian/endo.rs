use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::group::{FgAbGroup, GroupElement};
use super::subgroup::Subgroup;
use crate::error::{Error, Result};
use crate::index::Index;
use crate::lattice::{identity, mat_mul, mat_vec, solve_modulo, unit_vec, IntMatrix};
use crate::model::{EndoAction, Powers};

/// An endomorphism of an [`FgAbGroup`], acting on coordinate columns by
/// `x ↦ M x`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Endo {
    ambient: FgAbGroup,
    matrix: IntMatrix,
}

impl Endo {
    /// Checks `M·Λ ⊆ Λ`: in each torsion column `i`, `d_j | d_i M_ji` for
    /// torsion rows and `M_ji = 0` for free rows. Torsion rows are reduced
    /// modulo `d_j`, so equal maps get equal matrices.
    pub fn new(ambient: &FgAbGroup, mut matrix: IntMatrix) -> Result<Self> {
        let n = ambient.dim();
        if matrix.len() != n || matrix.iter().any(|r| r.len() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: matrix.iter().map(Vec::len).find(|&l| l != n).unwrap_or(matrix.len()),
            });
        }
        let d = ambient.invariant_factors();
        let k = d.len();
        for i in 0..k {
            for j in 0..n {
                let ok = if j < k {
                    (&d[i] * &matrix[j][i]).is_multiple_of(&d[j])
                } else {
                    matrix[j][i].is_zero()
                };
                if !ok {
                    return Err(Error::IncompatibleEndomorphism(format!(
                        "entry ({j}, {i}) = {} does not respect the relation d_{i} = {}",
                        matrix[j][i], d[i]
                    )));
                }
            }
        }
        for (row, dj) in matrix.iter_mut().zip(d) {
            for x in row.iter_mut() {
                *x = x.mod_floor(dj);
            }
        }
        Ok(Self { ambient: ambient.clone(), matrix })
    }

    pub fn from_i64(ambient: &FgAbGroup, rows: &[&[i64]]) -> Result<Self> {
        let m = rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
        Self::new(ambient, m)
    }

    pub fn identity(ambient: &FgAbGroup) -> Self {
        Self::scalar(ambient, &BigInt::one())
    }

    pub fn zero(ambient: &FgAbGroup) -> Self {
        Self::scalar(ambient, &BigInt::zero())
    }

    /// Multiplication by the integer `m`.
    pub fn scalar(ambient: &FgAbGroup, m: &BigInt) -> Self {
        let n = ambient.dim();
        let mut matrix = identity(n);
        for (i, row) in matrix.iter_mut().enumerate() {
            row[i] = m.clone();
        }
        Self::new(ambient, matrix).expect("scalars are always compatible")
    }

    pub fn ambient(&self) -> &FgAbGroup {
        &self.ambient
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    /// The induced map on the free quotient `A / t(A)`.
    pub fn free_block(&self) -> IntMatrix {
        let k = self.ambient.torsion_len();
        self.matrix[k..].iter().map(|r| r[k..].to_vec()).collect()
    }

    pub fn apply(&self, x: &GroupElement) -> Result<GroupElement> {
        self.ambient.check_dim(x.coords().len())?;
        GroupElement::new(&self.ambient, mat_vec(&self.matrix, x.coords()))
    }

    fn check(&self, h: &Subgroup) -> Result<()> {
        if h.ambient() != &self.ambient {
            return Err(Error::AmbientMismatch);
        }
        Ok(())
    }

    /// `φ(H)`.
    pub fn image_of(&self, h: &Subgroup) -> Result<Subgroup> {
        self.check(h)?;
        Ok(Subgroup::from_lattice(&self.ambient, h.lattice().image(&self.matrix)?))
    }

    /// `φ^{-1}(K)`.
    pub fn preimage(&self, k: &Subgroup) -> Result<Subgroup> {
        self.preimage_in(&Subgroup::whole(&self.ambient), k)
    }

    /// `{x ∈ H : φ(x) ∈ K}`.
    pub fn preimage_in(&self, h: &Subgroup, k: &Subgroup) -> Result<Subgroup> {
        self.check(h)?;
        self.check(k)?;
        let l = h.lattice().preimage_within(&self.matrix, k.lattice())?;
        Ok(Subgroup::from_lattice(&self.ambient, l))
    }

    pub fn kernel(&self) -> Subgroup {
        self.preimage(&Subgroup::zero(&self.ambient)).expect("same ambient")
    }

    pub fn image(&self) -> Subgroup {
        self.image_of(&Subgroup::whole(&self.ambient)).expect("same ambient")
    }

    /// `|A / φ(A)|`.
    pub fn cokernel_order(&self) -> Index {
        self.image().index_in_ambient()
    }

    fn same(&self, other: &Endo) -> Result<()> {
        if self.ambient != other.ambient {
            return Err(Error::AmbientMismatch);
        }
        Ok(())
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Endo) -> Result<Endo> {
        self.same(other)?;
        Endo::new(&self.ambient, mat_mul(&self.matrix, &other.matrix))
    }

    pub fn add(&self, other: &Endo) -> Result<Endo> {
        self.same(other)?;
        let m = self
            .matrix
            .iter()
            .zip(&other.matrix)
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x + y).collect())
            .collect();
        Endo::new(&self.ambient, m)
    }

    pub fn sub(&self, other: &Endo) -> Result<Endo> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Endo {
        let m = self.matrix.iter().map(|r| r.iter().map(|x| -x).collect()).collect();
        Endo::new(&self.ambient, m).expect("negation preserves compatibility")
    }

    pub fn is_automorphism(&self) -> bool {
        self.kernel().is_zero() && self.cokernel_order() == Index::one()
    }

    /// Inverse automorphism; each column solves `M x ≡ e_i (mod Λ)`.
    pub fn inverse_endo(&self) -> Result<Endo> {
        if !self.is_automorphism() {
            return Err(Error::NotInvertible);
        }
        let n = self.ambient.dim();
        let lam = self.ambient.relation_lattice();
        let mut cols = Vec::with_capacity(n);
        for i in 0..n {
            let x = solve_modulo(&self.matrix, &unit_vec(n, i), &lam).ok_or(Error::NotInvertible)?;
            cols.push(x);
        }
        let m = (0..n).map(|j| cols.iter().map(|c| c[j].clone()).collect()).collect();
        Endo::new(&self.ambient, m)
    }
}

impl Powers for Endo {
    fn compose(&self, other: &Self) -> Result<Self> {
        Endo::compose(self, other)
    }

    fn identity_like(&self) -> Self {
        Endo::identity(&self.ambient)
    }

    fn inverse(&self) -> Result<Self> {
        self.inverse_endo()
    }
}

impl EndoAction for Endo {
    type Space = FgAbGroup;

    fn space(&self) -> &FgAbGroup {
        &self.ambient
    }

    fn image(&self, h: &Subgroup) -> Result<Subgroup> {
        self.image_of(h)
    }

    fn preimage_within(&self, h: &Subgroup, k: &Subgroup) -> Result<Subgroup> {
        self.preimage_in(h, k)
    }
}
