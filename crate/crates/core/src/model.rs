//! The two traits every abelian model implements, so that inertness and
//! entropy can be written once for f.g. groups, rational lattices and the
//! Bernoulli shift.

use std::fmt::Debug;

use crate::error::Result;
use crate::index::Index;

/// An ambient group together with the lattice operations on the
/// subgroups the crate can represent in it.
pub trait SubgroupLattice {
    type Sub: Clone + PartialEq + Debug;

    fn sum(&self, a: &Self::Sub, b: &Self::Sub) -> Result<Self::Sub>;

    fn intersect(&self, a: &Self::Sub, b: &Self::Sub) -> Result<Self::Sub>;

    /// `[a : a ∩ b]`.
    fn relative_index(&self, a: &Self::Sub, b: &Self::Sub) -> Result<Index>;
}

pub type SubOf<E> = <<E as EndoAction>::Space as SubgroupLattice>::Sub;

/// An endomorphism acting on the representable subgroups of its space.
pub trait EndoAction {
    type Space: SubgroupLattice;

    fn space(&self) -> &Self::Space;

    fn image(&self, h: &SubOf<Self>) -> Result<SubOf<Self>>;

    /// `{x ∈ h : φ(x) ∈ k}`.
    fn preimage_within(&self, h: &SubOf<Self>, k: &SubOf<Self>) -> Result<SubOf<Self>>;
}

/// Endomorphisms closed under composition and (when invertible) inversion.
pub trait Powers: Sized + Clone {
    fn compose(&self, other: &Self) -> Result<Self>;

    fn identity_like(&self) -> Self;

    fn inverse(&self) -> Result<Self>;

    fn power(&self, k: i64) -> Result<Self> {
        let base = if k < 0 { self.inverse()? } else { self.clone() };
        let mut acc = self.identity_like();
        for _ in 0..k.unsigned_abs() {
            acc = acc.compose(&base)?;
        }
        Ok(acc)
    }
}
