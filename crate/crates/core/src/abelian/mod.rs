//! Finitely generated abelian groups in invariant-factor form, their
//! subgroups and endomorphisms.

mod endo;
mod group;
mod subgroup;

pub use endo::Endo;
pub use group::{canonicalize_presentation, FgAbGroup, GroupElement};
pub use subgroup::Subgroup;
