//! `Q^n`, its finitely generated subgroups and rational endomorphisms.

mod charpoly;
mod endo;
mod lattice;

pub use charpoly::charpoly_integer;
pub use endo::{RatMatrix, RationalEndo};
pub use lattice::{RationalLattice, RationalSpace};
