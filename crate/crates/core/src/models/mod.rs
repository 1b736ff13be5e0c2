//! Concrete models beyond finitely generated groups: Bernoulli shifts,
//! linear shifts, cylinder families and finite Cayley-table groups.

mod cylinder;
mod finite;
mod linear;
mod shift;

pub use cylinder::{cylinder_cotrajectory_index, two_sided_shift_inert_index, CylinderFamily, Sidedness};
pub use finite::{
    finite_group_trajectory, finite_inert_index, minimal_transversal_count, small_group_catalog, FiniteEndo, FiniteGroup,
    Subset, SMALL_GROUP_COUNTS,
};
pub use linear::{Field, LinearShift, LinearShiftSpace, LinearSubspace};
pub use shift::{shift_trajectory_order, BernoulliShift, ShiftElement, ShiftGroup, ShiftSubgroup, DEFAULT_ELEMENT_CAP};
