//! Exact decision procedures for inert subgroups and the algebraic entropy
//! family on representable abelian group models.

pub mod abelian;
pub mod entropy;
pub mod error;
pub mod fully_inert;
pub mod index;
pub mod inertia;
pub mod lattice;
pub mod mahler;
pub mod model;
pub mod models;
pub mod poly;
pub mod rational;

pub use error::{Error, Result};
pub use index::Index;
