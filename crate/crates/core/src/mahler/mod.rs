//! Integer-polynomial engine: Kronecker detection and certified Mahler
//! measure.

mod cyclotomic;
mod measure;
mod roots;
mod scan;

pub use cyclotomic::{candidate_orders, cyclotomic, kronecker_test, remove_cyclotomic_factors, totient};
pub use measure::{lehmer_polynomial, ln_abs, mahler_measure, mahler_measure_with, MahlerConfig, MahlerResult};
pub use roots::{approximate_roots, components, inclusion_disks, Disk, RootSchedule};
pub use scan::{small_measure_scan, SCAN_LIMIT};
