use rayon::prelude::*;

use super::cyclotomic::kronecker_test;
use super::measure::{mahler_measure_with, MahlerConfig, MahlerResult};
use super::roots::{approximate_roots, RootSchedule};
use crate::error::{Error, Result};
use crate::poly::IntPolynomial;

/// Largest enumeration the scan accepts.
pub const SCAN_LIMIT: u64 = 20_000_000;

/// Uncertified f64 estimate of the measure of a monic polynomial.
fn rough_measure(c: &[i64]) -> f64 {
    let a: Vec<f64> = c.iter().map(|&x| x as f64).collect();
    let (z, _) = approximate_roots(&a, RootSchedule::AberthCircle, 80);
    z.iter().map(|r| r.norm().ln().max(0.0)).sum()
}

/// Coefficients of the `idx`-th monic polynomial of degree `d` with
/// lower coefficients in `[-h, h]` and nonzero constant term.
fn decode(idx: u64, d: usize, h: i64) -> Option<Vec<i64>> {
    let base = (2 * h + 1) as u64;
    let mut rest = idx;
    let mut c = Vec::with_capacity(d + 1);
    for _ in 0..d {
        c.push((rest % base) as i64 - h);
        rest /= base;
    }
    c.push(1);
    (c[0] != 0).then_some(c)
}

/// Monic integer polynomials of degree `1..=degree_max` with coefficients
/// bounded by `height_max`, nonzero constant term, not products of
/// cyclotomics, and measure below `threshold`; sorted by measure then by
/// coefficients.
pub fn small_measure_scan(
    degree_max: usize,
    height_max: u32,
    threshold: f64,
    cfg: &MahlerConfig,
) -> Result<Vec<(IntPolynomial, MahlerResult)>> {
    let base = 2 * height_max as u64 + 1;
    let mut total: u64 = 0;
    let mut sizes = Vec::new();
    for d in 1..=degree_max {
        let n = base
            .checked_pow(d as u32)
            .filter(|n| total.saturating_add(*n) <= SCAN_LIMIT)
            .ok_or(Error::BudgetExceeded(SCAN_LIMIT as usize))?;
        total += n;
        sizes.push((d, n));
    }
    if threshold <= 0.0 {
        return Ok(Vec::new());
    }
    let h = height_max as i64;
    let mut found: Vec<(IntPolynomial, MahlerResult)> = Vec::new();
    for (d, n) in sizes {
        let part: Result<Vec<_>> = (0..n)
            .into_par_iter()
            .filter_map(|idx| decode(idx, d, h))
            .filter(|c| rough_measure(c) < threshold + 0.05)
            .map(|c| IntPolynomial::from_i64(&c))
            .filter(|f| !kronecker_test(f))
            .map(|f| mahler_measure_with(&f, cfg).map(|r| (f, r)))
            .filter(|r| r.as_ref().map_or(true, |(_, m)| m.value < threshold))
            .collect();
        found.extend(part?);
    }
    found.sort_by(|a, b| a.1.value.total_cmp(&b.1.value).then_with(|| a.0.cmp(&b.0)));
    Ok(found)
}
