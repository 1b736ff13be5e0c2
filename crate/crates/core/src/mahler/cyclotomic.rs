use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_traits::One;

use crate::poly::IntPolynomial;

pub fn totient(mut n: u64) -> u64 {
    let mut result = n;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

fn cache() -> &'static Mutex<HashMap<u64, IntPolynomial>> {
    static CACHE: OnceLock<Mutex<HashMap<u64, IntPolynomial>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// The `n`-th cyclotomic polynomial, `Φ_n = (t^n - 1) / Π_{d | n, d < n} Φ_d`.
pub fn cyclotomic(n: u64) -> IntPolynomial {
    assert!(n >= 1);
    if let Some(p) = cache().lock().unwrap().get(&n) {
        return p.clone();
    }
    let mut p = IntPolynomial::x_pow_minus_one(n as usize);
    for d in 1..n {
        if n % d == 0 {
            p = p.exact_div(&cyclotomic(d)).expect("Φ_d divides t^n - 1");
        }
    }
    cache().lock().unwrap().insert(n, p.clone());
    p
}

/// Orders `n` whose cyclotomic polynomial could divide a polynomial of
/// degree `d`: `φ(n) ≤ d`, and `φ(n) ≥ sqrt(n/2)` bounds `n ≤ 2d²`.
pub fn candidate_orders(d: usize) -> impl Iterator<Item = u64> {
    let bound = 2 * (d as u64) * (d as u64);
    (1..=bound.max(2)).filter(move |&n| totient(n) <= d as u64)
}

/// Divide out every cyclotomic factor (with multiplicity).
///
/// Returns the removed `(order, multiplicity)` pairs and the cofactor.
pub fn remove_cyclotomic_factors(f: &IntPolynomial) -> (Vec<(u64, u32)>, IntPolynomial) {
    let mut rest = f.clone();
    let mut removed = Vec::new();
    let d = f.degree().unwrap_or(0);
    for n in candidate_orders(d) {
        let deg = rest.degree().unwrap_or(0);
        if deg == 0 {
            break;
        }
        if totient(n) as usize > deg {
            continue;
        }
        let phi = cyclotomic(n);
        let mut mult = 0;
        while let Some(q) = rest.exact_div(&phi) {
            rest = q;
            mult += 1;
        }
        if mult > 0 {
            removed.push((n, mult));
        }
    }
    (removed, rest)
}

/// Kronecker's criterion: a primitive `f` has Mahler measure zero iff it
/// is monic and, after removing the factors `t`, a product of cyclotomic
/// polynomials.
pub fn kronecker_test(f: &IntPolynomial) -> bool {
    let Ok(f) = f.primitive_part() else { return false };
    let (_, f) = f.strip_t_powers();
    if !f.is_monic() {
        return false;
    }
    let (_, rest) = remove_cyclotomic_factors(&f);
    rest.degree() == Some(0) && rest.leading().is_some_and(One::is_one)
}
