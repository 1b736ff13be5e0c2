use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{FromPrimitive, One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::cyclotomic::remove_cyclotomic_factors;
use super::roots::{approximate_roots, components, inclusion_disks, RootSchedule};
use crate::error::{Error, Result};
use crate::poly::IntPolynomial;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MahlerConfig {
    pub tol: f64,
    /// Maximum number of sweeps of the root iteration.
    pub budget: usize,
    pub schedule: RootSchedule,
}

impl Default for MahlerConfig {
    fn default() -> Self {
        Self { tol: 1e-9, budget: 200, schedule: RootSchedule::AberthCircle }
    }
}

/// Mahler measure `m(f) = log|s| + Σ_{|λ|>1} log|λ|` with a certified error.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MahlerResult {
    pub value: f64,
    pub error_bound: f64,
    pub exact: bool,
    /// Roots of modulus > 1, with multiplicity.
    pub roots_outside: usize,
    /// For exact results, the positive integer `R` with `value = log R`.
    pub log_of: Option<BigInt>,
}

/// Natural log of `|x|` for arbitrarily large integers.
pub fn ln_abs(x: &BigInt) -> f64 {
    let bits = x.bits();
    if bits < 1000 {
        x.abs().to_f64().map_or(f64::INFINITY, f64::ln)
    } else {
        let shift = bits - 64;
        let top: BigInt = x.abs() >> shift;
        top.to_f64().unwrap().ln() + shift as f64 * std::f64::consts::LN_2
    }
}

fn divisors(n: &BigInt) -> Option<Vec<BigInt>> {
    let n = n.abs().to_u64()?;
    if n > 1_000_000_000_000 {
        return None;
    }
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            small.push(BigInt::from(d));
            if d * d != n {
                large.push(BigInt::from(n / d));
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    Some(small)
}

/// `q^deg · h(p/q)`.
fn homogeneous_eval(h: &IntPolynomial, p: &BigInt, q: &BigInt) -> BigInt {
    let mut acc = BigInt::zero();
    let mut qpow = BigInt::one();
    // Horner in p with compensating powers of q
    for (k, c) in h.coeffs().iter().enumerate().rev() {
        acc = acc * p + c * &qpow;
        if k > 0 {
            qpow *= q;
        }
    }
    acc
}

/// Peel linear factors `(q t - p)` off a square-free primitive `h`.
/// Returns the `(p, q)` pairs and the remaining factor.
fn extract_rational_roots(h: &IntPolynomial) -> (Vec<(BigInt, BigInt)>, IntPolynomial) {
    let mut rest = h.clone();
    let mut found = Vec::new();
    loop {
        let Some(n) = rest.degree() else { break };
        if n == 0 {
            break;
        }
        let lead = rest.leading().unwrap().clone();
        let Some(qs) = divisors(&lead) else { break };
        let a = rest.to_f64_coeffs();
        if a.iter().any(|c| !c.is_finite()) {
            break;
        }
        let (z, _) = approximate_roots(&a, RootSchedule::AberthCircle, 200);
        let mut hit = None;
        'search: for r in z.iter().filter(|r| r.im.abs() <= 1e-6 * r.norm().max(1.0)) {
            for q in &qs {
                let Some(p) = BigInt::from_f64((r.re * q.to_f64().unwrap()).round()) else { continue };
                if p.gcd(q).is_one() && homogeneous_eval(&rest, &p, q).is_zero() {
                    hit = Some((p, q.clone()));
                    break 'search;
                }
            }
        }
        match hit {
            Some((p, q)) => {
                let lin = IntPolynomial::new(vec![-p.clone(), q.clone()]);
                rest = rest.exact_div(&lin).expect("rational root gives a factor");
                found.push((p, q));
            }
            None => break,
        }
    }
    (found, rest)
}

struct Certified {
    value: f64,
    error: f64,
    outside: usize,
    straddles: bool,
}

/// Certified `Σ log⁺|λ|` over the roots of `h` (leading coefficient
/// excluded).
fn certify_roots(h: &IntPolynomial, cfg: &MahlerConfig) -> Result<Certified> {
    let a = h.to_f64_coeffs();
    if a.iter().any(|c| !c.is_finite()) {
        return Err(Error::BudgetExceeded(0));
    }
    let (z, _) = approximate_roots(&a, cfg.schedule, cfg.budget);
    let disks = inclusion_disks(&a, &z);
    let mut lo_sum = 0.0;
    let mut hi_sum = 0.0;
    let mut outside = 0;
    let mut straddles = false;
    for comp in components(&disks) {
        let m = comp.len() as f64;
        let lo = comp.iter().map(|&i| disks[i].center.norm() - disks[i].radius).fold(f64::INFINITY, f64::min);
        let hi = comp.iter().map(|&i| disks[i].center.norm() + disks[i].radius).fold(0.0, f64::max);
        if !hi.is_finite() {
            return Err(Error::BudgetExceeded(cfg.budget));
        }
        lo_sum += m * if lo > 1.0 { lo.ln() } else { 0.0 };
        hi_sum += m * if hi > 1.0 { hi.ln() } else { 0.0 };
        if lo <= 1.0 && hi >= 1.0 {
            straddles = true;
        }
        outside += comp.iter().filter(|&&i| disks[i].center.norm() > 1.0).count();
    }
    let value = 0.5 * (lo_sum + hi_sum);
    // slack for the f64 logs and sums themselves
    let error = 0.5 * (hi_sum - lo_sum) + 4.0 * (z.len() as f64 + 1.0) * f64::EPSILON * (1.0 + hi_sum);
    Ok(Certified { value, error, outside, straddles })
}

pub fn mahler_measure(f: &IntPolynomial, tol: f64) -> Result<MahlerResult> {
    mahler_measure_with(f, &MahlerConfig { tol, ..MahlerConfig::default() })
}

pub fn mahler_measure_with(f: &IntPolynomial, cfg: &MahlerConfig) -> Result<MahlerResult> {
    if !(cfg.tol > 0.0) {
        return Err(Error::InvalidArgument("tol must be positive".into()));
    }
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    // m(f) = log(content) + m(primitive part); t-factors and cyclotomics contribute 0
    let mut exact_arg = f.content().abs();
    let g = f.primitive_part()?;
    let (_, g) = g.strip_t_powers();
    let (_, g) = remove_cyclotomic_factors(&g);

    let mut numeric = Vec::new();
    let mut roots_outside = 0usize;
    if g.degree().unwrap_or(0) > 0 {
        for (h, mult) in g.squarefree_decomposition() {
            let (rational, rest) = extract_rational_roots(&h);
            for (p, q) in rational {
                // (q t - p) contributes log max(|p|, |q|)
                let (p, q) = (p.abs(), q.abs());
                if p > q {
                    roots_outside += mult as usize;
                }
                exact_arg *= p.max(q).pow(mult);
            }
            if rest.degree().unwrap_or(0) > 0 {
                numeric.push((rest, mult));
            } else {
                exact_arg *= rest.coeffs()[0].abs().pow(mult);
            }
        }
    } else {
        exact_arg *= g.coeffs()[0].abs();
    }

    if numeric.is_empty() {
        return Ok(MahlerResult {
            value: ln_abs(&exact_arg).max(0.0),
            error_bound: 0.0,
            exact: true,
            roots_outside,
            log_of: Some(exact_arg),
        });
    }

    let mut value = ln_abs(&exact_arg);
    let mut error = 0.0;
    let mut straddles = false;
    for (h, mult) in &numeric {
        let c = certify_roots(h, cfg)?;
        let m = *mult as f64;
        value += m * (ln_abs(h.leading().unwrap()) + c.value);
        error += m * c.error;
        roots_outside += *mult as usize * c.outside;
        straddles |= c.straddles;
    }
    error += 4.0 * f64::EPSILON * value.abs();
    if error > cfg.tol {
        return Err(if straddles { Error::IndeterminateNearUnitCircle } else { Error::BudgetExceeded(cfg.budget) });
    }
    Ok(MahlerResult { value: value.max(0.0), error_bound: error, exact: false, roots_outside, log_of: None })
}

/// The Lehmer polynomial `t^10 + t^9 - t^7 - t^6 - t^5 - t^4 - t^3 + t + 1`.
pub fn lehmer_polynomial() -> IntPolynomial {
    IntPolynomial::from_i64(&[1, 1, 0, -1, -1, -1, -1, -1, 0, 1, 1])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mahler::cyclotomic::{cyclotomic, kronecker_test};
    use num_complex::Complex64;
    use proptest::prelude::*;

    fn p(c: &[i64]) -> IntPolynomial {
        IntPolynomial::from_i64(c)
    }

    /// Oracle: companion-free brute force. Roots by Newton from a dense
    /// grid with deflation, then `log|s| + Σ log⁺|λ|`.
    fn oracle(c: &[i64]) -> f64 {
        let mut a: Vec<Complex64> = c.iter().map(|&x| Complex64::new(x as f64, 0.0)).collect();
        while a.last().is_some_and(|x| x.norm() == 0.0) {
            a.pop();
        }
        let lead = a.last().unwrap().norm();
        let mut total = lead.ln();
        while a.len() > 1 {
            let n = a.len() - 1;
            let ev = |a: &[Complex64], z: Complex64| {
                let mut p = Complex64::new(0.0, 0.0);
                let mut d = Complex64::new(0.0, 0.0);
                for c in a.iter().rev() {
                    d = d * z + p;
                    p = p * z + c;
                }
                (p, d)
            };
            let mut best = Complex64::new(0.0, 0.0);
            let mut best_r = f64::INFINITY;
            for k in 0..64 {
                let mut z = Complex64::from_polar(0.3 + 0.05 * (k % 40) as f64, k as f64 * 0.7);
                for _ in 0..200 {
                    let (p, d) = ev(&a, z);
                    if d.norm() == 0.0 {
                        break;
                    }
                    z -= p / d;
                }
                let r = ev(&a, z).0.norm();
                if r < best_r {
                    best_r = r;
                    best = z;
                }
            }
            total += best.norm().ln().max(0.0);
            // synthetic division by (t - best)
            let mut q = vec![Complex64::new(0.0, 0.0); n];
            let mut carry = Complex64::new(0.0, 0.0);
            for i in (0..n).rev() {
                carry = a[i + 1] + carry * best;
                q[i] = carry;
            }
            a = q;
        }
        total
    }

    #[test]
    fn linear_is_exact() {
        let r = mahler_measure(&p(&[-2, 1]), 1e-9).unwrap();
        assert!(r.exact);
        assert_eq!(r.log_of, Some(BigInt::from(2)));
        assert_eq!(r.value, 2f64.ln());
        assert_eq!(r.roots_outside, 1);
    }

    #[test]
    fn cyclotomic_is_exact_zero() {
        let r = mahler_measure(&p(&[1, 1, 1]), 1e-9).unwrap();
        assert!(r.exact);
        assert_eq!(r.value, 0.0);
        assert_eq!(r.error_bound, 0.0);
    }

    #[test]
    fn rational_roots_are_exact() {
        // (2t - 3)(3t + 1)(t - 5) -> log(3 * 3 * 5)
        let f = p(&[-3, 2]).mul(&p(&[1, 3])).mul(&p(&[-5, 1]));
        let r = mahler_measure(&f, 1e-9).unwrap();
        assert!(r.exact);
        assert_eq!(r.log_of, Some(BigInt::from(45)));
        // content and repeated factors
        let g = p(&[-2, 1]).pow(3).scale(&BigInt::from(-6));
        let r = mahler_measure(&g, 1e-9).unwrap();
        assert_eq!(r.log_of, Some(BigInt::from(48)));
        assert_eq!(r.roots_outside, 3);
    }

    #[test]
    fn degree_zero() {
        let r = mahler_measure(&p(&[-7]), 1e-9).unwrap();
        assert_eq!(r.log_of, Some(BigInt::from(7)));
        assert!(matches!(mahler_measure(&p(&[]), 1e-9), Err(Error::ZeroPolynomial)));
    }

    #[test]
    fn lehmer_both_schedules() {
        let f = lehmer_polynomial();
        for schedule in [RootSchedule::AberthCircle, RootSchedule::WeierstrassSpiral] {
            let cfg = MahlerConfig { schedule, ..MahlerConfig::default() };
            let r = mahler_measure_with(&f, &cfg).unwrap();
            assert!(!r.exact);
            assert!(r.error_bound <= 1e-9);
            assert!((r.value - 0.162357612).abs() < 1e-8, "{}", r.value);
            assert_eq!(r.roots_outside, 1);
        }
        let o = oracle(&[1, 1, 0, -1, -1, -1, -1, -1, 0, 1, 1]);
        assert!((o - 0.162357612).abs() < 1e-7);
    }

    #[test]
    fn golden_ratio() {
        let r = mahler_measure(&p(&[-1, -1, 1]), 1e-9).unwrap();
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        assert!((r.value - phi.ln()).abs() <= r.error_bound + 1e-15);
    }

    #[test]
    fn salem_roots_on_circle_are_fine() {
        // Lehmer times a cyclotomic factor squared
        let f = lehmer_polynomial().mul(&cyclotomic(7).pow(2));
        let r = mahler_measure(&f, 1e-9).unwrap();
        assert!((r.value - 0.162357612).abs() < 1e-8);
    }

    #[test]
    fn repeated_irrational_factor() {
        let f = p(&[-1, -1, 1]).pow(3);
        let r = mahler_measure(&f, 1e-9).unwrap();
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        assert!((r.value - 3.0 * phi.ln()).abs() < 1e-9);
        assert_eq!(r.roots_outside, 3);
    }

    fn small_poly() -> impl Strategy<Value = Vec<i64>> {
        prop::collection::vec(-4i64..=4, 2..7).prop_filter("nonzero lead", |v| *v.last().unwrap() != 0)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn agrees_with_newton_oracle(c in small_poly()) {
            let f = p(&c);
            let r = mahler_measure(&f, 1e-9).unwrap();
            let o = oracle(&c);
            prop_assert!((r.value - o).abs() < 1e-6, "{} vs {}", r.value, o);
            prop_assert!(r.value >= 0.0);
            prop_assert!(r.value >= ln_abs(f.leading().unwrap()) - r.error_bound);
        }

        #[test]
        fn multiplicative(a in small_poly(), b in small_poly()) {
            let (f, g) = (p(&a), p(&b));
            let rf = mahler_measure(&f, 1e-9).unwrap();
            let rg = mahler_measure(&g, 1e-9).unwrap();
            let rfg = mahler_measure(&f.mul(&g), 1e-9).unwrap();
            let slack = rf.error_bound + rg.error_bound + rfg.error_bound + 1e-12;
            prop_assert!((rfg.value - rf.value - rg.value).abs() <= slack);
        }

        #[test]
        fn monomial_and_sign_invariance(c in small_poly(), k in 0usize..4) {
            let f = p(&c);
            let g = f.mul(&IntPolynomial::monomial(k)).neg();
            let rf = mahler_measure(&f, 1e-9).unwrap();
            let rg = mahler_measure(&g, 1e-9).unwrap();
            prop_assert_eq!(rf, rg);
        }

        #[test]
        fn reciprocal_identity(c in small_poly()) {
            prop_assume!(c[0] != 0);
            let f = p(&c);
            let rf = mahler_measure(&f, 1e-9).unwrap();
            let rr = mahler_measure(&f.reversed(), 1e-9).unwrap();
            // Jensen: reversing the coefficients leaves the measure unchanged
            prop_assert!((rr.value - rf.value).abs() <= rf.error_bound + rr.error_bound + 1e-12);
        }

        #[test]
        fn kronecker_iff_zero(c in prop::collection::vec(-2i64..=2, 1..7)) {
            let mut c = c;
            c.push(1);
            let f = p(&c);
            let r = mahler_measure(&f, 1e-9).unwrap();
            prop_assert_eq!(kronecker_test(&f), r.value == 0.0);
        }
    }
}
