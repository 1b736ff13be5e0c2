use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Integer polynomial, coefficients in ascending degree order with a
/// nonzero leading coefficient (the zero polynomial has no coefficients).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        Self::new(vec![c])
    }

    /// `t^n`.
    pub fn monomial(n: usize) -> Self {
        let mut c = vec![BigInt::zero(); n + 1];
        c[n] = BigInt::one();
        Self { coeffs: c }
    }

    /// `t^n - 1`.
    pub fn x_pow_minus_one(n: usize) -> Self {
        let mut p = Self::monomial(n);
        p.coeffs[0] -= 1;
        Self::new(p.coeffs)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(One::is_one)
    }

    /// gcd of the coefficients (0 for the zero polynomial).
    pub fn content(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    pub fn is_primitive(&self) -> bool {
        self.content().is_one() && self.leading().is_some_and(Signed::is_positive)
    }

    /// Content divided out, leading coefficient positive.
    pub fn primitive_part(&self) -> Result<IntPolynomial> {
        let lead = self.leading().ok_or(Error::ZeroPolynomial)?;
        let mut c = self.content();
        if lead.is_negative() {
            c = -c;
        }
        Ok(Self { coeffs: self.coeffs.iter().map(|x| x / &c).collect() })
    }

    /// Number of factors `t` dividing the polynomial, and the cofactor.
    pub fn strip_t_powers(&self) -> (usize, IntPolynomial) {
        let k = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        (k, Self { coeffs: self.coeffs[k..].to_vec() })
    }

    pub fn neg(&self) -> IntPolynomial {
        Self { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn add(&self, other: &IntPolynomial) -> IntPolynomial {
        let n = self.coeffs.len().max(other.coeffs.len());
        let z = BigInt::zero();
        Self::new(
            (0..n)
                .map(|i| self.coeffs.get(i).unwrap_or(&z) + other.coeffs.get(i).unwrap_or(&z))
                .collect(),
        )
    }

    pub fn sub(&self, other: &IntPolynomial) -> IntPolynomial {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &IntPolynomial) -> IntPolynomial {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut c = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        Self::new(c)
    }

    pub fn pow(&self, k: u32) -> IntPolynomial {
        (0..k).fold(Self::one(), |acc, _| acc.mul(self))
    }

    pub fn scale(&self, c: &BigInt) -> IntPolynomial {
        Self::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn derivative(&self) -> IntPolynomial {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    /// `t^d f(1/t)` with `d = deg f`.
    pub fn reversed(&self) -> IntPolynomial {
        Self::new(self.coeffs.iter().rev().cloned().collect())
    }

    /// `f(-t)`.
    pub fn negate_variable(&self) -> IntPolynomial {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| if i % 2 == 1 { -c } else { c.clone() })
                .collect(),
        )
    }

    /// Exact quotient `self / divisor` in `Z[t]`, if it exists.
    pub fn exact_div(&self, divisor: &IntPolynomial) -> Option<IntPolynomial> {
        let dd = divisor.degree()?;
        if self.is_zero() {
            return Some(Self::zero());
        }
        let n = self.degree()?;
        if n < dd {
            return None;
        }
        let lead = divisor.leading()?;
        let mut rem = self.coeffs.clone();
        let mut q = vec![BigInt::zero(); n - dd + 1];
        for i in (0..=(n - dd)).rev() {
            let top = &rem[i + dd];
            if top.is_zero() {
                continue;
            }
            if !top.is_multiple_of(lead) {
                return None;
            }
            let c = top / lead;
            for (j, d) in divisor.coeffs.iter().enumerate() {
                rem[i + j] -= &c * d;
            }
            q[i] = c;
        }
        if rem.iter().all(Zero::is_zero) {
            Some(Self::new(q))
        } else {
            None
        }
    }

    /// Pseudo-remainder of `self` by `divisor` (`lc^k · self mod divisor`).
    fn pseudo_rem(&self, divisor: &IntPolynomial) -> IntPolynomial {
        let dd = divisor.degree().expect("nonzero divisor");
        let lead = divisor.leading().unwrap().clone();
        let mut rem = self.clone();
        while let Some(n) = rem.degree() {
            if n < dd {
                break;
            }
            let top = rem.coeffs[n].clone();
            let mut shifted = vec![BigInt::zero(); n - dd];
            shifted.extend(divisor.coeffs.iter().map(|d| d * &top));
            rem = rem.scale(&lead).sub(&Self::new(shifted));
        }
        rem
    }

    /// Primitive gcd in `Z[t]` (positive leading coefficient), via the
    /// primitive pseudo-remainder sequence.
    pub fn gcd(&self, other: &IntPolynomial) -> IntPolynomial {
        if self.is_zero() {
            return other.primitive_part().unwrap_or_else(|_| Self::zero());
        }
        if other.is_zero() {
            return self.primitive_part().unwrap();
        }
        let mut a = self.primitive_part().unwrap();
        let mut b = other.primitive_part().unwrap();
        if a.degree() < b.degree() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let r = a.pseudo_rem(&b);
            a = b;
            b = if r.is_zero() { r } else { r.primitive_part().unwrap() };
        }
        a
    }

    /// Square-free decomposition `f = ± Π g_i^i` of a primitive `f`;
    /// returns `(g_i, i)` for the non-constant `g_i`.
    pub fn squarefree_decomposition(&self) -> Vec<(IntPolynomial, u32)> {
        // Musser: every division is between primitive polynomials, hence exact in Z[t].
        let mut out = Vec::new();
        let Ok(f) = self.primitive_part() else { return out };
        if f.degree().unwrap_or(0) == 0 {
            return out;
        }
        let mut a = f.gcd(&f.derivative());
        let mut b = f.exact_div(&a).expect("gcd divides f");
        let mut i = 1;
        while b.degree().unwrap_or(0) > 0 {
            let c = a.gcd(&b);
            let g = b.exact_div(&c).expect("gcd divides");
            if g.degree().unwrap_or(0) > 0 {
                out.push((g, i));
            }
            a = a.exact_div(&c).expect("gcd divides");
            b = c;
            i += 1;
        }
        out
    }

    pub fn eval_complex(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c.to_f64().unwrap_or(f64::NAN))
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    pub fn to_f64_coeffs(&self) -> Vec<f64> {
        self.coeffs.iter().map(|c| c.to_f64().unwrap_or(f64::NAN)).collect()
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            let a = c.abs();
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let coef = if a.is_one() && i > 0 { String::new() } else { a.to_string() };
            match i {
                0 => write!(f, "{a}")?,
                1 => write!(f, "{coef}t")?,
                _ => write!(f, "{coef}t^{i}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPolynomial {
        IntPolynomial::from_i64(c)
    }

    #[test]
    fn primitive_part_examples() {
        assert_eq!(p(&[-6, 4]).primitive_part().unwrap(), p(&[-3, 2]));
        assert_eq!(p(&[1, -1]).primitive_part().unwrap(), p(&[-1, 1]));
        assert_eq!(p(&[4, -10, 6]).primitive_part().unwrap(), p(&[2, -5, 3]));
        assert_eq!(IntPolynomial::zero().primitive_part(), Err(Error::ZeroPolynomial));
    }

    #[test]
    fn exact_division() {
        let f = p(&[-1, 0, 0, 1]);
        assert_eq!(f.exact_div(&p(&[-1, 1])).unwrap(), p(&[1, 1, 1]));
        assert!(f.exact_div(&p(&[1, 1])).is_none());
        assert!(p(&[1, 1]).exact_div(&p(&[1, 2])).is_none());
    }

    #[test]
    fn gcd_and_squarefree() {
        let a = p(&[-1, 1]).mul(&p(&[1, 1, 1]));
        let b = p(&[-1, 1]).mul(&p(&[2, 3]));
        assert_eq!(a.gcd(&b), p(&[-1, 1]));

        let f = p(&[-1, 1]).pow(3).mul(&p(&[-1, -1, 1]).pow(2)).mul(&p(&[3, 2]));
        let mut sf = f.squarefree_decomposition();
        sf.sort_by_key(|(_, i)| *i);
        assert_eq!(sf, vec![(p(&[3, 2]), 1), (p(&[-1, -1, 1]), 2), (p(&[-1, 1]), 3)]);
    }

    #[test]
    fn display() {
        assert_eq!(p(&[-3, 2]).to_string(), "2t - 3");
        assert_eq!(p(&[1, -2, 1]).to_string(), "t^2 - 2t + 1");
        assert_eq!(p(&[0, -1]).to_string(), "-t");
    }
}
