use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::poly::IntPolynomial;

/// `det(tI - A)` for a square integer matrix, by Berkowitz's division-free
/// recurrence: each leading principal block extends the previous
/// characteristic vector by a lower-triangular Toeplitz product.
pub fn charpoly_integer(a: &[Vec<BigInt>]) -> IntPolynomial {
    let n = a.len();
    // descending coefficients of the current leading block's polynomial
    let mut v: Vec<BigInt> = vec![BigInt::one()];
    for r in 0..n {
        // toeplitz column: 1, -a_rr, -R C, -R M C, ..., -R M^{r-1} C
        let mut col = Vec::with_capacity(r + 2);
        col.push(BigInt::one());
        col.push(-&a[r][r]);
        let mut c: Vec<BigInt> = (0..r).map(|i| a[i][r].clone()).collect();
        for _ in 0..r {
            let rc: BigInt = (0..r).map(|j| &a[r][j] * &c[j]).sum();
            col.push(-rc);
            c = (0..r)
                .map(|i| (0..r).map(|j| &a[i][j] * &c[j]).sum())
                .collect();
        }
        let mut next = vec![BigInt::zero(); r + 2];
        for (i, slot) in next.iter_mut().enumerate() {
            for (j, vj) in v.iter().enumerate() {
                if i >= j && i - j < col.len() {
                    *slot += &col[i - j] * vj;
                }
            }
        }
        v = next;
    }
    v.reverse();
    IntPolynomial::new(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    /// Laplace expansion of `det(tI - M)` with polynomial entries over Q,
    /// independent of the Berkowitz recurrence.
    fn cofactor_charpoly(m: &[Vec<i64>]) -> Vec<BigRational> {
        type P = Vec<BigRational>;
        fn mul(a: &P, b: &P) -> P {
            let mut c = vec![BigRational::zero(); a.len() + b.len() - 1];
            for (i, x) in a.iter().enumerate() {
                for (j, y) in b.iter().enumerate() {
                    c[i + j] += x * y;
                }
            }
            c
        }
        fn add(a: &P, b: &P, sign: i64) -> P {
            let n = a.len().max(b.len());
            (0..n)
                .map(|i| {
                    let x = a.get(i).cloned().unwrap_or_else(BigRational::zero);
                    let y = b.get(i).cloned().unwrap_or_else(BigRational::zero);
                    x + y * BigRational::from_integer(sign.into())
                })
                .collect()
        }
        fn det(e: &[Vec<P>]) -> P {
            let n = e.len();
            if n == 1 {
                return e[0][0].clone();
            }
            let mut acc: P = vec![BigRational::zero()];
            for j in 0..n {
                let minor: Vec<Vec<P>> = e[1..]
                    .iter()
                    .map(|r| r.iter().enumerate().filter(|(k, _)| *k != j).map(|(_, x)| x.clone()).collect())
                    .collect();
                let term = mul(&e[0][j], &det(&minor));
                acc = add(&acc, &term, if j % 2 == 0 { 1 } else { -1 });
            }
            acc
        }
        let n = m.len();
        let e: Vec<Vec<P>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let c = BigRational::from_integer((-m[i][j]).into());
                        if i == j { vec![c, BigRational::one()] } else { vec![c] }
                    })
                    .collect()
            })
            .collect();
        let mut p = det(&e);
        while p.len() > n + 1 {
            p.pop();
        }
        p
    }

    #[test]
    fn berkowitz_agrees_with_cofactor_expansion() {
        let cases: Vec<Vec<Vec<i64>>> = vec![
            vec![vec![0, 1], vec![1, 1]],
            vec![vec![2, -1, 3], vec![0, 4, 1], vec![5, -2, -3]],
            vec![vec![1, 2, 3, 4], vec![0, -1, 2, 5], vec![3, 3, 0, -2], vec![1, 0, 1, 1]],
            vec![vec![0, 0, 0], vec![0, 0, 0], vec![0, 0, 0]],
        ];
        for m in cases {
            let a: Vec<Vec<BigInt>> = m.iter().map(|r| r.iter().map(|&x| x.into()).collect()).collect();
            let got = charpoly_integer(&a);
            let want = cofactor_charpoly(&m);
            let want: Vec<BigInt> = want.iter().map(|c| c.to_integer()).collect();
            assert_eq!(got, IntPolynomial::new(want), "matrix {m:?}");
        }
    }

    #[test]
    fn empty_matrix_has_unit_charpoly() {
        assert_eq!(charpoly_integer(&[]), IntPolynomial::one());
    }
}
