//! Integer lattices in `Z^n` kept in row Hermite normal form.
//!
//! Every subgroup computation in the crate bottoms out here: sums are HNFs
//! of stacked bases, intersections and preimages use the Zassenhaus-style
//! augmented echelon trick, and indices are determinant ratios taken on the
//! pivot columns of the larger lattice.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::index::Index;

pub type IntMatrix = Vec<Vec<BigInt>>;

pub fn zero_vec(n: usize) -> Vec<BigInt> {
    vec![BigInt::zero(); n]
}

pub fn unit_vec(n: usize, i: usize) -> Vec<BigInt> {
    let mut v = zero_vec(n);
    v[i] = BigInt::one();
    v
}

pub fn identity(n: usize) -> IntMatrix {
    (0..n).map(|i| unit_vec(n, i)).collect()
}

pub fn is_zero_vec(v: &[BigInt]) -> bool {
    v.iter().all(Zero::is_zero)
}

/// `M * v` for a column vector `v`.
pub fn mat_vec(m: &IntMatrix, v: &[BigInt]) -> Vec<BigInt> {
    m.iter()
        .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
        .collect()
}

pub fn mat_mul(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| (0..inner).map(|k| &row[k] * &b[k][j]).sum())
                .collect()
        })
        .collect()
}

pub fn transpose(m: &IntMatrix, ncols: usize) -> IntMatrix {
    (0..ncols)
        .map(|j| m.iter().map(|row| row[j].clone()).collect())
        .collect()
}

fn sub_scaled(target: &mut [BigInt], source: &[BigInt], q: &BigInt) {
    if q.is_zero() {
        return;
    }
    for (t, s) in target.iter_mut().zip(source) {
        *t -= q * s;
    }
}

/// Row Hermite normal form of the lattice spanned by `rows`.
///
/// Output rows are nonzero, in echelon form, with positive pivots and every
/// entry above a pivot reduced into `[0, pivot)`. The pivot for each
/// elimination step is the row with the smallest absolute entry in the
/// column, ties broken by position.
pub fn hnf(rows: &[Vec<BigInt>], ncols: usize) -> IntMatrix {
    let mut m: IntMatrix = rows.iter().filter(|r| !is_zero_vec(r)).cloned().collect();
    let mut r = 0;
    for c in 0..ncols {
        if r == m.len() {
            break;
        }
        loop {
            let mut best: Option<usize> = None;
            for i in r..m.len() {
                if m[i][c].is_zero() {
                    continue;
                }
                match best {
                    Some(b) if m[i][c].abs() >= m[b][c].abs() => {}
                    _ => best = Some(i),
                }
            }
            let Some(b) = best else { break };
            m.swap(r, b);
            let mut done = true;
            for i in (r + 1)..m.len() {
                if m[i][c].is_zero() {
                    continue;
                }
                let q = &m[i][c] / &m[r][c];
                let (head, tail) = m.split_at_mut(i);
                sub_scaled(&mut tail[0], &head[r], &q);
                if !m[i][c].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if r == m.len() || m[r][c].is_zero() {
            continue;
        }
        if m[r][c].is_negative() {
            for x in m[r].iter_mut() {
                *x = -&*x;
            }
        }
        for i in 0..r {
            let q = m[i][c].div_floor(&m[r][c]);
            let (head, tail) = m.split_at_mut(r);
            sub_scaled(&mut head[i], &tail[0], &q);
        }
        r += 1;
    }
    m.truncate(r);
    m
}

/// Determinant by Bareiss fraction-free elimination.
pub fn det(m: &IntMatrix) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a = m.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            match ((k + 1)..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in (k + 1)..n {
            for j in (k + 1)..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

/// A lattice in `Z^dim`, stored by its canonical row HNF basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IntLattice {
    dim: usize,
    basis: IntMatrix,
}

impl IntLattice {
    pub fn from_generators(dim: usize, gens: &[Vec<BigInt>]) -> Result<Self> {
        if let Some(g) = gens.iter().find(|g| g.len() != dim) {
            return Err(Error::DimensionMismatch { expected: dim, found: g.len() });
        }
        Ok(Self { dim, basis: hnf(gens, dim) })
    }

    pub fn zero(dim: usize) -> Self {
        Self { dim, basis: Vec::new() }
    }

    pub fn full(dim: usize) -> Self {
        Self { dim, basis: identity(dim) }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn basis(&self) -> &IntMatrix {
        &self.basis
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn pivots(&self) -> Vec<usize> {
        self.basis
            .iter()
            .map(|row| row.iter().position(|x| !x.is_zero()).expect("HNF rows are nonzero"))
            .collect()
    }

    fn check(&self, other: &IntLattice) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: other.dim });
        }
        Ok(())
    }

    /// Reduce `v` against the basis; the remainder is zero iff `v` lies in the lattice.
    pub fn reduce(&self, v: &[BigInt]) -> Vec<BigInt> {
        let mut t = v.to_vec();
        for (row, p) in self.basis.iter().zip(self.pivots()) {
            let q = t[p].div_floor(&row[p]);
            sub_scaled(&mut t, row, &q);
        }
        t
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        v.len() == self.dim && is_zero_vec(&self.reduce(v))
    }

    pub fn contains_lattice(&self, other: &IntLattice) -> bool {
        self.dim == other.dim && other.basis.iter().all(|b| self.contains(b))
    }

    pub fn sum(&self, other: &IntLattice) -> Result<IntLattice> {
        self.check(other)?;
        let rows: Vec<_> = self.basis.iter().chain(&other.basis).cloned().collect();
        IntLattice::from_generators(self.dim, &rows)
    }

    /// Zassenhaus: echelonize `[B1 | B1 ; B2 | 0]`; rows vanishing on the
    /// left half carry a basis of the intersection on the right half.
    pub fn intersect(&self, other: &IntLattice) -> Result<IntLattice> {
        self.check(other)?;
        let n = self.dim;
        let mut rows = Vec::with_capacity(self.rank() + other.rank());
        for b in &self.basis {
            rows.push(b.iter().chain(b).cloned().collect::<Vec<_>>());
        }
        for b in &other.basis {
            rows.push(b.iter().cloned().chain(zero_vec(n)).collect::<Vec<_>>());
        }
        let h = hnf(&rows, 2 * n);
        let gens: Vec<_> = h
            .into_iter()
            .filter(|r| is_zero_vec(&r[..n]))
            .map(|r| r[n..].to_vec())
            .collect();
        IntLattice::from_generators(n, &gens)
    }

    /// `[self : sub]` for `sub ⊆ self`; infinite when the ranks differ.
    pub fn index_of_sublattice(&self, sub: &IntLattice) -> Index {
        debug_assert!(self.contains_lattice(sub));
        if sub.rank() != self.rank() {
            return Index::Infinite;
        }
        let piv = self.pivots();
        let restrict = |m: &IntMatrix| -> IntMatrix {
            m.iter().map(|row| piv.iter().map(|&p| row[p].clone()).collect()).collect()
        };
        let num = det(&restrict(&sub.basis)).abs();
        let den: BigInt = self.basis.iter().zip(&piv).map(|(r, &p)| r[p].clone()).product();
        debug_assert!((&num % &den).is_zero());
        Index::Finite(num / den)
    }

    /// `[self : self ∩ other]`.
    pub fn relative_index(&self, other: &IntLattice) -> Result<Index> {
        let meet = self.intersect(other)?;
        Ok(self.index_of_sublattice(&meet))
    }

    /// Image under the column action `x ↦ M x`.
    pub fn image(&self, m: &IntMatrix) -> Result<IntLattice> {
        if m.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: m.len() });
        }
        let gens: Vec<_> = self.basis.iter().map(|b| mat_vec(m, b)).collect();
        IntLattice::from_generators(self.dim, &gens)
    }

    /// `{x ∈ self : M x ∈ target}`, where `M` maps `Z^self.dim` into
    /// `Z^target.dim`.
    pub fn preimage_within(&self, m: &IntMatrix, target: &IntLattice) -> Result<IntLattice> {
        let n = target.dim;
        if m.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: m.len() });
        }
        if let Some(r) = m.iter().find(|r| r.len() != self.dim) {
            return Err(Error::DimensionMismatch { expected: self.dim, found: r.len() });
        }
        let h = self.rank();
        let mut rows = Vec::with_capacity(h + target.rank());
        for (i, b) in self.basis.iter().enumerate() {
            let mut row = mat_vec(m, b);
            row.extend(unit_vec(h, i));
            rows.push(row);
        }
        for t in &target.basis {
            rows.push(t.iter().cloned().chain(zero_vec(h)).collect());
        }
        let e = hnf(&rows, n + h);
        let gens: Vec<_> = e
            .into_iter()
            .filter(|r| is_zero_vec(&r[..n]))
            .map(|r| {
                let coeffs = &r[n..];
                (0..self.dim)
                    .map(|j| coeffs.iter().zip(&self.basis).map(|(c, b)| c * &b[j]).sum())
                    .collect()
            })
            .collect();
        IntLattice::from_generators(self.dim, &gens)
    }

    /// Scale every vector by `c`.
    pub fn scaled(&self, c: &BigInt) -> IntLattice {
        let gens: Vec<_> = self
            .basis
            .iter()
            .map(|r| r.iter().map(|x| x * c).collect())
            .collect();
        IntLattice { dim: self.dim, basis: hnf(&gens, self.dim) }
    }

    /// gcd of all basis entries (0 for the zero lattice).
    pub fn content(&self) -> BigInt {
        self.basis
            .iter()
            .flatten()
            .fold(BigInt::zero(), |g, x| g.gcd(x))
    }

    /// Divide every vector by `c`, which must divide the content.
    pub fn divided(&self, c: &BigInt) -> IntLattice {
        let gens: Vec<_> = self
            .basis
            .iter()
            .map(|r| r.iter().map(|x| x / c).collect())
            .collect();
        IntLattice { dim: self.dim, basis: hnf(&gens, self.dim) }
    }
}

/// Find an integer `x` with `M x - b ∈ modulus`, if one exists.
pub fn solve_modulo(m: &IntMatrix, b: &[BigInt], modulus: &IntLattice) -> Option<Vec<BigInt>> {
    let n = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut rows = Vec::with_capacity(cols + modulus.rank());
    for i in 0..cols {
        let mut row: Vec<BigInt> = m.iter().map(|r| r[i].clone()).collect();
        row.extend(unit_vec(cols, i));
        rows.push(row);
    }
    for t in modulus.basis() {
        rows.push(t.iter().cloned().chain(zero_vec(cols)).collect());
    }
    let e = hnf(&rows, n + cols);
    let mut t: Vec<BigInt> = b.iter().cloned().chain(zero_vec(cols)).collect();
    for row in &e {
        let Some(p) = row.iter().position(|x| !x.is_zero()) else { continue };
        if p >= n {
            break;
        }
        if !(&t[p] % &row[p]).is_zero() {
            return None;
        }
        let q = &t[p] / &row[p];
        sub_scaled(&mut t, row, &q);
    }
    if !is_zero_vec(&t[..n]) {
        return None;
    }
    Some(t[n..].iter().map(|x| -x).collect())
}

/// Smith normal form diagonal of a relation matrix (rows are relations).
///
/// Returns the nonzero diagonal entries, positive and in divisibility order.
pub fn smith_diagonal(rows: &[Vec<BigInt>], ncols: usize) -> Vec<BigInt> {
    let mut a: IntMatrix = rows.to_vec();
    let nrows = a.len();
    let mut diag = Vec::new();
    let mut t = 0;
    while t < nrows.min(ncols) {
        // smallest nonzero |entry| in the trailing block, row-major ties
        let mut best: Option<(usize, usize)> = None;
        for i in t..nrows {
            for j in t..ncols {
                if a[i][j].is_zero() {
                    continue;
                }
                match best {
                    Some((bi, bj)) if a[i][j].abs() >= a[bi][bj].abs() => {}
                    _ => best = Some((i, j)),
                }
            }
        }
        let Some((bi, bj)) = best else { break };
        a.swap(t, bi);
        for row in a.iter_mut() {
            row.swap(t, bj);
        }
        let mut clean = true;
        for i in (t + 1)..nrows {
            if a[i][t].is_zero() {
                continue;
            }
            let q = &a[i][t] / &a[t][t];
            let (head, tail) = a.split_at_mut(i);
            sub_scaled(&mut tail[0], &head[t], &q);
            if !a[i][t].is_zero() {
                clean = false;
            }
        }
        for j in (t + 1)..ncols {
            if a[t][j].is_zero() {
                continue;
            }
            let q = &a[t][j] / &a[t][t];
            for i in t..nrows {
                let v = &a[i][t] * &q;
                a[i][j] -= v;
            }
            if !a[t][j].is_zero() {
                clean = false;
            }
        }
        if !clean {
            continue;
        }
        // pivot must divide the whole trailing block
        let offender = ((t + 1)..nrows)
            .find(|&i| ((t + 1)..ncols).any(|j| !(&a[i][j] % &a[t][t]).is_zero()));
        if let Some(i) = offender {
            let (head, tail) = a.split_at_mut(i);
            for (x, y) in head[t].iter_mut().zip(&tail[0]) {
                *x += y;
            }
            continue;
        }
        diag.push(a[t][t].abs());
        t += 1;
    }
    diag
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> IntMatrix {
        rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    fn v(xs: &[i64]) -> Vec<BigInt> {
        xs.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn hnf_is_canonical() {
        let a = hnf(&m(&[&[2, 0], &[3, 0], &[0, 5]]), 2);
        assert_eq!(a, m(&[&[1, 0], &[0, 5]]));
        let b = hnf(&m(&[&[4, 7], &[0, 3]]), 2);
        assert_eq!(b, m(&[&[4, 1], &[0, 3]]));
        assert_eq!(hnf(&b, 2), b);
    }

    #[test]
    fn hnf_negative_pivots_are_flipped() {
        assert_eq!(hnf(&m(&[&[-3, 1]]), 2), m(&[&[3, -1]]));
    }

    #[test]
    fn bareiss_matches_small_dets() {
        assert_eq!(det(&m(&[&[2, 1], &[1, 3]])), BigInt::from(5));
        assert_eq!(det(&m(&[&[0, 1, 2], &[1, 0, 3], &[4, -3, 8]])), BigInt::from(-2));
        assert_eq!(det(&m(&[&[1, 2], &[2, 4]])), BigInt::zero());
    }

    #[test]
    fn intersection_of_cyclic_lattices() {
        let a = IntLattice::from_generators(1, &[v(&[2])]).unwrap();
        let b = IntLattice::from_generators(1, &[v(&[3])]).unwrap();
        assert_eq!(a.intersect(&b).unwrap().basis(), &m(&[&[6]]));
        let e1 = IntLattice::from_generators(2, &[v(&[1, 0])]).unwrap();
        let e2 = IntLattice::from_generators(2, &[v(&[0, 1])]).unwrap();
        assert!(e1.intersect(&e2).unwrap().is_zero());
    }

    #[test]
    fn index_on_pivot_columns() {
        let big = IntLattice::from_generators(2, &[v(&[2, 0]), v(&[0, 3])]).unwrap();
        let small = IntLattice::from_generators(2, &[v(&[4, 0]), v(&[0, 3])]).unwrap();
        assert_eq!(big.index_of_sublattice(&small), Index::finite(2));
        let diag = IntLattice::from_generators(2, &[v(&[1, 1])]).unwrap();
        let diag3 = IntLattice::from_generators(2, &[v(&[3, 3])]).unwrap();
        assert_eq!(diag.index_of_sublattice(&diag3), Index::finite(3));
    }

    #[test]
    fn preimage_of_zero_is_kernel() {
        let full = IntLattice::full(2);
        let k = full
            .preimage_within(&m(&[&[1, 2], &[2, 4]]), &IntLattice::zero(2))
            .unwrap();
        assert_eq!(k.basis(), &m(&[&[2, -1]]));
    }

    #[test]
    fn solve_modulo_finds_preimages() {
        let lam = IntLattice::from_generators(1, &[v(&[5])]).unwrap();
        let x = solve_modulo(&m(&[&[3]]), &v(&[1]), &lam).unwrap();
        assert_eq!((&x[0] * 3 - 1) % 5, BigInt::zero());
        assert!(solve_modulo(&m(&[&[2]]), &v(&[1]), &IntLattice::zero(1)).is_none());
    }

    #[test]
    fn smith_diagonals() {
        assert_eq!(smith_diagonal(&m(&[&[2, 0], &[0, 3]]), 2), v(&[1, 6]));
        assert_eq!(smith_diagonal(&m(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]]), 3), v(&[2, 6, 12]));
        assert!(smith_diagonal(&m(&[&[0, 0], &[0, 0]]), 2).is_empty());
    }
}
