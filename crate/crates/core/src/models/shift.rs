//! The Bernoulli shift on `⊕_{n≥0} F`.
//!
//! A subgroup supported on the first `L` positions is a lattice in
//! `Z^{L·k}` (`k` = number of cell coordinates) containing the cell
//! relations at every position. Lattices are trimmed to the shortest
//! window, which makes the representation canonical.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::abelian::FgAbGroup;
use crate::error::{Error, Result};
use crate::index::Index;
use crate::lattice::{unit_vec, IntLattice};
use crate::model::{EndoAction, SubgroupLattice};

pub const DEFAULT_ELEMENT_CAP: usize = 1_000_000;

/// `⊕_{n≥0} F` for a finitely generated abelian cell `F`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ShiftGroup {
    cell: FgAbGroup,
}

/// A finitely supported element: position ↦ nonzero reduced cell coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ShiftElement {
    entries: BTreeMap<usize, Vec<BigInt>>,
}

/// A finitely generated subgroup of a [`ShiftGroup`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ShiftSubgroup {
    window: usize,
    lattice: IntLattice,
}

impl ShiftGroup {
    /// Shift over a finite cell.
    pub fn new(cell: FgAbGroup) -> Result<Self> {
        if !cell.is_finite() {
            return Err(Error::InvalidGroup(format!("shift cell {cell} is not finite")));
        }
        Ok(Self { cell })
    }

    /// Shift over an arbitrary f.g. cell, e.g. `⊕ Z`.
    pub fn over(cell: FgAbGroup) -> Self {
        Self { cell }
    }

    pub fn cell(&self) -> &FgAbGroup {
        &self.cell
    }

    fn k(&self) -> usize {
        self.cell.dim()
    }

    /// Cell relations at every position of a window of length `len`.
    fn relations(&self, len: usize) -> Vec<Vec<BigInt>> {
        let k = self.k();
        let mut rows = Vec::new();
        for pos in 0..len {
            for (j, d) in self.cell.invariant_factors().iter().enumerate() {
                let mut r = unit_vec(len * k, pos * k + j);
                r[pos * k + j] = d.clone();
                rows.push(r);
            }
        }
        rows
    }

    fn make(&self, window: usize, rows: Vec<Vec<BigInt>>) -> ShiftSubgroup {
        let mut rows = rows;
        rows.extend(self.relations(window));
        let lattice = IntLattice::from_generators(window * self.k(), &rows).expect("dimensions agree");
        self.trim(ShiftSubgroup { window, lattice })
    }

    fn trim(&self, s: ShiftSubgroup) -> ShiftSubgroup {
        let k = self.k();
        let d = self.cell.invariant_factors();
        // a trailing position is dead when every basis row vanishes there in F
        let dead = |pos: usize| {
            s.lattice.basis().iter().all(|row| {
                (0..k).all(|j| {
                    let x = &row[pos * k + j];
                    match d.get(j) {
                        Some(dj) => (x % dj).is_zero(),
                        None => x.is_zero(),
                    }
                })
            })
        };
        let mut w = s.window;
        while w > 0 && dead(w - 1) {
            w -= 1;
        }
        if w == s.window {
            return s;
        }
        let rows: Vec<Vec<BigInt>> = s.lattice.basis().iter().map(|r| r[..w * k].to_vec()).collect();
        let mut all = rows;
        all.extend(self.relations(w));
        ShiftSubgroup { window: w, lattice: IntLattice::from_generators(w * k, &all).expect("dimensions agree") }
    }

    /// The same subgroup viewed in a longer window.
    fn padded(&self, s: &ShiftSubgroup, len: usize) -> IntLattice {
        debug_assert!(len >= s.window);
        let k = self.k();
        let mut rows: Vec<Vec<BigInt>> = s
            .lattice
            .basis()
            .iter()
            .map(|r| {
                let mut r = r.clone();
                r.resize(len * k, BigInt::zero());
                r
            })
            .collect();
        for r in self.relations(len) {
            rows.push(r);
        }
        // rows at old positions are already present; the rest are Z^k coordinates that must vanish
        IntLattice::from_generators(len * k, &rows).expect("dimensions agree")
    }

    pub fn element(&self, entries: &[(usize, Vec<BigInt>)]) -> Result<ShiftElement> {
        let mut map = BTreeMap::new();
        for (pos, coords) in entries {
            self.cell.check_dim(coords.len())?;
            let mut c = coords.clone();
            self.cell.reduce(&mut c);
            if c.iter().any(|x| !x.is_zero()) {
                map.insert(*pos, c);
            }
        }
        Ok(ShiftElement { entries: map })
    }

    /// `x` placed at position `pos`.
    pub fn at(&self, pos: usize, x: &[i64]) -> Result<ShiftElement> {
        self.element(&[(pos, x.iter().map(|&v| BigInt::from(v)).collect())])
    }

    pub fn add(&self, a: &ShiftElement, b: &ShiftElement) -> ShiftElement {
        let mut out = a.entries.clone();
        for (pos, c) in &b.entries {
            let slot = out.entry(*pos).or_insert_with(|| vec![BigInt::zero(); self.k()]);
            for (x, y) in slot.iter_mut().zip(c) {
                *x += y;
            }
            self.cell.reduce(slot);
            if slot.iter().all(Zero::is_zero) {
                out.remove(pos);
            }
        }
        ShiftElement { entries: out }
    }

    /// The right shift `β`.
    pub fn shift(&self, a: &ShiftElement) -> ShiftElement {
        ShiftElement { entries: a.entries.iter().map(|(p, c)| (p + 1, c.clone())).collect() }
    }

    pub fn subgroup(&self, gens: &[ShiftElement]) -> ShiftSubgroup {
        let window = gens.iter().filter_map(|g| g.entries.keys().next_back()).map(|p| p + 1).max().unwrap_or(0);
        let k = self.k();
        let rows = gens
            .iter()
            .map(|g| {
                let mut r = vec![BigInt::zero(); window * k];
                for (pos, c) in &g.entries {
                    r[pos * k..(pos + 1) * k].clone_from_slice(c);
                }
                r
            })
            .collect();
        self.make(window, rows)
    }

    /// `F` placed at position `pos`.
    pub fn coordinate_copy(&self, pos: usize) -> ShiftSubgroup {
        let k = self.k();
        let rows = (0..k).map(|j| unit_vec((pos + 1) * k, pos * k + j)).collect();
        self.make(pos + 1, rows)
    }

    pub fn zero_subgroup(&self) -> ShiftSubgroup {
        self.make(0, Vec::new())
    }

    pub fn order(&self, s: &ShiftSubgroup) -> Index {
        if self.cell.free_rank() > 0 && self.rank(s) > 0 {
            return Index::Infinite;
        }
        // |s| = [L : Λ] for the relation lattice Λ of the window
        let rel = IntLattice::from_generators(s.window * self.k(), &self.relations(s.window)).expect("dims");
        s.lattice.index_of_sublattice(&rel)
    }

    /// Torsion-free rank.
    pub fn rank(&self, s: &ShiftSubgroup) -> usize {
        s.lattice.rank() - s.window * self.cell.torsion_len()
    }

    pub fn contains(&self, s: &ShiftSubgroup, x: &ShiftElement) -> bool {
        let len = s.window.max(x.entries.keys().next_back().map_or(0, |p| p + 1));
        let k = self.k();
        let mut v = vec![BigInt::zero(); len * k];
        for (pos, c) in &x.entries {
            v[pos * k..(pos + 1) * k].clone_from_slice(c);
        }
        self.padded(s, len).contains(&v)
    }

    /// Generators of `s` as elements.
    pub fn generators(&self, s: &ShiftSubgroup) -> Vec<ShiftElement> {
        let k = self.k();
        s.lattice
            .basis()
            .iter()
            .map(|r| {
                let entries: Vec<(usize, Vec<BigInt>)> =
                    (0..s.window).map(|p| (p, r[p * k..(p + 1) * k].to_vec())).collect();
                self.element(&entries).expect("cell dimension")
            })
            .filter(|e| !e.entries.is_empty())
            .collect()
    }

    /// All elements of a finite subgroup, by breadth-first closure of its
    /// generators; fails once more than `cap` elements appear.
    pub fn enumerate(&self, s: &ShiftSubgroup, cap: usize) -> Result<BTreeSet<ShiftElement>> {
        self.closure(&self.generators(s), cap)
    }

    /// Subgroup generated by `gens`, enumerated element by element.
    pub fn closure(&self, gens: &[ShiftElement], cap: usize) -> Result<BTreeSet<ShiftElement>> {
        let zero = ShiftElement { entries: BTreeMap::new() };
        let mut seen = BTreeSet::from([zero.clone()]);
        let mut queue = VecDeque::from([zero]);
        while let Some(x) = queue.pop_front() {
            for g in gens {
                let y = self.add(&x, g);
                if seen.insert(y.clone()) {
                    if seen.len() > cap {
                        return Err(Error::CapExceeded { cap });
                    }
                    queue.push_back(y);
                }
            }
        }
        Ok(seen)
    }

    pub fn image(&self, s: &ShiftSubgroup) -> ShiftSubgroup {
        let k = self.k();
        let rows = s
            .lattice
            .basis()
            .iter()
            .map(|r| {
                let mut v = vec![BigInt::zero(); k];
                v.extend(r.iter().cloned());
                v
            })
            .collect();
        self.make(s.window + 1, rows)
    }

    /// `{x ∈ h : β(x) ∈ target}`.
    pub fn preimage_in(&self, h: &ShiftSubgroup, target: &ShiftSubgroup) -> ShiftSubgroup {
        let k = self.k();
        let len = h.window.max(target.window);
        let t = self.padded(target, len + 1);
        // vectors of t whose position-0 block lies in the relations, then drop position 0
        let mut pos0: Vec<Vec<BigInt>> = self.relations(1).into_iter().map(|mut r| {
            r.resize((len + 1) * k, BigInt::zero());
            r
        }).collect();
        for j in k..(len + 1) * k {
            pos0.push(unit_vec((len + 1) * k, j));
        }
        let zero_at_0 = IntLattice::from_generators((len + 1) * k, &pos0).expect("dims");
        let cut = t.intersect(&zero_at_0).expect("dims");
        let rows: Vec<Vec<BigInt>> = cut.basis().iter().map(|r| r[k..].to_vec()).collect();
        let back = self.make(len, rows);
        self.intersect_sub(h, &back)
    }

    fn sum_sub(&self, a: &ShiftSubgroup, b: &ShiftSubgroup) -> ShiftSubgroup {
        let len = a.window.max(b.window);
        let l = self.padded(a, len).sum(&self.padded(b, len)).expect("dims");
        self.trim(ShiftSubgroup { window: len, lattice: l })
    }

    fn intersect_sub(&self, a: &ShiftSubgroup, b: &ShiftSubgroup) -> ShiftSubgroup {
        let len = a.window.max(b.window);
        let l = self.padded(a, len).intersect(&self.padded(b, len)).expect("dims");
        self.trim(ShiftSubgroup { window: len, lattice: l })
    }

    fn index_sub(&self, a: &ShiftSubgroup, b: &ShiftSubgroup) -> Result<Index> {
        let len = a.window.max(b.window);
        self.padded(a, len).relative_index(&self.padded(b, len))
    }
}

impl ShiftSubgroup {
    /// Length of the shortest window `[0, window)` holding the support.
    pub fn window(&self) -> usize {
        self.window
    }
}

impl ShiftElement {
    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &BTreeMap<usize, Vec<BigInt>> {
        &self.entries
    }
}

impl SubgroupLattice for ShiftGroup {
    type Sub = ShiftSubgroup;

    fn sum(&self, a: &ShiftSubgroup, b: &ShiftSubgroup) -> Result<ShiftSubgroup> {
        Ok(self.sum_sub(a, b))
    }

    fn intersect(&self, a: &ShiftSubgroup, b: &ShiftSubgroup) -> Result<ShiftSubgroup> {
        Ok(self.intersect_sub(a, b))
    }

    fn relative_index(&self, a: &ShiftSubgroup, b: &ShiftSubgroup) -> Result<Index> {
        self.index_sub(a, b)
    }
}

/// The right Bernoulli shift `β_F`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BernoulliShift {
    group: ShiftGroup,
}

impl BernoulliShift {
    pub fn new(group: ShiftGroup) -> Self {
        Self { group }
    }

    pub fn group(&self) -> &ShiftGroup {
        &self.group
    }

    /// `|coker β| = |F|`; `ker β = 0`.
    pub fn cokernel_order(&self) -> Index {
        self.group.cell.order()
    }
}

impl EndoAction for BernoulliShift {
    type Space = ShiftGroup;

    fn space(&self) -> &ShiftGroup {
        &self.group
    }

    fn image(&self, h: &ShiftSubgroup) -> Result<ShiftSubgroup> {
        Ok(self.group.image(h))
    }

    fn preimage_within(&self, h: &ShiftSubgroup, k: &ShiftSubgroup) -> Result<ShiftSubgroup> {
        Ok(self.group.preimage_in(h, k))
    }
}

/// `|T_n(β_F, F_sub)|` with `T_n = F_sub + β F_sub + … + β^{n-1} F_sub`.
pub fn shift_trajectory_order(group: &ShiftGroup, f_sub: &ShiftSubgroup, n: usize) -> Result<Index> {
    if n == 0 {
        return Err(Error::InvalidArgument("trajectory length must be at least 1".into()));
    }
    let mut t = f_sub.clone();
    let mut power = f_sub.clone();
    for _ in 1..n {
        power = group.image(&power);
        t = group.sum_sub(&t, &power);
    }
    Ok(group.order(&t))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z2() -> ShiftGroup {
        ShiftGroup::new(FgAbGroup::cyclic(2)).unwrap()
    }

    #[test]
    fn bernoulli_trajectory_orders() {
        let g = z2();
        let f = g.coordinate_copy(0);
        for n in 1..8 {
            assert_eq!(shift_trajectory_order(&g, &f, n).unwrap(), Index::finite(1u64 << n));
        }
        let zero = g.zero_subgroup();
        assert_eq!(shift_trajectory_order(&g, &zero, 5).unwrap(), Index::one());
        assert!(shift_trajectory_order(&g, &f, 0).is_err());
    }

    #[test]
    fn klein_cell_closure_agrees() {
        let cell = FgAbGroup::from_cyclic_orders(&[2.into(), 2.into()], 0);
        let g = ShiftGroup::new(cell).unwrap();
        let f = g.coordinate_copy(0);
        assert_eq!(shift_trajectory_order(&g, &f, 3).unwrap(), Index::finite(64));
        // explicit closure of the generators of F, βF, β²F
        let mut gens = g.generators(&f);
        for _ in 0..2 {
            let next: Vec<_> = gens.iter().map(|x| g.shift(x)).collect();
            gens.extend(next);
        }
        assert_eq!(g.closure(&gens, 1000).unwrap().len(), 64);
        assert!(matches!(g.closure(&gens, 10), Err(Error::CapExceeded { cap: 10 })));
    }

    #[test]
    fn canonical_window() {
        let g = ShiftGroup::new(FgAbGroup::cyclic(4)).unwrap();
        // 4·e_3 = 0, so the window collapses
        let s = g.subgroup(&[g.at(0, &[2]).unwrap(), g.at(3, &[4]).unwrap()]);
        assert_eq!(s.window(), 1);
        assert_eq!(g.order(&s), Index::finite(2));
        assert_eq!(s, g.subgroup(&[g.at(0, &[6]).unwrap()]));
    }

    #[test]
    fn preimage_and_index() {
        let g = z2();
        let beta = BernoulliShift::new(g.clone());
        let f = g.coordinate_copy(0);
        let bf = beta.image(&f).unwrap();
        assert_eq!(bf, g.coordinate_copy(1));
        assert_eq!(g.relative_index(&bf, &f).unwrap(), Index::finite(2));
        let t = g.sum(&f, &bf).unwrap();
        assert_eq!(beta.preimage_within(&t, &t).unwrap(), f);
        assert_eq!(beta.preimage_within(&f, &f).unwrap(), g.zero_subgroup());
        assert!(g.contains(&t, &g.add(&g.at(0, &[1]).unwrap(), &g.at(1, &[1]).unwrap())));
        assert!(!g.contains(&t, &g.at(2, &[1]).unwrap()));
    }

    #[test]
    fn integer_cell_ranks() {
        let g = ShiftGroup::over(FgAbGroup::free(1));
        let f = g.coordinate_copy(0);
        let t = g.sum(&f, &g.image(&f)).unwrap();
        assert_eq!(g.rank(&t), 2);
        assert_eq!(g.order(&t), Index::Infinite);
    }
}
