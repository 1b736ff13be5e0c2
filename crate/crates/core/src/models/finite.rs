//! Finite (possibly non-abelian) groups given by Cayley tables.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::index::Index;

/// A finite group on the elements `0..n` with a verified multiplication table.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FiniteGroup {
    table: Vec<Vec<usize>>,
    identity: usize,
    inverses: Vec<usize>,
}

/// An endomorphism as the full index map `x ↦ map[x]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FiniteEndo {
    map: Vec<usize>,
}

pub type Subset = BTreeSet<usize>;

impl FiniteGroup {
    /// Validate closure, identity, inverses and associativity.
    pub fn from_table(table: Vec<Vec<usize>>) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return Err(Error::InvalidGroup("empty table".into()));
        }
        if table.iter().any(|r| r.len() != n || r.iter().any(|&x| x >= n)) {
            return Err(Error::InvalidGroup("table is not an n×n table over 0..n".into()));
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| table[e][x] == x && table[x][e] == x))
            .ok_or_else(|| Error::InvalidGroup("no identity".into()))?;
        let mut inverses = vec![0; n];
        for x in 0..n {
            inverses[x] = (0..n)
                .find(|&y| table[x][y] == identity && table[y][x] == identity)
                .ok_or_else(|| Error::InvalidGroup(format!("element {x} has no inverse")))?;
        }
        for a in 0..n {
            for b in 0..n {
                let ab = table[a][b];
                for c in 0..n {
                    if table[ab][c] != table[a][table[b][c]] {
                        return Err(Error::InvalidGroup(format!("({a}·{b})·{c} ≠ {a}·({b}·{c})")));
                    }
                }
            }
        }
        Ok(Self { table, identity, inverses })
    }

    /// The group generated by `gens` under `mul`, with elements numbered in
    /// breadth-first order from the identity.
    pub fn generated_by<T: Ord + Clone>(identity: T, gens: &[T], mul: impl Fn(&T, &T) -> T) -> Self {
        let mut index: BTreeMap<T, usize> = BTreeMap::from([(identity.clone(), 0)]);
        let mut elems = vec![identity];
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            for g in gens {
                let y = mul(&elems[i], g);
                if !index.contains_key(&y) {
                    index.insert(y.clone(), elems.len());
                    queue.push_back(elems.len());
                    elems.push(y);
                }
            }
        }
        let table = elems.iter().map(|a| elems.iter().map(|b| index[&mul(a, b)]).collect()).collect();
        Self::from_table(table).expect("closure of a multiplication is a group")
    }

    /// Permutation group generated by `gens` (images of `0..degree`),
    /// composed left to right.
    pub fn from_permutations(degree: usize, gens: &[Vec<usize>]) -> Self {
        let id: Vec<usize> = (0..degree).collect();
        Self::generated_by(id, gens, |a, b| a.iter().map(|&i| b[i]).collect())
    }

    pub fn cyclic(n: usize) -> Self {
        Self::generated_by(0usize, &[1 % n.max(1)], |a, b| (a + b) % n.max(1))
    }

    /// Dihedral group of order `2n`.
    pub fn dihedral(n: usize) -> Self {
        Self::semidirect_cyclic(n, 2, n.saturating_sub(1).max(1))
    }

    /// `C_n ⋊ C_m` with `b a b⁻¹ = a^r`; requires `r^m ≡ 1 (mod n)`.
    pub fn semidirect_cyclic(n: usize, m: usize, r: usize) -> Self {
        assert!(pow_mod(r, m, n) == 1 % n, "r^m must be 1 mod n");
        // elements (i, j) = a^i b^j; b^j a^k = a^{k r^j} b^j
        Self::generated_by((0usize, 0usize), &[(1 % n, 0), (0, 1 % m)], |x, y| {
            let (i, j) = *x;
            let (k, l) = *y;
            ((i + k * pow_mod(r, j, n)) % n, (j + l) % m)
        })
    }

    /// Dicyclic group of order `4n`: `⟨a, x | a^{2n}, x² = a^n, x a x⁻¹ = a⁻¹⟩`.
    pub fn dicyclic(n: usize) -> Self {
        let m = 2 * n;
        // (i, e) = a^i x^e, e ∈ {0,1}
        Self::generated_by((0usize, 0usize), &[(1 % m, 0), (0, 1)], move |p, q| {
            let (i, e) = *p;
            let (k, f) = *q;
            let k = if e == 1 { (m - k) % m } else { k };
            match (e, f) {
                (1, 1) => ((i + k + n) % m, 0),
                _ => ((i + k) % m, e + f),
            }
        })
    }

    pub fn symmetric(n: usize) -> Self {
        if n < 2 {
            return Self::cyclic(1);
        }
        let cycle: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
        let mut swap: Vec<usize> = (0..n).collect();
        swap.swap(0, 1);
        Self::from_permutations(n, &[cycle, swap])
    }

    /// `A_4`.
    pub fn alternating4() -> Self {
        Self::from_permutations(4, &[vec![1, 2, 0, 3], vec![1, 0, 3, 2]])
    }

    /// `SL(2, 3)`, order 24.
    pub fn sl2_3() -> Self {
        type M = [u8; 4];
        let mul = |a: &M, b: &M| -> M {
            [
                (a[0] * b[0] + a[1] * b[2]) % 3,
                (a[0] * b[1] + a[1] * b[3]) % 3,
                (a[2] * b[0] + a[3] * b[2]) % 3,
                (a[2] * b[1] + a[3] * b[3]) % 3,
            ]
        };
        Self::generated_by([1, 0, 0, 1], &[[1, 1, 0, 1], [1, 0, 1, 1]], mul)
    }

    pub fn direct_product(a: &FiniteGroup, b: &FiniteGroup) -> Self {
        let (na, nb) = (a.order(), b.order());
        let table = (0..na * nb)
            .map(|x| (0..na * nb).map(|y| a.table[x / nb][y / nb] * nb + b.table[x % nb][y % nb]).collect())
            .collect();
        Self::from_table(table).expect("product of groups")
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inverse(&self, a: usize) -> usize {
        self.inverses[a]
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != self.identity {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order()).all(|a| (0..a).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Subgroup generated by a set.
    pub fn generate(&self, gens: &[usize]) -> Subset {
        let mut seen = Subset::from([self.identity]);
        let mut queue = VecDeque::from([self.identity]);
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                let y = self.mul(x, g);
                if seen.insert(y) {
                    queue.push_back(y);
                }
            }
        }
        seen
    }

    pub fn is_subgroup(&self, h: &Subset) -> bool {
        h.contains(&self.identity) && h.iter().all(|&a| h.iter().all(|&b| h.contains(&self.mul(a, self.inverse(b)))))
    }

    /// Every subgroup, as the closure of joins of cyclic subgroups.
    pub fn all_subgroups(&self) -> Vec<Subset> {
        let cyclic: BTreeSet<Subset> = (0..self.order()).map(|a| self.generate(&[a])).collect();
        let mut all: BTreeSet<Subset> = cyclic.clone();
        let mut frontier: Vec<Subset> = cyclic.iter().cloned().collect();
        while let Some(h) = frontier.pop() {
            for c in &cyclic {
                if c.is_subset(&h) {
                    continue;
                }
                let gens: Vec<usize> = h.iter().chain(c.iter()).copied().collect();
                let j = self.generate(&gens);
                if all.insert(j.clone()) {
                    frontier.push(j);
                }
            }
        }
        all.into_iter().collect()
    }

    /// A small generating set: one element if cyclic, else a pair if one
    /// exists, else greedy.
    pub fn small_generating_set(&self) -> Vec<usize> {
        let n = self.order();
        if let Some(a) = (0..n).find(|&a| self.element_order(a) == n) {
            return vec![a];
        }
        for a in 0..n {
            for b in (a + 1)..n {
                if self.generate(&[a, b]).len() == n {
                    return vec![a, b];
                }
            }
        }
        let mut gens = Vec::new();
        let mut span = self.generate(&[]);
        for a in 0..n {
            if !span.contains(&a) {
                gens.push(a);
                span = self.generate(&gens);
            }
        }
        gens
    }

    pub fn image(&self, phi: &FiniteEndo, s: &Subset) -> Subset {
        s.iter().map(|&x| phi.map[x]).collect()
    }

    /// Setwise product `A·B`.
    pub fn product(&self, a: &Subset, b: &Subset) -> Subset {
        a.iter().flat_map(|&x| b.iter().map(move |&y| self.mul(x, y))).collect()
    }

    /// Endomorphisms, all of them when there are at most `cap`, found by
    /// extending every assignment of generator images.
    pub fn endomorphisms(&self, cap: usize) -> Result<Vec<FiniteEndo>> {
        let gens = self.small_generating_set();
        let n = self.order();
        let orders: Vec<usize> = gens.iter().map(|&g| self.element_order(g)).collect();
        let choices: Vec<Vec<usize>> = orders
            .iter()
            .map(|&o| (0..n).filter(|&x| o % self.element_order(x) == 0).collect())
            .collect();
        let mut out = Vec::new();
        let mut pick = vec![0usize; gens.len()];
        loop {
            let images: Vec<usize> = pick.iter().zip(&choices).map(|(&i, c)| c[i]).collect();
            if let Some(e) = self.extend(&gens, &images) {
                out.push(e);
                if out.len() > cap {
                    return Err(Error::CapExceeded { cap });
                }
            }
            // odometer
            let mut i = 0;
            loop {
                if i == pick.len() {
                    return Ok(out);
                }
                pick[i] += 1;
                if pick[i] < choices[i].len() {
                    break;
                }
                pick[i] = 0;
                i += 1;
            }
        }
    }

    /// The homomorphism sending `gens[i] ↦ images[i]`, if one exists.
    pub fn extend(&self, gens: &[usize], images: &[usize]) -> Option<FiniteEndo> {
        let map = self.hom_into(self, gens, images)?;
        Some(FiniteEndo { map })
    }

    /// The homomorphism `self → target` with `gens[i] ↦ images[i]`, as an
    /// index map, if `gens` generate and the assignment extends.
    pub fn hom_into(&self, target: &FiniteGroup, gens: &[usize], images: &[usize]) -> Option<Vec<usize>> {
        let n = self.order();
        let mut map = vec![usize::MAX; n];
        map[self.identity] = target.identity;
        let mut queue = VecDeque::from([self.identity]);
        while let Some(x) = queue.pop_front() {
            for (&g, &im) in gens.iter().zip(images) {
                let y = self.mul(x, g);
                let fy = target.mul(map[x], im);
                if map[y] == usize::MAX {
                    map[y] = fy;
                    queue.push_back(y);
                } else if map[y] != fy {
                    return None;
                }
            }
        }
        (!map.contains(&usize::MAX)).then_some(map)
    }

    pub fn automorphisms(&self) -> Vec<FiniteEndo> {
        let mut out = self.endomorphisms(usize::MAX - 1).expect("uncapped");
        out.retain(|e| e.map.iter().collect::<BTreeSet<_>>().len() == self.order());
        out
    }

    /// `N ⋊ C_m` where the generator of `C_m` acts by the automorphism
    /// `alpha`, which must satisfy `alpha^m = 1`.
    pub fn semidirect(n: &FiniteGroup, alpha: &FiniteEndo, m: usize) -> Result<Self> {
        let k = n.order();
        let mut powers = vec![FiniteEndo::identity(n)];
        for _ in 1..=m {
            powers.push(alpha.compose(powers.last().unwrap()));
        }
        if powers[m] != powers[0] || alpha.map.iter().collect::<BTreeSet<_>>().len() != k {
            return Err(Error::InvalidArgument("the action is not an automorphism of order dividing m".into()));
        }
        let table = (0..k * m)
            .map(|a| {
                let (x1, k1) = (a / m, a % m);
                (0..k * m)
                    .map(|b| {
                        let (x2, k2) = (b / m, b % m);
                        n.mul(x1, powers[k1].map[x2]) * m + (k1 + k2) % m
                    })
                    .collect()
            })
            .collect();
        Self::from_table(table)
    }

    fn center_size(&self) -> usize {
        (0..self.order()).filter(|&z| (0..self.order()).all(|x| self.mul(z, x) == self.mul(x, z))).count()
    }

    /// Multiset of (element order, centralizer size), an isomorphism invariant.
    fn class_profile(&self) -> Vec<(usize, usize)> {
        let n = self.order();
        let mut v: Vec<(usize, usize)> = (0..n)
            .map(|a| (self.element_order(a), (0..n).filter(|&x| self.mul(a, x) == self.mul(x, a)).count()))
            .collect();
        v.sort_unstable();
        v
    }

    pub fn is_isomorphic(&self, other: &FiniteGroup) -> bool {
        if self.order() != other.order()
            || self.center_size() != other.center_size()
            || self.class_profile() != other.class_profile()
        {
            return false;
        }
        let gens = self.small_generating_set();
        let choices: Vec<Vec<usize>> = gens
            .iter()
            .map(|&g| (0..other.order()).filter(|&y| other.element_order(y) == self.element_order(g)).collect())
            .collect();
        let mut pick = vec![0usize; gens.len()];
        if choices.iter().any(Vec::is_empty) {
            return false;
        }
        loop {
            let images: Vec<usize> = pick.iter().zip(&choices).map(|(&i, c)| c[i]).collect();
            if let Some(map) = self.hom_into(other, &gens, &images) {
                if map.iter().collect::<BTreeSet<_>>().len() == other.order() {
                    return true;
                }
            }
            let mut i = 0;
            loop {
                if i == pick.len() {
                    return false;
                }
                pick[i] += 1;
                if pick[i] < choices[i].len() {
                    break;
                }
                pick[i] = 0;
                i += 1;
            }
        }
    }
}

/// Number of isomorphism classes of groups of order `1..=24`.
pub const SMALL_GROUP_COUNTS: [usize; 24] = [1, 1, 1, 2, 1, 2, 1, 5, 2, 2, 1, 5, 1, 2, 1, 14, 1, 5, 1, 5, 2, 2, 1, 15];

/// One representative of every isomorphism class of order `≤ max_order`
/// (at most 24), built from cyclic groups by direct products, split
/// extensions by cyclic groups and the dicyclic family, then deduplicated.
pub fn small_group_catalog(max_order: usize) -> Result<Vec<FiniteGroup>> {
    if max_order > SMALL_GROUP_COUNTS.len() {
        return Err(Error::InvalidArgument(format!("catalog stops at order {}", SMALL_GROUP_COUNTS.len())));
    }
    let mut by_order: Vec<Vec<FiniteGroup>> = vec![Vec::new(); max_order + 1];
    for n in 1..=max_order {
        let mut cands = vec![FiniteGroup::cyclic(n)];
        if n % 4 == 0 && n >= 8 {
            cands.push(FiniteGroup::dicyclic(n / 4));
        }
        for a in 2..n {
            if n % a != 0 {
                continue;
            }
            let b = n / a;
            if a <= b {
                for x in &by_order[a] {
                    for y in &by_order[b] {
                        cands.push(FiniteGroup::direct_product(x, y));
                    }
                }
            }
            // N ⋊ C_b with |N| = a
            for base in &by_order[a] {
                for alpha in base.automorphisms() {
                    if let Ok(g) = FiniteGroup::semidirect(base, &alpha, b) {
                        cands.push(g);
                    }
                }
            }
        }
        let mut reps: Vec<FiniteGroup> = Vec::new();
        for g in cands {
            if !reps.iter().any(|r| r.is_isomorphic(&g)) {
                reps.push(g);
            }
        }
        by_order[n] = reps;
    }
    Ok(by_order.into_iter().flatten().collect())
}

fn pow_mod(r: usize, e: usize, n: usize) -> usize {
    let mut acc = 1 % n.max(1);
    for _ in 0..e {
        acc = acc * r % n.max(1);
    }
    acc
}

impl FiniteEndo {
    /// Validate `map[ab] = map[a] map[b]` on all pairs.
    pub fn new(g: &FiniteGroup, map: Vec<usize>) -> Result<Self> {
        let n = g.order();
        if map.len() != n || map.iter().any(|&x| x >= n) {
            return Err(Error::NotHomomorphism("map is not a self-map of the group".into()));
        }
        for a in 0..n {
            for b in 0..n {
                if map[g.mul(a, b)] != g.mul(map[a], map[b]) {
                    return Err(Error::NotHomomorphism(format!("fails on the pair ({a}, {b})")));
                }
            }
        }
        Ok(Self { map })
    }

    pub fn identity(g: &FiniteGroup) -> Self {
        Self { map: (0..g.order()).collect() }
    }

    /// Conjugation `x ↦ c x c⁻¹`.
    pub fn conjugation(g: &FiniteGroup, c: usize) -> Self {
        let ci = g.inverse(c);
        Self { map: (0..g.order()).map(|x| g.mul(g.mul(c, x), ci)).collect() }
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn apply(&self, x: usize) -> usize {
        self.map[x]
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &FiniteEndo) -> FiniteEndo {
        FiniteEndo { map: other.map.iter().map(|&x| self.map[x]).collect() }
    }
}

/// `T_n = F · F^φ · … · F^{φ^n}` (setwise product of `n + 1` factors).
pub fn finite_group_trajectory(g: &FiniteGroup, phi: &FiniteEndo, f: &Subset, n: usize) -> Subset {
    let mut t = f.clone();
    let mut img = f.clone();
    for _ in 0..n {
        img = g.image(phi, &img);
        t = g.product(&t, &img);
    }
    t
}

/// Number of right cosets `Hx` meeting `t`: the least `|Y|` with `t ⊆ H·Y`.
pub fn minimal_transversal_count(g: &FiniteGroup, h: &Subset, t: &Subset) -> usize {
    let coset_rep = |x: usize| h.iter().map(|&a| g.mul(a, x)).min().expect("H contains 1");
    t.iter().map(|&x| coset_rep(x)).collect::<BTreeSet<_>>().len()
}

/// `[H^φ : H^φ ∩ H]` by counting.
pub fn finite_inert_index(g: &FiniteGroup, h: &Subset, phi: &FiniteEndo) -> Index {
    let img = g.image(phi, h);
    let meet = img.intersection(h).count();
    Index::from((img.len() / meet) as u64)
}
