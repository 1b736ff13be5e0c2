#![allow(dead_code)]

use inertia_core::abelian::{Endo, FgAbGroup, Subgroup};
use num_bigint::BigInt;
use num_integer::Integer;
use proptest::prelude::*;

/// Small f.g. groups: a divisor chain from `{2, 3, 4, 6}` plus up to two free
/// coordinates, at most three coordinates in all.
pub fn group() -> impl Strategy<Value = FgAbGroup> {
    let chains: Vec<Vec<u64>> = vec![vec![], vec![2], vec![3], vec![4], vec![6], vec![2, 2], vec![2, 4], vec![2, 6], vec![3, 3]];
    (proptest::sample::select(chains), 0usize..=2)
        .prop_filter("at most three coordinates", |(c, r)| c.len() + r <= 3 && c.len() + r > 0)
        .prop_map(|(c, r)| FgAbGroup::new(c.into_iter().map(BigInt::from).collect(), r).unwrap())
}

pub fn free_group() -> impl Strategy<Value = FgAbGroup> {
    (1usize..=3).prop_map(FgAbGroup::free)
}

fn entries(n: usize, lo: i64, hi: i64) -> impl Strategy<Value = Vec<Vec<i64>>> {
    proptest::collection::vec(proptest::collection::vec(lo..=hi, n), n)
}

/// Turn an arbitrary integer matrix into a valid endomorphism by scaling
/// the entries that must respect the torsion relations.
pub fn fix_endo(a: &FgAbGroup, raw: &[Vec<i64>]) -> Endo {
    let d = a.invariant_factors();
    let k = d.len();
    let n = a.dim();
    let m = (0..n)
        .map(|j| {
            (0..n)
                .map(|i| {
                    let x = BigInt::from(raw[j][i]);
                    if i >= k {
                        x
                    } else if j < k {
                        x * (&d[j] / d[i].gcd(&d[j]))
                    } else {
                        BigInt::from(0)
                    }
                })
                .collect()
        })
        .collect();
    Endo::new(a, m).unwrap()
}

pub fn endo_of(a: FgAbGroup) -> impl Strategy<Value = Endo> {
    let n = a.dim();
    entries(n, -3, 3).prop_map(move |raw| fix_endo(&a, &raw))
}

pub fn subgroup_of(a: FgAbGroup) -> impl Strategy<Value = Subgroup> {
    let n = a.dim();
    proptest::collection::vec(proptest::collection::vec(-4i64..=4, n), 0..=n).prop_map(move |rows| {
        let rows: Vec<Vec<BigInt>> = rows.into_iter().map(|r| r.into_iter().map(BigInt::from).collect()).collect();
        Subgroup::from_rows(&a, &rows).unwrap()
    })
}

pub fn group_endo_subs(k: usize) -> impl Strategy<Value = (FgAbGroup, Endo, Endo, Vec<Subgroup>)> {
    group().prop_flat_map(move |a| {
        (
            Just(a.clone()),
            endo_of(a.clone()),
            endo_of(a.clone()),
            proptest::collection::vec(subgroup_of(a), k),
        )
    })
}
