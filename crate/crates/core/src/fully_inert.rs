//! Fully inert subgroups of finite, free and rational ambients, and the
//! self-inert classifier over symbolic group descriptors.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::abelian::{Endo, FgAbGroup, Subgroup};
use crate::error::{Error, Result};
use crate::index::Index;
use crate::inertia::{inert_index, iterated_inert_index};
use crate::lattice::{unit_vec, IntLattice};
use crate::rational::{RationalEndo, RationalLattice};

/// Default index threshold for reporting a uniform-inertness refutation.
pub const UNIFORM_THRESHOLD: u64 = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Cardinal {
    Finite(u64),
    Infinite,
}

impl Cardinal {
    pub fn is_zero(&self) -> bool {
        *self == Cardinal::Finite(0)
    }

    pub fn is_infinite(&self) -> bool {
        *self == Cardinal::Infinite
    }
}

/// The `p`-primary component: a divisible part of the given rank plus a
/// bounded part with the given Ulm-Kaplansky invariants (exponent ↦
/// multiplicity of `Z/p^e`), zero beyond the listed exponents.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeRecord {
    pub prime: u64,
    pub divisible_rank: Cardinal,
    #[serde(default)]
    pub uk_invariants: BTreeMap<u32, Cardinal>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TorsionFreePart {
    Zero,
    DivisibleRank(Cardinal),
    HomogeneousCompletelyDecomposable { rank: Cardinal },
    Other,
}

/// Shape of every `p`-component for primes not listed explicitly.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CofiniteDefault {
    /// Divisible (this includes zero).
    Divisible,
    SingleNonzeroUk,
    Neither,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupDescriptor {
    #[serde(default)]
    pub primes: Vec<PrimeRecord>,
    pub torsion_free_part: TorsionFreePart,
    pub cofinite_prime_default: CofiniteDefault,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SelfInertStatus {
    SelfInert,
    NotSelfInert,
    /// The descriptor passes every necessary condition but the available
    /// clauses do not settle it (mixed groups, unrecognised torsion-free part).
    Undecided,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SelfInertVerdict {
    pub status: SelfInertStatus,
    /// Machine-readable reason, e.g. `p_part_two_infinite_uk`.
    pub reason: String,
}

impl SelfInertVerdict {
    fn new(status: SelfInertStatus, reason: impl Into<String>) -> Self {
        Self { status, reason: reason.into() }
    }
}

impl PrimeRecord {
    fn is_zero(&self) -> bool {
        self.divisible_rank.is_zero() && self.uk_invariants.values().all(Cardinal::is_zero)
    }

    fn is_divisible(&self) -> bool {
        self.uk_invariants.values().all(Cardinal::is_zero)
    }

    /// Divisible, or bounded with at most one infinite UK invariant.
    fn is_self_inert(&self) -> bool {
        self.is_divisible()
            || (self.divisible_rank.is_zero() && self.uk_invariants.values().filter(|c| c.is_infinite()).count() <= 1)
    }
}

pub fn classify_self_inert(d: &GroupDescriptor) -> Result<SelfInertVerdict> {
    use SelfInertStatus::*;
    let mut seen = std::collections::BTreeSet::new();
    for p in &d.primes {
        if p.prime < 2 || !(2..).take_while(|q: &u64| q * q <= p.prime).all(|q| p.prime % q != 0) {
            return Err(Error::InvalidArgument(format!("{} is not prime", p.prime)));
        }
        if !seen.insert(p.prime) {
            return Err(Error::InvalidArgument(format!("prime {} listed twice", p.prime)));
        }
    }
    if let Some(p) = d.primes.iter().find(|p| !p.is_self_inert()) {
        let why = if !p.divisible_rank.is_zero() { "p_part_unbounded_not_divisible" } else { "p_part_two_infinite_uk" };
        return Ok(SelfInertVerdict::new(NotSelfInert, format!("{why}:{}", p.prime)));
    }
    if d.cofinite_prime_default == CofiniteDefault::Neither {
        return Ok(SelfInertVerdict::new(NotSelfInert, "cofinitely_many_p_parts_fail"));
    }
    let torsion_zero =
        d.primes.iter().all(PrimeRecord::is_zero) && d.cofinite_prime_default == CofiniteDefault::Divisible;
    let torsion_divisible =
        d.primes.iter().all(PrimeRecord::is_divisible) && d.cofinite_prime_default == CofiniteDefault::Divisible;
    let (tf_ok, tf_zero, tf_divisible, tf_reason) = match &d.torsion_free_part {
        TorsionFreePart::Zero => (true, true, true, "torsion_free_zero"),
        TorsionFreePart::DivisibleRank(r) => (true, r.is_zero(), true, "torsion_free_divisible"),
        TorsionFreePart::HomogeneousCompletelyDecomposable { rank } => match rank {
            Cardinal::Finite(0) => (true, true, true, "torsion_free_zero"),
            Cardinal::Finite(_) => (true, false, false, "torsion_free_homogeneous_finite_rank"),
            Cardinal::Infinite => (false, false, false, "torsion_free_homogeneous_infinite_rank"),
        },
        TorsionFreePart::Other => {
            return Ok(SelfInertVerdict::new(Undecided, "torsion_free_part_unclassified"));
        }
    };
    if !tf_ok {
        return Ok(SelfInertVerdict::new(NotSelfInert, tf_reason));
    }
    if torsion_divisible && tf_divisible {
        return Ok(SelfInertVerdict::new(SelfInert, "divisible"));
    }
    if tf_zero {
        return Ok(SelfInertVerdict::new(SelfInert, "torsion_p_parts_self_inert"));
    }
    if torsion_zero {
        return Ok(SelfInertVerdict::new(SelfInert, tf_reason));
    }
    Ok(SelfInertVerdict::new(Undecided, "mixed_necessary_conditions_hold"))
}

/// Fully inert in a finite or free ambient.
pub fn is_fully_inert(h: &Subgroup) -> Result<bool> {
    let a = h.ambient();
    if a.is_finite() {
        return Ok(true);
    }
    if !a.is_free() {
        return Err(Error::UnsupportedAmbient(format!("{a} is neither finite nor free")));
    }
    Ok(h.is_zero() || h.index_in_ambient().is_finite())
}

/// Fully inert in `Q^n`, for a finitely generated `H`.
pub fn is_fully_inert_rational(h: &RationalLattice) -> bool {
    h.rank() == 0 || h.is_full_rank()
}

/// For `H ≤ Z^r`: `Some(n)` with `H ~ nZ^r` when `H` is fully inert (`n = 0`
/// for `H = 0`, and `H = nZ^r` itself when `H` is fully invariant).
pub fn commensurable_fully_invariant(h: &Subgroup) -> Result<Option<BigInt>> {
    let a = h.ambient();
    if !a.is_free() {
        return Err(Error::UnsupportedAmbient(format!("{a} is not free")));
    }
    if h.is_zero() {
        return Ok(Some(BigInt::zero()));
    }
    if !h.index_in_ambient().is_finite() {
        return Ok(None);
    }
    Ok(Some(fully_invariant_scale(h).unwrap_or_else(BigInt::one)))
}

/// `n` with `H = nZ^r`, if any.
fn fully_invariant_scale(h: &Subgroup) -> Option<BigInt> {
    let r = h.ambient().dim();
    let n = h.basis().first()?.first()?.clone();
    let nz = IntLattice::full(r).scaled(&n);
    (h.lattice() == &nz).then_some(n)
}

/// A rank-one endomorphism of `Z^r` under which `H` is not inert, when
/// `H` is nonzero of infinite index.
pub fn refuting_endomorphism(h: &Subgroup) -> Result<Option<Endo>> {
    let a = h.ambient();
    if !a.is_free() {
        return Err(Error::UnsupportedAmbient(format!("{a} is not free")));
    }
    if is_fully_inert(h)? {
        return Ok(None);
    }
    let r = a.dim();
    let v = &h.basis()[0];
    let i = v.iter().position(|x| !x.is_zero()).expect("nonzero basis row");
    // a unit vector outside the rational span of H
    let span = h.lattice();
    let j = (0..r)
        .find(|&j| {
            let mut rows = span.basis().clone();
            rows.push(unit_vec(r, j));
            IntLattice::from_generators(r, &rows).map(|l| l.rank()).unwrap_or(0) > span.rank()
        })
        .expect("H has infinite index");
    // x ↦ x_i e_j
    let m = (0..r)
        .map(|row| (0..r).map(|col| if row == j && col == i { BigInt::one() } else { BigInt::zero() }).collect())
        .collect();
    let phi = Endo::new(a, m)?;
    debug_assert!(!inert_index(&phi, h)?.inert);
    Ok(Some(phi))
}

/// Fully invariant ⇒ commensurable with fully invariant ⇒ uniformly fully
/// inert ⇒ fully inert, evaluated on one subgroup.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FullyInertProfile {
    pub fully_invariant: bool,
    pub commensurable_with_fully_invariant: bool,
    pub uniformly_fully_inert: bool,
    pub fully_inert: bool,
}

impl FullyInertProfile {
    pub fn respects_chain(&self) -> bool {
        (!self.fully_invariant || self.commensurable_with_fully_invariant)
            && (!self.commensurable_with_fully_invariant || self.uniformly_fully_inert)
            && (!self.uniformly_fully_inert || self.fully_inert)
    }
}

/// Profile of `H ≤ Z^r`. The uniform bound for a finite-index `H` is
/// `[Z^r : H]`.
pub fn free_profile(h: &Subgroup) -> Result<FullyInertProfile> {
    let fi = is_fully_inert(h)?;
    Ok(FullyInertProfile {
        fully_invariant: h.is_zero() || fully_invariant_scale(h).is_some(),
        commensurable_with_fully_invariant: commensurable_fully_invariant(h)?.is_some(),
        uniformly_fully_inert: fi,
        fully_inert: fi,
    })
}

/// Profile of a f.g. `H ≤ Q^n`, where only `0` and `Q^n` are fully invariant.
pub fn rational_profile(h: &RationalLattice) -> FullyInertProfile {
    FullyInertProfile {
        fully_invariant: h.is_zero(),
        commensurable_with_fully_invariant: h.is_zero(),
        uniformly_fully_inert: is_uniformly_fully_inert(h, UNIFORM_THRESHOLD).map(|u| u.uniform).unwrap_or(false),
        fully_inert: is_fully_inert_rational(h),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UniformWitness {
    /// The multiplication `1/p` on `Q^n`.
    pub phi: RationalEndo,
    pub power: u32,
    pub index: BigInt,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UniformVerdict {
    pub uniform: bool,
    pub witness: Option<UniformWitness>,
}

/// Uniform full inertness of a f.g. `H ≤ Q^n`: only `H = 0` qualifies. A
/// nonzero `H` is refuted by `φ = 1/2` at the first power whose strict
/// inert index exceeds `threshold`.
pub fn is_uniformly_fully_inert(h: &RationalLattice, threshold: u64) -> Result<UniformVerdict> {
    if h.is_zero() {
        return Ok(UniformVerdict { uniform: true, witness: None });
    }
    let phi = RationalEndo::scalar(h.dim(), &BigRational::new(BigInt::one(), BigInt::from(2)));
    let limit = BigInt::from(threshold);
    for k in 1u32.. {
        match iterated_inert_index(&phi, h, k as i64)? {
            Index::Finite(n) if n > limit => {
                return Ok(UniformVerdict {
                    uniform: false,
                    witness: Some(UniformWitness { phi, power: k, index: n }),
                });
            }
            Index::Finite(_) => {}
            Index::Infinite => unreachable!("1/2 multiplies a f.g. subgroup into a finite extension"),
        }
    }
    unreachable!()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoxDecomposition {
    /// `H_i = H ∩ A_i`, each in its own factor.
    pub parts: Vec<Subgroup>,
    pub part_fully_inert: Vec<bool>,
    /// `H_* = ⊕ H_i` in the whole ambient.
    pub h_star: Subgroup,
    /// `[H : H_*]`.
    pub defect: Index,
    pub fully_inert: bool,
    /// An endomorphism of the whole ambient refuting full inertness.
    pub witness: Option<Endo>,
}

/// Split `H ≤ Z^{r_1} ⊕ … ⊕ Z^{r_n}` along the marked factors.
pub fn box_decompose_fully_inert(h: &Subgroup, factor_ranks: &[usize]) -> Result<BoxDecomposition> {
    let a = h.ambient();
    if !a.is_free() {
        return Err(Error::UnsupportedAmbient("box decomposition needs free factors".into()));
    }
    let r: usize = factor_ranks.iter().sum();
    if r != a.dim() || factor_ranks.iter().any(|&x| x == 0) {
        return Err(Error::UnsupportedAmbient(format!("factor ranks {factor_ranks:?} do not split {a}")));
    }
    let mut parts = Vec::new();
    let mut part_fi = Vec::new();
    let mut star_rows = Vec::new();
    let mut offset = 0;
    for &ri in factor_ranks {
        let rows: Vec<Vec<BigInt>> = (offset..offset + ri).map(|j| unit_vec(r, j)).collect();
        let ai = Subgroup::from_rows(a, &rows)?;
        let hi = h.intersect(&ai)?;
        star_rows.extend(hi.basis().iter().cloned());
        let fi = FgAbGroup::free(ri);
        let local: Vec<Vec<BigInt>> = hi.basis().iter().map(|row| row[offset..offset + ri].to_vec()).collect();
        let part = Subgroup::from_rows(&fi, &local)?;
        part_fi.push(is_fully_inert(&part)?);
        parts.push(part);
        offset += ri;
    }
    let h_star = Subgroup::from_rows(a, &star_rows)?;
    let defect = h.index(&h_star)?;
    let fully_inert = is_fully_inert(h)?;
    let witness = refuting_endomorphism(h)?;
    Ok(BoxDecomposition { parts, part_fully_inert: part_fi, h_star, defect, fully_inert, witness })
}
