//! Entropy invariants: trajectory-based `H_alg` and i-entropy, intrinsic
//! entropy, Mahler-measure `h_alg`, adjoint entropy, limit-free formulas,
//! shift-model topological entropy and scale, and growth.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::abelian::{Endo, FgAbGroup, GroupElement, Subgroup};
use crate::error::{Error, Result};
use crate::index::Index;
use crate::inertia::strict_inert_index;
use crate::mahler::{kronecker_test, ln_abs, mahler_measure_with, MahlerConfig};
use crate::model::{EndoAction, SubOf, SubgroupLattice};
use crate::models::{
    cylinder_cotrajectory_index, two_sided_shift_inert_index, BernoulliShift, CylinderFamily, LinearShiftSpace,
    ShiftElement, ShiftGroup, ShiftSubgroup, Sidedness,
};
use crate::rational::{RationalEndo, RationalLattice, RationalSpace};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StabilizationConfig {
    pub window: usize,
    pub max_steps: usize,
}

impl Default for StabilizationConfig {
    fn default() -> Self {
        Self { window: 3, max_steps: 64 }
    }
}

impl StabilizationConfig {
    pub fn validate(&self) -> Result<()> {
        if self.window == 0 || self.window > self.max_steps {
            return Err(Error::InvalidArgument(format!(
                "stabilization window {} must lie in 1..={}",
                self.window, self.max_steps
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EntropyValue {
    /// `log q` for a positive rational `q`.
    LogOf(BigRational),
    /// An exact integer (dimension and rank entropies).
    Integer(BigInt),
    Certified { value: f64, error_bound: f64 },
}

impl EntropyValue {
    pub fn log_of_int(n: BigInt) -> Self {
        EntropyValue::LogOf(BigRational::from_integer(n))
    }

    pub fn zero() -> Self {
        EntropyValue::LogOf(BigRational::one())
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            EntropyValue::LogOf(q) => ln_abs(q.numer()) - ln_abs(q.denom()),
            EntropyValue::Integer(n) => n.to_f64().unwrap_or(f64::INFINITY),
            EntropyValue::Certified { value, .. } => *value,
        }
    }

    pub fn error_bound(&self) -> f64 {
        match self {
            EntropyValue::Certified { error_bound, .. } => *error_bound,
            _ => 0.0,
        }
    }

    pub fn is_exact(&self) -> bool {
        !matches!(self, EntropyValue::Certified { .. })
    }

    /// Exact equality when both sides are exact, else overlap of the
    /// certified intervals.
    pub fn agrees_with(&self, other: &EntropyValue) -> bool {
        if self.is_exact() && other.is_exact() {
            return match (self, other) {
                (EntropyValue::LogOf(a), EntropyValue::LogOf(b)) => a == b,
                (EntropyValue::Integer(a), EntropyValue::Integer(b)) => a == b,
                _ => false,
            };
        }
        (self.to_f64() - other.to_f64()).abs() <= self.error_bound() + other.error_bound() + 1e-12
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EntropyPath {
    Stabilization,
    Yuzvinski,
    LeadingCoefficient,
    LimitFree,
    Cotrajectory,
    SymbolicShift,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CrossCheck {
    pub path: EntropyPath,
    pub value: EntropyValue,
    pub agree: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EntropyReport {
    pub value: EntropyValue,
    pub path: EntropyPath,
    pub steps_used: usize,
    /// Set when the value rests on the stabilization window alone.
    pub heuristic: bool,
    pub cross_check: Option<CrossCheck>,
}

impl EntropyReport {
    fn exact(value: EntropyValue, path: EntropyPath) -> Self {
        Self { value, path, steps_used: 0, heuristic: false, cross_check: None }
    }

    fn with_cross_check(mut self, other: &EntropyReport) -> Self {
        let agree = self.value.agrees_with(&other.value);
        self.cross_check = Some(CrossCheck { path: other.path, value: other.value.clone(), agree });
        if agree {
            self.heuristic = false;
        }
        self
    }
}

/// Runs `next(1), next(2), …` until `window` consecutive terms are equal.
/// Returns the stationary term and the number of terms computed.
pub fn stabilize<T, F>(cfg: &StabilizationConfig, mut next: F) -> Result<(T, usize)>
where
    T: PartialEq,
    F: FnMut(usize) -> Result<T>,
{
    cfg.validate()?;
    let mut last: Option<T> = None;
    let mut run = 0;
    for step in 1..=cfg.max_steps {
        let a = next(step)?;
        if last.as_ref() == Some(&a) {
            run += 1;
        } else {
            run = 1;
        }
        last = Some(a);
        if run >= cfg.window {
            return Ok((last.unwrap(), step));
        }
    }
    Err(Error::StabilizationNotDetected { max_steps: cfg.max_steps })
}

/// `T_n = F + φF + … + φ^{n-1}F`.
pub fn trajectory<E: EndoAction>(phi: &E, f: &SubOf<E>, n: usize) -> Result<SubOf<E>> {
    if n == 0 {
        return Err(Error::InvalidArgument("trajectory length must be at least 1".into()));
    }
    let mut t = f.clone();
    let mut p = f.clone();
    for _ in 1..n {
        p = phi.image(&p)?;
        t = phi.space().sum(&t, &p)?;
    }
    Ok(t)
}

/// Successive trajectories `T_1, T_2, …`, computed incrementally.
struct Trajectories<'a, E: EndoAction> {
    phi: &'a E,
    t: SubOf<E>,
    p: SubOf<E>,
}

impl<'a, E: EndoAction> Trajectories<'a, E> {
    fn new(phi: &'a E, f: &SubOf<E>) -> Self {
        Self { phi, t: f.clone(), p: f.clone() }
    }

    /// Advance `T_n ↦ T_{n+1}` and return `(T_n, T_{n+1})`.
    fn step(&mut self) -> Result<(SubOf<E>, SubOf<E>)> {
        self.p = self.phi.image(&self.p)?;
        let next = self.phi.space().sum(&self.t, &self.p)?;
        let prev = std::mem::replace(&mut self.t, next);
        Ok((prev, self.t.clone()))
    }
}

fn finite(i: Index) -> Result<BigInt> {
    match i {
        Index::Finite(n) => Ok(n),
        Index::Infinite => Err(Error::InfiniteIndex),
    }
}

/// `H_alg(φ, H)` as `log` of the stationary value of `|T_{n+1}/T_n|`.
pub fn h_alg_stabilized<E: EndoAction>(phi: &E, h: &SubOf<E>, cfg: &StabilizationConfig) -> Result<EntropyReport> {
    if !strict_inert_index(phi, h)?.is_finite() {
        return Err(Error::NotInert);
    }
    let mut traj = Trajectories::new(phi, h);
    let (a, steps) = stabilize(cfg, |_| {
        let (prev, next) = traj.step()?;
        finite(phi.space().relative_index(&next, &prev)?)
    })?;
    Ok(EntropyReport {
        value: EntropyValue::log_of_int(a),
        path: EntropyPath::Stabilization,
        steps_used: steps,
        heuristic: true,
        cross_check: None,
    })
}

/// `ent(φ)` on a f.g. group: `H_alg` on the finite torsion part, hence 0.
pub fn ent_fg(phi: &Endo, cfg: &StabilizationConfig) -> Result<EntropyReport> {
    let t = Subgroup::torsion(phi.ambient());
    let mut r = h_alg_stabilized(phi, &t, cfg)?;
    debug_assert_eq!(r.value, EntropyValue::zero());
    r.heuristic = false;
    Ok(r)
}

/// `ent(φ)` on `Q^n`: the only finite subgroup is 0, so the value is 0.
pub fn ent_rational(phi: &RationalEndo, cfg: &StabilizationConfig) -> Result<EntropyReport> {
    let mut r = h_alg_stabilized(phi, &RationalLattice::zero(phi.dim()), cfg)?;
    r.heuristic = false;
    Ok(r)
}

/// `ẽnt(φ)` on `Q^n`: `log s` for the leading coefficient `s` of the
/// primitive characteristic polynomial, optionally cross-checked by
/// stabilization on `Z^n`.
pub fn intrinsic_entropy(phi: &RationalEndo, cross_check: Option<&StabilizationConfig>) -> Result<EntropyReport> {
    let f = phi.charpoly_primitive();
    let s = f.leading().expect("characteristic polynomial is nonzero").abs();
    let report = EntropyReport::exact(EntropyValue::log_of_int(s), EntropyPath::LeadingCoefficient);
    match cross_check {
        None => Ok(report),
        Some(cfg) => {
            let other = h_alg_stabilized(phi, &RationalLattice::standard(phi.dim()), cfg)?;
            Ok(report.with_cross_check(&other))
        }
    }
}

/// `h_alg(φ)` on `Q^n` as the Mahler measure of the primitive
/// characteristic polynomial.
pub fn h_alg_yuzvinski(phi: &RationalEndo, cfg: &MahlerConfig) -> Result<EntropyReport> {
    let m = mahler_measure_with(&phi.charpoly_primitive(), cfg)?;
    let value = match m.log_of {
        Some(r) => EntropyValue::log_of_int(r),
        None => EntropyValue::Certified { value: m.value, error_bound: m.error_bound },
    };
    Ok(EntropyReport::exact(value, EntropyPath::Yuzvinski))
}

/// The induced map on `Q ⊗ A = Q^r` of an endomorphism of a f.g. group.
pub fn rational_extension(phi: &Endo) -> Result<RationalEndo> {
    let block = phi.free_block();
    let rows = block.into_iter().map(|r| r.into_iter().map(BigRational::from_integer).collect()).collect();
    RationalEndo::new(rows)
}

/// `h_alg(φ)` on a f.g. group, computed on the rational extension (the
/// torsion part contributes nothing).
pub fn h_alg_fg(phi: &Endo, cfg: &MahlerConfig) -> Result<EntropyReport> {
    if phi.ambient().free_rank() == 0 {
        return Ok(EntropyReport::exact(EntropyValue::zero(), EntropyPath::Yuzvinski));
    }
    h_alg_yuzvinski(&rational_extension(phi)?, cfg)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InvariantPlugin {
    LogOrder,
    Dimension,
    Rank,
}

/// Subadditive invariants a model can evaluate on its subgroups. `None`
/// means infinite or not defined on this model.
pub trait SubgroupInvariants: SubgroupLattice {
    fn trivial(&self) -> Self::Sub;
    fn order(&self, s: &Self::Sub) -> Option<BigInt>;
    fn dimension(&self, _s: &Self::Sub) -> Option<usize> {
        None
    }
    fn rank(&self, _s: &Self::Sub) -> Option<usize> {
        None
    }
}

impl SubgroupInvariants for FgAbGroup {
    fn trivial(&self) -> Subgroup {
        Subgroup::zero(self)
    }
    fn order(&self, s: &Subgroup) -> Option<BigInt> {
        s.order().into_value()
    }
    fn rank(&self, s: &Subgroup) -> Option<usize> {
        Some(s.rank())
    }
}

impl SubgroupInvariants for RationalSpace {
    fn trivial(&self) -> RationalLattice {
        RationalLattice::zero(self.dim)
    }
    fn order(&self, s: &RationalLattice) -> Option<BigInt> {
        s.is_zero().then(BigInt::one)
    }
    fn rank(&self, s: &RationalLattice) -> Option<usize> {
        Some(s.rank())
    }
}

impl SubgroupInvariants for ShiftGroup {
    fn trivial(&self) -> ShiftSubgroup {
        self.zero_subgroup()
    }
    fn order(&self, s: &ShiftSubgroup) -> Option<BigInt> {
        ShiftGroup::order(self, s).into_value()
    }
    fn rank(&self, s: &ShiftSubgroup) -> Option<usize> {
        Some(ShiftGroup::rank(self, s))
    }
}

impl SubgroupInvariants for LinearShiftSpace {
    fn trivial(&self) -> crate::models::LinearSubspace {
        self.subspace_i64(&[])
    }
    fn order(&self, s: &crate::models::LinearSubspace) -> Option<BigInt> {
        match self.field() {
            crate::models::Field::Prime(p) => Some(BigInt::from(*p).pow(self.dimension(s) as u32)),
            crate::models::Field::Rationals => (self.dimension(s) == 0).then(BigInt::one),
        }
    }
    fn dimension(&self, s: &crate::models::LinearSubspace) -> Option<usize> {
        Some(LinearShiftSpace::dimension(self, s))
    }
}

fn plugin_value<S: SubgroupInvariants>(space: &S, plugin: InvariantPlugin, s: &S::Sub) -> Result<BigInt> {
    let v = match plugin {
        InvariantPlugin::LogOrder => space.order(s),
        InvariantPlugin::Dimension => space.dimension(s).map(BigInt::from),
        InvariantPlugin::Rank => space.rank(s).map(BigInt::from),
    };
    v.ok_or_else(|| Error::InvalidArgument(format!("{plugin:?} invariant is infinite or undefined here")))
}

/// `H_i(φ, N) = lim i(T_n)/n`, read off the stationary increment
/// `i(T_{n+1}) − i(T_n)` (a ratio of orders for `log_order`).
pub fn i_entropy<E>(phi: &E, n: &SubOf<E>, plugin: InvariantPlugin, cfg: &StabilizationConfig) -> Result<EntropyReport>
where
    E: EndoAction,
    E::Space: SubgroupInvariants,
{
    let space = phi.space();
    plugin_value(space, plugin, n)?;
    let mut traj = Trajectories::new(phi, n);
    let (inc, steps) = stabilize(cfg, |_| {
        let (prev, next) = traj.step()?;
        let (a, b) = (plugin_value(space, plugin, &prev)?, plugin_value(space, plugin, &next)?);
        Ok(match plugin {
            InvariantPlugin::LogOrder => EntropyValue::LogOf(BigRational::new(b, a)),
            _ => EntropyValue::Integer(b - a),
        })
    })?;
    Ok(EntropyReport { value: inc, path: EntropyPath::Stabilization, steps_used: steps, heuristic: true, cross_check: None })
}

/// `log |T/φT| − log |ker φ ∩ T|` once the trajectory `T(φ, F)` saturates
/// to a finite subgroup.
pub fn limit_free_h<E>(phi: &E, f: &SubOf<E>, max_steps: usize) -> Result<EntropyReport>
where
    E: EndoAction,
    E::Space: SubgroupInvariants,
{
    let space = phi.space();
    let mut traj = Trajectories::new(phi, f);
    for step in 1..=max_steps {
        let (prev, next) = traj.step()?;
        if prev != next {
            continue;
        }
        let t = next;
        let Some(t_order) = space.order(&t) else { break };
        let phi_t = phi.image(&t)?;
        let coker = finite(space.relative_index(&t, &phi_t)?)?;
        let ker = phi.preimage_within(&t, &space.trivial())?;
        let ker_order = space.order(&ker).expect("subgroup of a finite group");
        debug_assert!(t_order >= ker_order);
        return Ok(EntropyReport {
            value: EntropyValue::LogOf(BigRational::new(coker, ker_order)),
            path: EntropyPath::LimitFree,
            steps_used: step,
            heuristic: false,
            cross_check: None,
        });
    }
    Err(Error::InvalidArgument("trajectory is neither finite nor a full shift trajectory".into()))
}

/// Symbolic limit-free path on a Bernoulli shift: `log|coker β| − log|ker β|`
/// with `coker β ≅ F`, `ker β = 0`, valid when `F_sub` is a full coordinate copy.
pub fn limit_free_shift(beta: &BernoulliShift, f_sub: &ShiftSubgroup) -> Result<EntropyReport> {
    let g = beta.group();
    let full_copy = (0..f_sub.window().max(1)).any(|pos| &g.coordinate_copy(pos) == f_sub);
    if !full_copy {
        return Err(Error::InvalidArgument("trajectory is neither finite nor a full shift trajectory".into()));
    }
    let coker = finite(beta.cokernel_order())?;
    Ok(EntropyReport::exact(EntropyValue::log_of_int(coker), EntropyPath::LimitFree))
}

/// `C_n(φ, H) = H ∩ φ^{-1}H ∩ … ∩ φ^{-(n-1)}H`.
pub fn adjoint_cotrajectory<E: EndoAction>(phi: &E, h: &SubOf<E>, n: usize) -> Result<SubOf<E>> {
    if n == 0 {
        return Err(Error::InvalidArgument("cotrajectory length must be at least 1".into()));
    }
    let mut c = h.clone();
    for _ in 1..n {
        c = phi.preimage_within(h, &c)?;
    }
    Ok(c)
}

/// `log` of the stationary value of `[C_n : C_{n+1}]`.
pub fn intrinsic_adjoint_entropy<E: EndoAction>(
    phi: &E,
    h: &SubOf<E>,
    cfg: &StabilizationConfig,
) -> Result<EntropyReport> {
    if !strict_inert_index(phi, h)?.is_finite() {
        return Err(Error::NotInert);
    }
    let mut c = h.clone();
    let (b, steps) = stabilize(cfg, |_| {
        let next = phi.preimage_within(h, &c)?;
        let b = finite(phi.space().relative_index(&c, &next)?)?;
        c = next;
        Ok(b)
    })?;
    Ok(EntropyReport {
        value: EntropyValue::log_of_int(b),
        path: EntropyPath::Cotrajectory,
        steps_used: steps,
        heuristic: true,
        cross_check: None,
    })
}

/// Measure-free `h_top` of the left shift on a one-sided cylinder family:
/// the stationary ratio of `[U : C_n(ψ, U)]`.
pub fn h_top_shift(fam: &CylinderFamily, cfg: &StabilizationConfig) -> Result<EntropyReport> {
    if fam.sides() != Sidedness::OneSided {
        return Err(Error::InvalidArgument("h_top needs a one-sided family".into()));
    }
    let (r, steps) = stabilize(cfg, |n| {
        let a = cylinder_cotrajectory_index(fam, 0, n)?;
        let b = cylinder_cotrajectory_index(fam, 0, n + 1)?;
        Ok(BigRational::new(b, a))
    })?;
    Ok(EntropyReport {
        value: EntropyValue::LogOf(r),
        path: EntropyPath::SymbolicShift,
        steps_used: steps,
        heuristic: false,
        cross_check: None,
    })
}

/// `min_k [σU_k : σU_k ∩ U_k]` over the supplied members `U_k` of a
/// two-sided family. The value is relative to that family.
pub fn scale_over_family(fam: &CylinderFamily, ks: &[usize]) -> Result<BigInt> {
    if ks.is_empty() {
        return Err(Error::InvalidArgument("empty subgroup family".into()));
    }
    let mut best: Option<BigInt> = None;
    for &k in ks {
        let s = two_sided_shift_inert_index(fam, k)?;
        if best.as_ref().is_none_or(|b| &s < b) {
            best = Some(s);
        }
    }
    Ok(best.unwrap())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GrowthClass {
    Polynomial,
    Exponential,
}

/// Exponential iff the primitive characteristic polynomial is not
/// `± t^a ·` (product of cyclotomics).
pub fn classify_growth(phi: &RationalEndo) -> GrowthClass {
    if kronecker_test(&phi.charpoly_primitive()) {
        GrowthClass::Polynomial
    } else {
        GrowthClass::Exponential
    }
}

pub fn classify_growth_fg(phi: &Endo) -> Result<GrowthClass> {
    if phi.ambient().free_rank() == 0 {
        return Ok(GrowthClass::Polynomial);
    }
    Ok(classify_growth(&rational_extension(phi)?))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SumsetGrowth {
    /// `γ(1), …, γ(n_max)`.
    pub sizes: Vec<usize>,
    /// `γ(m+n) ≤ γ(m)γ(n)`; only asserted when `0 ∈ F`.
    pub subadditive: Option<bool>,
}

fn sumset_sizes<T: Ord + Clone>(
    f: &[T],
    n_max: usize,
    cap: usize,
    zero: &T,
    add: impl Fn(&T, &T) -> T,
    apply: impl Fn(&T) -> Result<T>,
) -> Result<SumsetGrowth> {
    if n_max == 0 {
        return Err(Error::InvalidArgument("n_max must be at least 1".into()));
    }
    let base: BTreeSet<T> = f.iter().cloned().collect();
    if base.len() > cap {
        return Err(Error::CapExceeded { cap });
    }
    let mut t = base.clone();
    let mut sizes = vec![t.len()];
    for _ in 1..n_max {
        let mut next = BTreeSet::new();
        for x in &t {
            let y = apply(x)?;
            for b in &base {
                next.insert(add(b, &y));
                if next.len() > cap {
                    return Err(Error::CapExceeded { cap });
                }
            }
        }
        t = next;
        sizes.push(t.len());
    }
    let subadditive = base.contains(zero).then(|| {
        (1..=n_max).all(|m| {
            (1..=n_max - m).all(|n| (sizes[m + n - 1] as u128) <= sizes[m - 1] as u128 * sizes[n - 1] as u128)
        })
    });
    Ok(SumsetGrowth { sizes, subadditive })
}

/// `γ_{φ,F}(n) = |F + φF + … + φ^{n-1}F|` for a finite subset of a f.g. group.
pub fn sumset_growth(phi: &Endo, f: &[GroupElement], n_max: usize, cap: usize) -> Result<SumsetGrowth> {
    let a = phi.ambient();
    for x in f {
        a.check_dim(x.coords().len())?;
    }
    let zero = GroupElement::zero(a);
    sumset_sizes(f, n_max, cap, &zero, |x, y| x.add(y, a), |x| phi.apply(x))
}

/// Sumset growth on a Bernoulli shift.
pub fn sumset_growth_shift(beta: &BernoulliShift, f: &[ShiftElement], n_max: usize, cap: usize) -> Result<SumsetGrowth> {
    let g = beta.group();
    let zero = g.element(&[])?;
    sumset_sizes(f, n_max, cap, &zero, |x, y| g.add(x, y), |x| Ok(g.shift(x)))
}
