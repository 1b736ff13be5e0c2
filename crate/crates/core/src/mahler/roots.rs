//! Floating-point simultaneous root iteration plus a posteriori inclusion
//! disks.
//!
//! The iterations only produce approximations. Certification comes from
//! the Braess–Hadeler inclusion theorem: with Weierstrass corrections
//! `W_i = p(z_i) / (a_n Π_{j≠i} (z_i - z_j))`, the disks `|z - z_i| ≤ n|W_i|`
//! cover every root, and a connected union of `m` disks holds exactly `m`
//! roots. Rounding in the evaluation is folded into the radii.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Which iteration produces the approximations that get certified.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RootSchedule {
    /// Aberth–Ehrlich from points spread on a circle of the Cauchy radius.
    AberthCircle,
    /// Weierstrass (Durand–Kerner) from powers of `0.4 + 0.9i`.
    WeierstrassSpiral,
}

#[derive(Clone, Debug)]
pub struct Disk {
    pub center: Complex64,
    pub radius: f64,
}

const EPS: f64 = f64::EPSILON;

/// Cauchy upper bound on root moduli for coefficients `a` (ascending).
fn cauchy_radius(a: &[f64]) -> f64 {
    let n = a.len() - 1;
    let lead = a[n].abs();
    1.0 + a[..n].iter().map(|c| c.abs() / lead).fold(0.0, f64::max)
}

/// `(p(z), p'(z), Σ |a_k| |z|^k)` by Horner.
fn horner(a: &[f64], z: Complex64) -> (Complex64, Complex64, f64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    let mut abs = 0.0;
    let r = z.norm();
    for c in a.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
        abs = abs * r + c.abs();
    }
    (p, dp, abs)
}

fn initial_guesses(a: &[f64], schedule: RootSchedule) -> Vec<Complex64> {
    let n = a.len() - 1;
    match schedule {
        RootSchedule::AberthCircle => {
            // geometric-mean radius from the constant term, clipped by the Cauchy bound
            let lead = a[n].abs();
            let r0 = (a[0].abs() / lead).powf(1.0 / n as f64);
            let r = if r0.is_finite() && r0 > 0.0 { r0.min(cauchy_radius(a)) } else { 1.0 };
            (0..n)
                .map(|k| {
                    let theta = 2.0 * std::f64::consts::PI * k as f64 / n as f64 + 0.4;
                    Complex64::from_polar(r, theta)
                })
                .collect()
        }
        RootSchedule::WeierstrassSpiral => {
            let seed = Complex64::new(0.4, 0.9);
            let mut z = Complex64::new(1.0, 0.0);
            (0..n)
                .map(|_| {
                    z *= seed;
                    z
                })
                .collect()
        }
    }
}

/// One sweep; returns the largest relative correction.
fn sweep(a: &[f64], z: &mut [Complex64], schedule: RootSchedule) -> f64 {
    let n = z.len();
    let lead = a[n];
    let mut worst: f64 = 0.0;
    for i in 0..n {
        let (p, dp, _) = horner(a, z[i]);
        let step = match schedule {
            RootSchedule::AberthCircle => {
                let ratio = p / dp;
                let mut s = Complex64::new(0.0, 0.0);
                for j in 0..n {
                    if j != i {
                        let d = z[i] - z[j];
                        if d.norm() > 0.0 {
                            s += d.inv();
                        }
                    }
                }
                let denom = Complex64::new(1.0, 0.0) - ratio * s;
                if dp.norm() == 0.0 || denom.norm() == 0.0 {
                    Complex64::new(1e-8, 1e-8)
                } else {
                    ratio / denom
                }
            }
            RootSchedule::WeierstrassSpiral => {
                let mut q = Complex64::new(lead, 0.0);
                for j in 0..n {
                    if j != i {
                        q *= z[i] - z[j];
                    }
                }
                if q.norm() == 0.0 {
                    Complex64::new(1e-8, 1e-8)
                } else {
                    p / q
                }
            }
        };
        if step.is_finite() {
            z[i] -= step;
            worst = worst.max(step.norm() / z[i].norm().max(1e-300));
        }
    }
    worst
}

/// Run the schedule for at most `budget` sweeps, stopping early once the
/// corrections reach the rounding floor.
pub fn approximate_roots(a: &[f64], schedule: RootSchedule, budget: usize) -> (Vec<Complex64>, usize) {
    let n = a.len() - 1;
    if n == 0 {
        return (Vec::new(), 0);
    }
    let mut z = initial_guesses(a, schedule);
    let mut quiet = 0;
    for it in 0..budget {
        let worst = sweep(a, &mut z, schedule);
        if worst < 4.0 * EPS {
            quiet += 1;
            // a couple of extra sweeps after convergence polish the last bits
            if quiet >= 3 {
                return (z, it + 1);
            }
        } else {
            quiet = 0;
        }
    }
    (z, budget)
}

/// Inclusion disks around approximations `z` of the roots of the
/// polynomial with ascending coefficients `a`.
pub fn inclusion_disks(a: &[f64], z: &[Complex64]) -> Vec<Disk> {
    let n = z.len();
    let lead = a[n].abs();
    let gamma = 8.0 * (n as f64 + 2.0) * EPS;
    z.iter()
        .enumerate()
        .map(|(i, &zi)| {
            let (p, _, abs) = horner(a, zi);
            let residual = p.norm() * (1.0 + gamma) + gamma * abs;
            let mut denom = lead;
            for (j, &zj) in z.iter().enumerate() {
                if j != i {
                    denom *= (zi - zj).norm();
                }
            }
            let denom = denom * (1.0 - 4.0 * n as f64 * EPS);
            let radius = if denom > 0.0 { n as f64 * residual / denom } else { f64::INFINITY };
            Disk { center: zi, radius: radius * (1.0 + 1e-12) + f64::MIN_POSITIVE }
        })
        .collect()
}

/// Group overlapping disks into connected components.
pub fn components(disks: &[Disk]) -> Vec<Vec<usize>> {
    let n = disks.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        let mut c = x;
        while p[c] != r {
            let next = p[c];
            p[c] = r;
            c = next;
        }
        r
    }
    for i in 0..n {
        for j in (i + 1)..n {
            let gap = (disks[i].center - disks[j].center).norm();
            if gap <= disks[i].radius + disks[j].radius {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    parent[ri] = rj;
                }
            }
        }
    }
    let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for i in 0..n {
        let r = find(&mut parent, i);
        groups.entry(r).or_default().push(i);
    }
    groups.into_values().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn both_schedules_find_simple_roots() {
        // (t - 2)(t + 3)(t^2 + 1) = t^4 + t^3 - 5t^2 + t - 6
        let a = [-6.0, 1.0, -5.0, 1.0, 1.0];
        for s in [RootSchedule::AberthCircle, RootSchedule::WeierstrassSpiral] {
            let (z, _) = approximate_roots(&a, s, 200);
            let disks = inclusion_disks(&a, &z);
            for want in [Complex64::new(2.0, 0.0), Complex64::new(-3.0, 0.0), Complex64::new(0.0, 1.0)] {
                assert!(
                    disks.iter().any(|d| (d.center - want).norm() <= d.radius.max(1e-12)),
                    "{s:?} missed {want}"
                );
            }
            assert!(disks.iter().all(|d| d.radius < 1e-12));
            assert_eq!(components(&disks).len(), 4);
        }
    }

    #[test]
    fn unconverged_disks_are_large() {
        let a = [-6.0, 1.0, -5.0, 1.0, 1.0];
        let z = initial_guesses(&a, RootSchedule::AberthCircle);
        let disks = inclusion_disks(&a, &z);
        assert!(disks.iter().any(|d| d.radius > 0.1));
    }
}
