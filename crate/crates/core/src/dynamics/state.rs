//! Per-state questions: minimal polynomial of a trajectory, its threshold,
//! and how periods combine under p-adic perturbation.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;

use super::{LinearMap, MapMod, StateVector};
use crate::factor;
use crate::fp::{self, FpPoly};
use crate::order::root_threshold;
use crate::poly::IntPoly;
use crate::ring::Threshold;
use crate::{Error, Result};

/// Minimal polynomial over `F_p` of the trajectory of `x0 mod p`.
///
/// Each coordinate sequence `s` of period `T` has generating function
/// `H(t) / (1 - t^T)` with `H = sum_{i<T} s_i t^i`; its reduced denominator
/// `(1 - t^T) / gcd(H, 1 - t^T)` is the reversed minimal polynomial. The
/// result is the lcm of the per-coordinate polynomials, reversed back and
/// made monic. The zero trajectory gives 1.
pub fn minimal_poly_of_sequence(map: &LinearMap, x0: &[u64]) -> Result<IntPoly> {
    let m1 = map.at(1)?;
    let p = m1.p();
    let x = m1.reduce(x0);
    let mut traj = vec![x.clone()];
    let mut y = m1.apply(&x);
    while y != x {
        traj.push(y.clone());
        y = m1.apply(&y);
    }
    let t = traj.len();
    let mut one_minus: FpPoly = vec![0; t + 1];
    one_minus[0] = 1;
    one_minus[t] = p - 1;
    let mut acc: FpPoly = vec![1];
    for j in 0..m1.dim() {
        let mut h: FpPoly = traj.iter().map(|s| s[j]).collect();
        fp::trim(&mut h);
        if h.is_empty() {
            continue;
        }
        let g = fp::gcd(&h, &one_minus, p);
        let rev_min = fp::divrem(&one_minus, &g, p).0;
        acc = fp::lcm(&acc, &rev_min, p);
    }
    // reversed polynomials have nonzero constant term, so reversal is exact
    let mut fwd: FpPoly = acc.iter().rev().copied().collect();
    fp::trim(&mut fwd);
    Ok(IntPoly::from_fp(&fp::monic(&fwd, p)))
}

/// How one root of the trajectory polynomial got its threshold.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum RootRule {
    /// Repeated root of the trajectory polynomial.
    Repeated,
    /// Simple root of the map's polynomial: Newton lift through it.
    LiftedThroughMapPoly,
    /// Repeated in the map's polynomial but simple here: the root itself,
    /// read with the same integer coefficients (lift through `t - root`).
    LiftedThroughLinearFactor,
    /// As above for roots outside `F_p`: lift through the trajectory
    /// polynomial with coefficients in `[0, p)`.
    LiftedThroughTrajectoryPoly,
}

/// Threshold of one state, with the per-root breakdown.
#[derive(Clone, Debug)]
pub struct StateThreshold {
    pub minimal_poly: IntPoly,
    pub roots: Vec<(Threshold, RootRule)>,
    pub ks: Threshold,
}

/// `k_s(x0)`: the minimum over roots of the trajectory's minimal
/// polynomial of the precision up to which the root keeps its order.
pub fn ks_of_state(map: &LinearMap, x0: &[u64], cap: u32) -> Result<Threshold> {
    Ok(ks_of_state_detail(map, x0, cap)?.ks)
}

pub fn ks_of_state_detail(map: &LinearMap, x0: &[u64], cap: u32) -> Result<StateThreshold> {
    let p = map.p();
    if x0.iter().all(|c| c % p == 0) {
        return Err(Error::OutOfTheory("state is zero mod p".into()));
    }
    let h = minimal_poly_of_sequence(map, x0)?;
    let rs = factor::factor_mod_p(&h, p)?;
    let f = map.poly();
    let df = f.derivative();
    let mut roots = Vec::new();
    for r in &rs.roots {
        let entry = if r.multiplicity > 1 {
            (Threshold::Finite(1), RootRule::Repeated)
        } else if df.to_ring(&rs.field).eval(&r.value)?.is_unit() {
            (root_threshold(f, &r.value, cap)?, RootRule::LiftedThroughMapPoly)
        } else if rs.d() == 1 {
            let a = BigInt::from(r.value.coeffs_u64().unwrap()[0]);
            let lin = IntPoly::new(vec![-a, BigInt::from(1)]);
            (root_threshold(&lin, &r.value, cap)?, RootRule::LiftedThroughLinearFactor)
        } else {
            (root_threshold(&h, &r.value, cap)?, RootRule::LiftedThroughTrajectoryPoly)
        };
        roots.push(entry);
    }
    let ks = roots.iter().map(|r| r.0).min().unwrap_or(Threshold::Infinite);
    Ok(StateThreshold { minimal_poly: h, roots, ks })
}

/// Outcome of one lcm-lifting measurement.
#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LiftLawReport {
    pub k: u32,
    pub k_prime: u32,
    /// `T_k(x0)`.
    pub t_base: u128,
    /// `T_{k-k'}(c)`.
    pub t_perturbation: u128,
    /// `T_k(x0 + p^{k'} c)`.
    pub t_sum: u128,
    pub pass: bool,
}

/// Measures `T_k(x0 + p^{k'} c)` against `lcm(T_k(x0), T_{k-k'}(c))`.
pub fn period_lift_law_check(map: &LinearMap, x0: &[u64], c: &[u64], k_prime: u32, k: u32) -> Result<LiftLawReport> {
    if k_prime == 0 || k_prime >= k {
        return Err(Error::Parse("need 1 <= k' < k".into()));
    }
    let mk = map.at(k)?;
    let mc = map.at(k - k_prime)?;
    let pk = map.at(k_prime)?.q();
    let x0 = map.at(k_prime)?.reduce(x0);
    let c = mc.reduce(c);
    let sum: StateVector = x0.iter().zip(&c).map(|(a, b)| (a + pk * b) % mk.q()).collect();
    let t_base = mk.state_period(&x0)?;
    let t_perturbation = mc.state_period(&c)?;
    let t_sum = mk.state_period(&sum)?;
    let pass = t_sum == crate::arith::lcm(t_base, t_perturbation)?;
    Ok(LiftLawReport { k, k_prime, t_base, t_perturbation, t_sum, pass })
}

/// Exhaustive lcm-lifting sweep over every unit-containing `x0` at
/// precision `k'` and every perturbation `c` at precision `k - k'`.
#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LiftLawSweep {
    pub k: u32,
    pub k_prime: u32,
    pub checked: u64,
    pub failures: u64,
    /// Up to 16 failing `(x0, c)` pairs.
    pub examples: Vec<(StateVector, StateVector)>,
    pub pass: bool,
}

pub fn period_lift_law_sweep(map: &LinearMap, k: u32, k_prime: u32, budget: u64) -> Result<LiftLawSweep> {
    if k_prime == 0 || k_prime >= k {
        return Err(Error::Parse("need 1 <= k' < k".into()));
    }
    let mk = map.at(k)?;
    let mb = map.at(k_prime)?;
    let mc = map.at(k - k_prime)?;
    let per_k = mk.period_table(budget)?;
    let per_c = mc.period_table(budget)?;
    let p = map.p();
    let shift = mb.q();
    let (mut checked, mut failures) = (0u64, 0u64);
    let mut examples = Vec::new();
    for xi in 0..mb.state_count()? {
        let x0 = mb.state_at(xi);
        if x0.iter().all(|v| v % p == 0) {
            continue;
        }
        let t0 = per_k[mk.index_of(&x0) as usize] as u128;
        for ci in 0..mc.state_count()? {
            let c = mc.state_at(ci);
            let sum: StateVector = x0.iter().zip(&c).map(|(a, b)| (a + shift * b) % mk.q()).collect();
            let want = crate::arith::lcm(t0, per_c[ci as usize] as u128)?;
            checked += 1;
            if per_k[mk.index_of(&sum) as usize] as u128 != want {
                failures += 1;
                if examples.len() < 16 {
                    examples.push((x0.clone(), c));
                }
            }
        }
    }
    Ok(LiftLawSweep { k, k_prime, checked, failures, examples, pass: failures == 0 })
}

impl MapMod {
    /// States as vectors, in index order.
    pub fn states(&self) -> Result<impl Iterator<Item = StateVector> + '_> {
        Ok((0..self.state_count()?).map(move |i| self.state_at(i)))
    }
}
