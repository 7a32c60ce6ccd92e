//! The generalized Arnold Cat map `C = [[1, a], [b, 1 + ab]]`.
//!
//! C has determinant 1 and satisfies `C^2 - (ab + 2) C + I = 0`, so its
//! dynamics on `(Z/p^k)^2` is the Cat-state slice `z -> (z, Cz)` of the
//! companion map of `t^2 - (ab + 2) t + 1`.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint};

use crate::arith::{self, nu, p_free};
use crate::dynamics::{CycleHistogram, LinearMap, StateVector};
use crate::factor;
use crate::order::{self, root_threshold, DEFAULT_SEARCH_CAP};
use crate::poly::IntPoly;
use crate::ring::{Modulus, Threshold};
use crate::{Error, Result};

/// Cat parameters. `a` and `b` are kept as the integers given; the map at
/// precision k uses their residues.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CatParams {
    pub a: u64,
    pub b: u64,
    pub modulus: Modulus,
}

impl CatParams {
    pub fn new(a: u64, b: u64, p: u64, k: u32) -> Result<Self> {
        a.checked_mul(b).and_then(|ab| ab.checked_add(2)).ok_or(Error::Overflow)?;
        Ok(CatParams { a, b, modulus: Modulus::new(p, k)? })
    }

    pub fn p(&self) -> u64 {
        self.modulus.p()
    }

    pub fn k(&self) -> u32 {
        self.modulus.k()
    }

    pub fn at(&self, k: u32) -> Result<Self> {
        CatParams::new(self.a, self.b, self.p(), k)
    }

    /// `[[1, a], [b, 1 + ab]]` as integers, row-major.
    pub fn matrix(&self) -> [u64; 4] {
        [1, self.a, self.b, 1 + self.a * self.b]
    }

    pub fn determinant(&self) -> i128 {
        let [w, x, y, z] = self.matrix().map(|v| v as i128);
        w * z - x * y
    }

    /// Both parameters vanish mod `p^k`.
    pub fn is_trivial(&self) -> bool {
        let q = self.modulus.q_u64().unwrap_or(u64::MAX);
        self.a % q == 0 && self.b % q == 0
    }

    /// The Cat map on `(Z/p^k)^2`.
    pub fn map(&self) -> Result<LinearMap> {
        let entries = self.matrix().iter().map(|&v| BigInt::from(v)).collect();
        LinearMap::from_matrix(self.p(), 2, entries, self.annihilator(), alloc::format!("cat({}, {})", self.a, self.b))
    }

    /// The companion map of `t^2 - (ab + 2) t + 1` on `(Z/p^k)^4`.
    pub fn companion(&self) -> Result<LinearMap> {
        let f = IntPoly::from_i64s(&[1, -((self.a * self.b + 2) as i64), 1]);
        Ok(LinearMap::companion(self.p(), &f, 2)?.with_label(alloc::format!("cat-companion({}, {})", self.a, self.b)))
    }

    fn annihilator(&self) -> IntPoly {
        if self.a == 0 && self.b == 0 {
            IntPoly::from_i64s(&[-1, 1])
        } else {
            IntPoly::from_i64s(&[1, -((self.a * self.b + 2) as i64), 1])
        }
    }

    /// Companion state `(z, Cz)` of a Cat state z.
    pub fn embed(&self, z: &[u64]) -> Result<StateVector> {
        let m = self.map()?.at(self.k())?;
        let z = m.reduce(z);
        let cz = m.apply(&z);
        Ok(vec![z[0], z[1], cz[0], cz[1]])
    }
}

/// `t - 1` for `a = b = 0` mod `p^k`, else `t^2 - (ab + 2) t + 1`.
pub fn cat_minimal_poly(params: &CatParams) -> IntPoly {
    if params.is_trivial() {
        IntPoly::from_i64s(&[-1, 1])
    } else {
        IntPoly::from_i64s(&[1, -((params.a * params.b + 2) as i64), 1])
    }
}

/// Which row of the parameter table `(a, b)` falls in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum CatRow {
    /// `a = b = 0`.
    Zero,
    /// Both `= 0 mod p`, both nonzero, `min(nu(a), nu(b)) = k - i`.
    PowerBothNonzero { i: u32 },
    /// Both `= 0 mod p`, exactly one zero, the other of valuation `k - i`.
    PowerOneZero { i: u32 },
    /// `ab = 0 mod p` with one of them a unit.
    AbZeroModP,
    /// `ab = -4 mod p`.
    AbMinusFour,
    /// Units with the root in `F_p`: `k1 | p - 1`.
    SplitK1K2 { k1: u64, k2: u64 },
    /// Units with the root in `F_{p^2}`: `k1 | p + 1`.
    InertK1K2 { k1: u64, k2: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CatPrediction {
    /// Predicted least period of the map at precision k.
    pub period: u128,
    pub row: CatRow,
    /// Threshold of the minimal polynomial; absent for the identity.
    pub ks: Option<Threshold>,
    /// Whether the count-doubling law is expected to apply (nontrivial map).
    pub count_doubling_applies: bool,
}

fn val(x: u64, q: u64, p: u64, k: u32) -> u32 {
    let r = x % q;
    if r == 0 {
        k
    } else {
        nu(r as u128, p)
    }
}

/// Classifies `(a, b)` into a table row and predicts the map's period.
pub fn cat_table_predict(params: &CatParams) -> Result<CatPrediction> {
    let p = params.p();
    if p <= 3 {
        return Err(Error::OutOfTable { p });
    }
    let k = params.k();
    let q = params.modulus.q_u64().ok_or(Error::Overflow)?;
    let (a, b) = (params.a % q, params.b % q);
    let pk = arith::checked_pow(p as u128, k)?;
    if a == 0 && b == 0 {
        return Ok(CatPrediction { period: 1, row: CatRow::Zero, ks: None, count_doubling_applies: false });
    }
    let f = cat_minimal_poly(params);
    let ks = Some(order::ks_of_poly(&f, p, DEFAULT_SEARCH_CAP)?.ks);
    let (va, vb) = (val(a, q, p, k), val(b, q, p, k));
    let (period, row) = if va > 0 && vb > 0 {
        let i = k - va.min(vb);
        let row = if a == 0 || b == 0 { CatRow::PowerOneZero { i } } else { CatRow::PowerBothNonzero { i } };
        (arith::checked_pow(p as u128, i)?, row)
    } else if (a as u128 * b as u128) % p as u128 == 0 {
        (pk, CatRow::AbZeroModP)
    } else if (a as u128 * b as u128 + 4) % p as u128 == 0 {
        (2 * pk, CatRow::AbMinusFour)
    } else {
        let t = order::pk_of_poly(&f, p, k)?;
        let k1 = p_free(t, p) as u64;
        let k2 = (t / k1 as u128) as u64;
        let split = factor::factor_mod_p(&f, p)?.d() == 1;
        (t, if split { CatRow::SplitK1K2 { k1, k2 } } else { CatRow::InertK1K2 { k1, k2 } })
    };
    Ok(CatPrediction { period, row, ks, count_doubling_applies: true })
}

/// Closed-form parameter counts per period from the table at `(p, k)`.
pub fn table_closed_forms(p: u64, k: u32) -> Result<BTreeMap<u128, u128>> {
    if p <= 3 {
        return Err(Error::OutOfTable { p });
    }
    let pp = p as u128;
    let pw = |e: u32| arith::checked_pow(pp, e);
    let mut out: BTreeMap<u128, u128> = BTreeMap::new();
    let mut put = |t: u128, n: u128| *out.entry(t).or_insert(0) += n;
    put(1, 1);
    put(pw(k)?, 2 * (pp - 1) * pw(2 * k - 2)?);
    put(2 * pw(k)?, (pp - 1) * pw(2 * k - 2)?);
    for i in 1..k {
        put(pw(i)?, 2 * (pp - 1) * pw(2 * i - 1)?);
        put(pw(i)?, 2 * (pp - 1) * pw(i - 1)?);
    }
    for m in [pp - 1, pp + 1] {
        for k1 in arith::divisors(m)? {
            if k1 <= 2 {
                continue;
            }
            for j in 0..k {
                let t = k1 * pw(j)?;
                put(t, arith::phi(t)? / 2 * (pw(k)? - pw(k - 1)?));
            }
        }
    }
    Ok(out)
}

/// Order of C mod `p^k` by repeated multiplication.
pub fn measured_period(a: u64, b: u64, q: u64) -> u128 {
    let m = |x: [u64; 4], y: [u64; 4]| {
        let mm = |i: usize, j: usize, l: usize, n: usize| ((x[i] as u128 * y[j] as u128 + x[l] as u128 * y[n] as u128) % q as u128) as u64;
        [mm(0, 0, 1, 2), mm(0, 1, 1, 3), mm(2, 0, 3, 2), mm(2, 1, 3, 3)]
    };
    let (a, b) = (a % q, b % q);
    let c = [1 % q, a, b, ((1 + a as u128 * b as u128) % q as u128) as u64];
    let id = [1 % q, 0, 0, 1 % q];
    let mut x = c;
    let mut t = 1u128;
    while x != id {
        x = m(x, c);
        t += 1;
    }
    t
}

#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CensusRow {
    pub t: u128,
    pub predicted_count: u128,
    pub measured_count: u128,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CensusReport {
    pub p: u64,
    pub k: u32,
    pub rows: Vec<CensusRow>,
    pub measured_total: u128,
    pub predicted_total: u128,
    /// Pairs whose row prediction differs from their measured period.
    pub prediction_mismatches: u64,
    pub pass: bool,
}

/// Measured periods of all `p^{2k}` Cat maps against the table.
pub fn cat_table_census(p: u64, k: u32, budget: u64) -> Result<CensusReport> {
    cat_table_census_with(p, k, budget, |q, f| (0..q).map(f).collect())
}

/// As [`cat_table_census`], with a caller-supplied driver that maps a
/// per-`a` closure over `0..q` (lets callers parallelize).
pub fn cat_table_census_with<F>(p: u64, k: u32, budget: u64, drive: F) -> Result<CensusReport>
where
    F: FnOnce(u64, &(dyn Fn(u64) -> Result<Vec<(u128, bool)>> + Sync)) -> Vec<Result<Vec<(u128, bool)>>>,
{
    let predicted = table_closed_forms(p, k)?;
    let modulus = Modulus::new(p, k)?;
    let q = modulus.q_u64().ok_or(Error::Overflow)?;
    let pairs = (q as u128) * (q as u128);
    if pairs > budget as u128 {
        return Err(Error::Capacity { what: "census parameter pairs", required: pairs, limit: budget as u128 });
    }
    let per_a = |a: u64| -> Result<Vec<(u128, bool)>> {
        let mut v = Vec::with_capacity(q as usize);
        for b in 0..q {
            let t = measured_period(a, b, q);
            let pred = cat_table_predict(&CatParams::new(a, b, p, k)?)?;
            v.push((t, pred.period == t));
        }
        Ok(v)
    };
    let mut measured: BTreeMap<u128, u128> = BTreeMap::new();
    let mut mismatches = 0u64;
    for chunk in drive(q, &per_a) {
        for (t, ok) in chunk? {
            *measured.entry(t).or_insert(0) += 1;
            mismatches += u64::from(!ok);
        }
    }
    let mut keys: Vec<u128> = predicted.keys().chain(measured.keys()).copied().collect();
    keys.sort_unstable();
    keys.dedup();
    let rows: Vec<CensusRow> = keys
        .into_iter()
        .map(|t| {
            let pc = predicted.get(&t).copied().unwrap_or(0);
            let mc = measured.get(&t).copied().unwrap_or(0);
            CensusRow { t, predicted_count: pc, measured_count: mc, pass: pc == mc }
        })
        .collect();
    let measured_total = measured.values().sum();
    let predicted_total = predicted.values().sum();
    let pass = rows.iter().all(|r| r.pass);
    Ok(CensusReport { p, k, rows, measured_total, predicted_total, prediction_mismatches: mismatches, pass })
}

/// Exact cycle histogram of the Cat map on `(Z/p^k)^2`.
pub fn cat_enumerate(params: &CatParams, budget: u64) -> Result<CycleHistogram> {
    params.map()?.at(params.k())?.enumerate_cycles(budget)
}

/// Checks that `z -> (z, Cz)` intertwines the Cat map with its companion
/// map and preserves every period.
pub fn companion_slice_check(params: &CatParams) -> Result<bool> {
    let cat = params.map()?.at(params.k())?;
    let comp = params.companion()?.at(params.k())?;
    for z in cat.states()? {
        let e = params.embed(&z)?;
        if comp.apply(&e) != params.embed(&cat.apply(&z))? {
            return Ok(false);
        }
        if comp.state_period(&e)? != cat.state_period(&z)? {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DoublingRow {
    pub t: u64,
    pub n_t_k: u64,
    pub n_pt_k1: u64,
    pub holds: bool,
    /// `nu(T) > p`, the gate as printed.
    pub printed_gate: bool,
    /// `nu(T) > nu(P_1(f))`.
    pub p1_gate: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DoublingReport {
    pub p: u64,
    pub k: u32,
    pub nu_p1: u32,
    pub rows: Vec<DoublingRow>,
    /// Every row under the `nu(T) > nu(P_1)` gate holds.
    pub pass: bool,
    /// Every row with `nu(T) >= 1` holds.
    pub pass_all: bool,
}

/// `p N_{T,k} = N_{pT,k+1}` for every T with `nu(T) >= 1` seen at k or
/// whose multiple `pT` is seen at k + 1.
pub fn cat_count_doubling_check(params: &CatParams, k: u32, budget: u64) -> Result<DoublingReport> {
    let map = params.map()?;
    let p = params.p();
    let lo = map.at(k)?.enumerate_cycles(budget)?;
    let hi = map.at(k + 1)?.enumerate_cycles(budget)?;
    let nu_p1 = nu(order::p1_of_poly(map.poly(), p)?, p);
    let mut ts: Vec<u64> = lo.cycles.keys().copied().collect();
    ts.extend(hi.cycles.keys().filter(|&&t| t % p == 0).map(|t| t / p));
    ts.retain(|&t| t % p == 0);
    ts.sort_unstable();
    ts.dedup();
    let rows: Vec<DoublingRow> = ts
        .into_iter()
        .map(|t| {
            let v = nu(t as u128, p);
            let (n0, n1) = (lo.count(t), hi.count(p * t));
            DoublingRow { t, n_t_k: n0, n_pt_k1: n1, holds: p * n0 == n1, printed_gate: v as u64 > p, p1_gate: v > nu_p1 }
        })
        .collect();
    let pass = rows.iter().filter(|r| r.p1_gate).all(|r| r.holds);
    let pass_all = rows.iter().all(|r| r.holds);
    Ok(DoublingReport { p, k, nu_p1, rows, pass, pass_all })
}

#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct StabilizationThreshold {
    /// 1 when the root is its own inverse, else the root's threshold.
    pub threshold: Threshold,
    pub self_inverse_root: bool,
    /// `ceil(p (p^2 - 1) log_p(ab + 2))`; stabilization holds above it.
    pub coarse_bound: u64,
}

/// Threshold from the root of the Cat polynomial mod p, and the coarse
/// logarithmic bound.
pub fn cat_stabilization_threshold(params: &CatParams) -> Result<StabilizationThreshold> {
    if params.a == 0 && params.b == 0 {
        return Err(Error::OutOfTheory("a = b = 0".into()));
    }
    let p = params.p();
    let f = IntPoly::from_i64s(&[1, -((params.a * params.b + 2) as i64), 1]);
    let rs = factor::factor_mod_p(&f, p)?;
    let alpha = &rs.roots[0].value;
    let self_inverse = alpha.mul(alpha).is_one();
    let threshold = if self_inverse { Threshold::Finite(1) } else { root_threshold(&f, alpha, DEFAULT_SEARCH_CAP)? };
    Ok(StabilizationThreshold { threshold, self_inverse_root: self_inverse, coarse_bound: coarse_bound(p, params.a * params.b + 2) })
}

/// Least B with `p^B >= s^{p(p^2-1)}`, i.e. the ceiling of
/// `p (p^2 - 1) log_p s`, computed exactly.
fn coarse_bound(p: u64, s: u64) -> u64 {
    let c = p * (p * p - 1);
    let target = BigUint::from(s).pow(c as u32);
    let pb = BigUint::from(p);
    // start from a bit-length estimate and walk
    let mut b = (target.bits() / (64 - p.leading_zeros()) as u64).saturating_sub(1);
    let mut pw = pb.pow(b as u32);
    while pw < target {
        pw *= &pb;
        b += 1;
    }
    while b > 0 && pb.pow(b as u32 - 1) >= target {
        b -= 1;
    }
    b
}

/// Smallest `k0` such that, over precisions `1..=k_max`, every count
/// `N_{T,k}` stays constant from `k0 + nu(T)` on. Only meaningful well
/// inside the horizon.
pub fn measured_stabilization_point(params: &CatParams, k_max: u32, budget: u64) -> Result<u32> {
    let map = params.map()?;
    let p = params.p();
    let hs: Vec<CycleHistogram> = (1..=k_max).map(|k| map.at(k)?.enumerate_cycles(budget)).collect::<Result<_>>()?;
    let mut ts: Vec<u64> = hs.iter().flat_map(|h| h.cycles.keys().copied()).collect();
    ts.sort_unstable();
    ts.dedup();
    'k0: for k0 in 1..=k_max {
        for &t in &ts {
            let from = k0 + nu(t as u128, p);
            for k in from..k_max {
                if hs[(k - 1) as usize].count(t) != hs[k as usize].count(t) {
                    continue 'k0;
                }
            }
        }
        return Ok(k0);
    }
    Ok(k_max)
}
