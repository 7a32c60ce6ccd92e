//! Structural checks that compare the theory with enumeration.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use super::{ks_of_state_detail, CycleHistogram, LinearMap};
use crate::arith::{self, nu, p_free};
use crate::order;
use crate::ring::Threshold;
use crate::{Error, Result};

/// The copy of the precision-(k-1) graph sitting on the multiples of p.
#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EmbeddingReport {
    pub k: u32,
    /// Full histogram at precision k - 1.
    pub lower: CycleHistogram,
    /// Histogram at precision k restricted to states `= 0 mod p`.
    pub image: CycleHistogram,
    /// States x at k-1 whose period differs from that of `p x` at k.
    pub pointwise_mismatches: u64,
    /// The image of `x -> p x` is exactly the multiples of p.
    pub image_exact: bool,
    pub pass: bool,
}

pub fn embedding_check(map: &LinearMap, k: u32, budget: u64) -> Result<EmbeddingReport> {
    if k < 2 {
        return Err(Error::Parse("embedding check needs k >= 2".into()));
    }
    let lo = map.at(k - 1)?;
    let hi = map.at(k)?;
    let per_lo = lo.period_table(budget)?;
    let per_hi = hi.period_table(budget)?;
    let p = map.p();
    let mut lower = CycleHistogram::default();
    let mut image = CycleHistogram::default();
    let mut mismatches = 0u64;
    let mut hit = 0u64;
    for (i, &t) in per_lo.iter().enumerate() {
        let x = lo.state_at(i as u64);
        let px: Vec<u64> = x.iter().map(|c| c * p).collect();
        if per_hi[hi.index_of(&px) as usize] != t {
            mismatches += 1;
        }
        hit += 1;
    }
    for (_, len) in lo.cycle_representatives(budget)? {
        lower.add(len, 1);
    }
    for (rep, len) in hi.cycle_representatives(budget)? {
        if hi.state_at(rep).iter().all(|c| c % p == 0) {
            image.add(len, 1);
        }
    }
    let multiples = (hi.q() / p).pow(map.dim() as u32);
    let image_exact = hit == multiples && image.states == multiples;
    let pass = mismatches == 0 && image_exact && lower == image;
    Ok(EmbeddingReport { k, lower, image, pointwise_mismatches: mismatches, image_exact, pass })
}

/// Periods at precision 1 of all `p^n` vectors, in index order.
fn periods_mod_p(map: &LinearMap, budget: u64) -> Result<Vec<u32>> {
    map.at(1)?.period_table(budget)
}

/// `a(T*, T)`: how many `c in F_p^n` give `lcm(p T*, T_1(c)) = T`.
pub fn splitting_counts(map: &LinearMap, t_star: u128, t: u128, budget: u64) -> Result<u64> {
    Ok(splitting_profile(map, t_star, budget)?.get(&t).copied().unwrap_or(0))
}

/// All nonzero `a(T*, ·)` at once. They sum to `p^n`.
pub fn splitting_profile(map: &LinearMap, t_star: u128, budget: u64) -> Result<BTreeMap<u128, u64>> {
    let p1 = order::p1_of_poly(map.poly(), map.p())?;
    if t_star <= p1 {
        return Err(Error::OutOfTheory(alloc::format!("T* = {t_star} must exceed P_1 = {p1}")));
    }
    let mut out = BTreeMap::new();
    let pts = t_star.checked_mul(map.p() as u128).ok_or(Error::Overflow)?;
    for &t1 in &periods_mod_p(map, budget)? {
        *out.entry(arith::lcm(pts, t1 as u128)?).or_insert(0) += 1;
    }
    Ok(out)
}

/// Lower-triangular matrix moving cycle counts from level v to v + 1.
///
/// Basis: the distinct p-free parts `T_{1,i}` of periods at precision 1,
/// ascending. `a[i][j]` counts `c in F_p^n` with
/// `lcm(T_{1,i}, p-free part of T_1(c)) = T_{1,j}`. A parent cycle of length
/// `p^v T_{1,i}` lifts to `p^n p^v T_{1,i}` states, `a[i][j] p^v T_{1,i}` of
/// which sit on cycles of length `p^{v+1} T_{1,j}`; so the number of child
/// cycles per parent is `entries[j][i] = a[i][j] T_{1,i} / (p T_{1,j})`.
/// The alternative normalisation `a[i][j] / p` is kept in `per_parent_over_p`
/// for comparison; the two agree on the diagonal.
#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DMatrix {
    pub p: u64,
    pub v: u32,
    pub basis: Vec<u64>,
    pub a: Vec<Vec<u64>>,
    /// Row j, column i: child cycles of length `p^{v+1} T_{1,j}` per parent
    /// of length `p^v T_{1,i}`.
    pub entries: Vec<Vec<u64>>,
    /// `a[i][j] / p` at row j, column i, where divisible.
    pub per_parent_over_p: Vec<Vec<Option<u64>>>,
    /// Divisors of the p-free part of `P_1` that never occur as periods.
    pub pruned: Vec<u64>,
    /// `v > nu(P_1)`.
    pub hypothesis_met: bool,
    pub violations: Vec<String>,
}

impl DMatrix {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// `D * n`.
    pub fn apply(&self, n: &[u64]) -> Vec<u64> {
        self.entries.iter().map(|row| row.iter().zip(n).map(|(a, b)| a * b).sum()).collect()
    }
}

pub fn build_d_matrix(map: &LinearMap, v: u32, budget: u64) -> Result<DMatrix> {
    let p = map.p();
    let p1 = order::p1_of_poly(map.poly(), p)?;
    let periods = periods_mod_p(map, budget)?;
    let mut basis: Vec<u64> = periods.iter().skip(1).map(|&t| p_free(t as u128, p) as u64).collect();
    basis.sort_unstable();
    basis.dedup();
    let r = basis.len();
    let pos = |t: u64| basis.binary_search(&t).ok();
    let mut a = vec![vec![0u64; r]; r];
    let mut violations = Vec::new();
    for i in 0..r {
        for &t1 in &periods {
            let j = arith::lcm(basis[i] as u128, p_free(t1 as u128, p))? as u64;
            match pos(j) {
                Some(j) => a[i][j] += 1,
                None => violations.push(alloc::format!("lcm {j} of basis length {} leaves the basis", basis[i])),
            }
        }
    }
    let mut entries = vec![vec![0u64; r]; r];
    let mut over_p = vec![vec![None; r]; r];
    for i in 0..r {
        for j in 0..r {
            if a[i][j] == 0 {
                over_p[j][i] = Some(0);
                continue;
            }
            if j < i {
                violations.push(alloc::format!("a[{i}][{j}] = {} above the diagonal", a[i][j]));
            }
            let num = a[i][j] * basis[i];
            let den = p * basis[j];
            if num % den == 0 {
                entries[j][i] = num / den;
            } else {
                violations.push(alloc::format!("a[{i}][{j}] T_i / (p T_j) = {num}/{den} is not an integer"));
            }
            if a[i][j] % p == 0 {
                over_p[j][i] = Some(a[i][j] / p);
            }
        }
    }
    let odd = p_free(p1, p);
    let pruned = arith::divisors(odd)?
        .into_iter()
        .map(|d| d as u64)
        .filter(|d| pos(*d).is_none())
        .collect();
    let v1 = nu(p1, p);
    Ok(DMatrix { p, v, basis, a, entries, per_parent_over_p: over_p, pruned, hypothesis_met: v > v1, violations })
}

/// Cycle counts `N_k(v)` on a basis, plus lengths at level v it misses.
fn level_counts(h: &CycleHistogram, p: u64, v: u32, basis: &[u64]) -> (Vec<u64>, Vec<u64>) {
    let scale = p.pow(v);
    let counts = basis.iter().map(|t| h.count(t * scale)).collect();
    let missed = h
        .cycles
        .keys()
        .copied()
        .filter(|&t| nu(t as u128, p) == v && basis.binary_search(&(p_free(t as u128, p) as u64)).is_err())
        .collect();
    (counts, missed)
}

#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RecursionReport {
    pub k: u32,
    pub v: u32,
    pub l: u32,
    pub basis: Vec<u64>,
    pub measured_from: Vec<u64>,
    pub predicted: Vec<u64>,
    pub measured_to: Vec<u64>,
    /// Lengths at either level whose p-free part is not a basis element.
    pub unaccounted: Vec<u64>,
    pub hypothesis_met: bool,
    pub vacuous: bool,
    pub pass: bool,
}

/// Checks `N_{k+l}(v+l) = D^l N_k(v)` by enumeration at k and k + l.
pub fn dmatrix_recursion_check(map: &LinearMap, k: u32, v: u32, l: u32, budget: u64) -> Result<RecursionReport> {
    let d = build_d_matrix(map, v, budget)?;
    let from = map.at(k)?.enumerate_cycles(budget)?;
    let to = map.at(k + l)?.enumerate_cycles(budget)?;
    let (n0, mut miss) = level_counts(&from, map.p(), v, &d.basis);
    let (n1, miss1) = level_counts(&to, map.p(), v + l, &d.basis);
    miss.extend(miss1);
    let mut pred = n0.clone();
    for _ in 0..l {
        pred = d.apply(&pred);
    }
    let vacuous = n0.iter().all(|&x| x == 0) && n1.iter().all(|&x| x == 0);
    let pass = pred == n1 && miss.is_empty() && d.violations.is_empty();
    Ok(RecursionReport {
        k,
        v,
        l,
        basis: d.basis,
        measured_from: n0,
        predicted: pred,
        measured_to: n1,
        unaccounted: miss,
        hypothesis_met: d.hypothesis_met,
        vacuous,
        pass,
    })
}

/// `max k_s(x)` over nonzero `x in F_p^n`.
pub fn k_hat_s(map: &LinearMap, cap: u32, budget: u64) -> Result<Threshold> {
    let m1 = map.at(1)?;
    let n = m1.state_count()?;
    if n > budget {
        return Err(Error::Capacity { what: "enumeration budget (states)", required: n as u128, limit: budget as u128 });
    }
    let mut cache: BTreeMap<crate::poly::IntPoly, Threshold> = BTreeMap::new();
    let mut best = Threshold::Finite(0);
    for i in 1..n {
        let x = m1.state_at(i);
        let h = super::minimal_poly_of_sequence(map, &x)?;
        let ks = match cache.get(&h) {
            Some(&t) => t,
            None => {
                let t = ks_of_state_detail(map, &x, cap)?.ks;
                cache.insert(h, t);
                t
            }
        };
        best = best.max(ks);
    }
    Ok(best)
}

#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct StabilizationReport {
    pub t: u64,
    pub k_hat_s: u32,
    /// First precision from which the count must stay constant.
    pub from_k: u32,
    /// `(k, N_{T,k})` for every enumerated k.
    pub counts: Vec<(u32, u64)>,
    pub pass: bool,
}

/// Checks that `N_{T,k}` stops changing from `k_hat_s + nu(T)` on.
pub fn stabilization_check(map: &LinearMap, t: u64, k_lo: u32, k_hi: u32, budget: u64) -> Result<StabilizationReport> {
    if !map.plus_minus_one_units() {
        return Err(Error::OutOfTheory("f(1) or f(-1) vanishes mod p".into()));
    }
    let kh = match k_hat_s(map, order::DEFAULT_SEARCH_CAP, budget)? {
        Threshold::Finite(k) => k,
        Threshold::Infinite => return Err(Error::OutOfTheory("some state never changes period".into())),
    };
    let from_k = k_lo.max(kh + nu(t as u128, map.p()));
    let mut counts = Vec::new();
    for k in k_lo.max(1)..=k_hi {
        counts.push((k, map.at(k)?.enumerate_cycles(budget)?.count(t)));
    }
    let tail: Vec<u64> = counts.iter().filter(|(k, _)| *k >= from_k).map(|c| c.1).collect();
    let pass = tail.windows(2).all(|w| w[0] == w[1]);
    Ok(StabilizationReport { t, k_hat_s: kh, from_k, counts, pass })
}
