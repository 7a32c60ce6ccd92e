//! Exact cycle decomposition of the functional graph.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use super::MapMod;
use crate::arith;
use crate::{Error, Result};

/// Cycle length -> number of cycles, plus the number of states covered.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CycleHistogram {
    pub cycles: BTreeMap<u64, u64>,
    pub states: u64,
}

impl CycleHistogram {
    pub fn add(&mut self, len: u64, count: u64) {
        *self.cycles.entry(len).or_insert(0) += count;
        self.states += len * count;
    }

    pub fn count(&self, len: u64) -> u64 {
        self.cycles.get(&len).copied().unwrap_or(0)
    }

    /// `sum T * N(T)`, recomputed.
    pub fn weighted_total(&self) -> u64 {
        self.cycles.iter().map(|(t, n)| t * n).sum()
    }

    /// Least period of the whole map restricted to these states.
    pub fn lcm(&self) -> Result<u128> {
        self.cycles.keys().try_fold(1u128, |acc, &t| arith::lcm(acc, t as u128))
    }

    pub fn from_pairs(pairs: &[(u64, u64)]) -> Self {
        let mut h = CycleHistogram::default();
        for &(t, n) in pairs {
            h.add(t, n);
        }
        h
    }
}

/// Visited set, one bit per state.
pub struct BitSet {
    words: Vec<u64>,
}

impl BitSet {
    pub fn new(n: u64) -> Self {
        BitSet { words: vec![0; n.div_ceil(64) as usize] }
    }

    #[inline]
    pub fn get(&self, i: u64) -> bool {
        self.words[(i >> 6) as usize] >> (i & 63) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: u64) {
        self.words[(i >> 6) as usize] |= 1 << (i & 63);
    }
}

fn check_budget(m: &MapMod, budget: u64) -> Result<u64> {
    let n = m.state_count()?;
    if n > budget {
        return Err(Error::Capacity { what: "enumeration budget (states)", required: n as u128, limit: budget as u128 });
    }
    Ok(n)
}

impl MapMod {
    /// Index of the image of the state with index `idx`.
    #[inline]
    pub fn step_index(&self, idx: u64) -> u64 {
        let x = self.state_at(idx);
        self.index_of(&self.apply(&x))
    }

    /// Walks every cycle once, in ascending order of its least index, and
    /// hands `(least index, length)` to the callback. With `periods` given,
    /// also records each state's cycle length.
    fn walk(&self, budget: u64, mut periods: Option<&mut Vec<u32>>, mut on_cycle: impl FnMut(u64, u64)) -> Result<()> {
        let n = check_budget(self, budget)?;
        let mut seen = BitSet::new(n);
        let mut buf = Vec::new();
        for start in 0..n {
            if seen.get(start) {
                continue;
            }
            buf.clear();
            let mut x = start;
            loop {
                seen.set(x);
                buf.push(x);
                x = self.step_index(x);
                if x == start {
                    break;
                }
                if seen.get(x) {
                    // a linear map given here is always a bijection
                    return Err(Error::OutOfTheory("map is not a permutation".into()));
                }
            }
            let len = buf.len() as u64;
            if let Some(per) = periods.as_deref_mut() {
                for &s in &buf {
                    per[s as usize] = len as u32;
                }
            }
            on_cycle(start, len);
        }
        Ok(())
    }

    /// Exact cycle histogram of the whole state space.
    pub fn enumerate_cycles(&self, budget: u64) -> Result<CycleHistogram> {
        let mut h = CycleHistogram::default();
        self.walk(budget, None, |_, len| h.add(len, 1))?;
        if h.states != self.state_count()? || h.weighted_total() != h.states {
            return Err(Error::Internal("histogram checksum mismatch"));
        }
        Ok(h)
    }

    /// Cycle representatives (least index on each cycle) with lengths.
    pub fn cycle_representatives(&self, budget: u64) -> Result<Vec<(u64, u64)>> {
        let mut out = Vec::new();
        self.walk(budget, None, |rep, len| out.push((rep, len)))?;
        Ok(out)
    }

    /// Period of every state, indexed like [`MapMod::index_of`].
    pub fn period_table(&self, budget: u64) -> Result<Vec<u32>> {
        let n = check_budget(self, budget)?;
        let mut per = vec![0u32; n as usize];
        self.walk(budget, Some(&mut per), |_, _| {})?;
        Ok(per)
    }

    /// Histogram of the cycles made of states that are all `= 0 mod p`.
    pub fn enumerate_multiples_of_p(&self, budget: u64) -> Result<CycleHistogram> {
        let p = self.p();
        let mut h = CycleHistogram::default();
        self.walk(budget, None, |rep, len| {
            if self.state_at(rep).iter().all(|c| c % p == 0) {
                h.add(len, 1);
            }
        })?;
        Ok(h)
    }
}
