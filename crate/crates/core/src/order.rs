//! Orders of polynomials: the brute-force oracle and the root-based theory.
//!
//! The order `P_k(f)` is the least `l` with `f | t^l - 1` in `Z/p^k[t]`.
//! Theory: `P_1` is the lcm of the root orders times a p-power covering the
//! largest multiplicity; above the threshold `k_s` every extra digit of
//! precision multiplies the order by exactly p.

use alloc::vec::Vec;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

use crate::arith::{self, checked_pow};
use crate::factor::{self, newton_lift, RootSet};
use crate::poly::IntPoly;
use crate::ring::{Modulus, RingElement, Threshold};
use crate::{Error, Result};

/// Default cap for the incremental `f_k` search.
pub const DEFAULT_SEARCH_CAP: u32 = 64;

fn check_unit_monic(f: &IntPoly, p: u64) -> Result<()> {
    if !f.is_monic() || f.degree().unwrap_or(0) == 0 {
        return Err(Error::Parse("polynomial must be monic of degree >= 1".into()));
    }
    if f.to_fp(p).first().copied().unwrap_or(0) == 0 {
        return Err(Error::ZeroRoot);
    }
    Ok(())
}

/// `4 p^k (p^d - 1)` with d the splitting degree of f mod p.
pub fn default_oracle_bound(f: &IntPoly, modulus: &Modulus) -> Result<u128> {
    let p = modulus.p();
    let rs = factor::factor_mod_p(f, p)?;
    let pd = checked_pow(p as u128, rs.d() as u32)?;
    checked_pow(p as u128, modulus.k())?
        .checked_mul(4 * (pd - 1).max(1))
        .ok_or(Error::Overflow)
}

/// Least `l <= bound` with `t^l = 1` modulo `(f, p^k)`, by stepping `t^l mod f`.
pub fn poly_order_oracle(f: &IntPoly, modulus: &Modulus, bound: u128) -> Result<u128> {
    check_unit_monic(f, modulus.p())?;
    let m = f.degree().unwrap();
    if let Some(q) = modulus.q_u64().filter(|&q| q < 1 << 62) {
        let fc: Vec<u64> = f.residues(modulus.q()).iter().map(|c| c.to_u64().unwrap()).collect();
        let mut r = alloc::vec![0u64; m];
        r[0] = 1;
        for l in 1..=bound {
            let top = r[m - 1];
            for i in (1..m).rev() {
                r[i] = r[i - 1];
            }
            r[0] = 0;
            if top != 0 {
                for i in 0..m {
                    let s = ((top as u128 * fc[i] as u128) % q as u128) as u64;
                    r[i] = if r[i] >= s { r[i] - s } else { r[i] + q - s };
                }
            }
            if r[0] == 1 && r[1..].iter().all(|&c| c == 0) {
                return Ok(l);
            }
        }
        return Err(Error::BoundExhausted { bound });
    }
    let q = modulus.q();
    let fc = f.residues(q);
    let mut r = alloc::vec![BigUint::zero(); m];
    r[0] = BigUint::from(1u8);
    for l in 1..=bound {
        let top = core::mem::take(&mut r[m - 1]);
        r.rotate_right(1);
        for i in 0..m {
            let s = (&top * &fc[i]) % q;
            r[i] = (&r[i] + q - s) % q;
        }
        if r[0] == BigUint::from(1u8) && r[1..].iter().all(Zero::is_zero) {
            return Ok(l);
        }
    }
    Err(Error::BoundExhausted { bound })
}

/// Which rule fixed the threshold.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum KsRule {
    /// f divides `t^{P_1} - 1` over the integers.
    Certificate,
    /// Some root is multiple mod p.
    MultipleRoot,
    /// Minimum of the per-root `f_k` over simple roots.
    SimpleRoots,
}

/// Per-root data behind an order profile.
#[derive(Clone, Debug)]
pub struct RootData {
    pub root: RingElement,
    pub multiplicity: u32,
    /// Order of the root in `F_{p^d}^*`.
    pub order: u128,
    /// `f_k` for simple roots.
    pub fk: Option<Threshold>,
}

/// `P_1(f)`, the threshold `k_s` and enough root data to produce `P_k`.
#[derive(Clone, Debug)]
pub struct OrderProfile {
    pub f: IntPoly,
    pub p: u64,
    pub p1: u128,
    pub ks: Threshold,
    pub rule: KsRule,
    pub roots: Vec<RootData>,
    /// Splitting degree of f mod p.
    pub d: usize,
}

impl OrderProfile {
    /// `P_k(f)`.
    pub fn pk(&self, k: u32) -> Result<u128> {
        if k == 0 {
            return Err(Error::ZeroPrecision);
        }
        match self.ks {
            Threshold::Infinite => Ok(self.p1),
            Threshold::Finite(ks) if k <= ks => Ok(self.p1),
            Threshold::Finite(ks) => self.p1.checked_mul(checked_pow(self.p as u128, k - ks)?).ok_or(Error::Overflow),
        }
    }

    /// `P_k` assembled part by part: simple roots contribute their lifted
    /// orders, a root of multiplicity `a` contributes `p^{k-1+c} ord(root)`
    /// with `p^c >= a`. Agrees with [`OrderProfile::pk`] outside the
    /// certificate case.
    pub fn pk_by_parts(&self, k: u32) -> Result<u128> {
        if self.rule == KsRule::Certificate {
            return Ok(self.p1);
        }
        let p = self.p as u128;
        let mut acc = 1u128;
        for r in &self.roots {
            let part = match r.fk {
                Some(Threshold::Infinite) => r.order,
                Some(Threshold::Finite(fk)) if k <= fk => r.order,
                Some(Threshold::Finite(fk)) => r.order * checked_pow(p, k - fk)?,
                None => r.order * checked_pow(p, k - 1 + ceil_log(p, r.multiplicity as u128))?,
            };
            acc = arith::lcm(acc, part)?;
        }
        Ok(acc)
    }
}

/// Least c with `p^c >= a`.
fn ceil_log(p: u128, a: u128) -> u32 {
    let mut c = 0;
    let mut pw = 1u128;
    while pw < a {
        pw *= p;
        c += 1;
    }
    c
}

/// Order of `t` modulo f over `F_p`, from roots and multiplicities.
pub fn p1_from_roots(rs: &RootSet) -> Result<u128> {
    let mut acc = 1u128;
    for r in &rs.roots {
        acc = arith::lcm(acc, r.value.residue_order()?)?;
    }
    let c = ceil_log(rs.field.p() as u128, rs.max_multiplicity() as u128);
    acc.checked_mul(checked_pow(rs.field.p() as u128, c)?).ok_or(Error::Overflow)
}

/// `P_1(f)`.
pub fn p1_of_poly(f: &IntPoly, p: u64) -> Result<u128> {
    check_unit_monic(f, p)?;
    p1_from_roots(&factor::factor_mod_p(f, p)?)
}

/// `f_k(root)`: the largest k at which the Newton lift of `root` through
/// `poly` keeps its mod-p order. Infinite exactly when the cyclotomic
/// polynomial of that order divides `poly` over the integers.
pub fn root_threshold(poly: &IntPoly, root: &RingElement, cap: u32) -> Result<Threshold> {
    let e = root.residue_order()?;
    let e64 = u64::try_from(e).map_err(|_| Error::Overflow)?;
    if poly.degree().unwrap_or(0) >= crate::arith::phi(e)? as usize
        && poly.div_exact(&IntPoly::cyclotomic(e64)).is_some()
    {
        return Ok(Threshold::Infinite);
    }
    for k in 2..=cap {
        let lifted = newton_lift(poly, root, k)?;
        if !lifted.pow(e).is_one() {
            return Ok(Threshold::Finite(k - 1));
        }
    }
    Err(Error::Undecided { cap })
}

/// Builds the full order profile of f at the prime p.
pub fn ks_of_poly(f: &IntPoly, p: u64, cap: u32) -> Result<OrderProfile> {
    check_unit_monic(f, p)?;
    let m = f.degree().unwrap();
    if m as u64 > p {
        return Err(Error::OutOfTheory(alloc::format!("degree {m} exceeds p = {p}")));
    }
    let rs = factor::factor_mod_p(f, p)?;
    let p1 = p1_from_roots(&rs)?;
    let certified = f.divides_t_pow_minus_one(p1);
    let multiple = rs.max_multiplicity() > 1;
    let mut roots = Vec::with_capacity(rs.roots.len());
    for r in &rs.roots {
        let fk = if r.multiplicity > 1 {
            None
        } else if certified {
            Some(Threshold::Infinite)
        } else {
            Some(root_threshold(f, &r.value, cap)?)
        };
        roots.push(RootData { root: r.value.clone(), multiplicity: r.multiplicity, order: r.value.residue_order()?, fk });
    }
    let (ks, rule) = if certified {
        (Threshold::Infinite, KsRule::Certificate)
    } else if multiple {
        (Threshold::Finite(1), KsRule::MultipleRoot)
    } else {
        let ks = roots.iter().filter_map(|r| r.fk).min().unwrap_or(Threshold::Infinite);
        (ks, KsRule::SimpleRoots)
    };
    Ok(OrderProfile { f: f.clone(), p, p1, ks, rule, roots, d: rs.d() })
}

/// `P_k(f)` from the theory.
pub fn pk_of_poly(f: &IntPoly, p: u64, k: u32) -> Result<u128> {
    ks_of_poly(f, p, DEFAULT_SEARCH_CAP)?.pk(k)
}

/// Oracle order over `Z/p^k` against root-wise order in the extension.
#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ExtensionReport {
    pub f: alloc::string::String,
    pub p: u64,
    pub k: u32,
    pub oracle: u128,
    pub rootwise: u128,
    pub pass: bool,
}

/// Compares the oracle with the lcm of the lifted root orders (multiple
/// roots contribute their theoretical part).
pub fn verify_order_extension_equality(f: &IntPoly, p: u64, k: u32) -> Result<ExtensionReport> {
    let modulus = Modulus::new(p, k)?;
    let oracle = poly_order_oracle(f, &modulus, default_oracle_bound(f, &modulus)?)?;
    let rs = factor::factor_mod_p(f, p)?;
    let mut rootwise = 1u128;
    for r in &rs.roots {
        let part = if r.multiplicity == 1 {
            newton_lift(f, &r.value, k)?.mult_order()?
        } else {
            let c = ceil_log(p as u128, r.multiplicity as u128);
            r.value.residue_order()? * checked_pow(p as u128, k - 1 + c)?
        };
        rootwise = arith::lcm(rootwise, part)?;
    }
    if f.divides_t_pow_minus_one(p1_from_roots(&rs)?) {
        rootwise = p1_from_roots(&rs)?;
    }
    Ok(ExtensionReport { f: alloc::format!("{f}"), p, k, oracle, rootwise, pass: oracle == rootwise })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(cs: &[i64]) -> IntPoly {
        IntPoly::from_i64s(cs)
    }

    fn oracle(f: &IntPoly, p: u64, k: u32) -> u128 {
        let m = Modulus::new(p, k).unwrap();
        poly_order_oracle(f, &m, default_oracle_bound(f, &m).unwrap()).unwrap()
    }

    #[test]
    fn oracle_values() {
        assert_eq!(oracle(&poly(&[-1, 1]), 7, 3), 1);
        assert_eq!(oracle(&poly(&[1, -4, 1]), 5, 1), 3);
        assert_eq!(oracle(&poly(&[1, -4, 1]), 5, 2), 15);
        let m = Modulus::new(5, 2).unwrap();
        assert_eq!(poly_order_oracle(&poly(&[1, -4, 1]), &m, 14), Err(Error::BoundExhausted { bound: 14 }));
    }

    #[test]
    fn oracle_big_path_agrees() {
        // p^k beyond the word fast path
        let m = Modulus::new(5, 30).unwrap();
        assert_eq!(poly_order_oracle(&poly(&[1, 1]), &m, 10).unwrap(), 2);
        assert_eq!(poly_order_oracle(&poly(&[1, 1, 1]), &m, 10).unwrap(), 3);
    }

    #[test]
    fn p1_values() {
        assert_eq!(p1_of_poly(&poly(&[-1, 1]), 5).unwrap(), 1);
        assert_eq!(p1_of_poly(&poly(&[1, -3, 1]), 5).unwrap(), 10);
        assert_eq!(p1_of_poly(&poly(&[1, -4, 1]), 5).unwrap(), 3);
    }

    #[test]
    fn thresholds() {
        let prof = ks_of_poly(&poly(&[1, -3, 1]), 5, 64).unwrap();
        assert_eq!((prof.ks, prof.rule), (Threshold::Finite(1), KsRule::MultipleRoot));
        assert_eq!(ks_of_poly(&poly(&[1, -4, 1]), 5, 64).unwrap().ks, Threshold::Finite(1));
        assert_eq!(ks_of_poly(&poly(&[1, 1, 1]), 5, 64).unwrap().ks, Threshold::Infinite);
        assert!(matches!(ks_of_poly(&poly(&[1, 1, 1, 1, 1, 1]), 3, 64), Err(Error::OutOfTheory(_))));
    }

    #[test]
    fn pk_values() {
        assert_eq!(pk_of_poly(&poly(&[1, -4, 1]), 5, 3).unwrap(), 75);
        assert_eq!(pk_of_poly(&poly(&[1, 1, 1]), 5, 4).unwrap(), 3);
        assert_eq!(pk_of_poly(&poly(&[1, -3, 1]), 5, 2).unwrap(), 50);
        for (cs, p) in [([1i64, -4, 1], 5u64), ([1, -3, 1], 5), ([1, -7, 1], 3), ([3, 1, 1], 7)] {
            let prof = ks_of_poly(&poly(&cs), p, 64).unwrap();
            for k in 1..=4 {
                assert_eq!(prof.pk(k).unwrap(), oracle(&poly(&cs), p, k), "{cs:?} p={p} k={k}");
                assert_eq!(prof.pk(k).unwrap(), prof.pk_by_parts(k).unwrap());
            }
        }
    }

    #[test]
    fn extension_equality() {
        let r = verify_order_extension_equality(&poly(&[1, -4, 1]), 5, 2).unwrap();
        assert!(r.pass && r.oracle == 15);
        assert!(verify_order_extension_equality(&poly(&[-1, 1]), 3, 3).unwrap().pass);
        let r = verify_order_extension_equality(&poly(&[1, -7, 1]), 3, 1).unwrap();
        assert_eq!((r.oracle, r.rootwise, r.pass), (6, 6, true));
    }
}
