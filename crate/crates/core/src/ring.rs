//! Exact arithmetic in `Z/p^k` and the Galois ring `GR(p^k, d) = Z/p^k[t]/(h)`.

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::arith::{self, checked_pow};
use crate::fp::{self, FpPoly};
use crate::{Error, Result};

/// A prime power `p^k`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Modulus {
    p: u64,
    k: u32,
    q: BigUint,
}

impl Modulus {
    pub fn new(p: u64, k: u32) -> Result<Self> {
        if !arith::is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if k == 0 {
            return Err(Error::ZeroPrecision);
        }
        Ok(Modulus { p, k, q: BigUint::from(p).pow(k) })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    /// `p^k` exactly.
    pub fn q(&self) -> &BigUint {
        &self.q
    }

    /// `p^k` if it fits in a u64.
    pub fn q_u64(&self) -> Option<u64> {
        self.q.to_u64()
    }

    pub fn with_k(&self, k: u32) -> Result<Self> {
        Modulus::new(self.p, k)
    }
}

impl fmt::Display for Modulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}^{}", self.p, self.k)
    }
}

/// p-adic valuation of a ring element.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Valuation {
    Finite(u32),
    Infinite,
}

/// A precision threshold, possibly unbounded.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Threshold {
    Finite(u32),
    Infinite,
}

impl Threshold {
    pub fn finite(self) -> Option<u32> {
        match self {
            Threshold::Finite(k) => Some(k),
            Threshold::Infinite => None,
        }
    }

    /// True when precision `k` is still at or below the threshold.
    pub fn covers(self, k: u32) -> bool {
        match self {
            Threshold::Finite(t) => k <= t,
            Threshold::Infinite => true,
        }
    }
}

impl fmt::Display for Threshold {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Threshold::Finite(k) => write!(f, "{k}"),
            Threshold::Infinite => f.write_str("infinite"),
        }
    }
}

#[derive(Debug, PartialEq, Eq, Hash)]
struct RingInner {
    modulus: Modulus,
    /// Monic, `d + 1` coefficients reduced mod p^k.
    h: Vec<BigUint>,
    h_mod_p: FpPoly,
}

/// Handle to `GR(p^k, d)`. Cheap to clone; compares by value.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GaloisRing(Arc<RingInner>);

impl GaloisRing {
    /// `Z/p^k` itself, with the placeholder `h = t`.
    pub fn integers(modulus: Modulus) -> Self {
        GaloisRing(Arc::new(RingInner {
            modulus,
            h: vec![BigUint::zero(), BigUint::one()],
            h_mod_p: vec![0, 1],
        }))
    }

    /// The degree-d extension using the first irreducible in the
    /// deterministic search order, lifted with the same integer coefficients.
    pub fn standard(modulus: Modulus, d: usize) -> Result<Self> {
        if d <= 1 {
            return Ok(Self::integers(modulus));
        }
        let h = fp::first_irreducible(d, modulus.p());
        Self::with_modulus_poly(modulus, h.into_iter().map(BigUint::from).collect())
    }

    /// Extension by a caller-chosen monic `h` (lowest degree first).
    pub fn with_modulus_poly(modulus: Modulus, h: Vec<BigUint>) -> Result<Self> {
        let d = h.len().saturating_sub(1);
        if d == 0 || !h[d].is_one() {
            return Err(Error::Parse("extension polynomial must be monic of degree >= 1".into()));
        }
        let h: Vec<BigUint> = h.iter().map(|c| c % modulus.q()).collect();
        let pb = BigUint::from(modulus.p());
        let h_mod_p: FpPoly = h.iter().map(|c| (c % &pb).to_u64().unwrap()).collect();
        if d > 1 && !fp::is_irreducible(&h_mod_p, modulus.p()) {
            return Err(Error::Reducible);
        }
        if d == 1 {
            return Ok(Self::integers(modulus));
        }
        Ok(GaloisRing(Arc::new(RingInner { modulus, h, h_mod_p })))
    }

    pub fn modulus(&self) -> &Modulus {
        &self.0.modulus
    }

    pub fn p(&self) -> u64 {
        self.0.modulus.p()
    }

    pub fn k(&self) -> u32 {
        self.0.modulus.k()
    }

    pub fn d(&self) -> usize {
        self.0.h.len() - 1
    }

    pub fn h(&self) -> &[BigUint] {
        &self.0.h
    }

    pub fn h_mod_p(&self) -> &[u64] {
        &self.0.h_mod_p
    }

    /// Same h, different precision.
    pub fn at_precision(&self, k: u32) -> Result<Self> {
        let m = self.modulus().with_k(k)?;
        if self.d() == 1 {
            return Ok(Self::integers(m));
        }
        let h = self.0.h.iter().map(|c| c % m.q()).collect();
        Ok(GaloisRing(Arc::new(RingInner { modulus: m, h, h_mod_p: self.0.h_mod_p.clone() })))
    }

    pub fn zero(&self) -> RingElement {
        RingElement { ring: self.clone(), c: vec![BigUint::zero(); self.d()] }
    }

    pub fn one(&self) -> RingElement {
        self.from_u64(1)
    }

    pub fn from_u64(&self, x: u64) -> RingElement {
        self.from_biguint(&BigUint::from(x))
    }

    pub fn from_biguint(&self, x: &BigUint) -> RingElement {
        let mut e = self.zero();
        e.c[0] = x % self.modulus().q();
        e
    }

    pub fn from_i64(&self, x: i64) -> RingElement {
        let e = self.from_u64(x.unsigned_abs());
        if x < 0 {
            e.neg()
        } else {
            e
        }
    }

    /// Element from its coefficient vector on the basis 1, t, ..., t^(d-1).
    pub fn element(&self, coeffs: &[u64]) -> RingElement {
        let mut e = self.zero();
        for (i, c) in coeffs.iter().enumerate().take(self.d()) {
            e.c[i] = BigUint::from(*c) % self.modulus().q();
        }
        e
    }

    /// The class of t; for d = 1 this is 0 (the placeholder h = t).
    pub fn generator(&self) -> RingElement {
        if self.d() == 1 {
            return self.zero();
        }
        self.element(&[0, 1])
    }

    /// All elements of a small residue field, in index order.
    pub fn field_elements(&self) -> Result<Vec<RingElement>> {
        if self.k() != 1 {
            return Err(Error::UnsupportedRing);
        }
        let p = self.p();
        let n = checked_pow(p as u128, self.d() as u32)?;
        let mut out = Vec::with_capacity(n as usize);
        for mut idx in 0..n {
            let mut cs = Vec::with_capacity(self.d());
            for _ in 0..self.d() {
                cs.push((idx % p as u128) as u64);
                idx /= p as u128;
            }
            out.push(self.element(&cs));
        }
        Ok(out)
    }
}

/// An element of `GR(p^k, d)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RingElement {
    ring: GaloisRing,
    c: Vec<BigUint>,
}

impl RingElement {
    pub fn ring(&self) -> &GaloisRing {
        &self.ring
    }

    pub fn coeffs(&self) -> &[BigUint] {
        &self.c
    }

    /// Coefficients as machine words, when `p^k` fits.
    pub fn coeffs_u64(&self) -> Option<Vec<u64>> {
        self.c.iter().map(|c| c.to_u64()).collect()
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.ring == other.ring {
            Ok(())
        } else {
            Err(Error::DescriptorMismatch)
        }
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.c[0].is_one() && self.c[1..].iter().all(Zero::is_zero)
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.add(other))
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.mul(other))
    }

    /// Sum; both operands must be in the same ring.
    pub fn add(&self, other: &Self) -> Self {
        debug_assert_eq!(self.ring, other.ring);
        let q = self.ring.modulus().q();
        let c = self.c.iter().zip(&other.c).map(|(a, b)| (a + b) % q).collect();
        RingElement { ring: self.ring.clone(), c }
    }

    pub fn neg(&self) -> Self {
        let q = self.ring.modulus().q();
        let c = self.c.iter().map(|a| if a.is_zero() { a.clone() } else { q - a }).collect();
        RingElement { ring: self.ring.clone(), c }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        debug_assert_eq!(self.ring, other.ring);
        let q = self.ring.modulus().q();
        let d = self.ring.d();
        if d == 1 {
            return RingElement { ring: self.ring.clone(), c: vec![(&self.c[0] * &other.c[0]) % q] };
        }
        let mut prod = vec![BigUint::zero(); 2 * d - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.c.iter().enumerate() {
                prod[i + j] += a * b;
            }
        }
        let h = self.ring.h();
        for i in (d..2 * d - 1).rev() {
            let top = core::mem::take(&mut prod[i]) % q;
            if top.is_zero() {
                continue;
            }
            // t^i = t^(i-d) * t^d and t^d = -(h_0 + ... + h_{d-1} t^(d-1))
            let neg = q - &top;
            for (j, hj) in h.iter().enumerate().take(d) {
                prod[i - d + j] += &neg * hj;
            }
        }
        prod.truncate(d);
        for x in prod.iter_mut() {
            *x %= q;
        }
        RingElement { ring: self.ring.clone(), c: prod }
    }

    pub fn pow(&self, mut e: u128) -> Self {
        let mut acc = self.ring.one();
        let mut b = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&b);
            }
            e >>= 1;
            if e > 0 {
                b = b.mul(&b);
            }
        }
        acc
    }

    pub fn pow_big(&self, e: &BigUint) -> Self {
        let mut acc = self.ring.one();
        for i in (0..e.bits()).rev() {
            acc = acc.mul(&acc);
            if e.bit(i) {
                acc = acc.mul(self);
            }
        }
        acc
    }

    pub fn valuation(&self) -> Valuation {
        let k = self.ring.k();
        let p = BigUint::from(self.ring.p());
        let mut best = k;
        for c in &self.c {
            if c.is_zero() {
                continue;
            }
            let mut v = 0;
            let mut x = c.clone();
            while (&x % &p).is_zero() {
                x /= &p;
                v += 1;
            }
            best = best.min(v);
        }
        if best == k {
            Valuation::Infinite
        } else {
            Valuation::Finite(best)
        }
    }

    pub fn is_unit(&self) -> bool {
        self.valuation() == Valuation::Finite(0)
    }

    /// Coefficients reduced mod p, as an `F_p` polynomial in t.
    pub fn residue(&self) -> FpPoly {
        let p = BigUint::from(self.ring.p());
        let mut r: FpPoly = self.c.iter().map(|c| (c % &p).to_u64().unwrap()).collect();
        fp::trim(&mut r);
        r
    }

    /// The same integer coefficients read in another precision of the same
    /// extension (reduction when going down, verbatim embedding going up).
    pub fn to_ring(&self, ring: &GaloisRing) -> Result<Self> {
        if ring.d() != self.ring.d() || ring.h_mod_p() != self.ring.h_mod_p() || ring.p() != self.ring.p() {
            return Err(Error::DescriptorMismatch);
        }
        let q = ring.modulus().q();
        Ok(RingElement { ring: ring.clone(), c: self.c.iter().map(|c| c % q).collect() })
    }

    pub fn inverse(&self) -> Result<Self> {
        match self.valuation() {
            Valuation::Finite(0) => {}
            Valuation::Finite(v) => return Err(Error::NonUnit { valuation: v }),
            Valuation::Infinite => return Err(Error::NonUnit { valuation: self.ring.k() }),
        }
        let p = self.ring.p();
        let r = self.residue();
        let inv_p = if self.ring.d() == 1 {
            vec![fp::inv(r[0], p)]
        } else {
            fp::inv_mod(&r, self.ring.h_mod_p(), p).ok_or(Error::Internal("unit without inverse mod p"))?
        };
        let mut x = self.ring.element(&inv_p);
        let two = self.ring.from_u64(2);
        let mut prec = 1u32;
        while prec < self.ring.k() {
            x = x.mul(&two.sub(&self.mul(&x)));
            prec = prec.saturating_mul(2);
        }
        if !self.mul(&x).is_one() {
            return Err(Error::Internal("Newton inverse did not converge"));
        }
        Ok(x)
    }

    /// Order of `self mod p` in `F_{p^d}^*`.
    pub fn residue_order(&self) -> Result<u128> {
        if !self.is_unit() {
            return Err(Error::NonUnit {
                valuation: match self.valuation() {
                    Valuation::Finite(v) => v,
                    Valuation::Infinite => self.ring.k(),
                },
            });
        }
        let p = self.ring.p();
        let d = self.ring.d() as u32;
        let n = checked_pow(p as u128, d)? - 1;
        let a = self.residue();
        let h = self.ring.h_mod_p();
        let is_one = |e: u128| -> bool {
            if d == 1 {
                crate::arith::pow_mod(a[0], e as u64, p) == 1
            } else {
                fp::powmod(&a, e, h, p) == [1]
            }
        };
        let mut e = n;
        for (r, _) in arith::factorize(n)? {
            while e % r == 0 && is_one(e / r) {
                e /= r;
            }
        }
        Ok(e)
    }

    /// Least j >= 1 with `self^j = 1` in `GR(p^k, d)`.
    pub fn mult_order(&self) -> Result<u128> {
        let e1 = self.residue_order()?;
        let bound = (self.ring.k() - 1) as usize * self.ring.d();
        let mut b = self.pow(e1);
        let mut s = 0usize;
        while !b.is_one() {
            if s >= bound {
                return Err(Error::Internal("multiplicative order exceeded unit-group bound"));
            }
            b = b.pow(self.ring.p() as u128);
            s += 1;
        }
        e1.checked_mul(checked_pow(self.ring.p() as u128, s as u32)?).ok_or(Error::Overflow)
    }
}

impl fmt::Display for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.ring.d() == 1 {
            return write!(f, "{}", self.c[0]);
        }
        f.write_str("(")?;
        for (i, c) in self.c.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str(")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zk(p: u64, k: u32) -> GaloisRing {
        GaloisRing::integers(Modulus::new(p, k).unwrap())
    }

    #[test]
    fn rejects_bad_moduli() {
        assert_eq!(Modulus::new(9, 1), Err(Error::NotPrime(9)));
        assert_eq!(Modulus::new(5, 0), Err(Error::ZeroPrecision));
    }

    #[test]
    fn basic_ops_mod_9() {
        let r = zk(3, 2);
        assert_eq!(r.from_u64(7).add(&r.from_u64(5)), r.from_u64(3));
        assert!(r.from_u64(7).mul(&r.zero()).is_zero());
    }

    #[test]
    fn gr25_t_squared() {
        let m = Modulus::new(5, 2).unwrap();
        let h = [1u64, 1, 1].iter().map(|&c| BigUint::from(c)).collect();
        let r = GaloisRing::with_modulus_poly(m, h).unwrap();
        let t = r.generator();
        assert_eq!(t.mul(&t).coeffs_u64().unwrap(), vec![24, 24]);
    }

    #[test]
    fn mismatch_is_an_error() {
        assert_eq!(zk(3, 2).one().try_add(&zk(3, 3).one()), Err(Error::DescriptorMismatch));
    }

    #[test]
    fn inverses() {
        let r = zk(5, 2);
        assert_eq!(r.from_u64(7).inverse().unwrap(), r.from_u64(18));
        let r = zk(3, 2);
        assert_eq!(r.one().inverse().unwrap(), r.one());
        assert_eq!(r.from_u64(3).inverse(), Err(Error::NonUnit { valuation: 1 }));
    }

    #[test]
    fn valuations() {
        let r = zk(3, 3);
        assert_eq!(r.from_u64(18).valuation(), Valuation::Finite(2));
        assert_eq!(r.zero().valuation(), Valuation::Infinite);
        let g = GaloisRing::standard(Modulus::new(5, 2).unwrap(), 2).unwrap();
        assert_eq!(g.element(&[10, 5]).valuation(), Valuation::Finite(1));
    }

    #[test]
    fn orders() {
        assert_eq!(zk(5, 1).from_u64(4).mult_order().unwrap(), 2);
        assert_eq!(zk(5, 2).from_u64(7).mult_order().unwrap(), 4);
        assert_eq!(zk(3, 2).from_u64(4).mult_order().unwrap(), 3);
    }

    #[test]
    fn order_matches_naive_powering() {
        for (p, k, d) in [(3u64, 2u32, 2usize), (5, 2, 1), (2, 3, 3), (7, 2, 1), (3, 3, 1)] {
            let r = GaloisRing::standard(Modulus::new(p, k).unwrap(), d).unwrap();
            let q = p.pow(k);
            let total = q.pow(d as u32);
            for idx in 0..total {
                let mut cs = Vec::new();
                let mut x = idx;
                for _ in 0..d {
                    cs.push(x % q);
                    x /= q;
                }
                let a = r.element(&cs);
                if !a.is_unit() {
                    continue;
                }
                let mut j = 1u128;
                let mut y = a.clone();
                while !y.is_one() {
                    y = y.mul(&a);
                    j += 1;
                }
                assert_eq!(a.mult_order().unwrap(), j, "p={p} k={k} d={d} a={a}");
            }
        }
    }
}
