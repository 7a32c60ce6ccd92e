//! Polynomials: over `GR(p^k, d)` for arithmetic, over `Z` for identity.
//!
//! A polynomial handed to the order theory is an integer polynomial. Its
//! reductions mod `p^k` are the objects whose orders are measured, but some
//! questions (does `f` divide `t^N - 1` for every k?) only make sense for the
//! integer polynomial itself.

use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::fp::FpPoly;
use crate::ring::{GaloisRing, Modulus, RingElement};
use crate::{Error, Result};

/// Dense polynomial with coefficients in a Galois ring, lowest degree first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polynomial {
    ring: GaloisRing,
    coeffs: Vec<RingElement>,
}

impl Polynomial {
    pub fn new(ring: &GaloisRing, mut coeffs: Vec<RingElement>) -> Result<Self> {
        if coeffs.iter().any(|c| c.ring() != ring) {
            return Err(Error::DescriptorMismatch);
        }
        while coeffs.last().is_some_and(RingElement::is_zero) {
            coeffs.pop();
        }
        Ok(Polynomial { ring: ring.clone(), coeffs })
    }

    pub fn from_u64s(ring: &GaloisRing, cs: &[u64]) -> Self {
        Self::new(ring, cs.iter().map(|&c| ring.from_u64(c)).collect()).unwrap()
    }

    pub fn zero(ring: &GaloisRing) -> Self {
        Polynomial { ring: ring.clone(), coeffs: Vec::new() }
    }

    pub fn ring(&self) -> &GaloisRing {
        &self.ring
    }

    pub fn coeffs(&self) -> &[RingElement] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> Option<&RingElement> {
        self.coeffs.last()
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.ring == other.ring {
            Ok(())
        } else {
            Err(Error::DescriptorMismatch)
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let n = self.coeffs.len().max(other.coeffs.len());
        let zero = self.ring.zero();
        let cs = (0..n)
            .map(|i| self.coeffs.get(i).unwrap_or(&zero).add(other.coeffs.get(i).unwrap_or(&zero)))
            .collect();
        Self::new(&self.ring, cs)
    }

    pub fn neg(&self) -> Self {
        Polynomial { ring: self.ring.clone(), coeffs: self.coeffs.iter().map(RingElement::neg).collect() }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(&self.ring));
        }
        let mut cs = vec![self.ring.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                cs[i + j] = cs[i + j].add(&a.mul(b));
            }
        }
        Self::new(&self.ring, cs)
    }

    /// Quotient and remainder by a divisor with unit leading coefficient.
    pub fn divrem(&self, divisor: &Self) -> Result<(Self, Self)> {
        self.check(divisor)?;
        let lead = divisor.lead().ok_or(Error::Internal("division by zero polynomial"))?;
        let li = lead.inverse()?;
        let db = divisor.coeffs.len() - 1;
        let mut r = self.coeffs.clone();
        if r.len() <= db {
            return Ok((Self::zero(&self.ring), self.clone()));
        }
        let mut q = vec![self.ring.zero(); r.len() - db];
        for i in (db..r.len()).rev() {
            let c = r[i].mul(&li);
            if c.is_zero() {
                continue;
            }
            for (j, dj) in divisor.coeffs.iter().enumerate() {
                r[i - db + j] = r[i - db + j].sub(&c.mul(dj));
            }
            q[i - db] = c;
        }
        r.truncate(db);
        Ok((Self::new(&self.ring, q)?, Self::new(&self.ring, r)?))
    }

    pub fn rem(&self, divisor: &Self) -> Result<Self> {
        Ok(self.divrem(divisor)?.1)
    }

    /// Monic gcd; only over a field (k = 1).
    pub fn gcd_field(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        if self.ring.k() != 1 {
            return Err(Error::UnsupportedRing);
        }
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b)?;
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Scales by the inverse of the leading coefficient.
    pub fn monic(&self) -> Result<Self> {
        match self.lead() {
            None => Ok(self.clone()),
            Some(l) => {
                let li = l.inverse()?;
                Self::new(&self.ring, self.coeffs.iter().map(|c| c.mul(&li)).collect())
            }
        }
    }

    pub fn derivative(&self) -> Self {
        let cs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c.mul(&self.ring.from_u64(i as u64)))
            .collect();
        Self::new(&self.ring, cs).unwrap()
    }

    /// Horner evaluation at a point of the same ring.
    pub fn eval(&self, x: &RingElement) -> Result<RingElement> {
        if x.ring() != &self.ring {
            return Err(Error::DescriptorMismatch);
        }
        Ok(self.coeffs.iter().rev().fold(self.ring.zero(), |acc, c| acc.mul(x).add(c)))
    }
}

/// Polynomial with integer coefficients, lowest degree first, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn from_i64s(cs: &[i64]) -> Self {
        Self::new(cs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn from_fp(cs: &[u64]) -> Self {
        Self::new(cs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn one() -> Self {
        Self::from_i64s(&[1])
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(One::is_one)
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return Self::new(Vec::new());
        }
        let mut cs = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                cs[i + j] += a * b;
            }
        }
        Self::new(cs)
    }

    pub fn derivative(&self) -> Self {
        Self::new(self.coeffs.iter().enumerate().skip(1).map(|(i, c)| c * BigInt::from(i)).collect())
    }

    /// Exact quotient by a monic divisor, if the division leaves no remainder.
    pub fn div_exact(&self, divisor: &Self) -> Option<Self> {
        if !divisor.is_monic() {
            return None;
        }
        let db = divisor.coeffs.len() - 1;
        let mut r = self.coeffs.clone();
        if r.len() <= db {
            return if r.is_empty() { Some(Self::new(Vec::new())) } else { None };
        }
        let mut q = vec![BigInt::zero(); r.len() - db];
        for i in (db..r.len()).rev() {
            let c = core::mem::take(&mut r[i]);
            if c.is_zero() {
                continue;
            }
            for (j, dj) in divisor.coeffs.iter().enumerate().take(db) {
                r[i - db + j] -= &c * dj;
            }
            q[i - db] = c;
        }
        if r[..db].iter().all(Zero::is_zero) {
            Some(Self::new(q))
        } else {
            None
        }
    }

    /// The n-th cyclotomic polynomial, from the Moebius product formula.
    pub fn cyclotomic(n: u64) -> Self {
        let t_pow_minus_one = |d: u64| {
            let mut cs = vec![BigInt::zero(); d as usize + 1];
            cs[0] = BigInt::from(-1);
            cs[d as usize] = BigInt::one();
            Self::new(cs)
        };
        let mut num = Self::one();
        let mut den = Self::one();
        for d in (1..=n).filter(|d| n % d == 0) {
            match moebius(n / d) {
                1 => num = num.mul(&t_pow_minus_one(d)),
                -1 => den = den.mul(&t_pow_minus_one(d)),
                _ => {}
            }
        }
        // den is monic up to sign; normalise so div_exact applies
        if !den.is_monic() {
            den = den.scale(&BigInt::from(-1));
            num = num.scale(&BigInt::from(-1));
        }
        num.div_exact(&den).expect("cyclotomic product formula is exact")
    }

    pub fn scale(&self, s: &BigInt) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    /// Whether `self` divides `t^n - 1` over the integers.
    ///
    /// `t^n - 1` is the squarefree product of the cyclotomic polynomials of
    /// the divisors of n, so this strips those factors off one at a time.
    /// Only cyclotomics of degree at most `deg self` can take part, which
    /// keeps the work independent of the size of n.
    pub fn divides_t_pow_minus_one(&self, n: u128) -> bool {
        let Some(m) = self.degree() else { return false };
        if !self.is_monic() {
            return false;
        }
        // phi(e) >= sqrt(e / 2) for e >= 7, so phi(e) <= m forces e <= 2 m^2
        let bound = core::cmp::max(6, 2 * (m as u128) * (m as u128));
        let mut g = self.clone();
        let mut e = 1u128;
        while e <= bound && e <= n && g.degree() != Some(0) {
            if n % e == 0 {
                if let Some(q) = g.div_exact(&Self::cyclotomic(e as u64)) {
                    g = q;
                }
            }
            e += 1;
        }
        g.degree() == Some(0)
    }

    /// Reduction mod p as an `F_p` polynomial.
    pub fn to_fp(&self, p: u64) -> FpPoly {
        let pb = BigInt::from(p);
        let mut r: FpPoly = self.coeffs.iter().map(|c| c.mod_floor(&pb).to_u64().unwrap()).collect();
        crate::fp::trim(&mut r);
        r
    }

    /// Coefficients reduced into `[0, q)`.
    pub fn residues(&self, q: &BigUint) -> Vec<BigUint> {
        let qi = BigInt::from_biguint(Sign::Plus, q.clone());
        self.coeffs.iter().map(|c| c.mod_floor(&qi).to_biguint().unwrap()).collect()
    }

    /// Image in `R[t]` for a Galois ring R.
    pub fn to_ring(&self, ring: &GaloisRing) -> Polynomial {
        let cs = self.residues(ring.modulus().q()).iter().map(|c| ring.from_biguint(c)).collect();
        Polynomial::new(ring, cs).unwrap()
    }

    /// Rejects coefficients whose absolute value reaches `p^k`.
    pub fn check_range(&self, modulus: &Modulus) -> Result<()> {
        let q = BigInt::from_biguint(Sign::Plus, modulus.q().clone());
        for c in &self.coeffs {
            if c.abs() >= q {
                return Err(Error::Parse(alloc::format!("coefficient {c} is out of range for modulus {modulus}")));
            }
        }
        Ok(())
    }

    /// Parses `c0 + c1*t + c2*t^2` (also `4t`, `-t^3`, any term order) or
    /// the list form `[c0, c1, ...]`.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some(inner) = s.strip_prefix('[') {
            let inner = inner.strip_suffix(']').ok_or_else(|| Error::Parse("unclosed '['".into()))?;
            if inner.trim().is_empty() {
                return Ok(Self::new(Vec::new()));
            }
            let cs = inner
                .split(',')
                .map(|x| x.trim().parse::<BigInt>().map_err(|_| Error::Parse(alloc::format!("bad coefficient '{}'", x.trim()))))
                .collect::<Result<Vec<_>>>()?;
            return Ok(Self::new(cs));
        }
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(Error::Parse("empty polynomial".into()));
        }
        let mut terms: Vec<(bool, String)> = Vec::new();
        let mut cur = String::new();
        let mut neg = false;
        for (i, ch) in compact.chars().enumerate() {
            if (ch == '+' || ch == '-') && !(i > 0 && cur.ends_with('^')) {
                if !cur.is_empty() {
                    terms.push((neg, core::mem::take(&mut cur)));
                } else if i > 0 {
                    return Err(Error::Parse(alloc::format!("dangling sign in '{s}'")));
                }
                neg = ch == '-';
            } else {
                cur.push(ch);
            }
        }
        if cur.is_empty() {
            return Err(Error::Parse(alloc::format!("trailing sign in '{s}'")));
        }
        terms.push((neg, cur));
        let mut cs: Vec<BigInt> = Vec::new();
        for (neg, term) in terms {
            let (coef, exp) = parse_term(&term)?;
            if cs.len() <= exp {
                cs.resize(exp + 1, BigInt::zero());
            }
            cs[exp] += if neg { -coef } else { coef };
        }
        Ok(Self::new(cs))
    }
}

fn moebius(mut n: u64) -> i32 {
    let mut sign = 1;
    let mut q = 2;
    while q * q <= n {
        if n % q == 0 {
            n /= q;
            if n % q == 0 {
                return 0;
            }
            sign = -sign;
        }
        q += 1;
    }
    if n > 1 {
        sign = -sign;
    }
    sign
}

fn parse_term(term: &str) -> Result<(BigInt, usize)> {
    let bad = || Error::Parse(alloc::format!("bad term '{term}'"));
    let Some(pos) = term.find(['t', 'x']) else {
        return Ok((term.parse().map_err(|_| bad())?, 0));
    };
    let head = term[..pos].strip_suffix('*').unwrap_or(&term[..pos]);
    let coef = if head.is_empty() { BigInt::one() } else { head.parse().map_err(|_| bad())? };
    let tail = &term[pos + 1..];
    let exp = if tail.is_empty() {
        1
    } else {
        tail.strip_prefix('^').ok_or_else(bad)?.parse().map_err(|_| bad())?
    };
    Ok((coef, exp))
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if c.is_negative() { " - " } else { " + " })?;
            }
            first = false;
            let mono = match i {
                0 => String::new(),
                1 => "t".to_string(),
                _ => alloc::format!("t^{i}"),
            };
            if i == 0 {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                f.write_str(&mono)?;
            } else {
                write!(f, "{mag}*{mono}")?;
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zk(p: u64, k: u32) -> GaloisRing {
        GaloisRing::integers(Modulus::new(p, k).unwrap())
    }

    #[test]
    fn field_gcd() {
        let r = zk(5, 1);
        let a = Polynomial::from_u64s(&r, &[1, 1, 1]);
        let b = Polynomial::from_u64s(&r, &[4, 0, 0, 1]);
        assert_eq!(a.gcd_field(&b).unwrap(), a);
        let r9 = zk(3, 2);
        let a = Polynomial::from_u64s(&r9, &[1, 1]);
        assert_eq!(a.gcd_field(&a), Err(Error::UnsupportedRing));
    }

    #[test]
    fn product_mod_9() {
        let r = zk(3, 2);
        let a = Polynomial::from_u64s(&r, &[1, 1]);
        let b = Polynomial::from_u64s(&r, &[8, 1]);
        assert_eq!(a.mul(&b).unwrap(), Polynomial::from_u64s(&r, &[8, 0, 1]));
    }

    #[test]
    fn remainder_over_f5() {
        let r = zk(5, 1);
        let t3 = Polynomial::from_u64s(&r, &[0, 0, 0, 1]);
        let f = IntPoly::from_i64s(&[1, -4, 1]).to_ring(&r);
        assert_eq!(t3.rem(&f).unwrap(), Polynomial::from_u64s(&r, &[1]));
    }

    #[test]
    fn parse_and_print() {
        let f = IntPoly::parse("1 - 4t + t^2").unwrap();
        assert_eq!(f, IntPoly::from_i64s(&[1, -4, 1]));
        assert_eq!(f.to_string(), "1 - 4*t + t^2");
        assert_eq!(IntPoly::parse(&f.to_string()).unwrap(), f);
        assert_eq!(IntPoly::parse("[1, -4, 1]").unwrap(), f);
        assert_eq!(IntPoly::parse("t^2 - 3*t + 1").unwrap(), IntPoly::from_i64s(&[1, -3, 1]));
        assert_eq!(IntPoly::parse("-t").unwrap().to_string(), "-t");
        assert!(IntPoly::parse("1 + + t").is_err());
        assert!(IntPoly::parse("2t^").is_err());
        let m = Modulus::new(5, 1).unwrap();
        assert!(IntPoly::parse("5 + t").unwrap().check_range(&m).is_err());
        assert!(IntPoly::parse("4 + t").unwrap().check_range(&m).is_ok());
    }

    #[test]
    fn cyclotomics() {
        assert_eq!(IntPoly::cyclotomic(1), IntPoly::from_i64s(&[-1, 1]));
        assert_eq!(IntPoly::cyclotomic(3), IntPoly::from_i64s(&[1, 1, 1]));
        assert_eq!(IntPoly::cyclotomic(12), IntPoly::from_i64s(&[1, 0, -1, 0, 1]));
        let t6 = IntPoly::from_i64s(&[-1, 0, 0, 0, 0, 0, 1]);
        assert!(t6.div_exact(&IntPoly::cyclotomic(3)).is_some());
        assert!(t6.div_exact(&IntPoly::from_i64s(&[1, -4, 1])).is_none());
        assert!(IntPoly::from_i64s(&[1, 1, 1]).divides_t_pow_minus_one(3));
        assert!(IntPoly::from_i64s(&[1, 1, 1]).divides_t_pow_minus_one(300));
        assert!(!IntPoly::from_i64s(&[1, 1, 1]).divides_t_pow_minus_one(5));
        // (t - 1)^2 never divides a squarefree t^n - 1
        assert!(!IntPoly::from_i64s(&[1, -2, 1]).divides_t_pow_minus_one(6));
        assert!(!IntPoly::from_i64s(&[1, -4, 1]).divides_t_pow_minus_one(3));
        // Phi_1 Phi_4 = (t - 1)(t^2 + 1)
        assert!(IntPoly::from_i64s(&[-1, 1, -1, 1]).divides_t_pow_minus_one(8));
    }
}
