//! Roots mod p and Newton-Hensel lifting.

use alloc::vec;
use alloc::vec::Vec;

use crate::arith::{self, checked_pow};
use crate::fp::{self, FpPoly};
use crate::poly::{IntPoly, Polynomial};
use crate::ring::{GaloisRing, Modulus, RingElement};
use crate::{Error, Result};

// squarefree factor, its multiplicity, its distinct-degree split
type SquarefreePart = (FpPoly, u32, Vec<(FpPoly, usize)>);

/// Fields up to this size are searched exhaustively for roots.
pub const EXHAUSTIVE_ROOT_LIMIT: u128 = 1_000_000;

/// A root of f mod p with its multiplicity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Root {
    pub value: RingElement,
    pub multiplicity: u32,
    /// Degree of the irreducible factor of f mod p the root belongs to.
    pub factor_degree: usize,
}

/// All roots of f mod p inside the splitting field `GR(p, d)`.
#[derive(Clone, Debug)]
pub struct RootSet {
    pub field: GaloisRing,
    pub roots: Vec<Root>,
}

impl RootSet {
    pub fn d(&self) -> usize {
        self.field.d()
    }

    pub fn max_multiplicity(&self) -> u32 {
        self.roots.iter().map(|r| r.multiplicity).max().unwrap_or(0)
    }

    /// Rebuilds `prod (t - r)^a` over `F_{p^d}`.
    pub fn reconstruct(&self) -> Polynomial {
        let mut acc = Polynomial::from_u64s(&self.field, &[1]);
        for r in &self.roots {
            let lin = Polynomial::new(&self.field, vec![r.value.neg(), self.field.one()]).unwrap();
            for _ in 0..r.multiplicity {
                acc = acc.mul(&lin).unwrap();
            }
        }
        acc
    }
}

/// Factors f mod p far enough to list its roots with multiplicities.
pub fn factor_mod_p(f: &IntPoly, p: u64) -> Result<RootSet> {
    factor_mod_p_with_limit(f, p, EXHAUSTIVE_ROOT_LIMIT)
}

pub fn factor_mod_p_with_limit(f: &IntPoly, p: u64, exhaustive_limit: u128) -> Result<RootSet> {
    let modulus = Modulus::new(p, 1)?;
    let fp_f = f.to_fp(p);
    let Some(m) = fp::degree(&fp_f) else {
        return Err(Error::Parse("zero polynomial".into()));
    };
    if fp_f[0] == 0 {
        return Err(Error::ZeroRoot);
    }
    if m == 0 {
        return Ok(RootSet { field: GaloisRing::integers(modulus), roots: Vec::new() });
    }
    let parts: Vec<SquarefreePart> = fp::squarefree(&fp_f, p)
        .into_iter()
        .map(|(g, e)| {
            let ddf = fp::distinct_degree(&g, p);
            (g, e, ddf)
        })
        .collect();
    let d = parts
        .iter()
        .flat_map(|(_, _, ddf)| ddf.iter().map(|(_, i)| *i as u128))
        .try_fold(1u128, arith::lcm)? as usize;
    let size = checked_pow(p as u128, d as u32)?;
    let field = GaloisRing::standard(modulus, d)?;
    let exhaustive = size <= exhaustive_limit;
    if !exhaustive && p == 2 {
        return Err(Error::Capacity { what: "root search field size p^d", required: size, limit: exhaustive_limit });
    }
    let all = if exhaustive { field.field_elements()? } else { Vec::new() };
    let mut roots = Vec::new();
    for (_, e, ddf) in &parts {
        for (g, deg) in ddf {
            let gp = IntPoly::from_fp(g).to_ring(&field);
            let found = if exhaustive {
                all.iter().filter(|x| gp.eval(x).unwrap().is_zero()).cloned().collect()
            } else {
                split_linear(&gp)?
            };
            if found.len() != fp::degree(g).unwrap() {
                return Err(Error::Internal("root count differs from factor degree"));
            }
            roots.extend(found.into_iter().map(|value| Root { value, multiplicity: *e, factor_degree: *deg }));
        }
    }
    roots.sort_by(|a, b| a.value.coeffs().cmp(b.value.coeffs()));
    Ok(RootSet { field, roots })
}

/// Roots of a squarefree polynomial that splits into linear factors over a
/// finite field of odd characteristic (equal-degree splitting with
/// deterministic shifts t + c).
fn split_linear(g: &Polynomial) -> Result<Vec<RingElement>> {
    let field = g.ring().clone();
    let p = field.p();
    let q = checked_pow(p as u128, field.d() as u32)?;
    let mut out = Vec::new();
    let mut stack = vec![g.monic()?];
    while let Some(h) = stack.pop() {
        match h.degree() {
            Some(0) | None => continue,
            Some(1) => {
                out.push(h.coeffs()[0].neg());
                continue;
            }
            _ => {}
        }
        let mut split = None;
        for c in 0..q {
            let mut cs = Vec::new();
            let mut x = c;
            for _ in 0..field.d() {
                cs.push((x % p as u128) as u64);
                x /= p as u128;
            }
            let shift = Polynomial::new(&field, vec![field.element(&cs), field.one()])?;
            let w = poly_powmod(&shift, (q - 1) / 2, &h)?;
            let w1 = w.sub(&Polynomial::from_u64s(&field, &[1]))?;
            let gcd = h.gcd_field(&w1)?;
            let dg = gcd.degree().unwrap_or(0);
            if dg > 0 && Some(dg) != h.degree() {
                split = Some(gcd);
                break;
            }
        }
        let a = split.ok_or(Error::Internal("equal-degree splitting failed"))?;
        let b = h.divrem(&a)?.0;
        stack.push(a);
        stack.push(b);
    }
    Ok(out)
}

fn poly_powmod(base: &Polynomial, mut e: u128, m: &Polynomial) -> Result<Polynomial> {
    let mut acc = Polynomial::from_u64s(base.ring(), &[1]).rem(m)?;
    let mut b = base.rem(m)?;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc.mul(&b)?.rem(m)?;
        }
        b = b.mul(&b)?.rem(m)?;
        e >>= 1;
    }
    Ok(acc)
}

/// Lifts a simple root of f mod p to `GR(p^target_k, d)` by running
/// `x <- x - f'(x)^{-1} f(x)` exactly `target_k - 1` times.
pub fn newton_lift(f: &IntPoly, root: &RingElement, target_k: u32) -> Result<RingElement> {
    let ring = root.ring().at_precision(target_k)?;
    let base = root.ring().at_precision(1)?;
    let r1 = root.to_ring(&base)?;
    let df = f.derivative();
    if !df.to_ring(&base).eval(&r1)?.is_unit() {
        return Err(Error::MultipleRoot);
    }
    let fk = f.to_ring(&ring);
    let dfk = df.to_ring(&ring);
    let mut x = r1.to_ring(&ring)?;
    for _ in 1..target_k {
        let step = fk.eval(&x)?.mul(&dfk.eval(&x)?.inverse()?);
        x = x.sub(&step);
    }
    Ok(x)
}

/// The Frobenius orbit `r, r^p, r^{p^2}, ...` of an element of `F_{p^d}`.
pub fn conjugates(r: &RingElement) -> Vec<RingElement> {
    let mut out = vec![r.clone()];
    let mut x = r.pow(r.ring().p() as u128);
    while &x != r {
        out.push(x.clone());
        x = x.pow(r.ring().p() as u128);
    }
    out
}
