//! Dense polynomials over the prime field `F_p` with word-size coefficients.
//!
//! Coefficients are stored lowest degree first and the zero polynomial is
//! the empty vector. These are the workhorses behind irreducibility tests,
//! mod-p factorization and sequence minimal polynomials.

use alloc::vec;
use alloc::vec::Vec;

use crate::arith::{mul_mod, pow_mod};

pub type FpPoly = Vec<u64>;

pub fn trim(a: &mut FpPoly) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

pub fn degree(a: &[u64]) -> Option<usize> {
    a.iter().rposition(|&c| c != 0)
}

pub fn inv(a: u64, p: u64) -> u64 {
    debug_assert!(a % p != 0);
    pow_mod(a, p - 2, p)
}

pub fn add(a: &[u64], b: &[u64], p: u64) -> FpPoly {
    let mut r = vec![0; a.len().max(b.len())];
    for (i, c) in r.iter_mut().enumerate() {
        *c = (a.get(i).copied().unwrap_or(0) + b.get(i).copied().unwrap_or(0)) % p;
    }
    trim(&mut r);
    r
}

pub fn sub(a: &[u64], b: &[u64], p: u64) -> FpPoly {
    let mut r = vec![0; a.len().max(b.len())];
    for (i, c) in r.iter_mut().enumerate() {
        *c = (a.get(i).copied().unwrap_or(0) + p - b.get(i).copied().unwrap_or(0) % p) % p;
    }
    trim(&mut r);
    r
}

pub fn scale(a: &[u64], s: u64, p: u64) -> FpPoly {
    let mut r: FpPoly = a.iter().map(|&c| mul_mod(c, s, p)).collect();
    trim(&mut r);
    r
}

pub fn mul(a: &[u64], b: &[u64], p: u64) -> FpPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut r = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            r[i + j] = (r[i + j] + mul_mod(x, y, p)) % p;
        }
    }
    trim(&mut r);
    r
}

/// Quotient and remainder; `b` must be nonzero.
pub fn divrem(a: &[u64], b: &[u64], p: u64) -> (FpPoly, FpPoly) {
    let db = degree(b).expect("division by zero polynomial");
    let lead_inv = inv(b[db], p);
    let mut r: FpPoly = a.to_vec();
    trim(&mut r);
    if r.len() <= db {
        return (Vec::new(), r);
    }
    let mut q = vec![0u64; r.len() - db];
    while let Some(dr) = degree(&r) {
        if dr < db {
            break;
        }
        let c = mul_mod(r[dr], lead_inv, p);
        q[dr - db] = c;
        for j in 0..=db {
            let t = mul_mod(c, b[j], p);
            r[dr - db + j] = (r[dr - db + j] + p - t) % p;
        }
        trim(&mut r);
    }
    trim(&mut q);
    (q, r)
}

pub fn rem(a: &[u64], b: &[u64], p: u64) -> FpPoly {
    divrem(a, b, p).1
}

pub fn monic(a: &[u64], p: u64) -> FpPoly {
    match degree(a) {
        None => Vec::new(),
        Some(d) => scale(a, inv(a[d], p), p),
    }
}

/// Monic gcd.
pub fn gcd(a: &[u64], b: &[u64], p: u64) -> FpPoly {
    let (mut x, mut y) = (a.to_vec(), b.to_vec());
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        let r = rem(&x, &y, p);
        x = y;
        y = r;
    }
    monic(&x, p)
}

pub fn lcm(a: &[u64], b: &[u64], p: u64) -> FpPoly {
    let g = gcd(a, b, p);
    monic(&divrem(&mul(a, b, p), &g, p).0, p)
}

/// Inverse of `a` modulo `m`, if it exists.
pub fn inv_mod(a: &[u64], m: &[u64], p: u64) -> Option<FpPoly> {
    let (mut r0, mut r1) = (m.to_vec(), rem(a, m, p));
    let (mut s0, mut s1): (FpPoly, FpPoly) = (Vec::new(), vec![1]);
    while !r1.is_empty() {
        let (q, r) = divrem(&r0, &r1, p);
        let s = sub(&s0, &mul(&q, &s1, p), p);
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = s;
    }
    if degree(&r0) != Some(0) {
        return None;
    }
    Some(rem(&scale(&s0, inv(r0[0], p), p), m, p))
}

pub fn mulmod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> FpPoly {
    rem(&mul(a, b, p), m, p)
}

pub fn powmod(base: &[u64], mut e: u128, m: &[u64], p: u64) -> FpPoly {
    let mut acc = rem(&[1], m, p);
    let mut b = rem(base, m, p);
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(&acc, &b, m, p);
        }
        b = mulmod(&b, &b, m, p);
        e >>= 1;
    }
    acc
}

pub fn derivative(a: &[u64], p: u64) -> FpPoly {
    let mut r: FpPoly = a
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, &c)| mul_mod(c, i as u64 % p, p))
        .collect();
    trim(&mut r);
    r
}

pub fn eval(a: &[u64], x: u64, p: u64) -> u64 {
    a.iter().rev().fold(0, |acc, &c| (mul_mod(acc, x, p) + c) % p)
}

/// t^(p^i) mod m, for i = 0, 1, 2, ... as an iterator-style helper.
fn frobenius_step(x: &[u64], m: &[u64], p: u64) -> FpPoly {
    powmod(x, p as u128, m, p)
}

/// Irreducibility: no common factor with t^(p^i) - t for i <= deg/2.
pub fn is_irreducible(h: &[u64], p: u64) -> bool {
    let Some(d) = degree(h) else { return false };
    if d == 0 {
        return false;
    }
    let h = monic(h, p);
    let t: FpPoly = vec![0, 1];
    let mut x = rem(&t, &h, p);
    for _ in 1..=d / 2 {
        x = frobenius_step(&x, &h, p);
        if degree(&gcd(&sub(&x, &t, p), &h, p)).unwrap_or(0) > 0 {
            return false;
        }
    }
    true
}

/// First monic irreducible of degree d, scanning coefficient vectors
/// `(c_0, ..., c_{d-1})` as base-p numerals with `c_0` least significant.
pub fn first_irreducible(d: usize, p: u64) -> FpPoly {
    if d == 1 {
        return vec![0, 1];
    }
    let mut c = vec![0u64; d];
    loop {
        let mut h = c.clone();
        h.push(1);
        if is_irreducible(&h, p) {
            return h;
        }
        let mut i = 0;
        loop {
            c[i] += 1;
            if c[i] < p {
                break;
            }
            c[i] = 0;
            i += 1;
            assert!(i < d, "irreducible polynomials of every degree exist");
        }
    }
}

/// p-th root of a polynomial whose derivative vanishes.
fn pth_root(a: &[u64], p: u64) -> FpPoly {
    // Over F_p the Frobenius is the identity on coefficients.
    let mut r: FpPoly = a.iter().step_by(p as usize).copied().collect();
    trim(&mut r);
    r
}

/// Squarefree decomposition of a monic polynomial: pairs (g, e) with g
/// squarefree, monic, pairwise coprime and f = prod g^e.
pub fn squarefree(f: &[u64], p: u64) -> Vec<(FpPoly, u32)> {
    let mut out = Vec::new();
    sqf_into(&monic(f, p), p, 1, &mut out);
    out.sort();
    out
}

fn sqf_into(f: &[u64], p: u64, mult: u32, out: &mut Vec<(FpPoly, u32)>) {
    if degree(f).unwrap_or(0) == 0 {
        return;
    }
    let df = derivative(f, p);
    if df.is_empty() {
        sqf_into(&pth_root(f, p), p, mult * p as u32, out);
        return;
    }
    let mut c = gcd(f, &df, p);
    let mut w = divrem(f, &c, p).0;
    let mut i = 1u32;
    while degree(&w).unwrap_or(0) > 0 {
        let y = gcd(&w, &c, p);
        let z = monic(&divrem(&w, &y, p).0, p);
        if degree(&z).unwrap_or(0) > 0 {
            out.push((z, i * mult));
        }
        c = divrem(&c, &y, p).0;
        w = y;
        i += 1;
    }
    if degree(&c).unwrap_or(0) > 0 {
        sqf_into(&pth_root(&monic(&c, p), p), p, mult * p as u32, out);
    }
}

/// Distinct-degree factorization of a squarefree monic polynomial:
/// pairs (product of all irreducible factors of degree i, i).
pub fn distinct_degree(f: &[u64], p: u64) -> Vec<(FpPoly, usize)> {
    let t: FpPoly = vec![0, 1];
    let mut rest = monic(f, p);
    let mut x = rem(&t, &rest, p);
    let mut out = Vec::new();
    let mut i = 0;
    while let Some(d) = degree(&rest) {
        if d == 0 {
            break;
        }
        i += 1;
        if 2 * i > d {
            out.push((rest.clone(), d));
            break;
        }
        x = frobenius_step(&x, &rest, p);
        let g = gcd(&sub(&x, &t, p), &rest, p);
        if degree(&g).unwrap_or(0) > 0 {
            rest = divrem(&rest, &g, p).0;
            x = rem(&x, &rest, p);
            out.push((g, i));
        }
    }
    out
}
