//! Linear maps `x -> Mx` on `(Z/p^k)^n` and their functional graphs.
//!
//! A [`LinearMap`] is an integer matrix together with a monic integer
//! polynomial that annihilates it. Reducing both mod `p^k` gives the map at
//! any precision ([`MapMod`]), which is what the graph code works on.

mod checks;
mod enumerate;
mod state;

pub use checks::*;
pub use enumerate::*;
pub use state::*;

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::arith;
use crate::order::{self, DEFAULT_SEARCH_CAP};
use crate::poly::IntPoly;
use crate::ring::Modulus;
use crate::{Error, Result};

/// Default cap on enumerated states.
pub const DEFAULT_BUDGET: u64 = 20_000_000;

/// A state: one residue per coordinate.
pub type StateVector = Vec<u64>;

/// Integer matrix with an annihilating monic polynomial, read mod `p^k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearMap {
    p: u64,
    dim: usize,
    /// Row-major integer entries.
    entries: Vec<BigInt>,
    poly: IntPoly,
    label: String,
}

impl LinearMap {
    /// Block companion matrix of a monic `f = t^m + c_{m-1} t^{m-1} + ... + c_0`
    /// acting on `(Z/p^k)^{mn}`: identity blocks above the diagonal and last
    /// block row `-c_0 I, ..., -c_{m-1} I`.
    pub fn companion(p: u64, f: &IntPoly, n: usize) -> Result<Self> {
        Modulus::new(p, 1)?;
        if !f.is_monic() || f.degree().unwrap_or(0) == 0 || n == 0 {
            return Err(Error::Parse("companion map needs a monic f of degree >= 1 and n >= 1".into()));
        }
        if f.to_fp(p)[0] == 0 {
            return Err(Error::ZeroRoot);
        }
        let m = f.degree().unwrap();
        let dim = m * n;
        let mut entries = vec![BigInt::zero(); dim * dim];
        for blk in 0..m - 1 {
            for i in 0..n {
                entries[(blk * n + i) * dim + (blk + 1) * n + i] = BigInt::from(1);
            }
        }
        for j in 0..m {
            for i in 0..n {
                entries[((m - 1) * n + i) * dim + j * n + i] = -f.coeff(j);
            }
        }
        Ok(LinearMap { p, dim, entries, poly: f.clone(), label: alloc::format!("companion({f}; n={n})") })
    }

    /// An arbitrary integer matrix with a claimed annihilating polynomial.
    /// The claim `poly(M) = 0` is verified over the integers.
    pub fn from_matrix(p: u64, dim: usize, entries: Vec<BigInt>, poly: IntPoly, label: String) -> Result<Self> {
        Modulus::new(p, 1)?;
        if entries.len() != dim * dim || dim == 0 {
            return Err(Error::Parse("matrix must be square and nonempty".into()));
        }
        if !poly.is_monic() {
            return Err(Error::Parse("annihilating polynomial must be monic".into()));
        }
        let map = LinearMap { p, dim, entries, poly, label };
        if !map.annihilated() {
            return Err(Error::Parse("polynomial does not annihilate the matrix".into()));
        }
        if map.poly.to_fp(p).first().copied().unwrap_or(0) == 0 {
            return Err(Error::ZeroRoot);
        }
        Ok(map)
    }

    fn annihilated(&self) -> bool {
        let n = self.dim;
        let mul = |a: &[BigInt], b: &[BigInt]| {
            let mut r = vec![BigInt::zero(); n * n];
            for i in 0..n {
                for l in 0..n {
                    if a[i * n + l].is_zero() {
                        continue;
                    }
                    for j in 0..n {
                        r[i * n + j] += &a[i * n + l] * &b[l * n + j];
                    }
                }
            }
            r
        };
        // Horner: acc = acc * M + c_i I
        let mut acc = vec![BigInt::zero(); n * n];
        for c in self.poly.coeffs().iter().rev() {
            acc = mul(&acc, &self.entries);
            for i in 0..n {
                acc[i * n + i] += c;
            }
        }
        acc.iter().all(Zero::is_zero)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn poly(&self) -> &IntPoly {
        &self.poly
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.entries
    }

    pub fn with_label(mut self, label: String) -> Self {
        self.label = label;
        self
    }

    /// The map at precision k.
    pub fn at(&self, k: u32) -> Result<MapMod> {
        let modulus = Modulus::new(self.p, k)?;
        let q = modulus
            .q_u64()
            .filter(|&q| q <= u32::MAX as u64)
            .ok_or(Error::Capacity { what: "modulus p^k for state arithmetic", required: 0, limit: u32::MAX as u128 })?;
        let qi = BigInt::from(q);
        let mat = self.entries.iter().map(|e| e.mod_floor(&qi).to_u64().unwrap()).collect();
        Ok(MapMod { map: self.clone(), k, q, mat })
    }

    /// `f(1)` and `f(-1)` both nonzero mod p.
    pub fn plus_minus_one_units(&self) -> bool {
        let p = BigInt::from(self.p);
        let at = |x: i64| !self.poly.eval(&BigInt::from(x)).mod_floor(&p).is_zero();
        at(1) && at(-1)
    }
}

/// A [`LinearMap`] reduced mod `p^k`.
#[derive(Clone, Debug)]
pub struct MapMod {
    map: LinearMap,
    k: u32,
    q: u64,
    mat: Vec<u64>,
}

impl MapMod {
    pub fn map(&self) -> &LinearMap {
        &self.map
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn dim(&self) -> usize {
        self.map.dim
    }

    pub fn p(&self) -> u64 {
        self.map.p
    }

    /// `q^dim`, the number of states.
    pub fn state_count(&self) -> Result<u64> {
        (self.q as u128)
            .checked_pow(self.dim() as u32)
            .and_then(|n| u64::try_from(n).ok())
            .ok_or(Error::Capacity { what: "state space size", required: u128::MAX, limit: u64::MAX as u128 })
    }

    pub fn reduce(&self, x: &[u64]) -> StateVector {
        x.iter().map(|c| c % self.q).collect()
    }

    pub fn apply(&self, x: &[u64]) -> StateVector {
        let n = self.dim();
        (0..n)
            .map(|i| {
                let s: u128 = (0..n).map(|j| self.mat[i * n + j] as u128 * x[j] as u128).sum();
                (s % self.q as u128) as u64
            })
            .collect()
    }

    fn mat_mul(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let n = self.dim();
        let mut r = vec![0u64; n * n];
        for i in 0..n {
            for j in 0..n {
                let s: u128 = (0..n).map(|l| a[i * n + l] as u128 * b[l * n + j] as u128).sum();
                r[i * n + j] = (s % self.q as u128) as u64;
            }
        }
        r
    }

    /// `M^e` mod `p^k`.
    pub fn matrix_pow(&self, mut e: u128) -> Vec<u64> {
        let n = self.dim();
        let mut acc = vec![0u64; n * n];
        for i in 0..n {
            acc[i * n + i] = 1 % self.q;
        }
        let mut b = self.mat.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mat_mul(&acc, &b);
            }
            e >>= 1;
            if e > 0 {
                b = self.mat_mul(&b, &b);
            }
        }
        acc
    }

    fn apply_matrix(&self, m: &[u64], x: &[u64]) -> StateVector {
        let n = self.dim();
        (0..n)
            .map(|i| {
                let s: u128 = (0..n).map(|j| m[i * n + j] as u128 * x[j] as u128).sum();
                (s % self.q as u128) as u64
            })
            .collect()
    }

    /// `M^steps x`.
    pub fn iterate(&self, x: &[u64], steps: u128) -> StateVector {
        let x = self.reduce(x);
        if steps <= 64 {
            let mut y = x;
            for _ in 0..steps {
                y = self.apply(&y);
            }
            return y;
        }
        self.apply_matrix(&self.matrix_pow(steps), &x)
    }

    /// Order of the map's polynomial at this precision, a multiple of every
    /// state period. Taken from the theory when it applies, else the oracle.
    pub fn poly_period(&self) -> Result<u128> {
        let f = &self.map.poly;
        match order::ks_of_poly(f, self.p(), DEFAULT_SEARCH_CAP) {
            Ok(prof) => prof.pk(self.k),
            Err(_) => {
                let m = Modulus::new(self.p(), self.k)?;
                order::poly_order_oracle(f, &m, order::default_oracle_bound(f, &m)?)
            }
        }
    }

    /// Least T with `M^T = I`: the polynomial's order with every prime
    /// factor stripped while the power stays the identity. Smaller than
    /// [`MapMod::poly_period`] when the polynomial is not minimal mod p^k.
    pub fn global_period(&self) -> Result<u128> {
        let id = self.matrix_pow(0);
        let mut t = self.poly_period()?;
        for (r, e) in arith::factorize(t)? {
            for _ in 0..e {
                if self.matrix_pow(t / r) != id {
                    break;
                }
                t /= r;
            }
        }
        Ok(t)
    }

    /// Least period by testing divisors of the global period in order.
    pub fn state_period(&self, x: &[u64]) -> Result<u128> {
        let x = self.reduce(x);
        let big = self.global_period()?;
        for d in arith::divisors(big)? {
            if self.apply_matrix(&self.matrix_pow(d), &x) == x {
                return Ok(d);
            }
        }
        // The theory's period was not a multiple of this one; step instead.
        self.step_period(&x, u128::MAX)
    }

    /// Least period by plain stepping; the oracle for [`MapMod::state_period`].
    pub fn step_period(&self, x: &[u64], bound: u128) -> Result<u128> {
        let x = self.reduce(x);
        let mut y = self.apply(&x);
        let mut t = 1u128;
        while y != x {
            if t >= bound {
                return Err(Error::BoundExhausted { bound });
            }
            y = self.apply(&y);
            t += 1;
        }
        Ok(t)
    }

    /// Little-endian mixed-radix index of a state.
    pub fn index_of(&self, x: &[u64]) -> u64 {
        x.iter().rev().fold(0u64, |acc, &c| acc * self.q + c % self.q)
    }

    pub fn state_at(&self, mut idx: u64) -> StateVector {
        let mut x = Vec::with_capacity(self.dim());
        for _ in 0..self.dim() {
            x.push(idx % self.q);
            idx /= self.q;
        }
        x
    }

    /// Rank of `M - I` over `F_p`; fixed points at k = 1 number `p^{n - rank}`.
    pub fn rank_minus_identity_mod_p(&self) -> usize {
        let p = self.p();
        let n = self.dim();
        let mut a: Vec<u64> = (0..n * n)
            .map(|i| {
                let v = self.mat[i] % p;
                if i / n == i % n {
                    (v + p - 1) % p
                } else {
                    v
                }
            })
            .collect();
        let mut rank = 0;
        for col in 0..n {
            let Some(piv) = (rank..n).find(|&r| a[r * n + col] != 0) else { continue };
            for j in 0..n {
                a.swap(rank * n + j, piv * n + j);
            }
            let inv = crate::fp::inv(a[rank * n + col], p);
            for j in 0..n {
                a[rank * n + j] = arith::mul_mod(a[rank * n + j], inv, p);
            }
            for r in 0..n {
                if r != rank && a[r * n + col] != 0 {
                    let c = a[r * n + col];
                    for j in 0..n {
                        let s = arith::mul_mod(c, a[rank * n + j], p);
                        a[r * n + j] = (a[r * n + j] + p - s) % p;
                    }
                }
            }
            rank += 1;
        }
        rank
    }
}
