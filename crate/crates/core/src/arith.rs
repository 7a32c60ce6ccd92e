//! Machine-integer number theory: primality, factoring, valuations.

use alloc::vec::Vec;

use crate::{Error, Result};

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin; the fixed witness set is exact for all u64.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % q == 0 {
            return n == q;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

pub fn gcd(a: u128, b: u128) -> u128 {
    num_integer::Integer::gcd(&a, &b)
}

/// Checked lcm.
pub fn lcm(a: u128, b: u128) -> Result<u128> {
    if a == 0 || b == 0 {
        return Ok(0);
    }
    (a / gcd(a, b)).checked_mul(b).ok_or(Error::Overflow)
}

pub fn checked_pow(p: u128, e: u32) -> Result<u128> {
    p.checked_pow(e).ok_or(Error::Overflow)
}

/// p-adic valuation of a nonzero integer. Zero maps to `u32::MAX`.
pub fn nu(mut n: u128, p: u64) -> u32 {
    if n == 0 {
        return u32::MAX;
    }
    let p = p as u128;
    let mut v = 0;
    while n % p == 0 {
        n /= p;
        v += 1;
    }
    v
}

/// The part of n coprime to p.
pub fn p_free(mut n: u128, p: u64) -> u128 {
    if n == 0 {
        return 0;
    }
    while n % p as u128 == 0 {
        n /= p as u128;
    }
    n
}

fn pollard_rho(n: u64) -> u64 {
    if n % 2 == 0 {
        return 2;
    }
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut x, mut y, mut d) = (2u64, 2u64, 1u64);
        while d == 1 {
            x = f(x);
            y = f(f(y));
            d = gcd(x.abs_diff(y) as u128, n as u128) as u64;
        }
        if d != n {
            return d;
        }
        c += 1;
    }
}

fn factor_u64_into(n: u64, out: &mut Vec<u64>) {
    if n == 1 {
        return;
    }
    if is_prime(n) {
        out.push(n);
        return;
    }
    let d = pollard_rho(n);
    factor_u64_into(d, out);
    factor_u64_into(n / d, out);
}

/// Prime factorization as sorted (prime, exponent) pairs.
pub fn factorize(mut n: u128) -> Result<Vec<(u128, u32)>> {
    let mut primes: Vec<u128> = Vec::new();
    let mut q = 2u128;
    while q < 1 << 16 && q * q <= n {
        while n % q == 0 {
            primes.push(q);
            n /= q;
        }
        q += 1;
    }
    if n > 1 {
        let m = u64::try_from(n).map_err(|_| Error::Capacity {
            what: "integer factorization beyond 64 bits",
            required: n,
            limit: u64::MAX as u128,
        })?;
        let mut rest = Vec::new();
        factor_u64_into(m, &mut rest);
        primes.extend(rest.into_iter().map(u128::from));
    }
    primes.sort_unstable();
    let mut out: Vec<(u128, u32)> = Vec::new();
    for q in primes {
        match out.last_mut() {
            Some((r, e)) if *r == q => *e += 1,
            _ => out.push((q, 1)),
        }
    }
    Ok(out)
}

/// All positive divisors, ascending.
pub fn divisors(n: u128) -> Result<Vec<u128>> {
    let mut ds = alloc::vec![1u128];
    for (q, e) in factorize(n)? {
        let len = ds.len();
        let mut pw = 1u128;
        for _ in 0..e {
            pw *= q;
            for i in 0..len {
                ds.push(ds[i] * pw);
            }
        }
    }
    ds.sort_unstable();
    Ok(ds)
}

/// Euler's totient.
pub fn phi(n: u128) -> Result<u128> {
    let mut r = n;
    for (q, _) in factorize(n)? {
        r = r / q * (q - 1);
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality_small() {
        let naive = |n: u64| n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0);
        for n in 0..5000 {
            assert_eq!(is_prime(n), naive(n), "{n}");
        }
        assert!(is_prime(18446744073709551557));
        assert!(!is_prime(3215031751));
    }

    #[test]
    fn factor_and_divisors() {
        assert_eq!(factorize(624).unwrap(), alloc::vec![(2, 4), (3, 1), (13, 1)]);
        assert_eq!(divisors(12).unwrap(), alloc::vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(phi(36).unwrap(), 12);
        let big = 4294967291u128 * 4294967279;
        assert_eq!(factorize(big).unwrap(), alloc::vec![(4294967279, 1), (4294967291, 1)]);
    }

    #[test]
    fn valuations() {
        assert_eq!(nu(18, 3), 2);
        assert_eq!(nu(7, 3), 0);
        assert_eq!(p_free(250, 5), 2);
        assert_eq!(lcm(10, 15).unwrap(), 30);
    }
}
