//! Elementary arithmetic functions.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Prime factorization as (prime, exponent) pairs.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn euler_phi(n: u64) -> u64 {
    factorize(n).iter().fold(n, |acc, &(p, _)| acc / p * (p - 1))
}

pub fn mobius(n: u64) -> i64 {
    let f = factorize(n);
    if f.iter().any(|&(_, e)| e > 1) {
        0
    } else if f.len().is_multiple_of(2) {
        1
    } else {
        -1
    }
}

pub fn divisors(n: u64) -> Vec<u64> {
    (1..=n).filter(|d| n.is_multiple_of(*d)).collect()
}

/// Jordan's totient J₂(n) = Σ_{r|n} μ(n/r) r².
pub fn jordan2(n: u64) -> i64 {
    divisors(n).iter().map(|&r| mobius(n / r) * (r * r) as i64).sum()
}

/// Möbius values on the divisors of `n`, as (divisor, μ(divisor)).
pub fn mobius_on_divisors(n: u64) -> Vec<(u64, i64)> {
    divisors(n).into_iter().map(|d| (d, mobius(d))).collect()
}

/// Elementary symmetric polynomial e_j of the given values.
pub fn elementary_symmetric(j: usize, values: &[u64]) -> BigInt {
    // e[i] after processing a prefix
    let mut e = vec![BigInt::zero(); j + 1];
    e[0] = BigInt::one();
    for &v in values {
        for i in (1..=j).rev() {
            let add = &e[i - 1] * v;
            e[i] += add;
        }
    }
    e[j].clone()
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    factorial(n) / (factorial(k) * factorial(n - k))
}

/// Multinomial coefficient (Σ parts)! / Π parts!.
pub fn multinomial(parts: &[u64]) -> BigInt {
    let total: u64 = parts.iter().sum();
    parts.iter().fold(factorial(total), |acc, &p| acc / factorial(p))
}

/// n^e for possibly negative e.
pub fn rational_pow(n: u64, e: i64) -> BigRational {
    let base = BigInt::from(n);
    if e >= 0 {
        BigRational::from_integer(num_traits::pow(base, e as usize))
    } else {
        BigRational::new(BigInt::one(), num_traits::pow(base, (-e) as usize))
    }
}

pub fn gcd(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}
