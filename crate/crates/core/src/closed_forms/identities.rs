//! Roots-of-unity sums and the Chebyshev helper polynomials.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use super::arith::{euler_phi, gcd, jordan2};
use crate::cyclo::{CycloField, CycloNum};

#[derive(Clone, Debug, Serialize)]
pub struct IdentityReport {
    pub m: u64,
    /// Σ 1/(1−ξ) over primitive ξ, exact.
    pub first_exact: String,
    pub first_expected: String,
    pub first_float_error: f64,
    /// Σ 1/(2−ξ−ξ̄) over primitive ξ, exact.
    pub second_exact: String,
    pub second_expected: String,
    pub second_float_error: f64,
    pub exact_ok: bool,
    pub float_ok: bool,
}

pub const FLOAT_TOLERANCE: f64 = 1e-9;

/// Evaluates both primitive-root sums for `m ≥ 2`, exactly as field traces
/// in ℚ(ζ_m) and numerically over the complex embedding.
pub fn primitive_root_identities(m: u64) -> IdentityReport {
    assert!(m >= 2);
    let field = CycloField::get(m as u32);
    let one = CycloNum::one(&field);
    let zeta = CycloNum::root_of_unity(&field, 1);
    let y = one.sub(&zeta).inv().expect("1 − ζ is a unit");
    let first = y.trace();
    // 2 − ξ − ξ̄ = (1 − ξ)(1 − ξ̄)
    let second = y.mul(&y.conj()).trace();
    let first_expected = BigRational::new(BigInt::from(euler_phi(m)), BigInt::from(2));
    let second_expected = BigRational::new(BigInt::from(jordan2(m)), BigInt::from(12));

    let (mut f1, mut f2) = (0.0f64, 0.0f64);
    for k in (1..m).filter(|&k| gcd(k, m) == 1) {
        let ang = 2.0 * std::f64::consts::PI * k as f64 / m as f64;
        let (re, im) = (1.0 - ang.cos(), -ang.sin());
        // Re(1/(re + i im))
        f1 += re / (re * re + im * im);
        f2 += 1.0 / (2.0 - 2.0 * ang.cos());
    }
    let to_f = |r: &BigRational| num_traits::ToPrimitive::to_f64(r).unwrap_or(f64::NAN);
    let e1 = (f1 - to_f(&first_expected)).abs();
    let e2 = (f2 - to_f(&second_expected)).abs();
    IdentityReport {
        m,
        exact_ok: first == first_expected && second == second_expected,
        float_ok: e1 <= FLOAT_TOLERANCE * f1.abs().max(1.0) && e2 <= FLOAT_TOLERANCE * f2.abs().max(1.0),
        first_exact: first.to_string(),
        first_expected: first_expected.to_string(),
        first_float_error: e1,
        second_exact: second.to_string(),
        second_expected: second_expected.to_string(),
        second_float_error: e2,
    }
}

/// Integer polynomial in x, ascending coefficients.
pub type IntPoly = Vec<BigInt>;

fn trim(mut p: IntPoly) -> IntPoly {
    while p.len() > 1 && p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

fn poly_sub(a: &IntPoly, b: &IntPoly) -> IntPoly {
    let mut out = vec![BigInt::zero(); a.len().max(b.len())];
    for (i, c) in a.iter().enumerate() {
        out[i] += c;
    }
    for (i, c) in b.iter().enumerate() {
        out[i] -= c;
    }
    trim(out)
}

fn poly_add(a: &IntPoly, b: &IntPoly) -> IntPoly {
    let mut out = vec![BigInt::zero(); a.len().max(b.len())];
    for (i, c) in a.iter().enumerate() {
        out[i] += c;
    }
    for (i, c) in b.iter().enumerate() {
        out[i] += c;
    }
    trim(out)
}

fn poly_mul(a: &IntPoly, b: &IntPoly) -> IntPoly {
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

fn poly(coeffs: &[i64]) -> IntPoly {
    trim(coeffs.iter().map(|&c| BigInt::from(c)).collect())
}

/// Chebyshev polynomials of the first kind T₀..T_n by the three-term recurrence.
pub fn chebyshev_t(n: usize) -> Vec<IntPoly> {
    let two_x = poly(&[0, 2]);
    let mut out = vec![poly(&[1]), poly(&[0, 1])];
    while out.len() <= n {
        let k = out.len();
        let next = poly_sub(&poly_mul(&two_x, &out[k - 1]), &out[k - 2]);
        out.push(next);
    }
    out.truncate(n + 1);
    out
}

/// Exact quotient by (x − 1); `None` when the remainder is nonzero.
pub fn divide_by_x_minus_one(p: &IntPoly) -> Option<IntPoly> {
    // synthetic division at x = 1
    let d = p.len() - 1;
    if d == 0 {
        return if p[0].is_zero() { Some(poly(&[0])) } else { None };
    }
    let mut q = vec![BigInt::zero(); d];
    let mut carry = BigInt::zero();
    for i in (1..=d).rev() {
        carry += &p[i];
        q[i - 1] = carry.clone();
    }
    carry += &p[0];
    if carry.is_zero() {
        Some(trim(q))
    } else {
        None
    }
}

fn eval_at_one(p: &IntPoly) -> BigInt {
    p.iter().sum()
}

fn derivative_at_one(p: &IntPoly) -> BigInt {
    p.iter().enumerate().map(|(i, c)| c * BigInt::from(i)).sum()
}

#[derive(Clone, Debug, Serialize)]
pub struct ChebyshevReport {
    pub s: u64,
    pub a_at_one: String,
    pub a_prime_at_one: String,
    pub b_at_one: String,
    pub b_prime_at_one: String,
    pub ok: bool,
}

/// a(x) = (T_{s+1} − T_s)/(x − 1) and b(x) = (T_{s+1} − T_{s−1})/(x − 1);
/// checks a(1) = 2s+1, a′(1) = s(s+1)(2s+1)/3, b(1) = 4s, b′(1) = 2s(2s²+1)/3.
pub fn chebyshev_helpers(s: u64) -> ChebyshevReport {
    assert!(s >= 1);
    let t = chebyshev_t(s as usize + 1);
    let s_us = s as usize;
    let a = divide_by_x_minus_one(&poly_sub(&t[s_us + 1], &t[s_us])).expect("T_n(1) = 1");
    let b = divide_by_x_minus_one(&poly_sub(&t[s_us + 1], &t[s_us - 1])).expect("T_n(1) = 1");
    let si = BigInt::from(s);
    let a1 = eval_at_one(&a);
    let da1 = derivative_at_one(&a);
    let b1 = eval_at_one(&b);
    let db1 = derivative_at_one(&b);
    let two = BigInt::from(2);
    let ok = a1 == &two * &si + 1
        && da1 == &si * (&si + 1) * (&two * &si + 1) / 3
        && b1 == BigInt::from(4) * &si
        && db1 == &two * &si * (&two * &si * &si + 1) / 3;
    ChebyshevReport {
        s,
        a_at_one: a1.to_string(),
        a_prime_at_one: da1.to_string(),
        b_at_one: b1.to_string(),
        b_prime_at_one: db1.to_string(),
        ok,
    }
}

/// Checks Σ_n T_n z^n · D(z) = N(z) through order `terms`, where D and N are
/// polynomials in z whose coefficients are polynomials in x.
pub fn chebyshev_gf_holds(numerator: &[IntPoly], denominator: &[IntPoly], terms: usize) -> bool {
    let t = chebyshev_t(terms);
    (0..=terms).all(|n| {
        let mut lhs = poly(&[0]);
        for (j, dj) in denominator.iter().enumerate().take(n + 1) {
            lhs = poly_add(&lhs, &poly_mul(dj, &t[n - j]));
        }
        let rhs = numerator.get(n).cloned().unwrap_or_else(|| poly(&[0]));
        trim(lhs) == trim(rhs)
    })
}

/// Numerator 1 − xz and denominator 1 + z² − 2xz of the classical identity.
pub fn classical_chebyshev_gf() -> (Vec<IntPoly>, Vec<IntPoly>) {
    (vec![poly(&[1]), poly(&[0, -1])], vec![poly(&[1]), poly(&[0, -2]), poly(&[1])])
}

/// The variant with x² in the place of z²: denominator 1 + x² − 2xz.
pub fn misprinted_chebyshev_gf() -> (Vec<IntPoly>, Vec<IntPoly>) {
    (vec![poly(&[1]), poly(&[0, -1])], vec![poly(&[1, 0, 1]), poly(&[0, -2])])
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    #[test]
    fn small_identities() {
        for m in 2..=30 {
            let r = primitive_root_identities(m);
            assert!(r.exact_ok && r.float_ok, "{r:?}");
        }
        let r3 = primitive_root_identities(3);
        assert_eq!(r3.first_exact, "1");
        let r2 = primitive_root_identities(2);
        assert_eq!(r2.second_exact, "1/4");
    }

    #[test]
    fn chebyshev_small() {
        let t = chebyshev_t(4);
        assert_eq!(t[2], poly(&[-1, 0, 2]));
        assert_eq!(t[4], poly(&[1, 0, -8, 0, 8]));
        for (n, tn) in t.iter().enumerate() {
            assert_eq!(eval_at_one(tn), BigInt::one());
            assert_eq!(derivative_at_one(tn), BigInt::from(n * n));
        }
        let r = chebyshev_helpers(1);
        assert_eq!((r.a_at_one.as_str(), r.a_prime_at_one.as_str()), ("3", "2"));
        assert!(r.ok);
    }

    #[test]
    fn generating_function_variants() {
        let (n, d) = classical_chebyshev_gf();
        assert!(chebyshev_gf_holds(&n, &d, 20));
        let (n, d) = misprinted_chebyshev_gf();
        assert!(!chebyshev_gf_holds(&n, &d, 20));
    }
}
