//! Standalone closed formulas: Hurwitz numbers, full-factorization counts in
//! G(m,1,n) and G(m,m,n), reduced-factorization counts, arithmetic helpers.

pub mod arith;
pub mod identities;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::wreath::{CycleData, GroupSpec};
use arith::{elementary_symmetric, euler_phi, factorial, gcd, jordan2, multinomial, rational_pow};

/// A partition, parts weakly decreasing and positive.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Partition {
    parts: Vec<u64>,
}

impl Partition {
    pub fn new(mut parts: Vec<u64>) -> Result<Self> {
        if parts.is_empty() || parts.contains(&0) {
            return Err(Error::InvalidElement("partition parts must be positive".into()));
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Ok(Partition { parts })
    }

    pub fn parts(&self) -> &[u64] {
        &self.parts
    }

    pub fn size(&self) -> u64 {
        self.parts.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// All partitions of `n`, in reverse lexicographic order.
    pub fn all(n: u64) -> Vec<Partition> {
        fn rec(n: u64, max: u64, cur: &mut Vec<u64>, out: &mut Vec<Partition>) {
            if n == 0 {
                out.push(Partition { parts: cur.clone() });
                return;
            }
            for p in (1..=max.min(n)).rev() {
                cur.push(p);
                rec(n - p, p, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        rec(n, n, &mut Vec::new(), &mut out);
        out
    }

    pub fn elementary(&self, j: usize) -> BigInt {
        elementary_symmetric(j, &self.parts)
    }

    /// Π λ^λ/(λ−1)!.
    fn weight(&self) -> BigRational {
        self.parts.iter().fold(BigRational::one(), |acc, &l| {
            acc * BigRational::new(num_traits::pow(BigInt::from(l), l as usize), factorial(l - 1))
        })
    }
}

/// n^k − n^{k−1} − Σ_{i=2}^{k} (i−2)!·e_i(λ)·n^{k−i}.
fn genus_one_bracket(lambda: &Partition) -> BigInt {
    let n = BigInt::from(lambda.size());
    let k = lambda.len();
    let mut acc = num_traits::pow(n.clone(), k) - num_traits::pow(n.clone(), k - 1);
    for i in 2..=k {
        acc -= factorial(i as u64 - 2) * lambda.elementary(i) * num_traits::pow(n.clone(), k - i);
    }
    acc
}

/// Genus-0 or genus-1 Hurwitz number of cycle type λ.
pub fn hurwitz_number(genus: u32, lambda: &Partition) -> Result<BigRational> {
    let n = lambda.size();
    let r = lambda.len() as u64;
    match genus {
        0 => Ok(BigRational::from_integer(factorial(n + r - 2)) * rational_pow(n, r as i64 - 3) * lambda.weight()),
        1 => Ok(BigRational::from_integer(factorial(n + r))
            * lambda.weight()
            * BigRational::from_integer(genus_one_bracket(lambda))
            / BigRational::from_integer(BigInt::from(24))),
        _ => Err(Error::Unsupported(format!("genus {genus} Hurwitz numbers"))),
    }
}

/// Number of minimum-length full factorizations of an element of G(m,1,n) or
/// G(m,m,n) (m > 1), from its cycle type and cycle colors.
pub fn ffull_closed_form(spec: &GroupSpec, cycles: &CycleData) -> Result<BigRational> {
    let (m, p, n) = (spec.m as u64, spec.p as u64, spec.n as u64);
    if m == 1 || (p != 1 && p != m) {
        return Err(Error::Unsupported(format!("no closed form for {}", spec.label())));
    }
    let lambda = Partition::new(cycles.cycles.iter().map(|c| c.len() as u64).collect())?;
    let k = lambda.len() as u64;
    let h0 = hurwitz_number(0, &lambda)?;
    let int = |v: u64| BigRational::from_integer(BigInt::from(v));
    if p == 1 {
        let a = gcd(cycles.total_color as u64, m);
        if a == 1 {
            Ok(int(n * (n + k - 1)) * rational_pow(m, k as i64 - 1) * h0)
        } else {
            Ok(int(n * n * (n + k) * (n + k - 1))
                * rational_pow(m, k as i64)
                * BigRational::new(BigInt::from(euler_phi(a)), BigInt::from(2 * a))
                * h0)
        }
    } else {
        let d = cycles.cycles.iter().fold(m, |acc, c| gcd(acc, c.color as u64));
        if d == 1 {
            Ok(rational_pow(m, k as i64 - 1) * h0)
        } else {
            Ok(rational_pow(m, k as i64 + 1)
                * BigRational::new(BigInt::from(jordan2(d)), BigInt::from(d * d))
                * hurwitz_number(1, &lambda)?)
        }
    }
}

/// Type of an indecomposable factor of a parabolic quasi-Coxeter element.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum FactorKind {
    /// A λ-cycle of color 0, quasi-Coxeter in 𝔖_λ.
    Symmetric { len: usize },
    /// A λ-cycle whose color generates ℤ/m, quasi-Coxeter in G(m,1,λ).
    FullColor { len: usize },
    /// Two cycles of lengths a, b with colors ±c generating ℤ/m, quasi-Coxeter in G(m,m,a+b).
    ColorPair { m: u32, a: usize, b: usize },
    /// A Coxeter element of an irreducible real factor.
    Coxeter { coxeter_number: u64, rank: usize, order: u64 },
    /// Quasi-Coxeter without a known closed form.
    Other { rank: usize },
}

impl FactorKind {
    pub fn reflection_length(&self) -> usize {
        match *self {
            FactorKind::Symmetric { len } => len - 1,
            FactorKind::FullColor { len } => len,
            FactorKind::ColorPair { a, b, .. } => a + b,
            FactorKind::Coxeter { rank, .. } | FactorKind::Other { rank } => rank,
        }
    }

    /// Number of reduced reflection factorizations of the factor.
    pub fn fred(&self) -> Option<BigInt> {
        let pw = |b: usize, e: usize| num_traits::pow(BigInt::from(b), e);
        match *self {
            FactorKind::Symmetric { len } => Some(if len >= 2 { pw(len, len - 2) } else { BigInt::one() }),
            FactorKind::FullColor { len } => Some(pw(len, len)),
            FactorKind::ColorPair { m, a, b } => {
                let nu = a + b;
                Some(
                    BigInt::from(m as u64 * (nu as u64 - 1))
                        * multinomial(&[a as u64 - 1, b as u64 - 1])
                        * pw(a, a)
                        * pw(b, b),
                )
            }
            FactorKind::Coxeter { coxeter_number, rank, order } => {
                let v = pw(coxeter_number as usize, rank) * factorial(rank as u64);
                let (q, r) = num_integer::Integer::div_rem(&v, &BigInt::from(order));
                r.is_zero().then_some(q)
            }
            FactorKind::Other { .. } => None,
        }
    }
}

/// Fred(g) = multinomial(lR; lR(g₁),…,lR(g_r))·Π Fred(g_i).
pub fn fred_closed_form(factors: &[FactorKind]) -> Option<BigInt> {
    let lengths: Vec<u64> = factors.iter().map(|f| f.reflection_length() as u64).collect();
    let mut acc = multinomial(&lengths);
    for f in factors {
        acc *= f.fred()?;
    }
    Some(acc)
}
