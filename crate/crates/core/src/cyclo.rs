//! Exact arithmetic in the cyclotomic field ℚ(ζ_m).
//!
//! Values are integer polynomials in ζ of degree < φ(m) over a common
//! positive denominator, always fully reduced, so equality is structural.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::closed_forms::arith::{euler_phi, mobius};

/// Φ_m together with the reductions of ζ^j for 0 ≤ j < m.
#[derive(Debug)]
pub struct CycloField {
    m: u32,
    /// Monic Φ_m, ascending coefficients, length φ(m)+1.
    phi: Vec<BigInt>,
    powers: Vec<Vec<BigInt>>,
}

fn poly_divexact(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    // den is monic
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    if rem.len() <= dd {
        return vec![BigInt::zero()];
    }
    let mut q = vec![BigInt::zero(); rem.len() - dd];
    for i in (0..q.len()).rev() {
        let c = rem[i + dd].clone();
        if !c.is_zero() {
            for (k, dk) in den.iter().enumerate() {
                rem[i + k] -= &c * dk;
            }
        }
        q[i] = c;
    }
    debug_assert!(rem.iter().all(Zero::is_zero));
    q
}

/// Cyclotomic polynomial by the divisor recursion Φ_m = (x^m − 1)/Π_{d|m, d<m} Φ_d.
pub fn cyclotomic_polynomial(m: u32) -> Vec<BigInt> {
    let mut p = vec![BigInt::zero(); m as usize + 1];
    p[0] = -BigInt::one();
    p[m as usize] = BigInt::one();
    for d in 1..m {
        if m.is_multiple_of(d) {
            p = poly_divexact(&p, &cyclotomic_polynomial(d));
        }
    }
    p
}

static FIELDS: OnceLock<Mutex<HashMap<u32, Arc<CycloField>>>> = OnceLock::new();

impl CycloField {
    pub fn get(m: u32) -> Arc<CycloField> {
        assert!(m >= 1, "conductor must be positive");
        let cache = FIELDS.get_or_init(|| Mutex::new(HashMap::new()));
        if let Some(f) = cache.lock().unwrap().get(&m) {
            return f.clone();
        }
        let field = Arc::new(CycloField::build(m));
        cache.lock().unwrap().entry(m).or_insert(field).clone()
    }

    fn build(m: u32) -> CycloField {
        let phi = cyclotomic_polynomial(m);
        let d = phi.len() - 1;
        let mut powers = Vec::with_capacity(m as usize);
        let mut cur = vec![BigInt::zero(); d];
        cur[0] = BigInt::one();
        for _ in 0..m {
            powers.push(cur.clone());
            // multiply by x and reduce
            let top = cur[d - 1].clone();
            for k in (1..d).rev() {
                cur[k] = cur[k - 1].clone();
            }
            cur[0] = BigInt::zero();
            if !top.is_zero() {
                for k in 0..d {
                    cur[k] -= &top * &phi[k];
                }
            }
        }
        CycloField { m, phi, powers }
    }

    pub fn conductor(&self) -> u32 {
        self.m
    }

    pub fn degree(&self) -> usize {
        self.phi.len() - 1
    }

    fn reduce(&self, mut p: Vec<BigInt>) -> Vec<BigInt> {
        let d = self.degree();
        for i in (d..p.len()).rev() {
            let c = std::mem::take(&mut p[i]);
            if !c.is_zero() {
                for k in 0..d {
                    p[i - d + k] -= &c * &self.phi[k];
                }
            }
        }
        p.truncate(d);
        p.resize(d, BigInt::zero());
        p
    }
}

#[derive(Clone)]
pub struct CycloNum {
    field: Arc<CycloField>,
    num: Vec<BigInt>,
    den: BigInt,
}

impl PartialEq for CycloNum {
    fn eq(&self, o: &Self) -> bool {
        self.field.m == o.field.m && self.num == o.num && self.den == o.den
    }
}
impl Eq for CycloNum {}

impl std::hash::Hash for CycloNum {
    fn hash<H: std::hash::Hasher>(&self, h: &mut H) {
        self.field.m.hash(h);
        self.num.hash(h);
        self.den.hash(h);
    }
}

impl CycloNum {
    fn make(field: Arc<CycloField>, mut num: Vec<BigInt>, mut den: BigInt) -> Self {
        if den.is_negative() {
            den = -den;
            for c in &mut num {
                *c = -std::mem::take(c);
            }
        }
        let mut g = den.clone();
        for c in &num {
            if g.is_one() {
                break;
            }
            g = g.gcd(c);
        }
        if !g.is_one() && !g.is_zero() {
            for c in &mut num {
                *c /= &g;
            }
            den /= &g;
        }
        if num.iter().all(Zero::is_zero) {
            den = BigInt::one();
        }
        CycloNum { field, num, den }
    }

    pub fn zero(field: &Arc<CycloField>) -> Self {
        CycloNum { field: field.clone(), num: vec![BigInt::zero(); field.degree()], den: BigInt::one() }
    }

    pub fn one(field: &Arc<CycloField>) -> Self {
        Self::from_int(field, 1)
    }

    pub fn from_int(field: &Arc<CycloField>, v: i64) -> Self {
        let mut num = vec![BigInt::zero(); field.degree()];
        num[0] = BigInt::from(v);
        CycloNum { field: field.clone(), num, den: BigInt::one() }
    }

    pub fn from_rational(field: &Arc<CycloField>, v: &BigRational) -> Self {
        let mut num = vec![BigInt::zero(); field.degree()];
        num[0] = v.numer().clone();
        Self::make(field.clone(), num, v.denom().clone())
    }

    /// ζ^k.
    pub fn root_of_unity(field: &Arc<CycloField>, k: i64) -> Self {
        let m = field.m as i64;
        let j = k.rem_euclid(m) as usize;
        CycloNum { field: field.clone(), num: field.powers[j].clone(), den: BigInt::one() }
    }

    pub fn field(&self) -> &Arc<CycloField> {
        &self.field
    }

    pub fn conductor(&self) -> u32 {
        self.field.m
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.den.is_one() && self.num[0].is_one() && self.num[1..].iter().all(Zero::is_zero)
    }

    fn check(&self, o: &Self) {
        assert_eq!(self.field.m, o.field.m, "mixed cyclotomic fields");
    }

    pub fn add(&self, o: &Self) -> Self {
        self.check(o);
        let num = self.num.iter().zip(&o.num).map(|(a, b)| a * &o.den + b * &self.den).collect();
        Self::make(self.field.clone(), num, &self.den * &o.den)
    }

    pub fn neg(&self) -> Self {
        CycloNum { field: self.field.clone(), num: self.num.iter().map(|c| -c).collect(), den: self.den.clone() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        self.check(o);
        let d = self.field.degree();
        let mut prod = vec![BigInt::zero(); 2 * d - 1];
        for (i, a) in self.num.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.num.iter().enumerate() {
                if !b.is_zero() {
                    prod[i + j] += a * b;
                }
            }
        }
        let num = self.field.reduce(prod);
        Self::make(self.field.clone(), num, &self.den * &o.den)
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        let num = self.num.iter().map(|c| c * r.numer()).collect();
        Self::make(self.field.clone(), num, &self.den * r.denom())
    }

    /// Multiplicative inverse by the extended Euclidean algorithm against Φ_m.
    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        type P = Vec<BigRational>;
        fn trim(p: &mut P) {
            while p.len() > 1 && p.last().is_some_and(Zero::is_zero) {
                p.pop();
            }
        }
        fn divrem(a: &P, b: &P) -> (P, P) {
            let mut r = a.clone();
            let db = b.len() - 1;
            if r.len() <= db {
                return (vec![BigRational::zero()], r);
            }
            let lead = b[db].clone();
            let mut q = vec![BigRational::zero(); r.len() - db];
            for i in (0..q.len()).rev() {
                let c = &r[i + db] / &lead;
                if !c.is_zero() {
                    for (k, bk) in b.iter().enumerate() {
                        r[i + k] -= &c * bk;
                    }
                }
                q[i] = c;
            }
            r.truncate(db.max(1));
            trim(&mut r);
            (q, r)
        }
        fn mul(a: &P, b: &P) -> P {
            let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
            for (i, x) in a.iter().enumerate() {
                for (j, y) in b.iter().enumerate() {
                    out[i + j] += x * y;
                }
            }
            out
        }
        fn sub(a: &P, b: &P) -> P {
            let n = a.len().max(b.len());
            let mut out = vec![BigRational::zero(); n];
            for (i, x) in a.iter().enumerate() {
                out[i] += x;
            }
            for (i, y) in b.iter().enumerate() {
                out[i] -= y;
            }
            trim(&mut out);
            out
        }
        let to_rat = |v: &BigInt| BigRational::new(v.clone(), self.den.clone());
        let mut r0: P = self.field.phi.iter().map(|c| BigRational::from_integer(c.clone())).collect();
        let mut r1: P = self.num.iter().map(to_rat).collect();
        trim(&mut r1);
        let mut s0: P = vec![BigRational::zero()];
        let mut s1: P = vec![BigRational::one()];
        while r1.len() > 1 {
            let (q, r) = divrem(&r0, &r1);
            let s = sub(&s0, &mul(&q, &s1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
        }
        let c = r1[0].clone();
        if c.is_zero() {
            return None;
        }
        // s1 * a ≡ c (mod Φ)
        let xs: Vec<BigRational> = s1.iter().map(|x| x / &c).collect();
        let den = xs.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let num: Vec<BigInt> = xs.iter().map(|x| x.numer() * (&den / x.denom())).collect();
        let num = self.field.reduce(num);
        Some(Self::make(self.field.clone(), num, den))
    }

    pub fn div(&self, o: &Self) -> Option<Self> {
        o.inv().map(|i| self.mul(&i))
    }

    /// Image under the Galois automorphism ζ ↦ ζ^a (gcd(a, m) = 1).
    pub fn galois(&self, a: i64) -> Self {
        let m = self.field.m as i64;
        let d = self.field.degree();
        let mut num = vec![BigInt::zero(); d];
        for (i, c) in self.num.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let j = (a * i as i64).rem_euclid(m) as usize;
            for (k, p) in self.field.powers[j].iter().enumerate() {
                if !p.is_zero() {
                    num[k] += c * p;
                }
            }
        }
        Self::make(self.field.clone(), num, self.den.clone())
    }

    /// Complex conjugation ζ ↦ ζ⁻¹.
    pub fn conj(&self) -> Self {
        self.galois(-1)
    }

    /// Field trace to ℚ, via Ramanujan sums Tr(ζ^i) = μ(q)φ(m)/φ(q), q = m/gcd(i,m).
    pub fn trace(&self) -> BigRational {
        let m = self.field.m as u64;
        let mut acc = BigInt::zero();
        for (i, c) in self.num.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let q = m / (i as u64).gcd(&m);
            let t = mobius(q) * (euler_phi(m) / euler_phi(q)) as i64;
            acc += c * t;
        }
        BigRational::new(acc, self.den.clone())
    }

    pub fn to_rational(&self) -> Option<BigRational> {
        if self.num[1..].iter().all(Zero::is_zero) {
            Some(BigRational::new(self.num[0].clone(), self.den.clone()))
        } else {
            None
        }
    }

    /// Embedding with ζ = e^{2πi/m}.
    pub fn to_complex(&self) -> (f64, f64) {
        let m = self.field.m as f64;
        let den = self.den.to_f64().unwrap_or(f64::NAN);
        let (mut re, mut im) = (0.0, 0.0);
        for (i, c) in self.num.iter().enumerate() {
            let v = c.to_f64().unwrap_or(f64::NAN) / den;
            let ang = 2.0 * std::f64::consts::PI * i as f64 / m;
            re += v * ang.cos();
            im += v * ang.sin();
        }
        (re, im)
    }

    pub fn coefficients(&self) -> Vec<BigRational> {
        self.num.iter().map(|c| BigRational::new(c.clone(), self.den.clone())).collect()
    }
}

impl fmt::Debug for CycloNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for CycloNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for (i, c) in self.num.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            terms.push(match i {
                0 => format!("{c}"),
                1 => format!("{c}*z"),
                _ => format!("{c}*z^{i}"),
            });
        }
        let body = if terms.is_empty() { "0".to_string() } else { terms.join(" + ") };
        if self.den.is_one() {
            write!(f, "{body}")
        } else {
            write!(f, "({body})/{}", self.den)
        }
    }
}
