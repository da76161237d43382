//! Reflection subgroups of a small ambient group, Möbius inversion on their
//! containment lattice, and the resulting brute-force counts of full
//! reflection factorizations.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};
use std::path::PathBuf;
use std::sync::{Arc, Mutex};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::linalg::solve_exact;
use crate::perm_group::{ElemId, FiniteGroup, RefMask};
use crate::realization::Realization;

pub const DEFAULT_LATTICE_CEILING: usize = 1200;
pub const SUBGROUP_BUDGET: usize = 50_000;
pub const CACHE_ENV: &str = "WHURWITZ_CACHE_DIR";
const CACHE_VERSION: u32 = 1;

/// A reflection subgroup, identified by its (closed) reflection set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReflectionSubgroup {
    pub mask: RefMask,
    pub order: usize,
    /// Dimension of the span of its roots.
    pub rank: usize,
}

#[derive(Clone, Debug)]
pub struct Lattice {
    subgroups: Vec<ReflectionSubgroup>,
    /// Upward covers, as indices.
    covers: Vec<Vec<usize>>,
    mobius: Vec<i64>,
    index: HashMap<RefMask, usize>,
}

#[derive(Serialize, Deserialize)]
struct CacheRecord {
    version: u32,
    key: String,
    subgroups: Vec<CachedSubgroup>,
}

#[derive(Serialize, Deserialize)]
struct CachedSubgroup {
    mask: String,
    order: usize,
    rank: usize,
    mobius: i64,
    covers: Vec<usize>,
}

impl Lattice {
    /// All reflection subgroups, sorted by (order, mask). The whole group is last.
    pub fn enumerate(real: &dyn Realization, ceiling: usize) -> Result<Self> {
        let group = real.group();
        if group.order() > ceiling {
            return Err(Error::Budget { what: "lattice ambient order", limit: ceiling });
        }
        let nr = group.reflection_count();
        // (mask, order, generators) in discovery order
        let mut found: Vec<(RefMask, usize, RefMask)> = vec![(RefMask::EMPTY, 1, RefMask::EMPTY)];
        let mut index: HashMap<RefMask, usize> = HashMap::from([(RefMask::EMPTY, 0)]);
        let mut ext: Vec<Vec<usize>> = Vec::new();
        let mut i = 0;
        while i < found.len() {
            let (mask, _, gens) = found[i];
            let mut up = Vec::new();
            for t in (0..nr).filter(|&t| !mask.contains(t)) {
                let seed = gens.with(t);
                let (closed, elems) = group.closure(seed);
                let id = match index.get(&closed) {
                    Some(&id) => id,
                    None => {
                        if found.len() >= SUBGROUP_BUDGET {
                            return Err(Error::Budget { what: "reflection subgroup count", limit: SUBGROUP_BUDGET });
                        }
                        index.insert(closed, found.len());
                        found.push((closed, elems.count(), seed));
                        found.len() - 1
                    }
                };
                up.push(id);
            }
            ext.push(up);
            i += 1;
        }

        let mut order: Vec<usize> = (0..found.len()).collect();
        order.sort_by_key(|&k| (found[k].1, found[k].0 .0));
        let mut rename = vec![0; found.len()];
        for (new, &old) in order.iter().enumerate() {
            rename[old] = new;
        }
        let subgroups: Vec<ReflectionSubgroup> = order
            .iter()
            .map(|&k| ReflectionSubgroup { mask: found[k].0, order: found[k].1, rank: real.span_rank(found[k].0) })
            .collect();
        let covers: Vec<Vec<usize>> = order
            .iter()
            .map(|&k| {
                let mut ups: Vec<usize> = ext[k].iter().map(|&e| rename[e]).collect();
                ups.sort_unstable();
                ups.dedup();
                let minimal: Vec<usize> = ups
                    .iter()
                    .copied()
                    .filter(|&a| !ups.iter().any(|&b| b != a && subgroups[b].mask.is_subset(subgroups[a].mask)))
                    .collect();
                minimal
            })
            .collect();
        let index = subgroups.iter().enumerate().map(|(i, s)| (s.mask, i)).collect();
        let mut lattice = Lattice { subgroups, covers, mobius: Vec::new(), index };
        lattice.mobius = lattice.mobius_interval(lattice.top());
        Ok(lattice)
    }

    /// Like [`Lattice::enumerate`], reading and writing a JSON cache keyed by
    /// a hash of the group's reflection multiplication table.
    pub fn cached(real: &dyn Realization, ceiling: usize) -> Result<Self> {
        if real.group().order() > ceiling {
            return Err(Error::Budget { what: "lattice ambient order", limit: ceiling });
        }
        let key = cache_key(real);
        let dir = cache_dir();
        let path = dir.join(format!("lattice-{key}.json"));
        if let Some(l) = std::fs::read(&path).ok().and_then(|bytes| Self::from_record(&bytes, &key)) {
            return Ok(l);
        }
        let lattice = Self::enumerate(real, ceiling)?;
        // A failed write only costs a recomputation next time.
        let _ = lattice.write_record(&dir, &path, &key);
        Ok(lattice)
    }

    fn from_record(bytes: &[u8], key: &str) -> Option<Self> {
        let rec: CacheRecord = serde_json::from_slice(bytes).ok()?;
        if rec.version != CACHE_VERSION || rec.key != key {
            return None;
        }
        let mut subgroups = Vec::with_capacity(rec.subgroups.len());
        let mut covers = Vec::with_capacity(rec.subgroups.len());
        let mut mobius = Vec::with_capacity(rec.subgroups.len());
        for s in rec.subgroups {
            subgroups.push(ReflectionSubgroup { mask: RefMask::from_hex(&s.mask)?, order: s.order, rank: s.rank });
            covers.push(s.covers);
            mobius.push(s.mobius);
        }
        let index = subgroups.iter().enumerate().map(|(i, s)| (s.mask, i)).collect();
        Some(Lattice { subgroups, covers, mobius, index })
    }

    fn write_record(&self, dir: &std::path::Path, path: &std::path::Path, key: &str) -> Result<()> {
        std::fs::create_dir_all(dir)?;
        let rec = CacheRecord {
            version: CACHE_VERSION,
            key: key.to_string(),
            subgroups: self
                .subgroups
                .iter()
                .zip(&self.covers)
                .zip(&self.mobius)
                .map(|((s, c), &mu)| CachedSubgroup {
                    mask: s.mask.to_hex(),
                    order: s.order,
                    rank: s.rank,
                    mobius: mu,
                    covers: c.clone(),
                })
                .collect(),
        };
        let tmp = tempfile::NamedTempFile::new_in(dir)?;
        serde_json::to_writer(&tmp, &rec)?;
        tmp.persist(path).map_err(|e| Error::Io(e.error))?;
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.subgroups.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subgroups.is_empty()
    }

    pub fn subgroups(&self) -> &[ReflectionSubgroup] {
        &self.subgroups
    }

    pub fn get(&self, i: usize) -> &ReflectionSubgroup {
        &self.subgroups[i]
    }

    pub fn index_of(&self, mask: RefMask) -> Option<usize> {
        self.index.get(&mask).copied()
    }

    pub fn top(&self) -> usize {
        self.subgroups.len() - 1
    }

    pub fn covers(&self, i: usize) -> &[usize] {
        &self.covers[i]
    }

    pub fn mobius_to_top(&self, i: usize) -> i64 {
        self.mobius[i]
    }

    /// μ(H, top) for every H (zero when H ⊄ top).
    pub fn mobius_interval(&self, top: usize) -> Vec<i64> {
        let tm = self.subgroups[top].mask;
        let mut mu = vec![0i64; self.subgroups.len()];
        mu[top] = 1;
        for i in (0..top).rev() {
            let m = self.subgroups[i].mask;
            if !m.is_subset(tm) {
                continue;
            }
            mu[i] = -(i + 1..=top)
                .filter(|&j| mu[j] != 0 && m.is_subset(self.subgroups[j].mask))
                .map(|j| mu[j])
                .sum::<i64>();
        }
        mu
    }
}

fn cache_dir() -> PathBuf {
    std::env::var_os(CACHE_ENV).map(PathBuf::from).unwrap_or_else(|| std::env::temp_dir().join("whurwitz-cache"))
}

fn cache_key(real: &dyn Realization) -> String {
    let mut h = Sha256::new();
    h.update(real.label().as_bytes());
    h.update([0u8]);
    h.update(real.group().table_bytes());
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

trait Tally: Clone {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_nil(&self) -> bool;
    /// `false` on overflow.
    fn try_add(&mut self, o: &Self) -> bool;
    fn to_big(&self) -> BigInt;
}

impl Tally for u128 {
    fn zero() -> Self {
        0
    }
    fn one() -> Self {
        1
    }
    fn is_nil(&self) -> bool {
        *self == 0
    }
    fn try_add(&mut self, o: &Self) -> bool {
        match self.checked_add(*o) {
            Some(v) => {
                *self = v;
                true
            }
            None => false,
        }
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
}

impl Tally for BigUint {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_nil(&self) -> bool {
        Zero::is_zero(self)
    }
    fn try_add(&mut self, o: &Self) -> bool {
        *self += o;
        true
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(self.clone())
    }
}

/// `layers[ℓ][e]` = number of ℓ-tuples from `refls` with product e.
fn walk_layers<T: Tally>(group: &FiniteGroup, refls: &[usize], max_len: usize) -> Option<Vec<Vec<T>>> {
    let order = group.order();
    let mut cur = vec![T::zero(); order];
    cur[0] = T::one();
    let mut layers = Vec::with_capacity(max_len + 1);
    for _ in 0..max_len {
        let mut next = vec![T::zero(); order];
        for (e, c) in cur.iter().enumerate().filter(|(_, c)| !c.is_nil()) {
            for &j in refls {
                if !next[group.right_mul(e as ElemId, j) as usize].try_add(c) {
                    return None;
                }
            }
        }
        layers.push(std::mem::replace(&mut cur, next));
    }
    layers.push(cur);
    Some(layers)
}

fn walks(group: &FiniteGroup, mask: RefMask, max_len: usize) -> Vec<Vec<BigInt>> {
    fn big<T: Tally>(layers: Vec<Vec<T>>) -> Vec<Vec<BigInt>> {
        layers.iter().map(|row| row.iter().map(Tally::to_big).collect()).collect()
    }
    let refls = mask.to_vec();
    match walk_layers::<u128>(group, &refls, max_len) {
        Some(l) => big(l),
        None => big(walk_layers::<BigUint>(group, &refls, max_len).expect("unbounded integers never overflow")),
    }
}

/// Number of ℓ-tuples of reflections of the subgroup `mask` with product `g`.
pub fn count_tuples(group: &FiniteGroup, g: ElemId, len: usize, mask: RefMask) -> Result<BigInt> {
    let (_, elems) = group.closure(mask);
    if !elems.contains(g as usize) {
        return Err(Error::NotInSubgroup);
    }
    Ok(walks(group, mask, len)[len][g as usize].clone())
}

/// Counts of generating tuples for one top subgroup, all elements at once.
#[derive(Debug)]
pub struct FullTable {
    pub top: usize,
    pub max_len: usize,
    /// `counts[ℓ][e]`: ℓ-tuples of reflections of the top subgroup generating it with product e.
    pub counts: Vec<Vec<BigInt>>,
    /// Reflection length inside the top subgroup (`u8::MAX` outside).
    pub lengths: Vec<u8>,
}

impl FullTable {
    pub fn get(&self, g: ElemId, len: usize) -> &BigInt {
        &self.counts[len][g as usize]
    }
}

/// Brute-force oracle for full factorization counts over a lattice.
pub struct Oracle<'a> {
    real: &'a dyn Realization,
    lattice: Lattice,
    tables: Mutex<HashMap<usize, Arc<FullTable>>>,
}

impl<'a> Oracle<'a> {
    pub fn new(real: &'a dyn Realization) -> Result<Self> {
        Self::with_ceiling(real, DEFAULT_LATTICE_CEILING)
    }

    pub fn with_ceiling(real: &'a dyn Realization, ceiling: usize) -> Result<Self> {
        Ok(Oracle { real, lattice: Lattice::cached(real, ceiling)?, tables: Mutex::new(HashMap::new()) })
    }

    pub fn realization(&self) -> &'a dyn Realization {
        self.real
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    /// Longest length any ltr search needs inside `top`.
    fn default_len(&self, top: usize) -> usize {
        let s = &self.lattice.subgroups[top];
        3 * s.rank + 2
    }

    /// Generating-tuple counts for subgroup `top`, for lengths ≤ `max_len`.
    pub fn full_table(&self, top: usize, max_len: usize) -> Arc<FullTable> {
        if let Some(t) = self.tables.lock().expect("table cache").get(&top) {
            if t.max_len >= max_len {
                return t.clone();
            }
        }
        let group = self.real.group();
        let mu = self.lattice.mobius_interval(top);
        let mut counts = vec![vec![BigInt::zero(); group.order()]; max_len + 1];
        for (h, &m) in mu.iter().enumerate().filter(|(_, &m)| m != 0) {
            let w = walks(group, self.lattice.subgroups[h].mask, max_len);
            let m = BigInt::from(m);
            for (row, wrow) in counts.iter_mut().zip(&w) {
                for (c, x) in row.iter_mut().zip(wrow).filter(|(_, x)| !x.is_zero()) {
                    *c += &m * x;
                }
            }
        }
        let table = Arc::new(FullTable {
            top,
            max_len,
            counts,
            lengths: group.lengths_within(self.lattice.subgroups[top].mask),
        });
        self.tables.lock().expect("table cache").insert(top, table.clone());
        table
    }

    /// Full factorizations of g of length ℓ in the ambient group.
    pub fn count_full(&self, g: ElemId, len: usize) -> BigInt {
        let top = self.lattice.top();
        let need = len.max(self.default_len(top));
        self.full_table(top, need).get(g, len).clone()
    }

    /// Tuples of length ℓ with product g, generation not required.
    pub fn count_all(&self, g: ElemId, len: usize) -> BigInt {
        walks(self.real.group(), self.real.group().all_reflections(), len)[len][g as usize].clone()
    }

    pub fn series(&self, g: ElemId, max_len: usize) -> Vec<BigInt> {
        let t = self.full_table(self.lattice.top(), max_len.max(self.default_len(self.lattice.top())));
        (0..=max_len).map(|l| t.get(g, l).clone()).collect()
    }

    /// (ltr(g), F^full(g)) inside subgroup `top`; `None` if g ∉ top.
    pub fn ffull_within(&self, top: usize, g: ElemId) -> Option<(usize, BigInt)> {
        let table = self.full_table(top, self.default_len(top));
        let lr = table.lengths[g as usize];
        if lr == u8::MAX {
            return None;
        }
        (lr as usize..=table.max_len).find_map(|l| {
            let c = table.get(g, l);
            c.is_positive().then(|| (l, c.clone()))
        })
    }

    /// (ltr(g), F^full(g)) in the ambient group.
    pub fn ffull(&self, g: ElemId) -> Option<(usize, BigInt)> {
        self.ffull_within(self.lattice.top(), g)
    }

    pub fn phi_polynomial(&self, g: ElemId) -> Result<PhiPolynomial> {
        let n_refl = self.real.group().reflection_count();
        let series = self.series(g, 2 * n_refl);
        phi_from_series(&series, self.real.group().order(), n_refl)
    }
}

/// Φ with P(X) = Σ κ_i X^{i+N} = Φ(X)·(X−1)^{ltr}, where the counts are
/// a_ℓ = (1/#W)·Σ_{i=−N}^{N} κ_i·i^ℓ and N is the number of reflections.
#[derive(Clone, Debug, PartialEq)]
pub struct PhiPolynomial {
    /// Ascending coefficients.
    pub coefficients: Vec<BigRational>,
    pub ltr: usize,
}

impl PhiPolynomial {
    pub fn degree(&self) -> usize {
        self.coefficients.len().saturating_sub(1)
    }

    pub fn is_monic(&self) -> bool {
        self.coefficients.last().is_some_and(One::is_one)
    }

    pub fn value_at_one(&self) -> BigRational {
        self.coefficients.iter().fold(BigRational::zero(), |s, c| s + c)
    }

    pub fn is_nonnegative(&self) -> bool {
        self.coefficients.iter().all(|c| !c.is_negative())
    }
}

/// Recovers Φ from `series[ℓ]` for ℓ = 0..=2N.
pub fn phi_from_series(series: &[BigInt], order: usize, n_refl: usize) -> Result<PhiPolynomial> {
    let size = 2 * n_refl + 1;
    if series.len() < size {
        return Err(Error::SeriesTooShort);
    }
    let ltr = series.iter().position(|a| !a.is_zero()).ok_or(Error::SeriesTooShort)?;
    let rows: Vec<Vec<BigRational>> = (0..size)
        .map(|l| {
            (0..size)
                .map(|i| {
                    let base = BigInt::from(i as i64 - n_refl as i64);
                    BigRational::from_integer(num_traits::pow(base, l))
                })
                .collect()
        })
        .collect();
    let rhs: Vec<BigRational> =
        series[..size].iter().map(|a| BigRational::from_integer(a * BigInt::from(order))).collect();
    let mut p = solve_exact(&rows, &rhs).ok_or(Error::SeriesTooShort)?;
    for _ in 0..ltr {
        // synthetic division by X − 1
        let top = p.len() - 1;
        let mut q = vec![BigRational::zero(); top];
        let mut carry = BigRational::zero();
        for k in (0..top).rev() {
            carry = &carry + &p[k + 1];
            q[k] = carry.clone();
        }
        if !(&carry + &p[0]).is_zero() {
            return Err(Error::Unsupported("series is not divisible by (X − 1)^ltr".into()));
        }
        p = q;
    }
    while p.len() > 1 && p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    Ok(PhiPolynomial { coefficients: p, ltr })
}

/// Closure of a reflection tuple under the Hurwitz moves
/// σ: (a, b) ↦ (b, b⁻¹ab) and σ⁻¹: (a, b) ↦ (aba⁻¹, a).
pub fn hurwitz_orbit(group: &FiniteGroup, tuple: &[usize], budget: usize) -> Result<BTreeSet<Vec<usize>>> {
    let refl = |e: ElemId| group.reflection_index(e).expect("conjugates of reflections are reflections");
    let mut seen: HashSet<Vec<usize>> = HashSet::from([tuple.to_vec()]);
    let mut queue = VecDeque::from([tuple.to_vec()]);
    while let Some(t) = queue.pop_front() {
        for i in 0..t.len().saturating_sub(1) {
            let (a, b) = (group.reflection(t[i]), group.reflection(t[i + 1]));
            let mut fwd = t.clone();
            fwd[i] = t[i + 1];
            fwd[i + 1] = refl(group.conjugate(a, group.inv(b)));
            let mut back = t.clone();
            back[i] = refl(group.conjugate(b, a));
            back[i + 1] = t[i];
            for next in [fwd, back] {
                if seen.insert(next.clone()) {
                    if seen.len() > budget {
                        return Err(Error::Budget { what: "Hurwitz orbit size", limit: budget });
                    }
                    queue.push_back(next);
                }
            }
        }
    }
    Ok(seen.into_iter().collect())
}

/// All reduced (length lR(g)) reflection factorizations of g.
pub fn reduced_factorizations(group: &FiniteGroup, g: ElemId) -> Vec<Vec<usize>> {
    let target = group.length(g);
    let mut out = Vec::new();
    let mut prefix = Vec::with_capacity(target);
    fn rec(group: &FiniteGroup, e: ElemId, g: ElemId, left: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if left == 0 {
            if e == g {
                out.push(prefix.clone());
            }
            return;
        }
        // remaining part e⁻¹g must have length exactly `left`
        for j in 0..group.reflection_count() {
            let f = group.right_mul(e, j);
            if group.length(group.mul(group.inv(f), g)) + 1 == left {
                prefix.push(j);
                rec(group, f, g, left - 1, prefix, out);
                prefix.pop();
            }
        }
    }
    rec(group, 0, g, target, &mut prefix, &mut out);
    out
}
