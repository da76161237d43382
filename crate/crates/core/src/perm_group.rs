//! Finite groups given concretely as permutation groups together with a
//! distinguished, ordered list of reflections.
//!
//! Every realization in this crate (wreath model, root-orbit model) lowers to
//! a [`FiniteGroup`]; all combinatorial algorithms work on element ids.

use std::collections::{HashMap, VecDeque};

use crate::error::{Error, Result};

/// Index of an element; the identity is always `0`.
pub type ElemId = u32;

/// Bitset over the canonical reflection list of an ambient group.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RefMask(pub u128);

/// Largest supported number of reflections.
pub const MAX_REFLECTIONS: usize = 128;

impl RefMask {
    pub const EMPTY: RefMask = RefMask(0);

    pub fn single(i: usize) -> Self {
        RefMask(1u128 << i)
    }

    pub fn full(count: usize) -> Self {
        if count == 128 {
            RefMask(u128::MAX)
        } else {
            RefMask((1u128 << count) - 1)
        }
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(it: I) -> Self {
        it.into_iter().fold(RefMask::EMPTY, |m, i| m.with(i))
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 >> i & 1 == 1
    }

    pub fn with(self, i: usize) -> Self {
        RefMask(self.0 | 1u128 << i)
    }

    pub fn union(self, o: Self) -> Self {
        RefMask(self.0 | o.0)
    }

    pub fn intersect(self, o: Self) -> Self {
        RefMask(self.0 & o.0)
    }

    pub fn is_subset(self, o: Self) -> bool {
        self.0 & !o.0 == 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn count(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let i = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(i)
            }
        })
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }

    pub fn to_hex(self) -> String {
        format!("{:x}", self.0)
    }

    pub fn from_hex(s: &str) -> Option<Self> {
        u128::from_str_radix(s, 16).ok().map(RefMask)
    }
}

/// Dense bitset over element ids.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BitSet {
    words: Vec<u64>,
    len: usize,
}

impl BitSet {
    pub fn new(len: usize) -> Self {
        BitSet { words: vec![0; len.div_ceil(64)], len }
    }

    #[inline]
    pub fn contains(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    /// Returns true when `i` was newly inserted.
    #[inline]
    pub fn insert(&mut self, i: usize) -> bool {
        let w = &mut self.words[i / 64];
        let bit = 1u64 << (i % 64);
        let fresh = *w & bit == 0;
        *w |= bit;
        fresh
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn capacity(&self) -> usize {
        self.len
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut bits = w;
            std::iter::from_fn(move || {
                if bits == 0 {
                    None
                } else {
                    let b = bits.trailing_zeros() as usize;
                    bits &= bits - 1;
                    Some(wi * 64 + b)
                }
            })
        })
    }
}

/// A finite permutation group with an ordered reflection list.
///
/// Composition applies the right factor first: `(xy)(p) = x(y(p))`.
#[derive(Debug)]
pub struct FiniteGroup {
    degree: usize,
    perms: Vec<u16>,
    index: HashMap<Box<[u16]>, ElemId>,
    inverse: Vec<ElemId>,
    reflections: Vec<ElemId>,
    /// `reflection_index[e]` is the position of `e` in `reflections`, or `u16::MAX`.
    reflection_index: Vec<u16>,
    /// `right[e * r + j] = e * reflections[j]`.
    right: Vec<ElemId>,
    length: Vec<u8>,
}

impl FiniteGroup {
    /// Closes `generators` under composition (breadth first, so ids are
    /// deterministic) and registers `reflections`, which must lie in the group.
    pub fn generate(degree: usize, generators: &[Vec<u16>], reflections: &[Vec<u16>], ceiling: usize) -> Result<Self> {
        if reflections.len() > MAX_REFLECTIONS {
            return Err(Error::Budget { what: "reflection count", limit: MAX_REFLECTIONS });
        }
        let identity: Vec<u16> = (0..degree as u16).collect();
        let mut perms: Vec<u16> = identity.clone();
        let mut index: HashMap<Box<[u16]>, ElemId> = HashMap::new();
        index.insert(identity.into_boxed_slice(), 0);
        let mut queue = VecDeque::from([0usize]);
        let mut scratch = vec![0u16; degree];
        while let Some(e) = queue.pop_front() {
            for g in generators {
                for p in 0..degree {
                    scratch[p] = perms[e * degree + g[p] as usize];
                }
                if !index.contains_key(scratch.as_slice()) {
                    let id = index.len();
                    if id >= ceiling {
                        return Err(Error::Budget { what: "group order", limit: ceiling });
                    }
                    index.insert(scratch.clone().into_boxed_slice(), id as ElemId);
                    perms.extend_from_slice(&scratch);
                    queue.push_back(id);
                }
            }
        }
        let order = index.len();
        let mut group = FiniteGroup {
            degree,
            perms,
            index,
            inverse: Vec::new(),
            reflections: Vec::new(),
            reflection_index: vec![u16::MAX; order],
            right: Vec::new(),
            length: Vec::new(),
        };
        group.inverse = (0..order as ElemId)
            .map(|e| {
                let p = group.perm(e);
                let mut inv = vec![0u16; degree];
                for (i, &x) in p.iter().enumerate() {
                    inv[x as usize] = i as u16;
                }
                group.lookup(&inv).expect("group closed under inverses")
            })
            .collect();
        for (j, r) in reflections.iter().enumerate() {
            let id =
                group.lookup(r).ok_or_else(|| Error::InvalidElement("reflection outside generated group".into()))?;
            group.reflections.push(id);
            group.reflection_index[id as usize] = j as u16;
        }
        let nr = group.reflections.len();
        let mut right = vec![0 as ElemId; order * nr];
        for e in 0..order as ElemId {
            for j in 0..nr {
                right[e as usize * nr + j] = group.mul(e, group.reflections[j]);
            }
        }
        group.right = right;
        group.length = group.bfs_lengths(RefMask::full(nr));
        Ok(group)
    }

    fn bfs_lengths(&self, mask: RefMask) -> Vec<u8> {
        let mut dist = vec![u8::MAX; self.order()];
        dist[0] = 0;
        let gens = mask.to_vec();
        let mut queue = VecDeque::from([0 as ElemId]);
        while let Some(e) = queue.pop_front() {
            let d = dist[e as usize];
            for &j in &gens {
                let f = self.right_mul(e, j);
                if dist[f as usize] == u8::MAX {
                    dist[f as usize] = d + 1;
                    queue.push_back(f);
                }
            }
        }
        dist
    }

    /// Reflection-length table of the subgroup generated by `mask`
    /// (`u8::MAX` outside the subgroup).
    pub fn lengths_within(&self, mask: RefMask) -> Vec<u8> {
        if mask == self.all_reflections() {
            self.length.clone()
        } else {
            self.bfs_lengths(mask)
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> usize {
        self.inverse.len().max(self.index.len())
    }

    pub fn identity(&self) -> ElemId {
        0
    }

    pub fn perm(&self, e: ElemId) -> &[u16] {
        let s = e as usize * self.degree;
        &self.perms[s..s + self.degree]
    }

    pub fn lookup(&self, perm: &[u16]) -> Option<ElemId> {
        self.index.get(perm).copied()
    }

    pub fn mul(&self, a: ElemId, b: ElemId) -> ElemId {
        let pa = self.perm(a);
        let pb = self.perm(b);
        let prod: Vec<u16> = pb.iter().map(|&x| pa[x as usize]).collect();
        self.lookup(&prod).expect("group closed under products")
    }

    pub fn inv(&self, a: ElemId) -> ElemId {
        self.inverse[a as usize]
    }

    /// `u a u⁻¹`.
    pub fn conjugate(&self, a: ElemId, u: ElemId) -> ElemId {
        self.mul(self.mul(u, a), self.inv(u))
    }

    pub fn element_order(&self, a: ElemId) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn reflections(&self) -> &[ElemId] {
        &self.reflections
    }

    pub fn reflection_count(&self) -> usize {
        self.reflections.len()
    }

    pub fn all_reflections(&self) -> RefMask {
        RefMask::full(self.reflections.len())
    }

    pub fn reflection(&self, j: usize) -> ElemId {
        self.reflections[j]
    }

    pub fn reflection_index(&self, e: ElemId) -> Option<usize> {
        match self.reflection_index[e as usize] {
            u16::MAX => None,
            j => Some(j as usize),
        }
    }

    #[inline]
    pub fn right_mul(&self, e: ElemId, j: usize) -> ElemId {
        self.right[e as usize * self.reflections.len() + j]
    }

    /// Reflection length in the whole group.
    pub fn length(&self, e: ElemId) -> usize {
        self.length[e as usize] as usize
    }

    /// Product `t₁ t₂ ⋯ t_k` of a reflection tuple.
    pub fn product(&self, tuple: &[usize]) -> ElemId {
        tuple.iter().fold(0, |e, &j| self.right_mul(e, j))
    }

    /// Index of the reflection `t_j t_i t_j⁻¹`.
    pub fn conjugate_reflection(&self, i: usize, j: usize) -> usize {
        let e = self.conjugate(self.reflections[i], self.reflections[j]);
        self.reflection_index(e).expect("conjugate of a reflection is a reflection")
    }

    /// Elements and reflection set of the subgroup generated by `seed`.
    pub fn closure(&self, seed: RefMask) -> (RefMask, BitSet) {
        let gens = seed.to_vec();
        let mut seen = BitSet::new(self.order());
        seen.insert(0);
        let mut stack = vec![0 as ElemId];
        while let Some(e) = stack.pop() {
            for &j in &gens {
                let f = self.right_mul(e, j);
                if seen.insert(f as usize) {
                    stack.push(f);
                }
            }
        }
        let mask = RefMask::from_indices(
            self.reflections.iter().enumerate().filter(|(_, &r)| seen.contains(r as usize)).map(|(j, _)| j),
        );
        (mask, seen)
    }

    /// Whether `seed` generates the subgroup with `target_order` elements
    /// containing it. Stops as soon as more than half of it is reached.
    pub fn generates_order(&self, seed: &[usize], target_order: usize) -> bool {
        let mut seen = BitSet::new(self.order());
        seen.insert(0);
        let mut count = 1usize;
        let mut stack = vec![0 as ElemId];
        while let Some(e) = stack.pop() {
            for &j in seed {
                let f = self.right_mul(e, j);
                if seen.insert(f as usize) {
                    count += 1;
                    if 2 * count > target_order {
                        return true;
                    }
                    stack.push(f);
                }
            }
        }
        count == target_order
    }

    /// Necessary condition for generating the whole group: the generated
    /// permutation group has the same point orbits.
    pub fn same_orbits(&self, seed: &[usize], target: &[usize]) -> bool {
        let parts = |gens: &[usize]| {
            let mut uf: Vec<usize> = (0..self.degree).collect();
            fn find(uf: &mut [usize], x: usize) -> usize {
                let mut r = x;
                while uf[r] != r {
                    r = uf[r];
                }
                let mut y = x;
                while uf[y] != r {
                    let nxt = uf[y];
                    uf[y] = r;
                    y = nxt;
                }
                r
            }
            for &j in gens {
                let p = self.perm(self.reflections[j]);
                for (a, &b) in p.iter().enumerate() {
                    let (ra, rb) = (find(&mut uf, a), find(&mut uf, b as usize));
                    if ra != rb {
                        uf[ra.max(rb)] = ra.min(rb);
                    }
                }
            }
            (0..self.degree).map(|x| find(&mut uf, x)).collect::<Vec<_>>()
        };
        parts(seed) == parts(target)
    }

    /// Conjugacy classes, each sorted, listed by smallest member.
    pub fn conjugacy_classes(&self) -> Vec<Vec<ElemId>> {
        let order = self.order();
        let mut class_of = vec![usize::MAX; order];
        let mut classes = Vec::new();
        for start in 0..order {
            if class_of[start] != usize::MAX {
                continue;
            }
            let c = classes.len();
            let mut members = vec![start as ElemId];
            class_of[start] = c;
            let mut i = 0;
            while i < members.len() {
                let x = members[i];
                for &r in &self.reflections {
                    let y = self.conjugate(x, r);
                    if class_of[y as usize] == usize::MAX {
                        class_of[y as usize] = c;
                        members.push(y);
                    }
                }
                i += 1;
            }
            members.sort_unstable();
            classes.push(members);
        }
        classes
    }

    /// Stable fingerprint of the reflection multiplication table.
    pub fn table_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(self.right.len() * 4 + 16);
        out.extend_from_slice(&(self.degree as u64).to_le_bytes());
        out.extend_from_slice(&(self.order() as u64).to_le_bytes());
        for &r in &self.reflections {
            for &x in self.perm(r) {
                out.extend_from_slice(&x.to_le_bytes());
            }
        }
        for &x in &self.right {
            out.extend_from_slice(&x.to_le_bytes());
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s3() -> FiniteGroup {
        let t12 = vec![1, 0, 2];
        let t23 = vec![0, 2, 1];
        let t13 = vec![2, 1, 0];
        FiniteGroup::generate(3, &[t12.clone(), t23.clone()], &[t12, t13, t23], 100).unwrap()
    }

    #[test]
    fn s3_basics() {
        let g = s3();
        assert_eq!(g.order(), 6);
        assert_eq!(g.reflection_count(), 3);
        let c = g.product(&[0, 2]);
        assert_eq!(g.length(c), 2);
        assert_eq!(g.element_order(c), 3);
        assert_eq!(g.conjugacy_classes().len(), 3);
        for e in 0..6 {
            assert_eq!(g.mul(e, g.inv(e)), 0);
        }
    }

    #[test]
    fn closure_and_generation() {
        let g = s3();
        let (mask, elems) = g.closure(RefMask::from_indices([0, 2]));
        assert_eq!(mask, g.all_reflections());
        assert_eq!(elems.count(), 6);
        let (m1, e1) = g.closure(RefMask::single(1));
        assert_eq!(m1, RefMask::single(1));
        assert_eq!(e1.count(), 2);
        assert!(g.generates_order(&[0, 1], 6));
        assert!(!g.generates_order(&[1], 6));
    }

    #[test]
    fn mask_ops() {
        let m = RefMask::from_indices([0, 5, 70]);
        assert_eq!(m.to_vec(), vec![0, 5, 70]);
        assert_eq!(RefMask::from_hex(&m.to_hex()), Some(m));
        assert!(RefMask::single(5).is_subset(m));
        assert_eq!(RefMask::full(128).count(), 128);
    }
}
