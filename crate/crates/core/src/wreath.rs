//! The groups G(m,p,n): elements [u; a], reflections, cycle data, projections,
//! and the lowering to a permutation group on the n·m points (k, c) ≅ ζ^c e_k.
//!
//! Internally permutations are 0-indexed; the text form is 1-indexed.
//! [u; a] sends e_k ↦ ζ^{a_k} e_{u(k)}, so [u;a]·[v;b] = [uv; (a_{v(k)} + b_k)_k].

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::closed_forms::arith::{factorial, gcd};
use crate::cyclo::{CycloField, CycloNum};
use crate::error::{Error, Result};
use crate::linalg::exact_rank;
use crate::perm_group::{ElemId, FiniteGroup, RefMask};
use crate::realization::{GramMatrix, Realization, WeylData};

/// Element-count ceiling for building the permutation model.
pub const DEFAULT_GROUP_CEILING: usize = 200_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GroupSpec {
    pub m: u32,
    pub p: u32,
    pub n: u32,
}

impl GroupSpec {
    pub fn new(m: u32, p: u32, n: u32) -> Result<Self> {
        if m == 0 || p == 0 || n == 0 {
            return Err(Error::InvalidSpec("m, p, n must be positive".into()));
        }
        if !m.is_multiple_of(p) {
            return Err(Error::InvalidSpec(format!("p = {p} does not divide m = {m}")));
        }
        Ok(GroupSpec { m, p, n })
    }

    pub fn well_generated(&self) -> bool {
        self.p == 1 || self.p == self.m
    }

    pub fn rank(&self) -> usize {
        if self.m == 1 {
            self.n as usize - 1
        } else {
            self.n as usize
        }
    }

    pub fn order(&self) -> BigInt {
        num_traits::pow(BigInt::from(self.m), self.n as usize) * factorial(self.n as u64) / BigInt::from(self.p)
    }

    pub fn label(&self) -> String {
        format!("G({},{},{})", self.m, self.p, self.n)
    }

    fn check(&self, x: &WreathElement) -> Result<()> {
        if x.perm.len() != self.n as usize {
            return Err(Error::Dimension { expected: self.n as usize, got: x.perm.len() });
        }
        Ok(())
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// [u; a] with `perm[k] = u(k)` (0-indexed) and colors reduced mod m.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WreathElement {
    perm: Vec<usize>,
    colors: Vec<u32>,
}

/// JSON text form: 1-indexed images and integer colors.
#[derive(Serialize, Deserialize)]
struct ElementText {
    perm: Vec<usize>,
    colors: Vec<i64>,
}

impl WreathElement {
    pub fn identity(n: usize) -> Self {
        WreathElement { perm: (0..n).collect(), colors: vec![0; n] }
    }

    /// From 0-indexed images and arbitrary integer colors.
    pub fn new(perm: Vec<usize>, colors: &[i64], spec: &GroupSpec) -> Result<Self> {
        let n = spec.n as usize;
        if perm.len() != n {
            return Err(Error::Dimension { expected: n, got: perm.len() });
        }
        if colors.len() != n {
            return Err(Error::Dimension { expected: n, got: colors.len() });
        }
        let mut seen = vec![false; n];
        for &x in &perm {
            if x >= n || std::mem::replace(&mut seen[x], true) {
                return Err(Error::InvalidElement("perm is not a bijection".into()));
            }
        }
        let m = spec.m as i64;
        let colors: Vec<u32> = colors.iter().map(|c| c.rem_euclid(m) as u32).collect();
        let x = WreathElement { perm, colors };
        if !x.weight(spec).is_multiple_of(spec.p) {
            return Err(Error::InvalidElement(format!(
                "color sum {} is not divisible by p = {}",
                x.weight(spec),
                spec.p
            )));
        }
        Ok(x)
    }

    pub fn parse(text: &str, spec: &GroupSpec) -> Result<Self> {
        let t: ElementText = serde_json::from_str(text)?;
        if t.perm.contains(&0) {
            return Err(Error::InvalidElement("perm images are 1-indexed".into()));
        }
        Self::new(t.perm.iter().map(|&x| x - 1).collect(), &t.colors, spec)
    }

    pub fn to_text(&self) -> String {
        serde_json::to_string(&ElementText {
            perm: self.perm.iter().map(|&x| x + 1).collect(),
            colors: self.colors.iter().map(|&c| c as i64).collect(),
        })
        .expect("plain data serializes")
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    pub fn colors(&self) -> &[u32] {
        &self.colors
    }

    pub fn n(&self) -> usize {
        self.perm.len()
    }

    /// wt = Σ a_k mod m.
    pub fn weight(&self, spec: &GroupSpec) -> u32 {
        (self.colors.iter().map(|&c| c as u64).sum::<u64>() % spec.m as u64) as u32
    }

    pub fn is_identity(&self) -> bool {
        self.perm.iter().enumerate().all(|(i, &x)| i == x) && self.colors.iter().all(|&c| c == 0)
    }

    /// Permutation of the points k·m + c.
    pub fn to_points(&self, m: u32) -> Vec<u16> {
        let m = m as usize;
        let mut out = vec![0u16; self.n() * m];
        for k in 0..self.n() {
            for c in 0..m {
                out[k * m + c] = (self.perm[k] * m + (c + self.colors[k] as usize) % m) as u16;
            }
        }
        out
    }

    pub fn from_points(points: &[u16], m: u32) -> Self {
        let m = m as usize;
        let n = points.len() / m;
        let perm = (0..n).map(|k| points[k * m] as usize / m).collect();
        let colors = (0..n).map(|k| (points[k * m] as usize % m) as u32).collect();
        WreathElement { perm, colors }
    }
}

/// [u;a]·[v;b] = [uv; v(a) + b].
pub fn multiply(x: &WreathElement, y: &WreathElement, spec: &GroupSpec) -> Result<WreathElement> {
    spec.check(x)?;
    spec.check(y)?;
    let n = x.n();
    let perm = (0..n).map(|k| x.perm[y.perm[k]]).collect();
    let colors = (0..n).map(|k| (x.colors[y.perm[k]] + y.colors[k]) % spec.m).collect();
    Ok(WreathElement { perm, colors })
}

pub fn inverse(x: &WreathElement, spec: &GroupSpec) -> WreathElement {
    let n = x.n();
    let mut perm = vec![0; n];
    for (k, &u) in x.perm.iter().enumerate() {
        perm[u] = k;
    }
    let colors = (0..n).map(|k| (spec.m - x.colors[perm[k]]) % spec.m).collect();
    WreathElement { perm, colors }
}

/// A permutation cycle with its color.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Cycle {
    /// Support in cycle order starting from its smallest point (0-indexed).
    pub support: Vec<usize>,
    pub color: u32,
}

impl Cycle {
    pub fn len(&self) -> usize {
        self.support.len()
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CycleData {
    /// Ordered by smallest support point.
    pub cycles: Vec<Cycle>,
    pub total_color: u32,
}

impl CycleData {
    pub fn color_zero(&self) -> impl Iterator<Item = &Cycle> {
        self.cycles.iter().filter(|c| c.color == 0)
    }

    pub fn nonzero(&self) -> impl Iterator<Item = &Cycle> {
        self.cycles.iter().filter(|c| c.color != 0)
    }
}

pub fn cycle_data(x: &WreathElement, spec: &GroupSpec) -> CycleData {
    let n = x.n();
    let mut seen = vec![false; n];
    let mut cycles = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut support = Vec::new();
        let mut color = 0u32;
        let mut k = start;
        while !seen[k] {
            seen[k] = true;
            support.push(k);
            color = (color + x.colors[k]) % spec.m;
            k = x.perm[k];
        }
        cycles.push(Cycle { support, color });
    }
    CycleData { cycles, total_color: x.weight(spec) }
}

impl WreathElement {
    pub fn cycle_data(&self, spec: &GroupSpec) -> CycleData {
        cycle_data(self, spec)
    }
}

/// π: G(m,p,n) → G(r,1,n), colors mapped a ↦ a mod r.
///
/// G(r,1,n) is identified with the subgroup of G(m,1,n) with colors in
/// (m/r)ℤ/mℤ via a ↦ (m/r)·a, so this is the reduction of colors modulo r.
pub fn project(x: &WreathElement, spec: &GroupSpec, r: u32) -> Result<(WreathElement, GroupSpec)> {
    if r == 0 || !spec.m.is_multiple_of(r) {
        return Err(Error::NotDivisor { r, m: spec.m });
    }
    let target = GroupSpec::new(r, 1, spec.n)?;
    Ok((WreathElement { perm: x.perm.clone(), colors: x.colors.iter().map(|&c| c % r).collect() }, target))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum ReflectionKind {
    /// [(ij); k] with i < j: e_i ↦ ζ^k e_j, e_j ↦ ζ^{−k} e_i.
    TranspositionLike { i: usize, j: usize, k: u32 },
    /// [id; k e_i]: e_i ↦ ζ^k e_i, with p | k and k ≠ 0.
    Diagonal { i: usize, k: u32 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Reflection {
    pub kind: ReflectionKind,
    pub index: usize,
}

impl Reflection {
    pub fn element(&self, spec: &GroupSpec) -> WreathElement {
        let n = spec.n as usize;
        let mut x = WreathElement::identity(n);
        match self.kind {
            ReflectionKind::TranspositionLike { i, j, k } => {
                x.perm.swap(i, j);
                x.colors[i] = k;
                x.colors[j] = (spec.m - k) % spec.m;
            }
            ReflectionKind::Diagonal { i, k } => x.colors[i] = k,
        }
        x
    }

    /// Multiplicative order: 2, or m/gcd(k, m) for a diagonal reflection.
    pub fn order(&self, spec: &GroupSpec) -> u32 {
        match self.kind {
            ReflectionKind::TranspositionLike { .. } => 2,
            ReflectionKind::Diagonal { k, .. } => spec.m / gcd(k as u64, spec.m as u64) as u32,
        }
    }
}

/// Canonical order: transposition-like by (i, j, k), then diagonal by (i, k).
pub fn reflections_of(spec: &GroupSpec) -> Vec<Reflection> {
    let n = spec.n as usize;
    let mut kinds = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in 0..spec.m {
                kinds.push(ReflectionKind::TranspositionLike { i, j, k });
            }
        }
    }
    for i in 0..n {
        for k in (spec.p..spec.m).step_by(spec.p as usize) {
            kinds.push(ReflectionKind::Diagonal { i, k });
        }
    }
    kinds.into_iter().enumerate().map(|(index, kind)| Reflection { kind, index }).collect()
}

/// G(m,p,n) realized as a permutation group, with the canonical roots
/// ρ = ρ̌ = e_i − ζ^k e_j for [(ij);k] and ρ = e_i, ρ̌ = (1 − ζ^{−k}) e_i for
/// [id; k e_i], so that ⟨ρ, ρ̌⟩ = 1 − ξ under ⟨u, v⟩ = Σ u_l·conj(v_l).
#[derive(Debug)]
pub struct WreathGroup {
    spec: GroupSpec,
    reflections: Vec<Reflection>,
    group: FiniteGroup,
    field: Arc<CycloField>,
    roots: Vec<Vec<CycloNum>>,
    coroots: Vec<Vec<CycloNum>>,
    weyl: Option<WeylData>,
}

pub fn hermitian(u: &[CycloNum], v: &[CycloNum]) -> CycloNum {
    let mut acc = CycloNum::zero(u[0].field());
    for (a, b) in u.iter().zip(v) {
        if !a.is_zero() && !b.is_zero() {
            acc = acc.add(&a.mul(&b.conj()));
        }
    }
    acc
}

impl WreathGroup {
    pub fn new(spec: GroupSpec) -> Result<Self> {
        Self::with_ceiling(spec, DEFAULT_GROUP_CEILING)
    }

    pub fn with_ceiling(spec: GroupSpec, ceiling: usize) -> Result<Self> {
        if spec.n as u64 * spec.m as u64 > u16::MAX as u64 {
            return Err(Error::Budget { what: "point count", limit: u16::MAX as usize });
        }
        let reflections = reflections_of(&spec);
        let perms: Vec<Vec<u16>> = reflections.iter().map(|r| r.element(&spec).to_points(spec.m)).collect();
        let degree = spec.n as usize * spec.m as usize;
        let group = FiniteGroup::generate(degree, &perms, &perms, ceiling)?;
        let field = CycloField::get(spec.m);
        let n = spec.n as usize;
        let zero = CycloNum::zero(&field);
        let one = CycloNum::one(&field);
        let mut roots = Vec::with_capacity(reflections.len());
        let mut coroots = Vec::with_capacity(reflections.len());
        for r in &reflections {
            let mut v = vec![zero.clone(); n];
            match r.kind {
                ReflectionKind::TranspositionLike { i, j, k } => {
                    v[i] = one.clone();
                    v[j] = CycloNum::root_of_unity(&field, k as i64).neg();
                    coroots.push(v.clone());
                }
                ReflectionKind::Diagonal { i, k } => {
                    v[i] = one.clone();
                    let mut c = vec![zero.clone(); n];
                    c[i] = one.sub(&CycloNum::root_of_unity(&field, -(k as i64)));
                    coroots.push(c);
                }
            }
            roots.push(v);
        }
        let weyl = (spec.m <= 2).then(|| {
            let int_roots: Vec<Vec<i64>> = roots
                .iter()
                .map(|v| {
                    v.iter()
                        .map(|x| x.to_rational().expect("rational root").to_integer().try_into().expect("small"))
                        .collect()
                })
                .collect();
            let dot = |a: &[i64], b: &[i64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<i64>();
            let pair_roots = int_roots.clone();
            WeylData::new(int_roots, move |i, j| {
                2 * dot(&pair_roots[i], &pair_roots[j]) / dot(&pair_roots[j], &pair_roots[j])
            })
        });
        Ok(WreathGroup { spec, reflections, group, field, roots, coroots, weyl })
    }

    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    pub fn reflection_list(&self) -> &[Reflection] {
        &self.reflections
    }

    pub fn element(&self, g: ElemId) -> WreathElement {
        WreathElement::from_points(self.group.perm(g), self.spec.m)
    }

    pub fn id_of(&self, x: &WreathElement) -> Result<ElemId> {
        self.spec.check(x)?;
        self.group.lookup(&x.to_points(self.spec.m)).ok_or(Error::NotInSubgroup)
    }

    pub fn root(&self, j: usize) -> &[CycloNum] {
        &self.roots[j]
    }

    pub fn coroot(&self, j: usize) -> &[CycloNum] {
        &self.coroots[j]
    }

    /// Gram matrix of explicit root/coroot pairs.
    pub fn gram_of(pairs: &[(Vec<CycloNum>, Vec<CycloNum>)]) -> Vec<Vec<CycloNum>> {
        pairs.iter().map(|(r, _)| pairs.iter().map(|(_, c)| hermitian(r, c)).collect()).collect()
    }

    /// The matrix of g acting on coordinate vectors.
    pub fn apply(&self, g: ElemId, v: &[CycloNum]) -> Vec<CycloNum> {
        let x = self.element(g);
        let mut out = vec![CycloNum::zero(&self.field); v.len()];
        for k in 0..v.len() {
            out[x.perm[k]] = v[k].mul(&CycloNum::root_of_unity(&self.field, x.colors[k] as i64));
        }
        out
    }

    /// Reflections fixing V^g pointwise, read off the cycles of g: everything
    /// supported on the nonzero-color cycles, plus within each color-0 cycle
    /// the [(ij);k] whose k is the color accumulated along the cycle from i to j.
    pub fn combinatorial_closure(&self, x: &WreathElement) -> RefMask {
        let data = x.cycle_data(&self.spec);
        let n = self.spec.n as usize;
        let mut moved = vec![false; n];
        // offset[l] = color accumulated from the cycle start to l
        let mut cycle_of = vec![usize::MAX; n];
        let mut offset = vec![0u32; n];
        for (ci, c) in data.cycles.iter().enumerate() {
            let mut acc = 0u32;
            for &l in &c.support {
                cycle_of[l] = ci;
                offset[l] = acc;
                acc = (acc + x.colors[l]) % self.spec.m;
                if c.color != 0 {
                    moved[l] = true;
                }
            }
        }
        RefMask::from_indices(self.reflections.iter().filter_map(|r| {
            let inside = match r.kind {
                ReflectionKind::Diagonal { i, .. } => moved[i],
                ReflectionKind::TranspositionLike { i, j, k } => {
                    (moved[i] && moved[j])
                        || (cycle_of[i] == cycle_of[j]
                            && data.cycles[cycle_of[i]].color == 0
                            && (offset[j] + self.spec.m - offset[i]) % self.spec.m == k)
                }
            };
            inside.then_some(r.index)
        }))
    }

    /// Same set from linear algebra: ρ_t ∈ im(g − I) = (V^g)^⊥.
    pub fn linear_closure(&self, g: ElemId) -> RefMask {
        let n = self.spec.n as usize;
        let zero = CycloNum::zero(&self.field);
        let one = CycloNum::one(&self.field);
        let cols: Vec<Vec<CycloNum>> = (0..n)
            .map(|k| {
                let mut e = vec![zero.clone(); n];
                e[k] = one.clone();
                let mut ge = self.apply(g, &e);
                ge[k] = ge[k].sub(&one);
                ge
            })
            .collect();
        let base = exact_rank(&cols);
        RefMask::from_indices((0..self.reflections.len()).filter(|&j| {
            let mut rows = cols.clone();
            rows.push(self.roots[j].clone());
            exact_rank(&rows) == base
        }))
    }
}

impl Realization for WreathGroup {
    fn group(&self) -> &FiniteGroup {
        &self.group
    }

    fn label(&self) -> String {
        self.spec.label()
    }

    fn rank(&self) -> usize {
        self.spec.rank()
    }

    fn is_real(&self) -> bool {
        self.spec.m <= 2 || (self.spec.n == 2 && self.spec.p == self.spec.m)
    }

    fn well_generated(&self) -> bool {
        self.spec.well_generated()
    }

    fn field(&self) -> Arc<CycloField> {
        self.field.clone()
    }

    fn codim_fixed(&self, g: ElemId) -> usize {
        let data = self.element(g).cycle_data(&self.spec);
        self.spec.n as usize - data.color_zero().count()
    }

    fn fixing_reflections(&self, g: ElemId) -> RefMask {
        self.combinatorial_closure(&self.element(g))
    }

    fn span_rank(&self, mask: RefMask) -> usize {
        let rows: Vec<Vec<CycloNum>> = mask.iter().map(|j| self.roots[j].clone()).collect();
        if rows.is_empty() {
            0
        } else {
            exact_rank(&rows)
        }
    }

    fn gram(&self, refls: &[usize]) -> GramMatrix {
        GramMatrix::Exact(
            refls
                .iter()
                .map(|&a| refls.iter().map(|&b| hermitian(&self.roots[a], &self.coroots[b])).collect())
                .collect(),
        )
    }

    fn weyl(&self) -> Option<&WeylData> {
        self.weyl.as_ref()
    }

    fn weyl_root_image(&self, g: ElemId, j: usize) -> Option<(i64, usize)> {
        let weyl = self.weyl.as_ref()?;
        let x = self.element(g);
        let root = weyl.root(j);
        let mut out = vec![0i64; root.len()];
        for k in 0..root.len() {
            let sign = if x.colors[k] == 0 { 1 } else { -1 };
            out[x.perm[k]] = sign * root[k];
        }
        weyl.signed_index(&out)
    }

    fn element_text(&self, g: ElemId) -> String {
        self.element(g).to_text()
    }

    fn parse_element(&self, text: &str) -> Result<ElemId> {
        self.id_of(&WreathElement::parse(text, &self.spec)?)
    }

    fn as_wreath(&self) -> Option<&WreathGroup> {
        Some(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(m: u32, p: u32, n: u32) -> GroupSpec {
        GroupSpec::new(m, p, n).unwrap()
    }

    fn el(perm1: &[usize], colors: &[i64], s: &GroupSpec) -> WreathElement {
        WreathElement::new(perm1.iter().map(|x| x - 1).collect(), colors, s).unwrap()
    }

    #[test]
    fn products() {
        let s = spec(3, 1, 2);
        let x = el(&[2, 1], &[1, 0], &s);
        let y = el(&[1, 2], &[2, 0], &s);
        assert_eq!(multiply(&x, &y, &s).unwrap(), el(&[2, 1], &[0, 0], &s));
        let s2 = spec(2, 1, 2);
        let a = el(&[2, 1], &[0, 0], &s2);
        let b = el(&[2, 1], &[1, -1], &s2);
        assert_eq!(multiply(&a, &b, &s2).unwrap(), el(&[1, 2], &[1, 1], &s2));
        let z = inverse(&x, &s);
        assert!(multiply(&z, &x, &s).unwrap().is_identity());
        assert!(multiply(&x, &z, &s).unwrap().is_identity());
        assert!(matches!(multiply(&x, &WreathElement::identity(3), &s), Err(Error::Dimension { expected: 2, got: 3 })));
    }

    #[test]
    fn point_action_matches_product() {
        let s = spec(4, 2, 3);
        let g = WreathGroup::new(s).unwrap();
        assert_eq!(BigInt::from(g.group().order()), s.order());
        for a in (0..g.group().order() as ElemId).step_by(7) {
            for b in (0..g.group().order() as ElemId).step_by(11) {
                let prod = multiply(&g.element(a), &g.element(b), &s).unwrap();
                assert_eq!(g.id_of(&prod).unwrap(), g.group().mul(a, b));
            }
        }
    }

    #[test]
    fn reflection_counts() {
        assert_eq!(reflections_of(&spec(2, 1, 2)).len(), 4);
        let r = reflections_of(&spec(3, 3, 3));
        assert_eq!(r.len(), 9);
        assert!(r.iter().all(|x| matches!(x.kind, ReflectionKind::TranspositionLike { .. })));
        assert_eq!(reflections_of(&spec(1, 1, 3)).len(), 3);
        assert_eq!(reflections_of(&spec(6, 2, 2)).len(), 6 + 2 * 2);
    }

    #[test]
    fn cycles_and_projection() {
        let s = spec(3, 1, 3);
        let d = el(&[2, 3, 1], &[1, 0, 2], &s).cycle_data(&s);
        assert_eq!(d.cycles.len(), 1);
        assert_eq!((d.cycles[0].len(), d.cycles[0].color), (3, 0));
        let s2 = spec(2, 1, 2);
        let d2 = el(&[2, 1], &[1, 0], &s2).cycle_data(&s2);
        assert_eq!((d2.cycles.len(), d2.cycles[0].color, d2.total_color), (1, 1, 1));
        let s3 = spec(3, 1, 2);
        let x = el(&[2, 1], &[1, 2], &s3);
        let (px, t) = project(&x, &s3, 1).unwrap();
        assert_eq!(t, spec(1, 1, 2));
        assert_eq!(px, el(&[2, 1], &[0, 0], &t));
        assert_eq!(project(&x, &s3, 3).unwrap().0, x);
        assert!(matches!(project(&x, &s3, 2), Err(Error::NotDivisor { r: 2, m: 3 })));
    }

    #[test]
    fn text_round_trip() {
        let s = spec(4, 4, 3);
        let x = el(&[3, 1, 2], &[1, 5, 2], &s);
        assert_eq!(x.colors(), &[1, 1, 2]);
        assert_eq!(x.to_text(), r#"{"perm":[3,1,2],"colors":[1,1,2]}"#);
        assert_eq!(WreathElement::parse(&x.to_text(), &s).unwrap(), x);
        assert!(WreathElement::parse(r#"{"perm":[1,1,2],"colors":[0,0,0]}"#, &s).is_err());
        assert!(WreathElement::parse(r#"{"perm":[1,2,3],"colors":[1,0,0]}"#, &s).is_err());
    }

    #[test]
    fn closures_agree_with_linear_algebra() {
        for (m, p, n) in [(1, 1, 3), (2, 1, 3), (3, 1, 2), (3, 3, 3), (4, 2, 2), (2, 2, 3)] {
            let g = WreathGroup::new(spec(m, p, n)).unwrap();
            for e in 0..g.group().order() as ElemId {
                assert_eq!(g.fixing_reflections(e), g.linear_closure(e), "{m},{p},{n} element {e}");
            }
        }
    }

    #[test]
    fn pairings_and_eigenvalues() {
        let s = spec(3, 1, 2);
        let g = WreathGroup::new(s).unwrap();
        let f = CycloField::get(3);
        for r in g.reflection_list() {
            let pair = hermitian(g.root(r.index), g.coroot(r.index));
            let x = r.element(&s);
            // ρ is the non-unit eigenvector: g ρ = ξ ρ with ⟨ρ,ρ̌⟩ = 1 − ξ
            let xi = CycloNum::one(&f).sub(&pair);
            let gr = g.apply(g.id_of(&x).unwrap(), g.root(r.index));
            let expect: Vec<CycloNum> = g.root(r.index).iter().map(|c| c.mul(&xi)).collect();
            assert_eq!(gr, expect);
            let mut pw = WreathElement::identity(2);
            for _ in 0..r.order(&s) {
                pw = multiply(&pw, &x, &s).unwrap();
            }
            assert!(pw.is_identity());
        }
    }
}
