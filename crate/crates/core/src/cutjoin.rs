//! Cut-and-join recursion for real groups, its relative-generating-set form,
//! and the poset of prefixes of minimum-length full identity factorizations.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Write as _;

use itertools::Itertools;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::{count_tuples, Oracle, ReflectionSubgroup};
use crate::parabolic::parabolic_closure;
use crate::perm_group::{ElemId, FiniteGroup, RefMask};
use crate::realization::Realization;

fn require_real(real: &dyn Realization) -> Result<()> {
    if real.is_real() {
        Ok(())
    } else {
        Err(Error::Unsupported(format!("{} is not a real reflection group", real.label())))
    }
}

/// W' is parabolic iff no reflection outside it has its root in the span of W''s roots.
pub fn is_parabolic(real: &dyn Realization, mask: RefMask) -> bool {
    let r = real.span_rank(mask);
    (0..real.group().reflection_count()).filter(|&t| !mask.contains(t)).all(|t| real.span_rank(mask.with(t)) > r)
}

/// Reduced factorization of h using reflections of `mask` only. In a real
/// group every reflection subgroup measures length by codim V^h, so greedy
/// descent inside the subgroup always succeeds when h lies in it.
pub fn reduced_within(group: &FiniteGroup, mask: RefMask, h: ElemId) -> Option<Vec<usize>> {
    let mut out = Vec::with_capacity(group.length(h));
    let mut cur = h;
    while cur != group.identity() {
        let l = group.length(cur);
        let j = mask.iter().find(|&j| group.length(group.mul(cur, group.reflection(j))) + 1 == l)?;
        out.push(j);
        cur = group.mul(cur, group.reflection(j));
    }
    out.reverse();
    Some(out)
}

/// RGS(W', h) for the reflection subgroup W' = `sub`: (rank W' − lR h)-sets of
/// its reflections that generate W' together with a reduced factorization of h.
pub fn rgs_within(group: &FiniteGroup, sub: &ReflectionSubgroup, h: ElemId) -> Vec<Vec<usize>> {
    let Some(red) = reduced_within(group, sub.mask, h) else {
        return Vec::new();
    };
    let Some(size) = sub.rank.checked_sub(red.len()) else {
        return Vec::new();
    };
    let pool = sub.mask.to_vec();
    pool.iter()
        .copied()
        .combinations(size)
        .filter(|s| {
            let seed: Vec<usize> = s.iter().chain(&red).copied().collect();
            group.same_orbits(&seed, &pool) && group.generates_order(&seed, sub.order)
        })
        .collect()
}

fn contains(group: &FiniteGroup, mask: RefMask, h: ElemId) -> bool {
    group.closure(mask).1.contains(h as usize)
}

fn generates_with(group: &FiniteGroup, mask: RefMask, t: usize) -> bool {
    group.closure(mask.with(t)).0 == group.all_reflections()
}

/// One (t, W') term of either sum.
#[derive(Clone, Debug, Serialize)]
pub struct CutJoinTerm {
    pub reflection: usize,
    pub subgroup: String,
    /// F^full_{W'}(gt), as a decimal string.
    pub value: String,
}

#[derive(Clone, Debug)]
pub struct CutJoin {
    pub first: BigInt,
    pub second: BigInt,
    pub first_terms: Vec<CutJoinTerm>,
    pub second_terms: Vec<CutJoinTerm>,
    /// Every W' of the first sum contains gt as a parabolic quasi-Coxeter element.
    pub first_all_pqc: bool,
}

impl CutJoin {
    pub fn total(&self) -> BigInt {
        &self.first + &self.second
    }
}

/// Which sum a pair (t, W') belongs to, if any.
#[derive(Clone, Copy, PartialEq, Eq)]
enum Side {
    First,
    Second,
}

struct Pair {
    t: usize,
    sub: usize,
    side: Side,
    gt: ElemId,
}

fn admissible_pairs(oracle: &Oracle, g: ElemId) -> Vec<Pair> {
    let real = oracle.realization();
    let group = real.group();
    let n = real.rank();
    let wg = parabolic_closure(real, g);
    let subs = oracle.lattice().subgroups();
    let mut pairs: Vec<Pair> = (0..group.reflection_count())
        .into_par_iter()
        .flat_map_iter(|t| {
            let gt = group.mul(g, group.reflection(t));
            let side = if wg.contains(t) { Side::First } else { Side::Second };
            subs.iter()
                .enumerate()
                .filter(move |(_, s)| match side {
                    Side::First => s.rank + 1 == n,
                    Side::Second => s.rank == n,
                })
                .filter(move |(_, s)| contains(group, s.mask, gt) && generates_with(group, s.mask, t))
                .filter(move |(_, s)| side == Side::Second || is_parabolic(real, s.mask))
                .map(move |(i, _)| Pair { t, sub: i, side, gt })
                .collect::<Vec<_>>()
        })
        .collect();
    pairs.sort_by_key(|p| (p.t, p.sub));
    pairs
}

/// Both sums of the recursion for a parabolic quasi-Coxeter g; their total is F^full_W(g).
pub fn cutjoin_rhs(oracle: &Oracle, g: ElemId) -> Result<CutJoin> {
    let real = oracle.realization();
    require_real(real)?;
    let group = real.group();
    let top = oracle.lattice().top();
    if rgs_within(group, oracle.lattice().get(top), g).is_empty() {
        return Err(Error::NotPqc);
    }
    let pairs = admissible_pairs(oracle, g);
    let evaluated: Vec<(Side, CutJoinTerm, bool)> = pairs
        .par_iter()
        .filter_map(|p| {
            let sub = oracle.lattice().get(p.sub);
            let pqc = !rgs_within(group, sub, p.gt).is_empty();
            if p.side == Side::Second && !pqc {
                return None;
            }
            let (_, value) = oracle.ffull_within(p.sub, p.gt)?;
            let term = CutJoinTerm { reflection: p.t, subgroup: sub.mask.to_hex(), value: value.to_string() };
            Some((p.side, term, pqc))
        })
        .collect();
    let mut out = CutJoin {
        first: BigInt::zero(),
        second: BigInt::zero(),
        first_terms: Vec::new(),
        second_terms: Vec::new(),
        first_all_pqc: true,
    };
    for (side, term, pqc) in evaluated {
        let v: BigInt = term.value.parse().expect("decimal count");
        match side {
            Side::First => {
                out.first += v;
                out.first_all_pqc &= pqc;
                out.first_terms.push(term);
            }
            Side::Second => {
                out.second += v;
                out.second_terms.push(term);
            }
        }
    }
    Ok(out)
}

/// Fred_{W'}(h)·#RGS(W', h)·I(W'_h)/I(W').
fn weighted(real: &dyn Realization, sub: &ReflectionSubgroup, h: ElemId) -> Result<BigRational> {
    let group = real.group();
    let weyl = real.weyl().ok_or_else(|| Error::Unsupported(format!("{} has no Weyl realization", real.label())))?;
    let fred = count_tuples(group, h, group.length(h), sub.mask)?;
    let rgs = BigInt::from(rgs_within(group, sub, h).len());
    let closure = real.fixing_reflections(h).intersect(sub.mask);
    Ok(BigRational::new(fred * rgs * weyl.connection_index(closure), weyl.connection_index(sub.mask)))
}

#[derive(Clone, Debug)]
pub struct RecurrenceCheck {
    pub lhs: BigRational,
    pub rhs: BigRational,
}

impl RecurrenceCheck {
    pub fn holds(&self) -> bool {
        self.lhs == self.rhs
    }
}

/// ltr·Fred·#RGS·I(W_g)/I(W) against lR·(first sum) + (second sum)/(lR + 1),
/// both sums weighted by Fred·#RGS·I-ratio inside W'.
pub fn verify_rgs_recurrence(oracle: &Oracle, g: ElemId) -> Result<RecurrenceCheck> {
    let real = oracle.realization();
    require_real(real)?;
    let group = real.group();
    let lr = group.length(g);
    let ltr = 2 * real.rank() - lr;
    let top = oracle.lattice().get(oracle.lattice().top());
    let lhs = BigRational::from_integer(BigInt::from(ltr)) * weighted(real, top, g)?;
    if lhs.is_zero() {
        return Err(Error::NotPqc);
    }
    let pairs = admissible_pairs(oracle, g);
    let terms: Vec<(Side, BigRational)> = pairs
        .par_iter()
        .map(|p| weighted(real, oracle.lattice().get(p.sub), p.gt).map(|v| (p.side, v)))
        .collect::<Result<_>>()?;
    let (mut first, mut second) = (BigRational::zero(), BigRational::zero());
    for (side, v) in terms {
        match side {
            Side::First => first += v,
            Side::Second => second += v,
        }
    }
    let rhs =
        BigRational::from_integer(BigInt::from(lr)) * first + second / BigRational::from_integer(BigInt::from(lr + 1));
    Ok(RecurrenceCheck { lhs, rhs })
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PosetNode {
    pub rank: usize,
    pub element: ElemId,
    pub subgroup: RefMask,
}

/// Pairs (t_1⋯t_i, ⟨t_1, …, t_i⟩) over all minimum-length full factorizations of the identity.
#[derive(Clone, Debug)]
pub struct PrefixPoset {
    /// Sorted by (rank, element, subgroup).
    pub nodes: Vec<PosetNode>,
    /// (lower, upper) node indices, sorted.
    pub covers: Vec<(usize, usize)>,
    pub ranks: Vec<Vec<usize>>,
    pub chain_count: BigInt,
    /// Every node is minimum-length full and parabolic quasi-Coxeter in its subgroup.
    pub lemma_holds: bool,
}

fn node_stat(real: &dyn Realization, g: ElemId, mask: RefMask) -> usize {
    2 * real.span_rank(mask) - real.group().length(g)
}

/// (element, closure of the reflections used so far).
type State = (ElemId, RefMask);

pub fn prefix_poset(oracle: &Oracle) -> Result<PrefixPoset> {
    let real = oracle.realization();
    require_real(real)?;
    let group = real.group();
    let length = 2 * real.rank();
    let start = (group.identity(), RefMask::EMPTY);
    // Forward layers: each step must raise 2·rank − lR by exactly one.
    let mut layers: Vec<BTreeSet<State>> = vec![BTreeSet::from([start])];
    let mut edges: Vec<(usize, State, State)> = Vec::new();
    let mut closure_cache: HashMap<RefMask, RefMask> = HashMap::new();
    for i in 0..length {
        let mut next = BTreeSet::new();
        for &(g, mask) in &layers[i] {
            for t in 0..group.reflection_count() {
                let seed = mask.with(t);
                let sub = *closure_cache.entry(seed).or_insert_with(|| group.closure(seed).0);
                let gt = group.mul(g, group.reflection(t));
                if node_stat(real, gt, sub) == i + 1 {
                    next.insert((gt, sub));
                    edges.push((i, (g, mask), (gt, sub)));
                }
            }
        }
        layers.push(next);
    }
    // Backward pruning to prefixes of factorizations ending at (id, W).
    let goal = (group.identity(), group.all_reflections());
    let mut alive: Vec<BTreeSet<State>> = vec![BTreeSet::new(); length + 1];
    if layers[length].contains(&goal) {
        alive[length].insert(goal);
    }
    for i in (0..length).rev() {
        for (_, a, b) in edges.iter().filter(|e| e.0 == i) {
            if alive[i + 1].contains(b) {
                alive[i].insert(*a);
            }
        }
    }
    let mut nodes: Vec<PosetNode> = alive
        .iter()
        .enumerate()
        .flat_map(|(rank, layer)| layer.iter().map(move |&(element, subgroup)| PosetNode { rank, element, subgroup }))
        .collect();
    nodes.sort();
    let index: HashMap<(usize, ElemId, RefMask), usize> =
        nodes.iter().enumerate().map(|(k, v)| ((v.rank, v.element, v.subgroup), k)).collect();
    let mut covers: Vec<(usize, usize)> = edges
        .iter()
        .filter_map(|(i, a, b)| Some((*index.get(&(*i, a.0, a.1))?, *index.get(&(i + 1, b.0, b.1))?)))
        .collect();
    covers.sort_unstable();
    covers.dedup();
    let mut ranks = vec![Vec::new(); length + 1];
    for (k, v) in nodes.iter().enumerate() {
        ranks[v.rank].push(k);
    }
    let mut paths = vec![BigInt::zero(); nodes.len()];
    if let Some(&root) = index.get(&(0, start.0, start.1)) {
        paths[root] = BigInt::one();
    }
    for &(a, b) in &covers {
        let add = paths[a].clone();
        paths[b] += add;
    }
    let chain_count = index.get(&(length, goal.0, goal.1)).map_or_else(BigInt::zero, |&k| paths[k].clone());
    let lemma_holds = nodes.iter().all(|v| node_satisfies_lemma(oracle, v));
    Ok(PrefixPoset { nodes, covers, ranks, chain_count, lemma_holds })
}

fn node_satisfies_lemma(oracle: &Oracle, v: &PosetNode) -> bool {
    let real = oracle.realization();
    let Some(s) = oracle.lattice().index_of(v.subgroup) else {
        return false;
    };
    let sub = oracle.lattice().get(s);
    node_stat(real, v.element, v.subgroup) == v.rank
        && oracle.ffull_within(s, v.element).is_some_and(|(l, _)| l == v.rank)
        && !rgs_within(real.group(), sub, v.element).is_empty()
}

impl PrefixPoset {
    /// DOT graph; one same-rank cluster per rank, nodes labeled "element-id / subgroup-mask".
    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph prefix_poset {\n  rankdir=BT;\n");
        for (r, members) in self.ranks.iter().enumerate() {
            let _ = writeln!(s, "  subgraph cluster_rank{r} {{\n    rank=same;\n    label=\"{r}\";");
            for &k in members {
                let v = &self.nodes[k];
                let _ = writeln!(s, "    n{k} [label=\"{} / {}\"];", v.element, v.subgroup.to_hex());
            }
            s.push_str("  }\n");
        }
        for &(a, b) in &self.covers {
            let _ = writeln!(s, "  n{a} -> n{b};");
        }
        s.push_str("}\n");
        s
    }

    /// Node count per rank.
    pub fn rank_sizes(&self) -> BTreeMap<usize, usize> {
        self.ranks.iter().enumerate().map(|(r, v)| (r, v.len())).collect()
    }

    /// Elements appearing at `rank`, with any subgroup.
    pub fn elements_at(&self, rank: usize) -> BTreeSet<ElemId> {
        self.ranks[rank].iter().map(|&k| self.nodes[k].element).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::real_group::OrbitGroup;
    use crate::wreath::{GroupSpec, WreathGroup};

    fn classes(real: &dyn Realization) -> Vec<ElemId> {
        real.group().conjugacy_classes().into_iter().map(|c| c[0]).collect()
    }

    #[test]
    fn b2_identity_second_sum() {
        let b2 = OrbitGroup::preset("B2").unwrap();
        let oracle = Oracle::new(&b2).unwrap();
        let cj = cutjoin_rhs(&oracle, b2.group().identity()).unwrap();
        assert!(cj.first.is_zero());
        assert_eq!(cj.second, BigInt::from(48));
        assert_eq!(cj.second_terms.len(), 4);
        assert!(cj.second_terms.iter().all(|t| t.value == "12"));
    }

    #[test]
    fn recursion_matches_oracle() {
        for name in ["A2", "B2", "A3"] {
            let w = OrbitGroup::preset(name).unwrap();
            let oracle = Oracle::new(&w).unwrap();
            for g in classes(&w) {
                let Ok(cj) = cutjoin_rhs(&oracle, g) else { continue };
                let (_, f) = oracle.ffull(g).unwrap();
                assert_eq!(cj.total(), f, "{name} {}", w.element_text(g));
                assert!(cj.first_all_pqc);
                assert!(verify_rgs_recurrence(&oracle, g).unwrap().holds());
            }
        }
    }

    #[test]
    fn symmetric_identity() {
        let s3 = WreathGroup::new(GroupSpec::new(1, 1, 3).unwrap()).unwrap();
        let oracle = Oracle::new(&s3).unwrap();
        assert_eq!(cutjoin_rhs(&oracle, s3.group().identity()).unwrap().total(), BigInt::from(24));
    }

    #[test]
    fn b2_poset() {
        let b2 = OrbitGroup::preset("B2").unwrap();
        let oracle = Oracle::new(&b2).unwrap();
        let p = prefix_poset(&oracle).unwrap();
        assert_eq!(p.chain_count, BigInt::from(48));
        assert!(p.lemma_holds);
        let mid = p.elements_at(2);
        let group = b2.group();
        let simple = b2.simple_system(group.all_reflections());
        let c = group.product(&simple);
        assert!(mid.contains(&c) && mid.contains(&group.inv(c)));
        assert!(mid.iter().any(|&x| b2.fixed_space_dim(x) == 0 && group.element_order(x) == 2));
        assert!(p.to_dot().starts_with("digraph"));
    }

    #[test]
    fn trivial_poset() {
        let t = WreathGroup::new(GroupSpec::new(1, 1, 1).unwrap()).unwrap();
        let oracle = Oracle::new(&t).unwrap();
        let p = prefix_poset(&oracle).unwrap();
        assert_eq!(p.nodes.len(), 1);
        assert_eq!(p.chain_count, BigInt::one());
    }
}
