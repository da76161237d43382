//! Relative generating sets: sets S of rank(W) − lR(g) reflections such that
//! S together with a reduced factorization of g generates W.

use std::collections::BTreeMap;

use itertools::Itertools;
use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;
use serde::Serialize;

use crate::closed_forms::arith::{elementary_symmetric, euler_phi, factorial, gcd, rational_pow};
use crate::error::{Error, Result};
use crate::parabolic::{canonical_factorization, CaseTag, PqcClassification};
use crate::perm_group::ElemId;
use crate::realization::{GdValue, Realization};
use crate::wreath::{GroupSpec, ReflectionKind, WreathGroup};

#[derive(Clone, Debug, Serialize)]
pub struct RgsRecord {
    /// Sorted reflection indices.
    pub reflections: Vec<usize>,
    /// What determines the Grammian ratio: a loop eigenvalue, a cycle statistic, or the GD value itself.
    pub grammian_key: String,
    #[serde(skip)]
    pub gd_ratio: GdValue,
}

/// Shape of a reflection set after contracting the blocks of Π_g.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum RelativeGraph {
    Tree,
    RootedTree {
        loop_color: u32,
    },
    /// δ: gauge-adjusted color sum around the unique cycle, canonically oriented.
    Unicycle {
        delta: u32,
    },
    NoneOf,
}

/// Π_g with a color potential: inside each color-0 cycle, `potential[v]` is
/// the color accumulated from the cycle start, so W_g's own edges have
/// adjusted color 0.
#[derive(Clone, Debug)]
pub struct BlockFrame {
    pub block_of: Vec<usize>,
    pub blocks: usize,
    pub potential: Vec<u32>,
}

impl BlockFrame {
    pub fn of(w: &WreathGroup, g: ElemId) -> Self {
        let spec = w.spec();
        let x = w.element(g);
        let data = x.cycle_data(spec);
        let n = spec.n as usize;
        let mut block_of = vec![usize::MAX; n];
        let mut potential = vec![0u32; n];
        let mut blocks = 0;
        let colored: Vec<usize> = data.nonzero().flat_map(|c| c.support.iter().copied()).collect();
        let mut assign = |support: &mut dyn Iterator<Item = usize>, block_of: &mut Vec<usize>| {
            let mut any = false;
            for v in support {
                block_of[v] = blocks;
                any = true;
            }
            if any {
                blocks += 1;
            }
        };
        assign(&mut colored.iter().copied(), &mut block_of);
        for c in data.color_zero() {
            let mut acc = 0u32;
            for &v in &c.support {
                potential[v] = acc;
                acc = (acc + x.colors()[v]) % spec.m;
            }
            assign(&mut c.support.iter().copied(), &mut block_of);
        }
        // number blocks by smallest vertex
        let mut first: Vec<(usize, usize)> = Vec::new();
        for v in 0..n {
            if !first.iter().any(|&(b, _)| b == block_of[v]) {
                first.push((block_of[v], first.len()));
            }
        }
        let block_of = block_of.iter().map(|b| first.iter().find(|f| f.0 == *b).expect("seen").1).collect();
        BlockFrame { block_of, blocks, potential }
    }
}

pub fn relative_graph_classify(spec: &GroupSpec, kinds: &[ReflectionKind], frame: &BlockFrame) -> RelativeGraph {
    let m = spec.m;
    let b = frame.blocks;
    let mut uf: Vec<usize> = (0..b).collect();
    fn find(uf: &mut [usize], x: usize) -> usize {
        if uf[x] != x {
            let r = find(uf, uf[x]);
            uf[x] = r;
        }
        uf[x]
    }
    // contracted oriented edges (from, to, adjusted color)
    let mut edges: Vec<(usize, usize, u32)> = Vec::new();
    let mut loops: Vec<u32> = Vec::new();
    let mut cyclic = false;
    for kind in kinds {
        match *kind {
            ReflectionKind::Diagonal { k, .. } => loops.push(k),
            ReflectionKind::TranspositionLike { i, j, k } => {
                let adj = (k + 2 * m - frame.potential[j] + frame.potential[i]) % m;
                let (bi, bj) = (frame.block_of[i], frame.block_of[j]);
                let (ri, rj) = (find(&mut uf, bi), find(&mut uf, bj));
                if ri == rj {
                    cyclic = true;
                } else {
                    uf[ri.max(rj)] = ri.min(rj);
                }
                edges.push((bi, bj, adj));
            }
        }
    }
    let connected = (0..b).all(|x| find(&mut uf, x) == find(&mut uf, 0));
    if !connected {
        return RelativeGraph::NoneOf;
    }
    match (loops.as_slice(), edges.len()) {
        ([], e) if e + 1 == b => RelativeGraph::Tree,
        ([c], e) if e + 1 == b => RelativeGraph::RootedTree { loop_color: *c },
        ([], e) if e == b && cyclic => RelativeGraph::Unicycle { delta: cycle_delta(&edges, b, m) },
        _ => RelativeGraph::NoneOf,
    }
}

/// Color sum around the unique cycle of a connected unicyclic multigraph.
fn cycle_delta(edges: &[(usize, usize, u32)], blocks: usize, m: u32) -> u32 {
    let mut alive = vec![true; edges.len()];
    let degree = |alive: &[bool], v: usize| {
        edges
            .iter()
            .zip(alive)
            .filter(|((a, c, _), &on)| on && (*a == v || *c == v))
            .map(|((a, c, _), _)| if a == c { 2 } else { 1 })
            .sum::<usize>()
    };
    loop {
        let leaf = (0..blocks).find(|&v| degree(&alive, v) == 1);
        let Some(v) = leaf else { break };
        let e = (0..edges.len()).find(|&e| alive[e] && (edges[e].0 == v || edges[e].1 == v)).expect("leaf edge");
        alive[e] = false;
    }
    let cyc: Vec<usize> = (0..edges.len()).filter(|&e| alive[e]).collect();
    if let [e] = cyc[..] {
        return edges[e].2 % m;
    }
    let start = cyc.iter().map(|&e| edges[e].0.min(edges[e].1)).min().expect("a cycle exists");
    let other = |e: usize, v: usize| if edges[e].0 == v { edges[e].1 } else { edges[e].0 };
    // leave `start` toward its smallest cycle neighbor; parallel edges by index
    let mut e = *cyc
        .iter()
        .filter(|&&e| edges[e].0 == start || edges[e].1 == start)
        .min_by_key(|&&e| (other(e, start), e))
        .expect("start lies on the cycle");
    let mut used = vec![false; edges.len()];
    let (mut at, mut total) = (start, 0i64);
    loop {
        used[e] = true;
        let (a, _, col) = edges[e];
        total += if a == at { col as i64 } else { -(col as i64) };
        at = other(e, at);
        if at == start {
            break;
        }
        e = cyc.iter().copied().find(|&f| !used[f] && (edges[f].0 == at || edges[f].1 == at)).expect("cycle continues");
    }
    total.rem_euclid(m as i64) as u32
}

fn primitive(c: u32, m: u32) -> bool {
    gcd(c as u64, m as u64) == 1
}

/// Whether `graph` is an RGS shape for the given pqc case.
pub fn graph_admissible(spec: &GroupSpec, tag: CaseTag, graph: RelativeGraph) -> bool {
    match (tag, graph) {
        (CaseTag::WithFullCycle | CaseTag::WithColorPair, RelativeGraph::Tree) => true,
        (CaseTag::YoungOnly, RelativeGraph::Tree) => spec.m == 1,
        (CaseTag::YoungOnly, RelativeGraph::RootedTree { loop_color }) => spec.p == 1 && primitive(loop_color, spec.m),
        (CaseTag::YoungOnly, RelativeGraph::Unicycle { delta }) => {
            spec.p == spec.m && spec.m > 1 && primitive(delta, spec.m)
        }
        _ => false,
    }
}

fn graph_key(graph: RelativeGraph, m: u32) -> String {
    match graph {
        RelativeGraph::RootedTree { loop_color } => format!("xi=zeta{m}^{loop_color}"),
        RelativeGraph::Unicycle { delta } => format!("delta=±{}", delta.min(m - delta)),
        _ => "unit".to_string(),
    }
}

fn record(real: &dyn Realization, set: Vec<usize>, red: &[usize], key: Option<String>) -> RgsRecord {
    let ratio = crate::gram::gd_ratio(real, red, &set);
    let grammian_key = key.unwrap_or_else(|| ratio.key());
    RgsRecord { reflections: set, grammian_key, gd_ratio: ratio }
}

fn wreath_key(w: &WreathGroup, frame: &BlockFrame, set: &[usize]) -> String {
    let kinds: Vec<ReflectionKind> = set.iter().map(|&j| w.reflection_list()[j].kind).collect();
    graph_key(relative_graph_classify(w.spec(), &kinds, frame), w.spec().m)
}

fn candidates(real: &dyn Realization, g: ElemId) -> Result<(Vec<usize>, usize)> {
    if !real.well_generated() {
        return Err(Error::NotWellGenerated);
    }
    let group = real.group();
    let red = canonical_factorization(group, g);
    let size = real.rank().checked_sub(red.len()).ok_or(Error::NotPqc)?;
    Ok((red, size))
}

fn generates(real: &dyn Realization, set: &[usize], red: &[usize]) -> bool {
    let group = real.group();
    let all: Vec<usize> = set.iter().chain(red).copied().collect();
    let refs: Vec<usize> = (0..group.reflection_count()).collect();
    group.same_orbits(&all, &refs) && group.generates_order(&all, group.order())
}

/// Search route: every (rank − lR)-subset, tested for generation.
pub fn enumerate_rgs(real: &dyn Realization, g: ElemId) -> Result<Vec<RgsRecord>> {
    let (red, size) = candidates(real, g)?;
    let subsets: Vec<Vec<usize>> = (0..real.group().reflection_count()).combinations(size).collect();
    let found: Vec<Vec<usize>> = subsets.into_par_iter().filter(|s| generates(real, s, &red)).collect();
    let frame = real.as_wreath().map(|w| (w, BlockFrame::of(w, g)));
    Ok(found
        .into_iter()
        .map(|s| {
            let key = frame.as_ref().map(|(w, f)| wreath_key(w, f, &s));
            record(real, s, &red, key)
        })
        .collect())
}

/// Whether RGS(W, g) is nonempty, i.e. g is parabolic quasi-Coxeter.
pub fn exists(real: &dyn Realization, g: ElemId) -> Result<bool> {
    let (red, size) = match candidates(real, g) {
        Err(Error::NotPqc) => return Ok(false),
        r => r?,
    };
    let subsets: Vec<Vec<usize>> = (0..real.group().reflection_count()).combinations(size).collect();
    Ok(subsets.into_par_iter().any(|s| generates(real, &s, &red)))
}

/// Characterization route for G(m,1,n) and G(m,m,n): subsets whose relative
/// graph has the admissible shape for the case of g.
pub fn enumerate_rgs_graph(w: &WreathGroup, class: &PqcClassification, g: ElemId) -> Result<Vec<RgsRecord>> {
    if !class.case_tag.is_pqc() {
        return Err(Error::NotPqc);
    }
    let (red, size) = candidates(w, g)?;
    let frame = BlockFrame::of(w, g);
    let spec = w.spec();
    let subsets: Vec<Vec<usize>> = (0..w.group().reflection_count()).combinations(size).collect();
    let hits: Vec<(Vec<usize>, RelativeGraph)> = subsets
        .into_par_iter()
        .filter_map(|s| {
            let kinds: Vec<ReflectionKind> = s.iter().map(|&j| w.reflection_list()[j].kind).collect();
            let graph = relative_graph_classify(spec, &kinds, &frame);
            graph_admissible(spec, class.case_tag, graph).then_some((s, graph))
        })
        .collect();
    Ok(hits.into_iter().map(|(s, graph)| record(w, s, &red, Some(graph_key(graph, spec.m)))).collect())
}

/// Count from the closed formulas, by case.
pub fn count_rgs_formula(spec: &GroupSpec, class: &PqcClassification) -> Result<BigInt> {
    let (m, n) = (spec.m as u64, spec.n as u64);
    let k = class.lambda.len() as u64;
    let prod0: BigInt = class.lambda.iter().chain(class.lambda0.iter()).map(|&x| BigInt::from(x)).product();
    let int = |v: BigInt| BigRational::from_integer(v);
    let value = match class.case_tag {
        CaseTag::NotPqc | CaseTag::Pqc => return Err(Error::NotPqc),
        _ if m == 1 => rational_pow(n, k as i64 - 2) * int(prod0),
        CaseTag::WithFullCycle | CaseTag::WithColorPair => {
            rational_pow(m, k as i64) * rational_pow(n, k as i64 - 1) * int(prod0)
        }
        CaseTag::YoungOnly if spec.p == 1 => {
            int(BigInt::from(euler_phi(m))) * rational_pow(m, k as i64 - 1) * rational_pow(n, k as i64 - 1) * int(prod0)
        }
        CaseTag::YoungOnly => {
            let mut bracket =
                num_traits::pow(BigInt::from(n), k as usize) - num_traits::pow(BigInt::from(n), k as usize - 1);
            for j in 2..=k {
                bracket -= factorial(j - 2)
                    * num_traits::pow(BigInt::from(n), (k - j) as usize)
                    * elementary_symmetric(j as usize, &class.lambda);
            }
            BigRational::new(BigInt::from(euler_phi(m)), BigInt::from(2))
                * rational_pow(m, k as i64 - 1)
                * int(bracket)
                * int(prod0)
        }
    };
    if !value.is_integer() {
        return Err(Error::Unsupported("RGS formula produced a non-integer".into()));
    }
    Ok(value.to_integer())
}

/// Records grouped by key.
pub fn key_histogram(records: &[RgsRecord]) -> BTreeMap<String, usize> {
    let mut h = BTreeMap::new();
    for r in records {
        *h.entry(r.grammian_key.clone()).or_insert(0) += 1;
    }
    h
}

/// Σ_S GD(ρ_g)/GD(ρ_S ∪ ρ_g).
pub fn gd_sum(records: &[RgsRecord]) -> Option<GdValue> {
    records.iter().map(|r| r.gd_ratio.clone()).reduce(|a, b| a.add(&b))
}
