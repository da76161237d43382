//! Parabolic closures, parabolic quasi-Coxeter (pqc) detection, generalized
//! cycle decompositions, and the two reflection lengths.

use num_bigint::BigInt;
use serde::Serialize;

use crate::closed_forms::FactorKind;
use crate::error::{Error, Result};
use crate::lattice::Oracle;
use crate::perm_group::{ElemId, FiniteGroup, RefMask};
use crate::realization::{moved_space_det, Realization};
use crate::rgs;
use crate::wreath::{WreathElement, WreathGroup};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, PartialOrd, Ord)]
pub enum CaseTag {
    /// All cycles have color 0; W_g is a Young subgroup.
    YoungOnly,
    /// G(m,1,n): one cycle of primitive color on top of color-0 cycles.
    WithFullCycle,
    /// G(m,m,n): two cycles of opposite primitive colors on top of color-0 cycles.
    WithColorPair,
    /// pqc in a real orbit group (decided by search).
    Pqc,
    NotPqc,
}

impl CaseTag {
    pub fn is_pqc(self) -> bool {
        self != CaseTag::NotPqc
    }

    pub fn label(self) -> &'static str {
        match self {
            CaseTag::YoungOnly => "young",
            CaseTag::WithFullCycle => "full-cycle",
            CaseTag::WithColorPair => "color-pair",
            CaseTag::Pqc => "pqc",
            CaseTag::NotPqc => "not-pqc",
        }
    }
}

/// One indecomposable factor g_i of g.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GeneralizedCycle {
    /// Coordinates (wreath groups) or reflection indices (orbit groups).
    pub support: Vec<usize>,
    pub element: ElemId,
    pub kind: FactorKind,
}

#[derive(Clone, Debug, Serialize)]
pub struct PqcClassification {
    pub case_tag: CaseTag,
    /// Size of the distinguished block carrying the nonzero colors.
    pub lambda0: Option<u64>,
    /// Lengths of the color-0 cycles (wreath groups), descending.
    pub lambda: Vec<u64>,
    pub generalized_cycles: Vec<GeneralizedCycle>,
    /// |det(g − I) on (V^g)^⊥| = I(W_g), where integral root data exists.
    pub weyl_criterion: Option<bool>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct LengthRecord {
    pub lr: usize,
    pub ltr: usize,
    pub rank_closure: usize,
}

/// Reflections of the parabolic closure W_g: those fixing V^g pointwise.
pub fn parabolic_closure(real: &dyn Realization, g: ElemId) -> RefMask {
    real.fixing_reflections(g)
}

pub fn reflection_length(real: &dyn Realization, g: ElemId) -> usize {
    real.group().length(g)
}

/// lR(u) + lR(u⁻¹v) = lR(v).
pub fn absolute_leq(group: &FiniteGroup, u: ElemId, v: ElemId) -> bool {
    group.length(u) + group.length(group.mul(group.inv(u), v)) == group.length(v)
}

/// Reduced factorization g = t_1⋯t_k by greedy descent from the right:
/// t_k is the smallest-index reflection with lR(g t_k⁻¹) = lR(g) − 1.
pub fn canonical_factorization(group: &FiniteGroup, g: ElemId) -> Vec<usize> {
    let mut out = Vec::with_capacity(group.length(g));
    let mut cur = g;
    while cur != group.identity() {
        let l = group.length(cur);
        let (j, next) = (0..group.reflection_count())
            .map(|j| (j, group.mul(cur, group.inv(group.reflection(j)))))
            .find(|&(_, x)| group.length(x) + 1 == l)
            .expect("some reflection shortens a nonidentity element");
        out.push(j);
        cur = next;
    }
    out.reverse();
    out
}

fn require_well_generated(real: &dyn Realization) -> Result<()> {
    if real.well_generated() {
        Ok(())
    } else {
        Err(Error::NotWellGenerated)
    }
}

pub fn classify_pqc(real: &dyn Realization, g: ElemId) -> Result<PqcClassification> {
    require_well_generated(real)?;
    let mut c = match real.as_wreath() {
        Some(w) => classify_wreath(w, g)?,
        None => classify_generic(real, g)?,
    };
    c.weyl_criterion = weyl_criterion(real, g);
    Ok(c)
}

/// The determinant criterion, evaluated on the canonical factorization.
pub fn weyl_criterion(real: &dyn Realization, g: ElemId) -> Option<bool> {
    let weyl = real.weyl()?;
    let red = canonical_factorization(real.group(), g);
    let det = moved_space_det(real, g, &red)?;
    Some(det == weyl.connection_index(parabolic_closure(real, g)))
}

fn classify_wreath(w: &WreathGroup, g: ElemId) -> Result<PqcClassification> {
    let spec = *w.spec();
    let x = w.element(g);
    let data = x.cycle_data(&spec);
    let nonzero: Vec<_> = data.nonzero().collect();
    let primitive = |c: u32| crate::closed_forms::arith::gcd(c as u64, spec.m as u64) == 1;
    let case_tag = match nonzero.as_slice() {
        [] => CaseTag::YoungOnly,
        [c] if spec.p == 1 && primitive(c.color) => CaseTag::WithFullCycle,
        [a, _] if spec.p == spec.m && primitive(a.color) => CaseTag::WithColorPair,
        _ => CaseTag::NotPqc,
    };
    let mut lambda: Vec<u64> = data.color_zero().map(|c| c.len() as u64).collect();
    lambda.sort_unstable_by(|a, b| b.cmp(a));
    let lambda0 = (!nonzero.is_empty()).then(|| nonzero.iter().map(|c| c.len() as u64).sum());
    let mut generalized_cycles = Vec::new();
    if case_tag.is_pqc() {
        let restrict = |support: &[usize]| -> Result<ElemId> {
            let n = spec.n as usize;
            let mut perm: Vec<usize> = (0..n).collect();
            let mut colors = vec![0i64; n];
            for &k in support {
                perm[k] = x.perm()[k];
                colors[k] = x.colors()[k] as i64;
            }
            w.id_of(&WreathElement::new(perm, &colors, &spec)?)
        };
        for c in data.color_zero().filter(|c| c.len() >= 2) {
            let mut support = c.support.clone();
            support.sort_unstable();
            generalized_cycles.push(GeneralizedCycle {
                element: restrict(&support)?,
                support,
                kind: FactorKind::Symmetric { len: c.len() },
            });
        }
        if !nonzero.is_empty() {
            let mut support: Vec<usize> = nonzero.iter().flat_map(|c| c.support.iter().copied()).collect();
            support.sort_unstable();
            let kind = match nonzero.as_slice() {
                [c] => FactorKind::FullColor { len: c.len() },
                [a, b] => FactorKind::ColorPair { m: spec.m, a: a.len(), b: b.len() },
                _ => unreachable!("pqc cases carry at most two colored cycles"),
            };
            generalized_cycles.push(GeneralizedCycle { element: restrict(&support)?, support, kind });
        }
        generalized_cycles.sort_by_key(|c| c.support[0]);
    }
    Ok(PqcClassification { case_tag, lambda0, lambda, generalized_cycles, weyl_criterion: None })
}

fn classify_generic(real: &dyn Realization, g: ElemId) -> Result<PqcClassification> {
    let pqc = rgs::exists(real, g)?;
    let generalized_cycles = if pqc { generalized_cycles(real, g) } else { Vec::new() };
    Ok(PqcClassification {
        case_tag: if pqc { CaseTag::Pqc } else { CaseTag::NotPqc },
        lambda0: None,
        lambda: Vec::new(),
        generalized_cycles,
        weyl_criterion: None,
    })
}

/// Splits the reflections of `mask` into the irreducible components of the
/// reflection subgroup they form (components of the non-commuting graph).
pub fn irreducible_components(group: &FiniteGroup, mask: RefMask) -> Vec<RefMask> {
    let refls = mask.to_vec();
    let mut comp: Vec<usize> = (0..refls.len()).collect();
    fn find(c: &mut [usize], x: usize) -> usize {
        if c[x] != x {
            let r = find(c, c[x]);
            c[x] = r;
        }
        c[x]
    }
    for a in 0..refls.len() {
        for b in a + 1..refls.len() {
            let (x, y) = (group.reflection(refls[a]), group.reflection(refls[b]));
            if group.mul(x, y) != group.mul(y, x) {
                let (ra, rb) = (find(&mut comp, a), find(&mut comp, b));
                comp[ra.max(rb)] = ra.min(rb);
            }
        }
    }
    let mut out: Vec<RefMask> = Vec::new();
    let mut root_slot: Vec<Option<usize>> = vec![None; refls.len()];
    for a in 0..refls.len() {
        let r = find(&mut comp, a);
        let slot = *root_slot[r].get_or_insert_with(|| {
            out.push(RefMask::EMPTY);
            out.len() - 1
        });
        out[slot] = out[slot].with(refls[a]);
    }
    out
}

/// Factors of g, one per irreducible component of W_g met by the canonical factorization.
pub fn generalized_cycles(real: &dyn Realization, g: ElemId) -> Vec<GeneralizedCycle> {
    let group = real.group();
    let red = canonical_factorization(group, g);
    let closure = group.closure(RefMask::from_indices(red.iter().copied())).0;
    let mut out: Vec<GeneralizedCycle> = irreducible_components(group, closure)
        .into_iter()
        .map(|comp| {
            let part: Vec<usize> = red.iter().copied().filter(|&t| comp.contains(t)).collect();
            let element = group.product(&part);
            let rank = part.len();
            let (_, elems) = group.closure(comp);
            let order = elems.count() as u64;
            let kind = match real.as_orbit() {
                Some(orbit) => {
                    let simple = orbit.simple_system(comp);
                    let cox = group.product(&simple);
                    let conjugate = elems.iter().any(|u| group.conjugate(cox, u as ElemId) == element);
                    if conjugate && simple.len() == rank {
                        FactorKind::Coxeter { coxeter_number: group.element_order(cox) as u64, rank, order }
                    } else {
                        FactorKind::Other { rank }
                    }
                }
                None => FactorKind::Other { rank },
            };
            GeneralizedCycle { support: comp.to_vec(), element, kind }
        })
        .collect();
    out.sort_by_key(|c| c.support[0]);
    out
}

/// ltr(g): 2·rank − lR(g) for pqc elements, otherwise the oracle's minimum length.
pub fn full_reflection_length(real: &dyn Realization, g: ElemId, oracle: Option<&Oracle>) -> Result<usize> {
    let class = classify_pqc(real, g)?;
    if class.case_tag.is_pqc() {
        return Ok(2 * real.rank() - real.group().length(g));
    }
    let oracle =
        oracle.ok_or_else(|| Error::Unsupported("ltr of a non-pqc element needs the lattice oracle".into()))?;
    oracle
        .ffull(g)
        .map(|(l, _)| l)
        .ok_or_else(|| Error::Unsupported("no full factorization within the length bound".into()))
}

pub fn length_record(real: &dyn Realization, g: ElemId, oracle: Option<&Oracle>) -> Result<LengthRecord> {
    Ok(LengthRecord {
        lr: real.group().length(g),
        ltr: full_reflection_length(real, g, oracle)?,
        rank_closure: real.span_rank(parabolic_closure(real, g)),
    })
}

/// Fred(g) from the generalized cycle decomposition, where every factor has a closed form.
pub fn fred_formula(class: &PqcClassification) -> Option<BigInt> {
    if !class.case_tag.is_pqc() {
        return None;
    }
    let kinds: Vec<FactorKind> = class.generalized_cycles.iter().map(|c| c.kind.clone()).collect();
    crate::closed_forms::fred_closed_form(&kinds)
}
