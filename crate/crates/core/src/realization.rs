//! The interface every concrete reflection group offers to the generic
//! algorithms: a permutation model plus the linear data (fixed spaces, roots,
//! Gram matrices) that the permutation model forgets.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};

use crate::cyclo::{CycloField, CycloNum};
use crate::error::Result;
use crate::linalg::{bareiss_det, float_det, int_det};
use crate::perm_group::{ElemId, FiniteGroup, RefMask};
use crate::real_group::OrbitGroup;
use crate::wreath::WreathGroup;

/// Matrix of pairings ⟨ρ_i, ρ̌_j⟩.
#[derive(Clone, Debug)]
pub enum GramMatrix {
    Exact(Vec<Vec<CycloNum>>),
    Float(Vec<Vec<f64>>),
}

/// A Grammian determinant (or a ratio of two).
#[derive(Clone, Debug, PartialEq)]
pub enum GdValue {
    Exact(CycloNum),
    Float(f64),
}

/// Tolerance under which two float Grammian values are the same key.
pub const GD_KEY_TOL: f64 = 1e-6;

impl GramMatrix {
    pub fn len(&self) -> usize {
        match self {
            GramMatrix::Exact(a) => a.len(),
            GramMatrix::Float(a) => a.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn det(&self, field: &std::sync::Arc<CycloField>) -> GdValue {
        match self {
            GramMatrix::Exact(a) => GdValue::Exact(bareiss_det(a, &CycloNum::one(field))),
            GramMatrix::Float(a) => GdValue::Float(float_det(a)),
        }
    }
}

impl GdValue {
    pub fn to_f64(&self) -> f64 {
        match self {
            GdValue::Exact(x) => x.to_complex().0,
            GdValue::Float(x) => *x,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            GdValue::Exact(x) => x.is_zero(),
            GdValue::Float(x) => x.abs() < GD_KEY_TOL,
        }
    }

    /// `self / other`; mixing exact and float degrades to float.
    pub fn ratio(&self, other: &GdValue) -> GdValue {
        match (self, other) {
            (GdValue::Exact(a), GdValue::Exact(b)) => GdValue::Exact(a.div(b).expect("nonzero Grammian determinant")),
            _ => GdValue::Float(self.to_f64() / other.to_f64()),
        }
    }

    pub fn add(&self, other: &GdValue) -> GdValue {
        match (self, other) {
            (GdValue::Exact(a), GdValue::Exact(b)) => GdValue::Exact(a.add(b)),
            _ => GdValue::Float(self.to_f64() + other.to_f64()),
        }
    }

    /// Printable key: the exact value, or the float rounded to the key tolerance.
    pub fn key(&self) -> String {
        match self {
            GdValue::Exact(x) => x.to_string(),
            GdValue::Float(x) => {
                let v = (x / GD_KEY_TOL).round() * GD_KEY_TOL;
                format!("{:.6}", if v == 0.0 { 0.0 } else { v })
            }
        }
    }
}

/// Integral root data of a Weyl realization: one positive root per
/// reflection and the integer pairings ⟨ρ_i, ρ_j^∨⟩.
#[derive(Clone, Debug)]
pub struct WeylData {
    roots: Vec<Vec<i64>>,
    pairing: Vec<i64>,
    index: HashMap<Vec<i64>, usize>,
}

impl WeylData {
    /// `pair(i, j)` must return ⟨ρ_i, ρ_j^∨⟩.
    pub fn new(roots: Vec<Vec<i64>>, pair: impl Fn(usize, usize) -> i64) -> Self {
        let nr = roots.len();
        let pairing = (0..nr * nr).map(|x| pair(x / nr, x % nr)).collect();
        let index = roots.iter().enumerate().map(|(i, r)| (r.clone(), i)).collect();
        WeylData { roots, pairing, index }
    }

    pub fn root(&self, j: usize) -> &[i64] {
        &self.roots[j]
    }

    pub fn pairing(&self, i: usize, j: usize) -> i64 {
        self.pairing[i * self.roots.len() + j]
    }

    /// `(±1, j)` with `v = ±ρ_j`, if `v` is a root.
    pub fn signed_index(&self, v: &[i64]) -> Option<(i64, usize)> {
        if let Some(&j) = self.index.get(v) {
            return Some((1, j));
        }
        let neg: Vec<i64> = v.iter().map(|x| -x).collect();
        self.index.get(&neg).map(|&j| (-1, j))
    }

    /// Simple system of the root subsystem of `mask`: its positive roots that
    /// are not a sum of two of its positive roots.
    pub fn simple_system(&self, mask: RefMask) -> Vec<usize> {
        let pos = mask.to_vec();
        let members: std::collections::HashSet<&[i64]> = pos.iter().map(|&j| self.roots[j].as_slice()).collect();
        pos.iter()
            .copied()
            .filter(|&b| {
                !pos.iter().any(|&a| {
                    a != b && {
                        let diff: Vec<i64> = self.roots[b].iter().zip(&self.roots[a]).map(|(x, y)| x - y).collect();
                        members.contains(diff.as_slice())
                    }
                })
            })
            .collect()
    }

    pub fn cartan(&self, simple: &[usize]) -> Vec<Vec<i64>> {
        simple.iter().map(|&i| simple.iter().map(|&j| self.pairing(i, j)).collect()).collect()
    }

    /// I(W') = |det Cartan(W')| for the reflection subgroup with reflections `mask`.
    pub fn connection_index(&self, mask: RefMask) -> BigInt {
        int_det(&self.cartan(&self.simple_system(mask))).abs()
    }
}

pub trait Realization: Send + Sync {
    fn group(&self) -> &FiniteGroup;
    fn label(&self) -> String;
    fn rank(&self) -> usize;
    fn is_real(&self) -> bool;
    fn well_generated(&self) -> bool;
    /// The field holding exact Grammian values.
    fn field(&self) -> std::sync::Arc<CycloField>;
    /// codim V^g.
    fn codim_fixed(&self, g: ElemId) -> usize;
    /// Reflections t with V^t ⊇ V^g; by Steinberg they generate the parabolic closure of g.
    fn fixing_reflections(&self, g: ElemId) -> RefMask;
    /// Dimension of the span of the roots of `mask`.
    fn span_rank(&self, mask: RefMask) -> usize;
    fn gram(&self, refls: &[usize]) -> GramMatrix;
    fn weyl(&self) -> Option<&WeylData> {
        None
    }
    /// `g(ρ_j) = ±ρ_k`, for Weyl realizations.
    fn weyl_root_image(&self, _g: ElemId, _j: usize) -> Option<(i64, usize)> {
        None
    }
    fn element_text(&self, g: ElemId) -> String;
    fn parse_element(&self, text: &str) -> Result<ElemId>;
    fn as_wreath(&self) -> Option<&WreathGroup> {
        None
    }
    fn as_orbit(&self) -> Option<&OrbitGroup> {
        None
    }

    fn gd(&self, refls: &[usize]) -> GdValue {
        self.gram(refls).det(&self.field())
    }
}

/// |det(g − I)| on the span of the roots `refls`, which must be a g-stable
/// basis of that span (the roots of a reduced factorization of g span (V^g)^⊥).
pub fn moved_space_det(real: &dyn Realization, g: ElemId, refls: &[usize]) -> Option<BigInt> {
    let weyl = real.weyl()?;
    // Both matrices carry the same row scaling by 2/(β_i,β_i), which cancels.
    let mut num = Vec::with_capacity(refls.len());
    let mut den = Vec::with_capacity(refls.len());
    for &i in refls {
        let mut nrow = Vec::with_capacity(refls.len());
        let mut drow = Vec::with_capacity(refls.len());
        for &j in refls {
            let (s, k) = real.weyl_root_image(g, j)?;
            nrow.push(s * weyl.pairing(k, i) - weyl.pairing(j, i));
            drow.push(weyl.pairing(j, i));
        }
        num.push(nrow);
        den.push(drow);
    }
    let q = BigRational::new(int_det(&num), int_det(&den));
    q.is_integer().then(|| q.to_integer().abs())
}

/// A rational value from a float that should be one, with small denominators.
pub fn rationalize(x: f64, tol: f64) -> Option<BigRational> {
    for den in 1..=720i64 {
        let num = (x * den as f64).round();
        if (num / den as f64 - x).abs() <= tol * x.abs().max(1.0) {
            return Some(BigRational::new(BigInt::from(num.to_i64()?), BigInt::from(den)));
        }
    }
    None
}
