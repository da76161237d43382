//! Finite real reflection groups built by closing simple roots under simple
//! reflections; elements are permutations of the root set.
//!
//! Roots live in simple-root coefficient space with the bilinear form given
//! by the Gram matrix G of the simple roots. When the Cartan matrix
//! A_ij = 2G_ij/G_jj is integral all coefficients are exact integers;
//! otherwise (H₃, most I₂(m)) they are floats deduplicated with a tolerance.

use std::collections::{HashMap, VecDeque};
use std::f64::consts::PI;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::closed_forms::arith::factorial;
use crate::cyclo::{CycloField, CycloNum};
use crate::error::{Error, Result};
use crate::linalg::{float_rank, int_det, int_rank, snap_integer};
use crate::perm_group::{ElemId, FiniteGroup, RefMask};
use crate::realization::{GramMatrix, Realization, WeylData};

/// Tolerance for deduplicating float roots and snapping near-integers.
pub const ROOT_TOL: f64 = 1e-9;
const ROOT_CEILING: usize = 1000;
pub const DEFAULT_ORBIT_CEILING: usize = 20_000;

/// Presets available without the stretch flag.
pub const PRESETS: &[&str] = &["A1", "A2", "A3", "A4", "B2", "B3", "B4", "D4", "H3", "I2(m)"];

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RootDatum {
    pub label: String,
    pub coxeter: Vec<Vec<u32>>,
    /// Gram matrix of the simple roots.
    pub gram: Vec<Vec<f64>>,
}

fn chain(n: usize, last: u32) -> Vec<Vec<u32>> {
    let mut c = vec![vec![2u32; n]; n];
    for i in 0..n {
        c[i][i] = 1;
        if i + 1 < n {
            c[i][i + 1] = 3;
            c[i + 1][i] = 3;
        }
    }
    if n >= 2 {
        c[n - 2][n - 1] = last;
        c[n - 1][n - 2] = last;
    }
    c
}

impl RootDatum {
    /// G_ij = −cos(π/m_ij)·ℓ_i·ℓ_j.
    pub fn from_coxeter(label: &str, coxeter: Vec<Vec<u32>>, lengths: &[f64]) -> Result<Self> {
        let n = coxeter.len();
        if lengths.len() != n || coxeter.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidSpec("Coxeter matrix and lengths disagree in size".into()));
        }
        let gram = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        if i == j {
                            lengths[i] * lengths[i]
                        } else {
                            -(PI / coxeter[i][j] as f64).cos() * lengths[i] * lengths[j]
                        }
                    })
                    .collect()
            })
            .collect();
        Ok(RootDatum { label: label.to_string(), coxeter, gram })
    }

    /// Simple roots as coordinate vectors.
    pub fn from_coordinates(label: &str, vectors: &[Vec<f64>]) -> Result<Self> {
        let n = vectors.len();
        if n == 0 || vectors.iter().any(|v| v.len() != vectors[0].len()) {
            return Err(Error::InvalidSpec("simple roots must be nonempty vectors of equal length".into()));
        }
        let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
        let gram: Vec<Vec<f64>> = vectors.iter().map(|a| vectors.iter().map(|b| dot(a, b)).collect()).collect();
        let mut coxeter = vec![vec![2u32; n]; n];
        for i in 0..n {
            coxeter[i][i] = 1;
            for j in 0..n {
                if i != j && gram[i][j].abs() > ROOT_TOL {
                    let cos = -gram[i][j] / (gram[i][i] * gram[j][j]).sqrt();
                    let m = PI / cos.clamp(-1.0, 1.0).acos();
                    let r = m.round();
                    if cos <= 0.0 || (m - r).abs() > 1e-6 {
                        return Err(Error::InvalidSpec(format!("angle between roots {i} and {j} is not π − π/m")));
                    }
                    coxeter[i][j] = r as u32;
                }
            }
        }
        Ok(RootDatum { label: label.to_string(), coxeter, gram })
    }

    pub fn preset(name: &str) -> Result<Self> {
        Self::preset_ext(name, false)
    }

    /// Like [`RootDatum::preset`], also accepting F4 when `stretch` is set.
    pub fn preset_ext(name: &str, stretch: bool) -> Result<Self> {
        let unknown = || Error::UnknownPreset(name.to_string());
        let trimmed = name.trim();
        if let Some(arg) = trimmed.strip_prefix("I2(").and_then(|s| s.strip_suffix(')')) {
            let m: u32 = arg.trim().parse().map_err(|_| unknown())?;
            if !(2..=12).contains(&m) {
                return Err(unknown());
            }
            let lengths = match m {
                4 => [2f64.sqrt(), 1.0],
                6 => [3f64.sqrt(), 1.0],
                _ => [1.0, 1.0],
            };
            return Self::from_coxeter(trimmed, vec![vec![1, m], vec![m, 1]], &lengths);
        }
        let s2 = 2f64.sqrt();
        match trimmed {
            "A1" | "A2" | "A3" | "A4" => {
                let n: usize = trimmed[1..].parse().expect("digit");
                Self::from_coxeter(trimmed, chain(n, 3), &vec![1.0; n])
            }
            "B2" | "B3" | "B4" => {
                let n: usize = trimmed[1..].parse().expect("digit");
                let mut lengths = vec![s2; n];
                lengths[n - 1] = 1.0;
                Self::from_coxeter(trimmed, chain(n, 4), &lengths)
            }
            "D4" => {
                let mut c = vec![vec![2u32; 4]; 4];
                for (i, row) in c.iter_mut().enumerate() {
                    row[i] = 1;
                }
                for j in [0, 2, 3] {
                    c[1][j] = 3;
                    c[j][1] = 3;
                }
                Self::from_coxeter(trimmed, c, &[1.0; 4])
            }
            "H3" => {
                let mut c = chain(3, 3);
                c[0][1] = 5;
                c[1][0] = 5;
                Self::from_coxeter(trimmed, c, &[1.0; 3])
            }
            "F4" if stretch => {
                let mut c = chain(4, 3);
                c[1][2] = 4;
                c[2][1] = 4;
                Self::from_coxeter(trimmed, c, &[s2, s2, 1.0, 1.0])
            }
            _ => Err(unknown()),
        }
    }

    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    pub fn cartan(&self) -> Vec<Vec<f64>> {
        let n = self.rank();
        (0..n).map(|i| (0..n).map(|j| 2.0 * self.gram[i][j] / self.gram[j][j]).collect()).collect()
    }

    pub fn integral_cartan(&self) -> Option<Vec<Vec<i64>>> {
        self.cartan()
            .iter()
            .map(|row| row.iter().map(|&x| snap_integer(x, ROOT_TOL)).collect::<Option<Vec<_>>>())
            .collect()
    }
}

/// Cartan matrix, connection index, and highest-root coefficients.
#[derive(Clone, Debug)]
pub struct CartanData {
    pub cartan: Vec<Vec<f64>>,
    pub integral_cartan: Option<Vec<Vec<i64>>>,
    pub connection_index: Option<BigInt>,
    pub highest_root: Option<Vec<i64>>,
}

#[derive(Debug)]
pub struct OrbitGroup {
    datum: RootDatum,
    /// All roots in coefficient coordinates; the first n are the simple roots.
    roots: Vec<Vec<f64>>,
    int_roots: Option<Vec<Vec<i64>>>,
    /// Root index of each reflection's positive root.
    positive: Vec<usize>,
    /// For every root, (±1, reflection) with root = ±positive root.
    signed_reflection: Vec<(i64, usize)>,
    group: FiniteGroup,
    coxeter_number: usize,
    words: Vec<Vec<u8>>,
    weyl: Option<WeylData>,
    field: Arc<CycloField>,
}

impl OrbitGroup {
    pub fn preset(name: &str) -> Result<Self> {
        Self::build(RootDatum::preset(name)?)
    }

    pub fn build(datum: RootDatum) -> Result<Self> {
        Self::build_with_ceiling(datum, DEFAULT_ORBIT_CEILING)
    }

    pub fn build_with_ceiling(datum: RootDatum, ceiling: usize) -> Result<Self> {
        let n = datum.rank();
        let cartan = datum.cartan();
        let int_cartan = datum.integral_cartan();

        // Close the simple roots under s_j(β) = β − (Σ_i β_i A_ij) α_j.
        let mut roots: Vec<Vec<f64>> = Vec::new();
        let mut int_index: HashMap<Vec<i64>, usize> = HashMap::new();
        let find = |roots: &[Vec<f64>], int_index: &HashMap<Vec<i64>, usize>, v: &[f64]| -> Option<usize> {
            if int_cartan.is_some() {
                let key: Vec<i64> = v.iter().map(|x| x.round() as i64).collect();
                int_index.get(&key).copied()
            } else {
                roots.iter().position(|r| r.iter().zip(v).all(|(a, b)| (a - b).abs() <= ROOT_TOL * 1e3))
            }
        };
        let mut queue = VecDeque::new();
        for i in 0..n {
            let mut e = vec![0.0; n];
            e[i] = 1.0;
            int_index.insert(e.iter().map(|x| *x as i64).collect(), roots.len());
            roots.push(e);
            queue.push_back(i);
        }
        while let Some(b) = queue.pop_front() {
            for j in 0..n {
                let beta = roots[b].clone();
                let c: f64 =
                    (0..n).map(|i| beta[i] * int_cartan.as_ref().map_or(cartan[i][j], |a| a[i][j] as f64)).sum();
                let mut img = beta;
                img[j] -= c;
                if find(&roots, &int_index, &img).is_none() {
                    if roots.len() >= ROOT_CEILING {
                        return Err(Error::Budget { what: "root count", limit: ROOT_CEILING });
                    }
                    if int_cartan.is_some() {
                        int_index.insert(img.iter().map(|x| x.round() as i64).collect(), roots.len());
                    }
                    queue.push_back(roots.len());
                    roots.push(img);
                }
            }
        }
        let nroots = roots.len();
        let is_positive = |v: &[f64]| v.iter().all(|&x| x >= -ROOT_TOL);
        let positive: Vec<usize> = (0..nroots).filter(|&r| is_positive(&roots[r])).collect();
        if positive.len() * 2 != nroots {
            return Err(Error::InvalidSpec("root closure is not symmetric under negation".into()));
        }
        let neg_of = |r: usize| -> usize {
            let v: Vec<f64> = roots[r].iter().map(|x| -x).collect();
            find(&roots, &int_index, &v).expect("−β is a root")
        };
        let mut signed_reflection = vec![(0i64, 0usize); nroots];
        for (j, &r) in positive.iter().enumerate() {
            signed_reflection[r] = (1, j);
            signed_reflection[neg_of(r)] = (-1, j);
        }

        let form = |a: &[f64], b: &[f64]| -> f64 {
            let mut s = 0.0;
            for i in 0..n {
                for k in 0..n {
                    s += a[i] * datum.gram[i][k] * b[k];
                }
            }
            s
        };
        let mut perms = Vec::with_capacity(positive.len());
        for &b in &positive {
            let beta = &roots[b];
            let bb = form(beta, beta);
            let mut perm = vec![0u16; nroots];
            for (a, alpha) in roots.iter().enumerate() {
                let raw = 2.0 * form(alpha, beta) / bb;
                let c = match int_cartan {
                    Some(_) => snap_integer(raw, 1e-6).ok_or_else(|| {
                        Error::InvalidSpec("non-integral root pairing in a crystallographic datum".into())
                    })? as f64,
                    None => raw,
                };
                let img: Vec<f64> = alpha.iter().zip(beta).map(|(x, y)| x - c * y).collect();
                perm[a] = find(&roots, &int_index, &img)
                    .ok_or_else(|| Error::InvalidSpec("roots are not closed under reflections".into()))?
                    as u16;
            }
            perms.push(perm);
        }
        let group = FiniteGroup::generate(nroots, &perms[..n], &perms, ceiling)?;
        let coxeter_element = (0..n).fold(group.identity(), |e, j| group.right_mul(e, j));
        let coxeter_number = group.element_order(coxeter_element);

        // shortlex words in the simple reflections
        let mut words: Vec<Option<Vec<u8>>> = vec![None; group.order()];
        words[0] = Some(Vec::new());
        let mut bfs = VecDeque::from([0 as ElemId]);
        while let Some(e) = bfs.pop_front() {
            for j in 0..n {
                let f = group.right_mul(e, j);
                if words[f as usize].is_none() {
                    let mut w = words[e as usize].clone().expect("visited");
                    w.push(j as u8);
                    words[f as usize] = Some(w);
                    bfs.push_back(f);
                }
            }
        }
        let words = words.into_iter().map(|w| w.expect("simple reflections generate")).collect();

        let int_roots: Option<Vec<Vec<i64>>> =
            int_cartan.as_ref().map(|_| roots.iter().map(|r| r.iter().map(|x| x.round() as i64).collect()).collect());
        let weyl = int_roots.as_ref().map(|ir| {
            let pos: Vec<Vec<i64>> = positive.iter().map(|&r| ir[r].clone()).collect();
            let fl: Vec<Vec<f64>> = positive.iter().map(|&r| roots[r].clone()).collect();
            let pair = |i: usize, j: usize| {
                snap_integer(2.0 * form(&fl[i], &fl[j]) / form(&fl[j], &fl[j]), 1e-6).expect("integral pairing")
            };
            WeylData::new(pos, pair)
        });

        Ok(OrbitGroup {
            datum,
            roots,
            int_roots,
            positive,
            signed_reflection,
            group,
            coxeter_number,
            words,
            weyl,
            field: CycloField::get(1),
        })
    }

    pub fn datum(&self) -> &RootDatum {
        &self.datum
    }

    pub fn is_crystallographic(&self) -> bool {
        self.int_roots.is_some()
    }

    pub fn root_count(&self) -> usize {
        self.roots.len()
    }

    pub fn coxeter_number(&self) -> usize {
        self.coxeter_number
    }

    /// Coefficients of the positive root of reflection `j`.
    pub fn positive_root(&self, j: usize) -> &[f64] {
        &self.roots[self.positive[j]]
    }

    fn form(&self, a: &[f64], b: &[f64]) -> f64 {
        let n = self.datum.rank();
        let mut s = 0.0;
        for i in 0..n {
            for k in 0..n {
                s += a[i] * self.datum.gram[i][k] * b[k];
            }
        }
        s
    }

    /// ⟨ρ_a, ρ_b^∨⟩ = 2(ρ_a, ρ_b)/(ρ_b, ρ_b) in floats.
    pub fn float_pairing(&self, a: usize, b: usize) -> f64 {
        let (x, y) = (self.positive_root(a), self.positive_root(b));
        2.0 * self.form(x, y) / self.form(y, y)
    }

    /// Image of the i-th simple root under g, in coefficients.
    fn simple_image(&self, g: ElemId, i: usize) -> &[f64] {
        &self.roots[self.group.perm(g)[i] as usize]
    }

    /// Columns of M_g − I.
    fn moved_columns(&self, g: ElemId) -> Vec<Vec<f64>> {
        let n = self.datum.rank();
        (0..n)
            .map(|j| {
                let mut c = self.simple_image(g, j).to_vec();
                c[j] -= 1.0;
                c
            })
            .collect()
    }

    fn rank_of(&self, rows: &[Vec<f64>]) -> usize {
        if rows.is_empty() {
            return 0;
        }
        if self.is_crystallographic() {
            let ints: Vec<Vec<i64>> = rows.iter().map(|r| r.iter().map(|x| x.round() as i64).collect()).collect();
            int_rank(&ints)
        } else {
            float_rank(rows)
        }
    }

    /// dim V^g = n − rank(M_g − I).
    pub fn fixed_space_dim(&self, g: ElemId) -> usize {
        self.datum.rank() - self.rank_of(&self.moved_columns(g))
    }

    pub fn cartan_and_connection_index(&self) -> CartanData {
        let integral_cartan = self.datum.integral_cartan();
        let connection_index = integral_cartan.as_ref().map(|a| int_det(a).abs());
        let irreducible = self.coxeter_graph_connected();
        let highest_root = match (&self.int_roots, irreducible) {
            (Some(ir), true) => self.positive.iter().map(|&r| ir[r].clone()).max_by_key(|v| v.iter().sum::<i64>()),
            _ => None,
        };
        CartanData { cartan: self.datum.cartan(), integral_cartan, connection_index, highest_root }
    }

    pub fn connection_index(&self) -> Result<BigInt> {
        self.cartan_and_connection_index().connection_index.ok_or_else(|| {
            Error::Unsupported(format!("{} is not crystallographic; I(W) is undefined", self.datum.label))
        })
    }

    /// #W = n!·Π c_i·I(W), checked for irreducible crystallographic groups.
    pub fn weyl_identity_holds(&self) -> Option<bool> {
        let data = self.cartan_and_connection_index();
        let (i, c) = (data.connection_index?, data.highest_root?);
        let prod: BigInt = c.iter().map(|&x| BigInt::from(x)).product();
        Some(factorial(self.datum.rank() as u64) * prod * i == BigInt::from(self.group.order()))
    }

    fn coxeter_graph_connected(&self) -> bool {
        let n = self.datum.rank();
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(i) = stack.pop() {
            for j in 0..n {
                if !seen[j] && self.datum.coxeter[i][j] >= 3 {
                    seen[j] = true;
                    stack.push(j);
                }
            }
        }
        seen.into_iter().all(|x| x)
    }

    /// Simple system of the reflection subgroup `mask`: those of its positive
    /// roots whose reflection makes exactly one of its positive roots negative.
    pub fn simple_system(&self, mask: RefMask) -> Vec<usize> {
        mask.iter()
            .filter(|&b| {
                let perm = self.group.perm(self.group.reflection(b));
                mask.iter().filter(|&a| self.signed_reflection[perm[self.positive[a]] as usize].0 < 0).count() == 1
            })
            .collect()
    }

    /// Shortlex word in the simple reflections (0-indexed).
    pub fn word(&self, g: ElemId) -> &[u8] {
        &self.words[g as usize]
    }
}

#[derive(Serialize, Deserialize)]
struct WordText {
    word: Vec<usize>,
}

impl Realization for OrbitGroup {
    fn group(&self) -> &FiniteGroup {
        &self.group
    }

    fn label(&self) -> String {
        self.datum.label.clone()
    }

    fn rank(&self) -> usize {
        self.datum.rank()
    }

    fn is_real(&self) -> bool {
        true
    }

    fn well_generated(&self) -> bool {
        true
    }

    fn field(&self) -> Arc<CycloField> {
        self.field.clone()
    }

    fn codim_fixed(&self, g: ElemId) -> usize {
        self.datum.rank() - self.fixed_space_dim(g)
    }

    fn fixing_reflections(&self, g: ElemId) -> RefMask {
        let cols = self.moved_columns(g);
        let base = self.rank_of(&cols);
        RefMask::from_indices((0..self.positive.len()).filter(|&j| {
            let mut rows = cols.clone();
            rows.push(self.positive_root(j).to_vec());
            self.rank_of(&rows) == base
        }))
    }

    fn span_rank(&self, mask: RefMask) -> usize {
        let rows: Vec<Vec<f64>> = mask.iter().map(|j| self.positive_root(j).to_vec()).collect();
        self.rank_of(&rows)
    }

    fn gram(&self, refls: &[usize]) -> GramMatrix {
        match &self.weyl {
            Some(w) => GramMatrix::Exact(
                refls
                    .iter()
                    .map(|&a| refls.iter().map(|&b| CycloNum::from_int(&self.field, w.pairing(a, b))).collect())
                    .collect(),
            ),
            None => GramMatrix::Float(
                refls.iter().map(|&a| refls.iter().map(|&b| self.float_pairing(a, b)).collect()).collect(),
            ),
        }
    }

    fn weyl(&self) -> Option<&WeylData> {
        self.weyl.as_ref()
    }

    fn weyl_root_image(&self, g: ElemId, j: usize) -> Option<(i64, usize)> {
        self.weyl.as_ref()?;
        Some(self.signed_reflection[self.group.perm(g)[self.positive[j]] as usize])
    }

    fn element_text(&self, g: ElemId) -> String {
        serde_json::to_string(&WordText { word: self.word(g).iter().map(|&j| j as usize + 1).collect() })
            .expect("plain data serializes")
    }

    fn parse_element(&self, text: &str) -> Result<ElemId> {
        let w: WordText = serde_json::from_str(text)?;
        let n = self.datum.rank();
        w.word.iter().try_fold(self.group.identity(), |e, &j| {
            if j == 0 || j > n {
                Err(Error::InvalidElement(format!("simple reflection index {j} outside 1..={n}")))
            } else {
                Ok(self.group.right_mul(e, j - 1))
            }
        })
    }

    fn as_orbit(&self) -> Option<&OrbitGroup> {
        Some(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn preset_orders() {
        for (name, order, refl, h) in [
            ("A1", 2, 1, 2),
            ("A2", 6, 3, 3),
            ("A3", 24, 6, 4),
            ("B2", 8, 4, 4),
            ("B3", 48, 9, 6),
            ("D4", 192, 12, 6),
            ("H3", 120, 15, 10),
            ("I2(5)", 10, 5, 5),
            ("I2(6)", 12, 6, 6),
        ] {
            let g = OrbitGroup::preset(name).unwrap();
            assert_eq!(g.group().order(), order, "{name}");
            assert_eq!(g.group().reflection_count(), refl, "{name}");
            assert_eq!(g.coxeter_number(), h, "{name}");
        }
        assert!(RootDatum::preset("F4").is_err());
        assert!(RootDatum::preset("I2(13)").is_err());
    }

    #[test]
    fn connection_indices() {
        let a2 = OrbitGroup::preset("A2").unwrap();
        let d = a2.cartan_and_connection_index();
        assert_eq!(d.connection_index, Some(BigInt::from(3)));
        assert_eq!(d.highest_root, Some(vec![1, 1]));
        assert_eq!(OrbitGroup::preset("B2").unwrap().connection_index().unwrap(), BigInt::from(2));
        for name in ["A2", "A3", "A4", "B2", "B3", "B4", "D4", "I2(6)"] {
            assert_eq!(OrbitGroup::preset(name).unwrap().weyl_identity_holds(), Some(true), "{name}");
        }
        assert!(OrbitGroup::preset("H3").unwrap().connection_index().is_err());
    }

    #[test]
    fn reflection_length_is_codimension() {
        for name in ["A3", "B3", "H3", "I2(5)", "D4"] {
            let g = OrbitGroup::preset(name).unwrap();
            for e in 0..g.group().order() as ElemId {
                assert_eq!(g.codim_fixed(e), g.group().length(e), "{name} {e}");
            }
        }
    }

    #[test]
    fn coordinates_round_trip() {
        let b2 = RootDatum::from_coordinates("B2", &[vec![1.0, -1.0], vec![0.0, 1.0]]).unwrap();
        assert_eq!(b2.coxeter[0][1], 4);
        assert_eq!(OrbitGroup::build(b2).unwrap().group().order(), 8);
    }

    #[test]
    fn words_parse_back() {
        let g = OrbitGroup::preset("B3").unwrap();
        for e in 0..g.group().order() as ElemId {
            assert_eq!(g.parse_element(&g.element_text(e)).unwrap(), e);
        }
    }
}
