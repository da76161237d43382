//! Acceptance suite: one PASS/FAIL line per criterion; exits nonzero on any failure.

use std::collections::{BTreeMap, BTreeSet};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use whurwitz::closed_forms::arith::{factorial, gcd};
use whurwitz::closed_forms::identities::{chebyshev_helpers, primitive_root_identities};
use whurwitz::closed_forms::{hurwitz_number, Partition};
use whurwitz::cutjoin::{cutjoin_rhs, prefix_poset, reduced_within, rgs_within, verify_rgs_recurrence};
use whurwitz::cyclo::CycloNum;
use whurwitz::gram::{gd_ratio, main_theorem};
use whurwitz::lattice::{count_tuples, hurwitz_orbit, reduced_factorizations, Oracle};
use whurwitz::linalg::bareiss_det;
use whurwitz::parabolic::{canonical_factorization, classify_pqc, irreducible_components, CaseTag};
use whurwitz::perm_group::ElemId;
use whurwitz::real_group::{OrbitGroup, RootDatum};
use whurwitz::realization::{GdValue, Realization};
use whurwitz::rgs::{count_rgs_formula, enumerate_rgs, gd_sum, key_histogram};
use whurwitz::verify::prop_formula;
use whurwitz::wreath::{GroupSpec, WreathGroup};

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn wreath(m: u32, p: u32, n: u32) -> WreathGroup {
    WreathGroup::new(GroupSpec::new(m, p, n).expect("valid parameters")).expect("group builds")
}

fn preset(name: &str) -> OrbitGroup {
    OrbitGroup::preset(name).expect("preset builds")
}

fn class_reps(real: &dyn Realization) -> Vec<ElemId> {
    real.group().conjugacy_classes().into_iter().map(|c| c[0]).collect()
}

fn pqc_reps(real: &dyn Realization) -> Vec<ElemId> {
    class_reps(real).into_iter().filter(|&g| classify_pqc(real, g).expect("classifies").case_tag.is_pqc()).collect()
}

fn pqc_elements(real: &dyn Realization) -> Vec<ElemId> {
    let order = real.group().order() as ElemId;
    (0..order).filter(|&g| classify_pqc(real, g).expect("classifies").case_tag.is_pqc()).collect()
}

fn oracle_count(oracle: &Oracle, g: ElemId) -> Option<BigInt> {
    oracle.ffull(g).map(|(_, c)| c)
}

fn int(x: u64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

fn c1_symmetric_baseline() -> Outcome {
    let mut detail = Vec::new();
    for (n, expected) in [(3u32, 24u64), (4, 2880)] {
        let w = wreath(1, 1, n);
        let id = w.group().identity();
        let rhs = main_theorem(&w, id).map_err(|e| e.to_string())?;
        let oracle = Oracle::new(&w).map_err(|e| e.to_string())?;
        let want = int(expected);
        ensure!(rhs.weyl.as_ref() == Some(&want), "S{n} Weyl RHS {:?}", rhs.weyl);
        ensure!(rhs.complex == want, "S{n} complex RHS {}", rhs.complex);
        ensure!(oracle_count(&oracle, id) == Some(BigInt::from(expected)), "S{n} oracle disagrees");
        detail.push(format!("S{n}={expected}"));
    }
    Ok(detail.join(" "))
}

fn c2_hurwitz_formula() -> Outcome {
    let mut checked = 0;
    for n in 3..=5u32 {
        let w = wreath(1, 1, n);
        let oracle = Oracle::new(&w).map_err(|e| e.to_string())?;
        for g in class_reps(&w) {
            let data = w.element(g).cycle_data(w.spec());
            let parts: Vec<u64> = data.cycles.iter().map(|c| c.len() as u64).collect();
            let lambda = Partition::new(parts.clone()).map_err(|e| e.to_string())?;
            let h0 = hurwitz_number(0, &lambda).map_err(|e| e.to_string())?;
            let (ltr, count) = oracle.ffull(g).ok_or("no full factorization")?;
            ensure!(h0 == BigRational::from_integer(count.clone()), "S{n} λ={parts:?}: H0={h0} oracle={count}");
            ensure!(ltr == n as usize + lambda.len() - 2, "S{n} λ={parts:?}: ltr {ltr}");
            checked += 1;
        }
    }
    Ok(format!("{checked} cycle types"))
}

fn weyl_identity(real: &dyn Realization, expected: Option<u64>) -> Outcome {
    let id = real.group().identity();
    let n = real.rank() as u64;
    let rgs = enumerate_rgs(real, id).map_err(|e| e.to_string())?.len();
    let weyl = real.weyl().ok_or_else(|| format!("{} has no Weyl realization", real.label()))?;
    let index = weyl.connection_index(real.group().all_reflections());
    let value = BigRational::new(factorial(2 * n) * BigInt::from(rgs), index);
    let oracle = Oracle::new(real).map_err(|e| e.to_string())?;
    let count = oracle_count(&oracle, id).ok_or("no full factorization")?;
    ensure!(value == BigRational::from_integer(count.clone()), "{}: formula {value} oracle {count}", real.label());
    if let Some(e) = expected {
        ensure!(count == BigInt::from(e), "{}: expected {e}, got {count}", real.label());
    }
    Ok(format!("{}={count}", real.label()))
}

fn c3_weyl_identity() -> Outcome {
    let mut detail = vec![
        weyl_identity(&preset("A2"), Some(24))?,
        weyl_identity(&preset("A3"), Some(2880))?,
        weyl_identity(&preset("B2"), Some(48))?,
        weyl_identity(&preset("B3"), Some(12960))?,
        weyl_identity(&wreath(2, 2, 3), Some(2880))?,
        weyl_identity(&preset("I2(4)"), Some(48))?,
    ];
    for w in [wreath(4, 4, 2), wreath(2, 1, 2)] {
        let id = w.group().identity();
        let rhs = main_theorem(&w, id).map_err(|e| e.to_string())?;
        let oracle = Oracle::new(&w).map_err(|e| e.to_string())?;
        ensure!(rhs.complex == int(48), "{}: complex RHS {}", w.label(), rhs.complex);
        ensure!(oracle_count(&oracle, id) == Some(BigInt::from(48)), "{}: oracle", w.label());
        detail.push(format!("{}=48", w.label()));
    }
    Ok(detail.join(" "))
}

const MATRIX: [(u32, u32, u32); 5] = [(3, 1, 2), (4, 1, 2), (3, 3, 3), (4, 4, 3), (2, 2, 4)];

fn c4_complex_main_theorem() -> Outcome {
    let mut rows = 0;
    for (m, p, n) in MATRIX {
        let w = wreath(m, p, n);
        let oracle = Oracle::new(&w).map_err(|e| e.to_string())?;
        for g in pqc_reps(&w) {
            let rhs = main_theorem(&w, g).map_err(|e| e.to_string())?;
            let count = oracle_count(&oracle, g).ok_or("no full factorization")?;
            ensure!(
                rhs.complex == BigRational::from_integer(count.clone()),
                "{} {}: RHS {} oracle {count}",
                w.label(),
                w.element_text(g),
                rhs.complex
            );
            rows += 1;
        }
    }
    Ok(format!("{rows} pqc classes"))
}

fn c5_h3_headline() -> Outcome {
    let h3 = preset("H3");
    let id = h3.group().identity();
    let records = enumerate_rgs(&h3, id).map_err(|e| e.to_string())?;
    ensure!(records.len() == 380, "{} good generating sets", records.len());
    let s5 = 5f64.sqrt();
    let mut split: BTreeMap<&str, usize> = BTreeMap::new();
    for (key, count) in key_histogram(&records) {
        let gd = 1.0 / key.parse::<f64>().map_err(|e| e.to_string())?;
        let label = [("2", 2.0), ("3+sqrt5", 3.0 + s5), ("3-sqrt5", 3.0 - s5)]
            .into_iter()
            .find(|(_, v)| (gd - v).abs() < 1e-6)
            .map(|(l, _)| l)
            .ok_or_else(|| format!("unexpected Grammian value {gd}"))?;
        *split.entry(label).or_default() += count;
    }
    let want = BTreeMap::from([("2", 180), ("3+sqrt5", 100), ("3-sqrt5", 100)]);
    ensure!(split == want, "split {split:?}");
    let rhs = main_theorem(&h3, id).map_err(|e| e.to_string())?;
    let near = (rhs.gd_sum_float - 240.0).abs() < 1e-6;
    ensure!(near, "sum {}", rhs.gd_sum_float);
    ensure!(rhs.complex == int(172800), "RHS {}", rhs.complex);
    let oracle = Oracle::new(&h3).map_err(|e| e.to_string())?;
    ensure!(oracle_count(&oracle, id) == Some(BigInt::from(172800)), "oracle disagrees");
    Ok("380 = 180+100+100, sum 240, F=172800".into())
}

fn c6_prop_formulas() -> Outcome {
    let mut rows = 0;
    for (m, p, n) in MATRIX.into_iter().chain([(2, 1, 2), (2, 1, 3)]) {
        let w = wreath(m, p, n);
        let oracle = Oracle::new(&w).map_err(|e| e.to_string())?;
        for g in pqc_reps(&w) {
            let prop = prop_formula(&w, g).ok_or_else(|| format!("{}: no closed form", w.label()))?;
            let count = oracle_count(&oracle, g).ok_or("no full factorization")?;
            ensure!(prop == count.to_string(), "{} {}: prop {prop} oracle {count}", w.label(), w.element_text(g));
            rows += 1;
        }
    }
    Ok(format!("{rows} pqc classes"))
}

/// Keys expected to share RGS(W, g) evenly, or `None` when a single "unit" key is expected.
fn primitive_keys(spec: &GroupSpec, tag: CaseTag) -> Option<BTreeSet<String>> {
    let m = spec.m;
    let primitive: Vec<u32> = (1..m).filter(|&c| gcd(c as u64, m as u64) == 1).collect();
    match tag {
        CaseTag::YoungOnly if m > 1 && spec.p == 1 => {
            Some(primitive.iter().map(|c| format!("xi=zeta{m}^{c}")).collect())
        }
        CaseTag::YoungOnly if m > 1 => Some(primitive.iter().map(|&d| format!("delta=±{}", d.min(m - d))).collect()),
        _ => None,
    }
}

fn c7_rgs_counts() -> Outcome {
    let mut specs = Vec::new();
    for m in 1..=4u32 {
        for n in 1..=4u32 {
            if m == 1 {
                if n >= 2 {
                    specs.push((1, 1, n));
                }
            } else {
                specs.push((m, 1, n));
                if n >= 2 {
                    specs.push((m, m, n));
                }
            }
        }
    }
    let mut cases: BTreeSet<&str> = BTreeSet::new();
    let mut total = 0;
    for (m, p, n) in specs {
        let w = wreath(m, p, n);
        for g in pqc_reps(&w) {
            let class = classify_pqc(&w, g).map_err(|e| e.to_string())?;
            let records = enumerate_rgs(&w, g).map_err(|e| e.to_string())?;
            let formula = count_rgs_formula(w.spec(), &class).map_err(|e| e.to_string())?;
            ensure!(
                BigInt::from(records.len()) == formula,
                "{} {}: search {} formula {formula}",
                w.label(),
                w.element_text(g),
                records.len()
            );
            let hist = key_histogram(&records);
            match primitive_keys(w.spec(), class.case_tag) {
                Some(keys) => {
                    let seen: BTreeSet<String> = hist.keys().cloned().collect();
                    ensure!(seen == keys, "{} {}: keys {seen:?}, expected {keys:?}", w.label(), w.element_text(g));
                    let counts: BTreeSet<usize> = hist.values().copied().collect();
                    ensure!(counts.len() == 1, "{} {}: uneven split {hist:?}", w.label(), w.element_text(g));
                }
                None => ensure!(hist.keys().all(|k| k == "unit"), "{} {}: keys {hist:?}", w.label(), w.element_text(g)),
            }
            cases.insert(match (class.case_tag, m, p) {
                (_, 1, _) => "symmetric",
                (CaseTag::WithFullCycle, ..) => "full-cycle",
                (CaseTag::WithColorPair, ..) => "color-pair",
                (CaseTag::YoungOnly, _, 1) => "young-p1",
                _ => "young-pm",
            });
            total += 1;
        }
    }
    ensure!(cases.len() == 5, "cases exercised: {cases:?}");
    Ok(format!("{total} classes across {} case shapes", cases.len()))
}

fn c8_cutjoin() -> Outcome {
    let mut rows = 0;
    for name in ["A2", "A3", "B2", "B3"] {
        let w = preset(name);
        let oracle = Oracle::new(&w).map_err(|e| e.to_string())?;
        for g in pqc_reps(&w) {
            let cj = cutjoin_rhs(&oracle, g).map_err(|e| e.to_string())?;
            let count = oracle_count(&oracle, g).ok_or("no full factorization")?;
            ensure!(cj.total() == count, "{name} {}: recursion {} oracle {count}", w.element_text(g), cj.total());
            ensure!(cj.first_all_pqc, "{name} {}: first-sum subgroup without pqc gt", w.element_text(g));
            let rec = verify_rgs_recurrence(&oracle, g).map_err(|e| e.to_string())?;
            ensure!(rec.holds(), "{name} {}: recurrence {} vs {}", w.element_text(g), rec.lhs, rec.rhs);
            rows += 1;
        }
    }
    Ok(format!("{rows} pqc classes"))
}

fn c9_identities() -> Outcome {
    for m in 2..=200 {
        let r = primitive_root_identities(m);
        ensure!(r.exact_ok, "m={m}: exact {} / {}", r.first_exact, r.second_exact);
        ensure!(r.float_ok, "m={m}: float errors {} {}", r.first_float_error, r.second_float_error);
    }
    for s in 1..=50 {
        ensure!(chebyshev_helpers(s).ok, "Chebyshev helpers fail at s={s}");
    }
    Ok("m ≤ 200, s ≤ 50".into())
}

const CASES: usize = 1000;

/// Small G(m,p,n) with m ≤ 4, n ≤ 3.
fn small_wreaths() -> Vec<WreathGroup> {
    [
        (2, 1, 2),
        (2, 2, 2),
        (3, 1, 2),
        (3, 3, 2),
        (4, 1, 2),
        (4, 2, 2),
        (4, 4, 2),
        (2, 1, 3),
        (3, 1, 3),
        (3, 3, 3),
        (4, 4, 3),
    ]
    .into_iter()
    .map(|(m, p, n)| wreath(m, p, n))
    .collect()
}

fn random_scalar(rng: &mut ChaCha8Rng, w: &WreathGroup) -> CycloNum {
    let field = w.field();
    loop {
        let c = if rng.gen_bool(0.5) {
            let q = BigRational::new(BigInt::from(rng.gen_range(-9i64..=9)), BigInt::from(rng.gen_range(1i64..=7)));
            CycloNum::from_rational(&field, &q)
        } else {
            let a = CycloNum::from_int(&field, rng.gen_range(-3..=3));
            let b = CycloNum::root_of_unity(&field, rng.gen_range(0..w.spec().m as i64))
                .mul(&CycloNum::from_int(&field, rng.gen_range(-3..=3)));
            a.add(&b)
        };
        if !c.is_zero() {
            return c;
        }
    }
}

fn det(w: &WreathGroup, pairs: &[(Vec<CycloNum>, Vec<CycloNum>)]) -> CycloNum {
    bareiss_det(&WreathGroup::gram_of(pairs), &CycloNum::one(&w.field()))
}

fn random_list(rng: &mut ChaCha8Rng, w: &WreathGroup, len: usize) -> Vec<usize> {
    (0..len).map(|_| rng.gen_range(0..w.group().reflection_count())).collect()
}

fn prop_scaling(rng: &mut ChaCha8Rng, groups: &[WreathGroup]) -> Result<(), String> {
    for case in 0..CASES {
        let w = groups.choose(rng).expect("groups");
        let len = rng.gen_range(1..=w.spec().n as usize);
        let list = random_list(rng, w, len);
        let pairs: Vec<_> = list.iter().map(|&j| (w.root(j).to_vec(), w.coroot(j).to_vec())).collect();
        let scaled: Vec<_> = pairs
            .iter()
            .map(|(r, c)| {
                let s = random_scalar(rng, w);
                let t = s.conj().inv().expect("nonzero");
                (r.iter().map(|x| x.mul(&s)).collect(), c.iter().map(|x| x.mul(&t)).collect())
            })
            .collect();
        let base = det(w, &pairs);
        ensure!(w.gd(&list) == GdValue::Exact(base.clone()), "case {case}: library GD differs from explicit Gram");
        ensure!(base == det(w, &scaled), "case {case}: {} {list:?} changed under scaling", w.label());
    }
    Ok(())
}

fn prop_hurwitz_move(rng: &mut ChaCha8Rng, groups: &[WreathGroup]) -> Result<(), String> {
    for case in 0..CASES {
        let w = groups.choose(rng).expect("groups");
        let len = rng.gen_range(2..=w.spec().n as usize + 1);
        let mut list = random_list(rng, w, len);
        let before = w.gd(&list);
        let i = rng.gen_range(0..list.len());
        let j = (i + rng.gen_range(1..list.len())) % list.len();
        list[i] = w.group().conjugate_reflection(list[i], list[j]);
        ensure!(w.gd(&list) == before, "case {case}: {} GD changed by a Hurwitz move", w.label());
    }
    Ok(())
}

/// (group, g, RGS(W, g)) samples with lR(g) ≥ 2, precomputed per class representative.
fn factorization_samples(groups: &[&dyn Realization]) -> Vec<(usize, ElemId, Vec<Vec<usize>>)> {
    let mut out = Vec::new();
    for (k, real) in groups.iter().enumerate() {
        for g in pqc_reps(*real) {
            if real.group().length(g) >= 2 {
                let sets = enumerate_rgs(*real, g).expect("rgs").into_iter().map(|r| r.reflections).collect();
                out.push((k, g, sets));
            }
        }
    }
    out
}

fn prop_factorization_independence(rng: &mut ChaCha8Rng) -> Result<(), String> {
    // Well-generated only: G(4,2,2) has no quasi-Coxeter theory.
    let owned_w: Vec<WreathGroup> =
        small_wreaths().into_iter().filter(|w| classify_pqc(w, w.group().identity()).is_ok()).collect();
    let orbit = [preset("B2"), preset("A3"), preset("B3")];
    let groups: Vec<&dyn Realization> =
        owned_w.iter().map(|w| w as &dyn Realization).chain(orbit.iter().map(|o| o as &dyn Realization)).collect();
    let samples = factorization_samples(&groups);
    for case in 0..CASES {
        let (k, g, sets) = samples.choose(rng).expect("samples");
        let real = groups[*k];
        let set = sets.choose(rng).expect("nonempty RGS");
        let reds = reduced_factorizations(real.group(), *g);
        let reference = gd_ratio(real, &canonical_factorization(real.group(), *g), set);
        for red in reds.choose_multiple(rng, 8) {
            ensure!(
                gd_ratio(real, red, set) == reference,
                "case {case}: {} {} ratio depends on factorization",
                real.label(),
                real.element_text(*g)
            );
        }
    }
    Ok(())
}

fn prop_conjugation(rng: &mut ChaCha8Rng) -> Result<(), String> {
    let owned_w = [wreath(3, 1, 2), wreath(4, 4, 2), wreath(3, 3, 3), wreath(2, 1, 3)];
    let orbit = [preset("A3"), preset("B3"), preset("I2(5)")];
    let groups: Vec<&dyn Realization> =
        owned_w.iter().map(|w| w as &dyn Realization).chain(orbit.iter().map(|o| o as &dyn Realization)).collect();
    let pools: Vec<Vec<ElemId>> = groups.iter().map(|r| pqc_elements(*r)).collect();
    for case in 0..CASES {
        let k = rng.gen_range(0..groups.len());
        let real = groups[k];
        let g = *pools[k].choose(rng).expect("pqc elements");
        let u = rng.gen_range(0..real.group().order()) as ElemId;
        let h = real.group().conjugate(g, u);
        let a = main_theorem(real, g).map_err(|e| e.to_string())?;
        let b = main_theorem(real, h).map_err(|e| e.to_string())?;
        ensure!(
            a.complex == b.complex,
            "case {case}: {} {} vs conjugate: {} vs {}",
            real.label(),
            real.element_text(g),
            a.complex,
            b.complex
        );
    }
    Ok(())
}

/// Product groups W₁×W₂ built from explicit simple roots.
fn product_groups() -> Vec<Box<dyn Realization>> {
    let coords = |label: &str, v: Vec<Vec<f64>>| -> Box<dyn Realization> {
        Box::new(OrbitGroup::build(RootDatum::from_coordinates(label, &v).expect("datum")).expect("group"))
    };
    vec![
        Box::new(wreath(2, 2, 2)),
        coords("A1xA1", vec![vec![1.0, -1.0], vec![1.0, 1.0]]),
        coords(
            "A1xA2",
            vec![vec![1.0, -1.0, 0.0, 0.0, 0.0], vec![0.0, 0.0, 1.0, -1.0, 0.0], vec![0.0, 0.0, 0.0, 1.0, -1.0]],
        ),
        coords("A1xB2", vec![vec![2f64.sqrt(), 0.0, 0.0], vec![0.0, 1.0, -1.0], vec![0.0, 0.0, 1.0]]),
    ]
}

fn factor_sum(real: &dyn Realization, sub: &whurwitz::lattice::ReflectionSubgroup, h: ElemId) -> Option<GdValue> {
    let red = reduced_within(real.group(), sub.mask, h)?;
    rgs_within(real.group(), sub, h).iter().map(|s| gd_ratio(real, &red, s)).reduce(|a, b| a.add(&b))
}

fn close(a: &GdValue, b: &GdValue) -> bool {
    match (a, b) {
        (GdValue::Exact(x), GdValue::Exact(y)) => x == y,
        _ => (a.to_f64() - b.to_f64()).abs() < 1e-9 * (1.0 + a.to_f64().abs()),
    }
}

fn prop_multiplicativity(rng: &mut ChaCha8Rng) -> Result<(), String> {
    let groups = product_groups();
    let oracles: Vec<Oracle> = groups.iter().map(|g| Oracle::new(g.as_ref()).expect("oracle")).collect();
    let pools: Vec<Vec<ElemId>> = groups.iter().map(|r| pqc_elements(r.as_ref())).collect();
    for case in 0..CASES {
        let k = rng.gen_range(0..groups.len());
        let (real, oracle) = (groups[k].as_ref(), &oracles[k]);
        let group = real.group();
        let comps = irreducible_components(group, group.all_reflections());
        ensure!(comps.len() == 2, "{} has {} irreducible components", real.label(), comps.len());
        let subs: Vec<_> =
            comps.iter().map(|&c| oracle.lattice().index_of(c).expect("component is a subgroup")).collect();
        let g = *pools[k].choose(rng).expect("pqc elements");
        let first = group.closure(comps[0]).1;
        let second = group.closure(comps[1]).1;
        let (g1, g2) = first
            .iter()
            .map(|a| a as ElemId)
            .find_map(|a| {
                let b = group.mul(group.inv(a), g);
                second.contains(b as usize).then_some((a, b))
            })
            .ok_or_else(|| format!("{}: element does not split", real.label()))?;
        let parts = [(subs[0], g1), (subs[1], g2)];
        // Σ over RGS(W, g) factors as the product of the factor sums.
        let whole = gd_sum(&enumerate_rgs(real, g).map_err(|e| e.to_string())?).ok_or("empty RGS")?;
        let s1 = factor_sum(real, oracle.lattice().get(parts[0].0), g1).ok_or("empty factor RGS")?;
        let s2 = factor_sum(real, oracle.lattice().get(parts[1].0), g2).ok_or("empty factor RGS")?;
        ensure!(close(&whole.ratio(&s1), &s2), "case {case}: {} sum does not factor", real.label());
        // Fred and F^full shuffle together.
        let lr = |h: ElemId| group.length(h) as u64;
        let fred = |h: ElemId, s: usize| {
            count_tuples(group, h, group.length(h), oracle.lattice().get(s).mask).expect("counts")
        };
        let whole_fred = fred(g, oracle.lattice().top());
        let shuffled =
            factorial(lr(g)) / (factorial(lr(g1)) * factorial(lr(g2))) * fred(g1, subs[0]) * fred(g2, subs[1]);
        ensure!(whole_fred == shuffled, "case {case}: Fred not multiplicative");
        let (l, f) = oracle.ffull(g).ok_or("no full factorization")?;
        let (l1, f1) = oracle.ffull_within(subs[0], g1).ok_or("no factor full factorization")?;
        let (l2, f2) = oracle.ffull_within(subs[1], g2).ok_or("no factor full factorization")?;
        ensure!(l == l1 + l2, "case {case}: ltr not additive");
        let full = factorial(l as u64) / (factorial(l1 as u64) * factorial(l2 as u64)) * f1 * f2;
        ensure!(f == full, "case {case}: F^full not multiplicative");
    }
    Ok(())
}

fn c10_invariance() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let groups = small_wreaths();
    prop_scaling(&mut rng, &groups).map_err(|e| format!("scaling: {e}"))?;
    prop_hurwitz_move(&mut rng, &groups).map_err(|e| format!("Hurwitz move: {e}"))?;
    prop_factorization_independence(&mut rng).map_err(|e| format!("factorization independence: {e}"))?;
    prop_conjugation(&mut rng).map_err(|e| format!("conjugation: {e}"))?;
    prop_multiplicativity(&mut rng).map_err(|e| format!("multiplicativity: {e}"))?;
    Ok(format!("5 properties × {CASES} cases"))
}

fn c11_poset() -> Outcome {
    let b2 = preset("B2");
    let group = b2.group();
    let oracle = Oracle::new(&b2).map_err(|e| e.to_string())?;
    let p = prefix_poset(&oracle).map_err(|e| e.to_string())?;
    ensure!(p.chain_count == BigInt::from(48), "{} maximal chains", p.chain_count);
    ensure!(p.lemma_holds, "prefix lemma fails on some node");
    let mid = p.elements_at(b2.rank());
    let simple = b2.simple_system(group.all_reflections());
    let c = group.product(&simple);
    let reversed: Vec<usize> = simple.iter().rev().copied().collect();
    let c2 = group.product(&reversed);
    let longest = (0..group.order() as ElemId).find(|&x| b2.fixed_space_dim(x) == 0 && group.element_order(x) == 2);
    ensure!(c != c2, "Coxeter elements coincide");
    ensure!(mid.contains(&c) && mid.contains(&c2), "middle rank misses a Coxeter element");
    ensure!(longest.is_some_and(|w0| mid.contains(&w0)), "middle rank misses the longest element");
    Ok(format!("48 chains, rank sizes {:?}", p.ranks.iter().map(Vec::len).collect::<Vec<_>>()))
}

fn c12_hurwitz_transitivity() -> Outcome {
    let groups: Vec<Box<dyn Realization>> =
        vec![Box::new(wreath(1, 1, 4)), Box::new(preset("B2")), Box::new(preset("B3")), Box::new(wreath(3, 3, 3))];
    let mut checked = 0;
    for real in &groups {
        let real = real.as_ref();
        let group = real.group();
        for g in pqc_elements(real).into_iter().filter(|&g| group.length(g) == real.rank()) {
            let orbit =
                hurwitz_orbit(group, &canonical_factorization(group, g), 1_000_000).map_err(|e| e.to_string())?;
            let all: BTreeSet<Vec<usize>> = reduced_factorizations(group, g).into_iter().collect();
            ensure!(orbit == all, "{} {}: orbit {} of {}", real.label(), real.element_text(g), orbit.len(), all.len());
            checked += 1;
        }
    }
    Ok(format!("{checked} quasi-Coxeter elements"))
}

struct Criterion {
    id: u32,
    name: &'static str,
    limit: Option<Duration>,
    run: fn() -> Outcome,
}

fn main() {
    let cache = tempfile::tempdir().expect("temporary cache directory");
    std::env::set_var("WHURWITZ_CACHE_DIR", cache.path());
    let secs = |s| Some(Duration::from_secs(s));
    let criteria = [
        Criterion { id: 1, name: "symmetric baseline", limit: secs(5), run: c1_symmetric_baseline },
        Criterion { id: 2, name: "Hurwitz formula", limit: secs(30), run: c2_hurwitz_formula },
        Criterion { id: 3, name: "Weyl identity case", limit: None, run: c3_weyl_identity },
        Criterion { id: 4, name: "complex main theorem", limit: secs(120), run: c4_complex_main_theorem },
        Criterion { id: 5, name: "H3 headline", limit: secs(60), run: c5_h3_headline },
        Criterion { id: 6, name: "closed-form suite", limit: None, run: c6_prop_formulas },
        Criterion { id: 7, name: "RGS counts", limit: None, run: c7_rgs_counts },
        Criterion { id: 8, name: "cut-and-join", limit: secs(120), run: c8_cutjoin },
        Criterion { id: 9, name: "root-of-unity and Chebyshev identities", limit: None, run: c9_identities },
        Criterion { id: 10, name: "invariance properties", limit: None, run: c10_invariance },
        Criterion { id: 11, name: "prefix poset", limit: None, run: c11_poset },
        Criterion { id: 12, name: "Hurwitz transitivity", limit: None, run: c12_hurwitz_transitivity },
    ];
    let mut failed = 0;
    for c in &criteria {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(c.run)).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        let result = match (result, c.limit) {
            (Ok(_), Some(limit)) if elapsed > limit => Err(format!("took {elapsed:.2?}, limit {limit:?}")),
            (r, _) => r,
        };
        match result {
            Ok(detail) => println!("PASS criterion {:>2} {} ({elapsed:.2?}): {detail}", c.id, c.name),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {:>2} {} ({elapsed:.2?}): {why}", c.id, c.name);
            }
        }
    }
    println!("{} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
