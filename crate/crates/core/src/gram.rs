//! Both right-hand sides of the main counting theorem.
//!
//! Complex form: ltr!·Π Fred(g_i)/lR(g_i)!·Σ_S GD(ρ_g)/GD(ρ_S ∪ ρ_g).
//! Weyl form:    ltr!·Π Fred(g_i)/lR(g_i)!·#RGS·I(W_g)/I(W).
//! The product over generalized cycles equals Fred(g)/lR(g)! by multinomial
//! recombination, which is how it is evaluated here.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::closed_forms::arith::factorial;
use crate::error::{Error, Result};
use crate::lattice::count_tuples;
use crate::parabolic::{canonical_factorization, classify_pqc, fred_formula, parabolic_closure};
use crate::perm_group::ElemId;
use crate::realization::{rationalize, GdValue, Realization};
use crate::rgs::{self, RgsRecord};

/// Tolerance for accepting a float Grammian sum as rational.
pub const FLOAT_SUM_TOL: f64 = 1e-6;

#[derive(Clone, Debug)]
pub struct MainRhs {
    pub lr: usize,
    pub ltr: usize,
    /// Fred(g), from the closed form when every factor has one.
    pub fred: BigInt,
    pub fred_from_formula: bool,
    pub rgs_count: usize,
    /// Σ_S GD(ρ_g)/GD(ρ_S ∪ ρ_g) as a rational (snapped on the float path).
    pub gd_sum: BigRational,
    /// Raw float value of the sum on the float path.
    pub gd_sum_float: f64,
    pub complex: BigRational,
    pub weyl: Option<BigRational>,
    pub histogram: BTreeMap<String, usize>,
}

/// Number of reduced reflection factorizations, by walk counting.
pub fn fred_bruteforce(real: &dyn Realization, g: ElemId) -> BigInt {
    let group = real.group();
    count_tuples(group, g, group.length(g), group.all_reflections()).expect("g lies in the group")
}

pub fn gd_ratio(real: &dyn Realization, red: &[usize], set: &[usize]) -> GdValue {
    let all: Vec<usize> = set.iter().chain(red).copied().collect();
    real.gd(red).ratio(&real.gd(&all))
}

fn exact_value(v: &GdValue) -> Result<(BigRational, f64)> {
    match v {
        GdValue::Exact(x) => x
            .to_rational()
            .map(|q| (q, x.to_complex().0))
            .ok_or_else(|| Error::Unsupported("Grammian sum is not rational".into())),
        GdValue::Float(x) => rationalize(*x, FLOAT_SUM_TOL)
            .map(|q| (q, *x))
            .ok_or_else(|| Error::Unsupported(format!("float Grammian sum {x} is not near a small rational"))),
    }
}

/// I(W_g)/I(W), for Weyl realizations.
pub fn connection_ratio(real: &dyn Realization, g: ElemId) -> Option<BigRational> {
    let w = real.weyl()?;
    let top = w.connection_index(real.group().all_reflections());
    Some(BigRational::new(w.connection_index(parabolic_closure(real, g)), top))
}

/// Evaluates both forms from a list of relative generating sets of g.
pub fn main_theorem_rhs(real: &dyn Realization, g: ElemId, records: &[RgsRecord]) -> Result<MainRhs> {
    let class = classify_pqc(real, g)?;
    if !class.case_tag.is_pqc() {
        return Err(Error::NotPqc);
    }
    let lr = real.group().length(g);
    let ltr = 2 * real.rank() - lr;
    let (fred, fred_from_formula) = match fred_formula(&class) {
        Some(f) => (f, true),
        None => (fred_bruteforce(real, g), false),
    };
    let pre = BigRational::new(factorial(ltr as u64) * &fred, factorial(lr as u64));
    let sum = rgs::gd_sum(records).ok_or_else(|| Error::Unsupported("RGS(W, g) is empty".into()))?;
    let (gd_sum, gd_sum_float) = exact_value(&sum)?;
    let complex = &pre * &gd_sum;
    let weyl = connection_ratio(real, g).map(|r| &pre * BigRational::from_integer(BigInt::from(records.len())) * r);
    Ok(MainRhs {
        lr,
        ltr,
        fred,
        fred_from_formula,
        rgs_count: records.len(),
        gd_sum,
        gd_sum_float,
        complex,
        weyl,
        histogram: rgs::key_histogram(records),
    })
}

/// [`main_theorem_rhs`] on the exhaustive-search RGS list.
pub fn main_theorem(real: &dyn Realization, g: ElemId) -> Result<MainRhs> {
    let records = rgs::enumerate_rgs(real, g)?;
    main_theorem_rhs(real, g, &records)
}

/// Every summand equals I(W_g)/I(W) (Weyl realizations only).
pub fn weyl_summands_constant(real: &dyn Realization, g: ElemId, records: &[RgsRecord]) -> Option<bool> {
    let target = connection_ratio(real, g)?;
    Some(records.iter().all(|r| exact_value(&r.gd_ratio).is_ok_and(|(q, _)| q == target)))
}

/// GD(ρ_g)/GD(ρ_S ∪ ρ_g) for each reduced factorization of g; all should agree.
pub fn ratios_over_factorizations(
    real: &dyn Realization,
    set: &[usize],
    factorizations: &[Vec<usize>],
) -> Vec<GdValue> {
    factorizations.iter().map(|red| gd_ratio(real, red, set)).collect()
}

/// The canonical-factorization ratio, for reuse by callers holding an RGS.
pub fn canonical_ratio(real: &dyn Realization, g: ElemId, set: &[usize]) -> GdValue {
    gd_ratio(real, &canonical_factorization(real.group(), g), set)
}
