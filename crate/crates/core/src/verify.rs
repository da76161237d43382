//! Per-class verification matrix: every closed form next to its brute-force oracle.

use rayon::prelude::*;
use serde::Serialize;

use crate::closed_forms::{ffull_closed_form, hurwitz_number, Partition};
use crate::error::Result;
use crate::gram::{fred_bruteforce, main_theorem_rhs};
use crate::lattice::Oracle;
use crate::parabolic::{classify_pqc, fred_formula};
use crate::perm_group::ElemId;
use crate::realization::Realization;
use crate::rgs::{count_rgs_formula, enumerate_rgs, enumerate_rgs_graph};

/// Counts are decimal strings; rationals print as "p/q".
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerificationRow {
    pub group: String,
    pub representative: String,
    pub case_tag: String,
    pub lr: usize,
    pub ltr: Option<usize>,
    pub fred_bruteforce: String,
    pub fred_formula: Option<String>,
    pub ffull_bruteforce: Option<String>,
    pub ffull_prop_formula: Option<String>,
    pub main_thm_rhs: Option<String>,
    pub main_thm_weyl_rhs: Option<String>,
    pub rgs_count_search: Option<String>,
    pub rgs_count_graph: Option<String>,
    pub rgs_count_formula: Option<String>,
    #[serde(rename = "match")]
    pub matched: bool,
}

impl VerificationRow {
    pub const COLUMNS: [&'static str; 15] = [
        "group",
        "representative",
        "case_tag",
        "lr",
        "ltr",
        "fred_bruteforce",
        "fred_formula",
        "ffull_bruteforce",
        "ffull_prop_formula",
        "main_thm_rhs",
        "main_thm_weyl_rhs",
        "rgs_count_search",
        "rgs_count_graph",
        "rgs_count_formula",
        "match",
    ];

    /// Cells in [`Self::COLUMNS`] order; absent values are empty.
    pub fn cells(&self) -> Vec<String> {
        let o = |x: &Option<String>| x.clone().unwrap_or_default();
        vec![
            self.group.clone(),
            self.representative.clone(),
            self.case_tag.clone(),
            self.lr.to_string(),
            self.ltr.map(|l| l.to_string()).unwrap_or_default(),
            self.fred_bruteforce.clone(),
            o(&self.fred_formula),
            o(&self.ffull_bruteforce),
            o(&self.ffull_prop_formula),
            o(&self.main_thm_rhs),
            o(&self.main_thm_weyl_rhs),
            o(&self.rgs_count_search),
            o(&self.rgs_count_graph),
            o(&self.rgs_count_formula),
            self.matched.to_string(),
        ]
    }

    fn compute_match(&self) -> bool {
        let agree = |group: &[&Option<String>]| {
            let present: Vec<&String> = group.iter().filter_map(|x| x.as_ref()).collect();
            present.windows(2).all(|w| w[0] == w[1])
        };
        let fred = Some(self.fred_bruteforce.clone());
        agree(&[&fred, &self.fred_formula])
            && agree(&[&self.ffull_bruteforce, &self.ffull_prop_formula, &self.main_thm_rhs, &self.main_thm_weyl_rhs])
            && agree(&[&self.rgs_count_search, &self.rgs_count_graph, &self.rgs_count_formula])
    }
}

/// Closed-form F^full(g) where one exists: the wreath formulas, or H₀(λ) for 𝔖_n.
pub fn prop_formula(real: &dyn Realization, g: ElemId) -> Option<String> {
    let w = real.as_wreath()?;
    let spec = w.spec();
    let data = w.element(g).cycle_data(spec);
    let value = if spec.m == 1 {
        let lambda = Partition::new(data.cycles.iter().map(|c| c.len() as u64).collect()).ok()?;
        hurwitz_number(0, &lambda).ok()?
    } else {
        ffull_closed_form(spec, &data).ok()?
    };
    Some(value.to_string())
}

/// One row for the class of g. `oracle` is optional so that groups beyond
/// the lattice ceiling still get their search and formula columns.
pub fn verification_row(real: &dyn Realization, oracle: Option<&Oracle>, g: ElemId) -> Result<VerificationRow> {
    let class = classify_pqc(real, g)?;
    let lr = real.group().length(g);
    let ffull = oracle.and_then(|o| o.ffull(g));
    let mut row = VerificationRow {
        group: real.label(),
        representative: real.element_text(g),
        case_tag: class.case_tag.label().to_string(),
        lr,
        ltr: ffull.as_ref().map(|(l, _)| *l),
        fred_bruteforce: fred_bruteforce(real, g).to_string(),
        fred_formula: fred_formula(&class).map(|f| f.to_string()),
        ffull_bruteforce: ffull.map(|(_, c)| c.to_string()),
        ffull_prop_formula: prop_formula(real, g),
        main_thm_rhs: None,
        main_thm_weyl_rhs: None,
        rgs_count_search: None,
        rgs_count_graph: None,
        rgs_count_formula: None,
        matched: false,
    };
    if class.case_tag.is_pqc() {
        let records = enumerate_rgs(real, g)?;
        let rhs = main_theorem_rhs(real, g, &records)?;
        row.ltr.get_or_insert(rhs.ltr);
        row.main_thm_rhs = Some(rhs.complex.to_string());
        row.main_thm_weyl_rhs = rhs.weyl.map(|x| x.to_string());
        row.rgs_count_search = Some(records.len().to_string());
        if let Some(w) = real.as_wreath() {
            row.rgs_count_graph = Some(enumerate_rgs_graph(w, &class, g)?.len().to_string());
            row.rgs_count_formula = Some(count_rgs_formula(w.spec(), &class)?.to_string());
        }
    }
    row.matched = row.compute_match();
    Ok(row)
}

/// Rows for all classes (or only the pqc ones), ordered by lR then representative text.
pub fn verification_matrix(
    real: &dyn Realization,
    oracle: Option<&Oracle>,
    all_classes: bool,
) -> Result<Vec<VerificationRow>> {
    let reps: Vec<ElemId> = real.group().conjugacy_classes().into_iter().map(|c| c[0]).collect();
    let rows: Vec<Option<VerificationRow>> = reps
        .par_iter()
        .map(|&g| {
            let row = verification_row(real, oracle, g)?;
            Ok((all_classes || row.case_tag != "not-pqc").then_some(row))
        })
        .collect::<Result<_>>()?;
    let mut rows: Vec<VerificationRow> = rows.into_iter().flatten().collect();
    rows.sort_by(|a, b| a.lr.cmp(&b.lr).then_with(|| a.representative.cmp(&b.representative)));
    Ok(rows)
}
