//! Classical numerical invariants, basic-class counting and the generalized
//! Noether bound.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use num_rational::Ratio;
use serde::Serialize;

use crate::error::Result;
use crate::model::FourManifoldModel;
use crate::scalar::Int;
use crate::swseries::{sst_check, VanishingOrder};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct NumericalInvariants {
    #[serde(serialize_with = "ratio_as_string")]
    pub chi_h: Ratio<i64>,
    pub c1sq: i64,
    pub euler: i64,
    pub signature: i64,
}

fn ratio_as_string<S: serde::Serializer>(r: &Ratio<i64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(r)
}

pub fn numerical_invariants<I: Int>(m: &FourManifoldModel<I>) -> NumericalInvariants {
    let euler = m.euler();
    let signature = m.signature();
    let c1sq = 2 * euler + 3 * signature;
    let b_form = 4 - 4 * m.b1 as i64 + 5 * m.b2plus as i64 - m.b2minus as i64;
    assert_eq!(c1sq, b_form, "c1^2 forms disagree for {}", m.name);
    let chi_h = Ratio::new(euler + signature, 4);
    assert_eq!(chi_h, Ratio::new(1 - m.b1 as i64 + m.b2plus as i64, 2));
    NumericalInvariants {
        chi_h,
        c1sq,
        euler,
        signature,
    }
}

/// Number of basic classes modulo `x -> -x`; the zero class counts once.
pub fn count_basic_classes<I: Int>(m: &FourManifoldModel<I>) -> usize {
    let mut orbits = BTreeSet::new();
    for x in m.basic_classes.keys() {
        let nx = x.neg();
        orbits.insert(if nx < *x { nx } else { x.clone() });
    }
    orbits.len()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GeographyRecord {
    pub name: String,
    #[serde(serialize_with = "ratio_as_string")]
    pub chi_h: Ratio<i64>,
    pub c1sq: i64,
    pub b: usize,
    pub required_order: i64,
    pub actual_order: VanishingOrder,
    pub is_sst: bool,
    /// `B = 0` or `B >= floor((chi_h - c1^2)/2)`.
    pub bound_satisfied: bool,
    /// `B = 0` or `c1^2 >= chi_h - 2B - 1`.
    pub corollary_satisfied: bool,
}

impl GeographyRecord {
    pub fn noether_floor(&self) -> i64 {
        ((self.chi_h - self.c1sq) / 2).floor().to_integer()
    }

    pub fn is_violation(&self) -> bool {
        !(self.is_sst && self.bound_satisfied && self.corollary_satisfied)
    }
}

pub fn count_b_and_bound<I: Int>(m: &FourManifoldModel<I>) -> Result<GeographyRecord> {
    let inv = numerical_invariants(m);
    let b = count_basic_classes(m);
    let verdict = sst_check(m)?;
    let floor = ((inv.chi_h - inv.c1sq) / 2).floor().to_integer();
    let bound_satisfied = b == 0 || b as i64 >= floor;
    let corollary_satisfied =
        b == 0 || Ratio::from_integer(inv.c1sq) >= inv.chi_h - 2 * b as i64 - 1;
    Ok(GeographyRecord {
        name: m.name.clone(),
        chi_h: inv.chi_h,
        c1sq: inv.c1sq,
        b,
        required_order: verdict.required_order,
        actual_order: verdict.actual_order,
        is_sst: verdict.is_sst,
        bound_satisfied,
        corollary_satisfied,
    })
}

#[derive(Clone, Debug, Default)]
pub struct GeographyReport {
    pub records: Vec<GeographyRecord>,
    /// Models that could not be assessed, with the reason.
    pub failures: Vec<(String, String)>,
}

impl GeographyReport {
    pub fn has_violation(&self) -> bool {
        !self.failures.is_empty() || self.records.iter().any(|r| r.is_violation())
    }

    pub const CSV_HEADER: &'static str = "name,chi_h,c1sq,B,order,sst,bound";

    /// Scatter dataset in the `(chi_h, c1^2)` plane.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(Self::CSV_HEADER);
        out.push('\n');
        for r in &self.records {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{}",
                csv_field(&r.name),
                r.chi_h,
                r.c1sq,
                r.b,
                r.actual_order,
                r.is_sst,
                r.bound_satisfied && r.corollary_satisfied
            );
        }
        out
    }

    pub fn to_table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{:<28} {:>6} {:>6} {:>4} {:>9} {:>7} {:>5} {:>6}",
            "name", "chi_h", "c1^2", "B", "required", "order", "sst", "bound"
        );
        for r in &self.records {
            let _ = writeln!(
                out,
                "{:<28} {:>6} {:>6} {:>4} {:>9} {:>7} {:>5} {:>6}",
                r.name,
                r.chi_h.to_string(),
                r.c1sq,
                r.b,
                r.required_order,
                r.actual_order.to_string(),
                r.is_sst,
                r.bound_satisfied && r.corollary_satisfied
            );
        }
        for (name, why) in &self.failures {
            let _ = writeln!(out, "{name}: not assessed: {why}");
        }
        out
    }
}

fn csv_field(s: &str) -> String {
    if s.contains(',') || s.contains('"') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// One record per model, sorted by name so the report does not depend on the
/// input order.
pub fn geography_report<I: Int>(models: &[FourManifoldModel<I>]) -> GeographyReport {
    let mut rep = GeographyReport::default();
    for m in models {
        match count_b_and_bound(m) {
            Ok(r) => rep.records.push(r),
            Err(e) => rep.failures.push((m.name.clone(), e.to_string())),
        }
    }
    rep.records.sort_by(|a, b| {
        a.name
            .cmp(&b.name)
            .then(a.chi_h.cmp(&b.chi_h))
            .then(a.c1sq.cmp(&b.c1sq))
            .then(a.b.cmp(&b.b))
    });
    rep.failures.sort();
    rep
}
