use crate::algebra::Decision;
use crate::arith::Point;
use crate::gasket::LatticeTriangle;
use crate::similitude::{Ifs, Similitude};

use super::base_case::{verify_base_case, BaseCaseRecord};
use super::geometry::{
    check_constants, check_geometry, derive_geometry, induction_arithmetic, Derivation, GeometryMarks, GeometryReport,
};
use super::ifs::{find_ifs, verify_attractor};
use super::{Comparison, VerifyOptions, WitnessTally};

pub const CERT_SCHEMA: &str = "gasket-cert/1";

#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct OptionsRecord {
    pub depth_budget: u32,
    pub max_m: u32,
    pub seed: u64,
    pub sample_per_mille: u32,
    pub ifs_max_scale: i32,
    pub sabotage: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct GeometrySection {
    pub marks: GeometryMarks,
    pub derivation: Derivation,
    pub report: GeometryReport,
}

#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct NestingLink {
    pub k: u32,
    pub outer: LatticeTriangle,
    pub inner: LatticeTriangle,
    pub decision: Decision,
}

#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct InductionSection {
    pub comparisons: Vec<Comparison>,
    pub structural_steps: Vec<String>,
}

/// The closing argument: `tri_678 ∩ E` is nonempty, while the base cases
/// and the induction give `T^K(tri_678) ∩ E = ∅` for `K` the largest
/// recorded power.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct ContradictionSection {
    pub meets_witness: Option<Point>,
    pub k_max: u32,
    pub schema: String,
}

#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct ControlRecord {
    pub n: u32,
    pub source: String,
    pub exact_cover: bool,
    pub maps: Vec<Similitude>,
    pub decision: Decision,
}

#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct BoundedSearchRecord {
    pub n: u32,
    pub max_scale: i32,
    pub found: bool,
    pub conclusive: bool,
    pub note: String,
}

#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct Certificate {
    pub schema: String,
    pub verdict: String,
    pub first_failure: Option<String>,
    pub options: OptionsRecord,
    pub geometry: Option<GeometrySection>,
    pub constant_checks: Vec<Comparison>,
    pub nesting_chain: Vec<NestingLink>,
    pub base_cases: Vec<BaseCaseRecord>,
    pub induction_arithmetic: Option<InductionSection>,
    pub contradiction: Option<ContradictionSection>,
    pub positive_controls: Vec<ControlRecord>,
    pub bounded_search: Option<BoundedSearchRecord>,
    pub witnesses: WitnessTally,
    pub inconclusive_total: usize,
    pub trusted_steps: Vec<String>,
}

impl Certificate {
    pub fn passed(&self) -> bool {
        self.verdict == "pass"
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("certificate serializes");
        s.push('\n');
        s
    }
}

fn trusted_steps() -> Vec<String> {
    vec![
        "scale localisation: any similitude f with f(E) inside E has scale 2^-m for some m >= 1 and sends the unit \
         triangle's corners into B_m; accepted from the case analysis, which is not mechanised here"
            .into(),
        "induction over m >= 7: a map with f(E) inside E and scale at most 1/80 has f(E) within 1/16 of a point, so \
         f(E) either avoids tri_678 or is handled by T^-1; the set algebra (T bijective, T(empty) = empty) is \
         structural"
            .into(),
    ]
}

/// Run every step and assemble the certificate. The run stops at the first
/// failing section; later sections stay empty.
pub fn verify_theorem(opts: &VerifyOptions) -> Certificate {
    let mut cert = Certificate {
        schema: CERT_SCHEMA.into(),
        verdict: "fail".into(),
        first_failure: None,
        options: OptionsRecord {
            depth_budget: opts.depth_budget,
            max_m: opts.max_m,
            seed: opts.seed,
            sample_per_mille: opts.sample_per_mille,
            ifs_max_scale: opts.ifs_max_scale,
            sabotage: opts.sabotage.map(|s| s.to_string()),
        },
        geometry: None,
        constant_checks: Vec::new(),
        nesting_chain: Vec::new(),
        base_cases: Vec::new(),
        induction_arithmetic: None,
        contradiction: None,
        positive_controls: Vec::new(),
        bounded_search: None,
        witnesses: WitnessTally::default(),
        inconclusive_total: 0,
        trusted_steps: trusted_steps(),
    };
    if let Err(section) = run(opts, &mut cert) {
        cert.first_failure = Some(section);
        return cert;
    }
    cert.verdict = "pass".into();
    cert
}

fn run(opts: &VerifyOptions, cert: &mut Certificate) -> Result<(), String> {
    let budget = opts.depth_budget;
    let (mut marks, derivation) = derive_geometry().map_err(|e| format!("geometry: {e}"))?;
    if let Some(s) = opts.sabotage {
        marks.apply(s);
    }
    let report = check_geometry(&marks, budget);
    cert.witnesses.merge(&report.witnesses);
    let geometry_ok = report.holds() && report.witnesses.all_verified();
    let failing = report.checks.iter().find(|c| !c.holds).map(|c| c.name.clone());
    cert.geometry = Some(GeometrySection { marks: marks.clone(), derivation, report: report.clone() });
    if !geometry_ok {
        return Err(format!("geometry: {}", failing.unwrap_or_else(|| "witness re-verification".into())));
    }

    cert.constant_checks = check_constants(&marks, &report);
    if let Some(c) = cert.constant_checks.iter().find(|c| !c.holds) {
        return Err(format!("constant_checks: {}", c.name));
    }

    let t = Similitude::t_map();
    for k in 1..=8 {
        let outer = marks.tri_678.image(&t.pow(k));
        let inner = marks.tri_678.image(&t.pow(k + 1));
        let decision = match inner.vertices().iter().find(|v| !outer.contains_lattice(v)) {
            None => Decision::holds(0),
            Some(v) => Decision::fails(v.to_point(), 0),
        };
        cert.nesting_chain.push(NestingLink { k, outer, inner, decision });
    }
    if let Some(l) = cert.nesting_chain.iter().find(|l| !l.decision.is_holds()) {
        return Err(format!("nesting_chain: k = {}", l.k));
    }

    for m in 1..=opts.max_m {
        let rec = verify_base_case(m, &marks.tri_678, budget, opts.seed, opts.sample_per_mille);
        cert.witnesses.merge(&rec.witnesses);
        cert.inconclusive_total += rec.inconclusive;
        let ok = rec.holds();
        cert.base_cases.push(rec);
        if !ok {
            return Err(format!("base_cases: m = {m}"));
        }
    }

    let comparisons = induction_arithmetic(&marks);
    let induction_ok = comparisons.iter().all(|c| c.holds);
    cert.induction_arithmetic = Some(InductionSection { comparisons, structural_steps: trusted_steps()[1..].to_vec() });
    if !induction_ok {
        return Err("induction_arithmetic".into());
    }

    let k_max = cert.base_cases.iter().flat_map(|b| b.k_report.iter().map(|e| e.k)).max().unwrap_or(0);
    cert.contradiction = Some(ContradictionSection {
        meets_witness: report.meets_witness.clone(),
        k_max,
        schema: "tri_678 meets E; T^K(tri_678 ∩ E) is nonempty and lies in E by nesting, contradicting \
                 T^K(tri_678) ∩ E = ∅"
            .into(),
    });

    let mut controls = vec![control(1, "three corner maps", &Ifs::sierpinski(), false, budget)];
    for n in 2..=4 {
        let search = find_ifs(n, opts.ifs_max_scale);
        match &search.ifs {
            Some(ifs) => controls.push(control(n, "cover search", ifs, search.exact_cover, budget)),
            None => {
                cert.positive_controls = controls;
                return Err(format!("positive_controls: n = {n}: {}", search.note));
            }
        }
    }
    cert.inconclusive_total += controls.iter().filter(|c| c.decision.is_inconclusive()).count();
    let bad = controls.iter().find(|c| !c.decision.is_holds()).map(|c| c.n);
    cert.positive_controls = controls;
    if let Some(n) = bad {
        return Err(format!("positive_controls: n = {n}"));
    }

    let search = find_ifs(5, opts.ifs_max_scale);
    cert.bounded_search = Some(BoundedSearchRecord {
        n: 5,
        max_scale: search.max_scale,
        found: search.ifs.is_some(),
        conclusive: false,
        note: search.note,
    });

    if cert.inconclusive_total > 0 {
        return Err("inconclusive decisions".into());
    }
    if !cert.witnesses.all_verified() {
        return Err("witness re-verification".into());
    }
    Ok(())
}

fn control(n: u32, source: &str, ifs: &Ifs, exact_cover: bool, budget: u32) -> ControlRecord {
    ControlRecord {
        n,
        source: source.into(),
        exact_cover,
        maps: ifs.maps().to_vec(),
        decision: verify_attractor(ifs, n, budget),
    }
}
