use num_rational::BigRational;

use crate::algebra::{
    distance_to_union, triangle_in_triangle, triangle_meets_union, witness_meets, Verdict, DEFAULT_DEPTH_BUDGET,
};
use crate::arith::{pow2, Point, Sign, Surd};
use crate::error::VerifyError;
use crate::gasket::{build_e, LatticeTriangle};
use crate::similitude::Similitude;

use super::{Comparison, Sabotage, WitnessTally};

fn ser_display<T: std::fmt::Display, S: serde::Serializer>(v: &T, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(v)
}

/// The marked points, their triangles, and the separation constants as
/// quoted. Computed values are kept apart (see [`GeometryReport`]) so that a
/// wrongly quoted constant is caught by the constant checks.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct GeometryMarks {
    pub p1: Point,
    pub p2: Point,
    pub p3: Point,
    pub p4: Point,
    pub p5: Point,
    pub p6: Point,
    pub p7: Point,
    pub p8: Point,
    pub tri_123: LatticeTriangle,
    pub tri_145: LatticeTriangle,
    pub tri_678: LatticeTriangle,
    pub const_diam_sq: Surd,
    pub const_gap_sq: Surd,
    #[serde(serialize_with = "ser_display")]
    pub const_k_bound: BigRational,
    #[serde(serialize_with = "ser_display")]
    pub const_diam_bound: BigRational,
}

impl GeometryMarks {
    pub fn apply(&mut self, sabotage: Sabotage) {
        let pt = |s: &str| s.parse::<Point>().expect("sabotage point");
        match sabotage {
            Sabotage::P4 => self.p4 = pt("(1/4, 0)"),
            Sabotage::P5 => self.p5 = pt("(3/4, 1/2*sqrt3)"),
            Sabotage::P6 => self.p6 = pt("(5/16, 1/4*sqrt3)"),
            Sabotage::P8 => self.p8 = pt("(7/16, 3/16*sqrt3)"),
            Sabotage::Gap => self.const_gap_sq = Surd::frac(1, 256, 0, 1),
            Sabotage::Diam => self.const_diam_sq = Surd::from_int(24),
            Sabotage::KBound => self.const_k_bound = BigRational::new(1.into(), 64.into()),
        }
    }
}

/// How the small triangle was located.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct Derivation {
    pub family: String,
    pub searched: usize,
    pub matches: Vec<LatticeTriangle>,
    pub unique: bool,
    pub labeling: String,
}

/// One exactly checked constraint.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct Check {
    pub name: String,
    pub holds: bool,
    pub detail: String,
}

impl Check {
    fn new(name: &str, holds: bool, detail: impl Into<String>) -> Check {
        Check { name: name.to_string(), holds, detail: detail.into() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct GeometryReport {
    pub checks: Vec<Check>,
    /// Computed squared gap, when the distance computation succeeded.
    pub gap_sq: Option<Surd>,
    pub diam_sq: Surd,
    /// Re-verified point of `tri_678 ∩ E`.
    pub meets_witness: Option<Point>,
    #[serde(skip)]
    pub witnesses: WitnessTally,
}

impl GeometryReport {
    pub fn holds(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }
}

fn quoted_gap() -> Surd {
    Surd::frac(3, 256, 0, 1)
}

/// Does `c` satisfy the constraints on the small triangle: invariant under
/// `T`, meets `E`, and at squared distance `gap_sq` from `E` with the cell
/// `tri_145` cut out (its two touch points removed)?
fn is_small_triangle(c: &LatticeTriangle, tri_145: &LatticeTriangle, removed: &[Point], gap_sq: &Surd) -> bool {
    let e = build_e(5);
    let t = Similitude::t_map();
    if !triangle_in_triangle(&c.image(&t), c) {
        return false;
    }
    if !triangle_meets_union(c, &e, DEFAULT_DEPTH_BUDGET).is_fails() {
        return false;
    }
    let Some(rest) = e.without_cell(tri_145) else {
        return false;
    };
    distance_to_union(c, &rest, removed).is_ok_and(|r| r.sq_distance == *gap_sq)
}

/// Derive the marked geometry. The unit triangle gives P1 (apex), P2, P3;
/// `T` maps it onto `tri_145`, fixing P4 = T(P1) and P5 = T(P2). The small
/// triangle is found by searching all cells of the unit triangle of depth
/// 1 to 4 for those meeting the constraints of [`is_small_triangle`].
pub fn derive_geometry() -> Result<(GeometryMarks, Derivation), VerifyError> {
    let t = Similitude::t_map();
    let unit = LatticeTriangle::unit();
    let [v0, v1, v2] = unit.vertex_points();
    let (p1, p2, p3) = (v1, v0, v2);
    let (p4, p5) = (t.apply(&p1), t.apply(&p2));
    let tri_145 = unit.image(&t);
    let removed = [p4.clone(), p5.clone()];

    let mut level = vec![unit];
    let mut searched = 0;
    let mut matches = Vec::new();
    for _ in 1..=4 {
        level = level.iter().flat_map(|c| c.children()).collect();
        searched += level.len();
        matches.extend(level.iter().filter(|c| is_small_triangle(c, &tri_145, &removed, &quoted_gap())).copied());
    }
    let tri_678 = *matches.first().ok_or_else(|| VerifyError::Geometry("no cell satisfies the constraints".into()))?;
    let [c0, c1, c2] = tri_678.vertex_points();
    let marks = GeometryMarks {
        p1,
        p2,
        p3,
        p4,
        p5,
        p6: c0,
        p7: c2,
        p8: c1,
        tri_123: unit,
        tri_145,
        tri_678,
        const_diam_sq: Surd::from_int(25),
        const_gap_sq: quoted_gap(),
        const_k_bound: BigRational::new(1.into(), 80.into()),
        const_diam_bound: BigRational::new(1.into(), 16.into()),
    };
    let derivation = Derivation {
        family: "cells of the unit triangle of side 2^-j, j = 1..4".into(),
        searched,
        unique: matches.len() == 1,
        matches,
        labeling: "P6, P7, P8 are the bottom-left, bottom-right and top corners; the order within the triple is a \
                   labeling choice and does not affect any set-level check"
            .into(),
    };
    Ok((marks, derivation))
}

fn same_vertices(tri: &LatticeTriangle, pts: [&Point; 3]) -> bool {
    let mut a: Vec<Point> = tri.vertex_points().into();
    let mut b: Vec<Point> = pts.into_iter().cloned().collect();
    let key = |p: &Point| p.to_string();
    a.sort_by_key(key);
    b.sort_by_key(key);
    a == b
}

/// Check every constraint on the marks exactly.
pub fn check_geometry(marks: &GeometryMarks, budget: u32) -> GeometryReport {
    let t = Similitude::t_map();
    let e = build_e(5);
    let mut witnesses = WitnessTally::default();
    let mut checks = Vec::new();

    let images = [t.apply(&marks.p1), t.apply(&marks.p2), t.apply(&marks.p3)];
    let want = [&marks.p4, &marks.p5, &marks.p1];
    checks.push(Check::new(
        "T maps (P1, P2, P3) to (P4, P5, P1)",
        images.iter().zip(want).all(|(a, b)| a == b),
        format!("images {}, {}, {}", images[0], images[1], images[2]),
    ));

    let labels_ok = same_vertices(&marks.tri_123, [&marks.p1, &marks.p2, &marks.p3])
        && same_vertices(&marks.tri_145, [&marks.p1, &marks.p4, &marks.p5])
        && same_vertices(&marks.tri_678, [&marks.p6, &marks.p7, &marks.p8]);
    checks.push(Check::new(
        "triangles have the labelled vertices",
        labels_ok,
        format!("tri_123 = {}, tri_145 = {}, tri_678 = {}", marks.tri_123, marks.tri_145, marks.tri_678),
    ));

    let image = marks.tri_678.image(&t);
    checks.push(Check::new(
        "T(tri_678) inside tri_678",
        triangle_in_triangle(&image, &marks.tri_678),
        format!("T(tri_678) = {image}"),
    ));

    checks.push(Check::new("tri_678 inside tri_145", triangle_in_triangle(&marks.tri_678, &marks.tri_145), ""));

    let removed = [marks.p4.clone(), marks.p5.clone()];
    let gap = e
        .without_cell(&marks.tri_145)
        .ok_or_else(|| "tri_145 is not a cell of E".to_string())
        .and_then(|rest| distance_to_union(&marks.tri_678, &rest, &removed).map_err(|err| err.to_string()));
    let gap_sq = match &gap {
        Ok(r) => {
            checks.push(Check::new(
                "tri_678 separated from closure(E - tri_145)",
                r.sq_distance.sign() == Sign::Positive,
                format!("squared distance {} between {} and {}", r.sq_distance, r.on_triangle, r.on_union),
            ));
            Some(r.sq_distance.clone())
        }
        Err(err) => {
            checks.push(Check::new("tri_678 separated from closure(E - tri_145)", false, err.clone()));
            None
        }
    };

    let meets = triangle_meets_union(&marks.tri_678, &e, budget);
    let witness_ok = meets.witness.as_ref().is_some_and(|w| witness_meets(w, &marks.tri_678, &e));
    if meets.witness.is_some() {
        witnesses.record(witness_ok);
    }
    checks.push(Check::new("tri_678 meets E", meets.verdict == Verdict::Fails && witness_ok, format!("{meets}")));

    let meets_witness = meets.witness.clone().filter(|_| witness_ok);
    GeometryReport { checks, gap_sq, diam_sq: e.sq_diameter(), meets_witness, witnesses }
}

/// Exact comparisons behind the separation argument and the induction.
pub fn check_constants(marks: &GeometryMarks, report: &GeometryReport) -> Vec<Comparison> {
    let k = &marks.const_k_bound;
    let bound = &marks.const_diam_bound;
    let mut out =
        vec![Comparison::new("diam^2(E) computed vs quoted", report.diam_sq.clone(), "=", marks.const_diam_sq.clone())];
    match &report.gap_sq {
        Some(g) => out.push(Comparison::new("gap^2 computed vs quoted", g.clone(), "=", marks.const_gap_sq.clone())),
        None => out.push(Comparison {
            name: "gap^2 computed vs quoted".into(),
            lhs: "unavailable".into(),
            relation: "=".into(),
            rhs: marks.const_gap_sq.to_string(),
            holds: false,
        }),
    }
    out.push(Comparison::new(
        "k_bound^2 * diam^2 vs diam_bound^2",
        Surd::from_rational(k * k) * &marks.const_diam_sq,
        "=",
        Surd::from_rational(bound * bound),
    ));
    out.push(Comparison::new(
        "diam_bound^2 vs gap^2",
        Surd::from_rational(bound * bound),
        "<",
        marks.const_gap_sq.clone(),
    ));
    out.extend(induction_arithmetic(marks));
    out
}

/// `2^-7 <= k_bound < 2^-6`: every scale `2^-m` with `m >= 7` is within the
/// bound, and `m <= 6` is exactly the range left to the base cases.
pub fn induction_arithmetic(marks: &GeometryMarks) -> Vec<Comparison> {
    vec![
        Comparison::new("2^-7 vs k_bound", pow2(-7), "<=", marks.const_k_bound.clone()),
        Comparison::new("2^-6 vs k_bound", pow2(-6), ">", marks.const_k_bound.clone()),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derived_points() {
        let (m, d) = derive_geometry().unwrap();
        let pt = |s: &str| s.parse::<Point>().unwrap();
        assert_eq!(m.p1, pt("(1/2, 1/2*sqrt3)"));
        assert_eq!(m.p4, pt("(1/4, 1/4*sqrt3)"));
        assert_eq!(m.p5, pt("(3/4, 1/4*sqrt3)"));
        assert_eq!(m.p6, pt("(3/8, 1/4*sqrt3)"));
        assert_eq!(m.p7, pt("(1/2, 1/4*sqrt3)"));
        assert_eq!(m.p8, pt("(7/16, 5/16*sqrt3)"));
        assert!(d.unique);
        assert_eq!(d.searched, 3 + 9 + 27 + 81);
        let r = check_geometry(&m, 12);
        assert!(r.holds(), "{:?}", r.checks);
        assert_eq!(r.gap_sq, Some(Surd::frac(3, 256, 0, 1)));
        assert_eq!(r.diam_sq, Surd::from_int(25));
        assert!(check_constants(&m, &r).iter().all(|c| c.holds));
    }

    #[test]
    fn sabotaged_marks_fail() {
        let (m, _) = derive_geometry().unwrap();
        for s in [Sabotage::P4, Sabotage::P5, Sabotage::P6, Sabotage::P8] {
            let mut bad = m.clone();
            bad.apply(s);
            assert!(!check_geometry(&bad, 12).holds(), "{s}");
        }
        for s in [Sabotage::Gap, Sabotage::Diam, Sabotage::KBound] {
            let mut bad = m.clone();
            bad.apply(s);
            let r = check_geometry(&bad, 12);
            assert!(r.holds());
            assert!(check_constants(&bad, &r).iter().any(|c| !c.holds), "{s}");
        }
    }
}
