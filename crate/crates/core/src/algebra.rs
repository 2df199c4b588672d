//! Decision procedures on lattice triangles and gasket unions.
//!
//! A verdict of [`Verdict::Holds`] is structural (every piece was reduced to
//! cells of the target, or every branch was separated); [`Verdict::Fails`]
//! always carries an exact witness point; running out of depth yields
//! [`Verdict::Inconclusive`], never a guess.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::arith::{pow2, sqdist_point_segment, Point, Surd};
use crate::error::DistanceError;
use crate::gasket::{lattice_in_union, orient2, point_in_union, GasketPiece, GasketUnion, LatticeTriangle, Membership};
use crate::lattice::TriPoint;
use crate::similitude::Similitude;

/// Default subdivision budget for subset and disjointness searches.
pub const DEFAULT_DEPTH_BUDGET: u32 = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Holds,
    Fails,
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Holds => "holds",
            Verdict::Fails => "fails",
            Verdict::Inconclusive => "inconclusive",
        })
    }
}

/// Outcome of a set claim. For subset claims the witness lies in the left
/// set and outside the right one; for disjointness claims it is a common
/// point.
#[derive(Clone, Debug, PartialEq, Eq, Hash, serde::Serialize)]
pub struct Decision {
    pub verdict: Verdict,
    pub witness: Option<Point>,
    pub depth_used: u32,
}

impl Decision {
    pub fn holds(depth_used: u32) -> Decision {
        Decision { verdict: Verdict::Holds, witness: None, depth_used }
    }

    pub fn fails(witness: Point, depth_used: u32) -> Decision {
        Decision { verdict: Verdict::Fails, witness: Some(witness), depth_used }
    }

    pub fn inconclusive(depth_used: u32) -> Decision {
        Decision { verdict: Verdict::Inconclusive, witness: None, depth_used }
    }

    pub fn is_holds(&self) -> bool {
        self.verdict == Verdict::Holds
    }

    pub fn is_fails(&self) -> bool {
        self.verdict == Verdict::Fails
    }

    pub fn is_inconclusive(&self) -> bool {
        self.verdict == Verdict::Inconclusive
    }
}

impl fmt::Display for Decision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} depth={}", self.verdict, self.depth_used)?;
        if let Some(w) = &self.witness {
            write!(f, " witness={w}")?;
        }
        Ok(())
    }
}

fn at(tri: &LatticeTriangle, s: i32) -> [(i64, i64); 3] {
    tri.vertices().map(|v| v.at_scale(s))
}

fn edges<T: Copy>(v: [T; 3]) -> [(T, T); 3] {
    [(v[0], v[1]), (v[1], v[2]), (v[2], v[0])]
}

/// Every vertex of `a` lies in the solid triangle `b`.
pub fn triangle_in_triangle(a: &LatticeTriangle, b: &LatticeTriangle) -> bool {
    a.vertices().iter().all(|v| b.contains_lattice(v))
}

/// The closed solid triangles share no point (separating-axis test on the
/// six edge normals, exact).
pub fn solid_disjoint(a: &LatticeTriangle, b: &LatticeTriangle) -> bool {
    let s = a.scale().max(b.scale());
    let (va, vb) = (at(a, s), at(b, s));
    let separated = |own: [(i64, i64); 3], other: [(i64, i64); 3]| {
        edges(own).iter().any(|&(p, q)| {
            let mine: Vec<i128> = own.iter().map(|&r| orient2(p, q, r)).collect();
            let theirs: Vec<i128> = other.iter().map(|&r| orient2(p, q, r)).collect();
            let (lo, hi) = (*mine.iter().min().unwrap(), *mine.iter().max().unwrap());
            let (olo, ohi) = (*theirs.iter().min().unwrap(), *theirs.iter().max().unwrap());
            ohi < lo || olo > hi
        })
    };
    separated(va, vb) || separated(vb, va)
}

fn lattice_point(u: i64, v: i64, s: i32) -> Point {
    TriPoint::from_scaled(u, v, s).to_point()
}

/// `(u, v)` at scale `s` with rational coordinates.
fn rational_point(u: BigRational, v: BigRational, s: i32) -> Point {
    let k = pow2(-s);
    Point::new(Surd::from_rational(u * &k), Surd::new(BigRational::from_integer(0.into()), v * k))
}

fn on_segment(p: (i64, i64), q: (i64, i64), r: (i64, i64)) -> bool {
    orient2(p, q, r) == 0 && r.0 >= p.0.min(q.0) && r.0 <= p.0.max(q.0) && r.1 >= p.1.min(q.1) && r.1 <= p.1.max(q.1)
}

/// A point of segment `ab` inside the solid triangle `tri`, given that
/// neither endpoint is inside.
fn segment_hits_triangle(a: (i64, i64), b: (i64, i64), tri: [(i64, i64); 3], s: i32) -> Option<Point> {
    for (c, e) in edges(tri) {
        if on_segment(a, b, c) {
            return Some(lattice_point(c.0, c.1, s));
        }
        if on_segment(a, b, e) {
            return Some(lattice_point(e.0, e.1, s));
        }
        let o1 = orient2(a, b, c).signum();
        let o2 = orient2(a, b, e).signum();
        let o3 = orient2(c, e, a);
        let o4 = orient2(c, e, b);
        if o1 * o2 < 0 && o3.signum() * o4.signum() < 0 {
            // a + t (b - a) with t = o3 / (o3 - o4)
            let t = BigRational::new(BigInt::from(o3), BigInt::from(o3 - o4));
            let lerp =
                |x: i64, y: i64| BigRational::from_integer(x.into()) + &t * BigRational::from_integer((y - x).into());
            return Some(rational_point(lerp(a.0, b.0), lerp(a.1, b.1), s));
        }
    }
    None
}

/// A point shared by the solid triangle `d` and the boundary of `tri`
/// (which belongs to the gasket on `tri`), if any.
fn boundary_contact(d: &LatticeTriangle, tri: &LatticeTriangle) -> Option<Point> {
    if let Some(v) = tri.vertices().iter().find(|v| d.contains_lattice(v)) {
        return Some(v.to_point());
    }
    let s = d.scale().max(tri.scale());
    let dv = at(d, s);
    edges(at(tri, s)).iter().find_map(|&(a, b)| segment_hits_triangle(a, b, dv, s))
}

/// Decides `d ∩ u = ∅` for the solid triangle `d`. Holds means disjoint;
/// fails carries a common point.
///
/// Pieces whose triangle misses `d` are pruned; contact with a piece's
/// boundary is an intersection, since a gasket contains the edges of its
/// triangle. Otherwise `d` sits in the interior of the piece's triangle and
/// the search moves to the three child pieces.
pub fn triangle_meets_union(d: &LatticeTriangle, u: &GasketUnion, budget: u32) -> Decision {
    let mut level: Vec<LatticeTriangle> = u.pieces().iter().map(|p| p.tri).collect();
    let mut depth = 0;
    loop {
        let mut next = Vec::new();
        for tri in &level {
            if solid_disjoint(d, tri) {
                continue;
            }
            if let Some(w) = boundary_contact(d, tri) {
                debug_assert!(d.contains_point(&w));
                debug_assert_eq!(point_in_union(&w, u), Membership::Inside);
                return Decision::fails(w, depth);
            }
            next.extend(tri.children());
        }
        if next.is_empty() {
            return Decision::holds(depth);
        }
        if depth == budget {
            return Decision::inconclusive(depth);
        }
        level = next;
        depth += 1;
    }
}

/// Decides `g ⊆ u`. Holds when `g` splits into cells of pieces of `u`;
/// fails with a vertex of some sub-cell of `g` that lies outside `u`.
/// The search is breadth-first, so the reported witness is a shallowest one.
pub fn piece_subset_union(g: &GasketPiece, u: &GasketUnion, budget: u32) -> Decision {
    let mut level = vec![g.tri];
    let mut depth = 0;
    loop {
        let mut next = Vec::new();
        for tri in &level {
            if u.pieces().iter().any(|p| tri.address_in(&p.tri).is_some()) {
                continue;
            }
            if let Some(v) = tri.vertices().iter().find(|v| lattice_in_union(v, u) == Membership::Outside) {
                return Decision::fails(v.to_point(), depth);
            }
            next.extend(tri.children());
        }
        if next.is_empty() {
            return Decision::holds(depth);
        }
        if depth == budget {
            return Decision::inconclusive(depth);
        }
        level = next;
        depth += 1;
    }
}

/// `u1 ⊆ u2`, piece by piece.
pub fn union_subset(u1: &GasketUnion, u2: &GasketUnion, budget: u32) -> Decision {
    let mut depth = 0;
    let mut inconclusive = false;
    for p in u1.pieces() {
        let d = piece_subset_union(p, u2, budget);
        depth = depth.max(d.depth_used);
        match d.verdict {
            Verdict::Fails => return d,
            Verdict::Inconclusive => inconclusive = true,
            Verdict::Holds => {}
        }
    }
    if inconclusive {
        Decision::inconclusive(depth)
    } else {
        Decision::holds(depth)
    }
}

/// Mutual inclusion. A failing witness comes from whichever side fails first.
pub fn union_equal(u1: &GasketUnion, u2: &GasketUnion, budget: u32) -> Decision {
    let a = union_subset(u1, u2, budget);
    if a.is_fails() {
        return a;
    }
    let b = union_subset(u2, u1, budget);
    if b.is_fails() {
        return b;
    }
    let depth = a.depth_used.max(b.depth_used);
    if a.is_inconclusive() || b.is_inconclusive() {
        Decision::inconclusive(depth)
    } else {
        Decision::holds(depth)
    }
}

pub fn image_of_union(f: &Similitude, u: &GasketUnion) -> GasketUnion {
    GasketUnion::new(u.pieces().iter().map(|p| p.image(f)))
}

/// Re-check a witness against the claim it refutes: for subset claims the
/// witness must be in `left` and outside `right`.
pub fn witness_refutes_subset(w: &Point, left: &GasketUnion, right: &GasketUnion) -> bool {
    point_in_union(w, left) == Membership::Inside && point_in_union(w, right) == Membership::Outside
}

/// Re-check a common-point witness of `d` and `u`.
pub fn witness_meets(w: &Point, d: &LatticeTriangle, u: &GasketUnion) -> bool {
    d.contains_point(w) && point_in_union(w, u) == Membership::Inside
}

/// Squared distance between a solid triangle and a union, with the points
/// realising it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistanceReport {
    pub sq_distance: Surd,
    pub on_triangle: Point,
    pub on_union: Point,
}

/// Exact squared distance from the solid triangle `d` to the union `u`,
/// which equals the distance between solid triangles because each gasket
/// contains the boundary of its triangle. `removed` lists points excluded
/// from the target set; a minimiser among them is reported as an error.
pub fn distance_to_union(
    d: &LatticeTriangle,
    u: &GasketUnion,
    removed: &[Point],
) -> Result<DistanceReport, DistanceError> {
    if u.is_empty() {
        return Err(DistanceError::EmptyUnion);
    }
    if let Some(p) = u.pieces().iter().find(|p| !solid_disjoint(d, &p.tri)) {
        return Err(DistanceError::NotSeparated(p.tri.to_string()));
    }
    let dv = d.vertex_points();
    let mut pairs: Vec<(Surd, Point, Point)> = Vec::new();
    for p in u.pieces() {
        let pv = p.tri.vertex_points();
        for (a, b) in edges([0, 1, 2]) {
            for q in &dv {
                let (sq, foot) = sqdist_point_segment(q, &pv[a], &pv[b]);
                pairs.push((sq, q.clone(), foot));
            }
            for q in &pv {
                let (sq, foot) = sqdist_point_segment(q, &dv[a], &dv[b]);
                pairs.push((sq, foot, q.clone()));
            }
        }
    }
    let best = pairs.iter().map(|p| &p.0).min().expect("nonempty union").clone();
    for (sq, _, on_union) in &pairs {
        if *sq == best && removed.contains(on_union) {
            return Err(DistanceError::RemovedMinimizer(on_union.to_string()));
        }
    }
    let (sq_distance, on_triangle, on_union) = pairs.into_iter().find(|p| p.0 == best).expect("minimum exists");
    Ok(DistanceReport { sq_distance, on_triangle, on_union })
}
