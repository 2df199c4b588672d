//! Exact model of gasket unions.
//!
//! A [`GasketPiece`] is the full Sierpinski gasket built on a lattice
//! triangle. The gasket is invariant under the six symmetries of its
//! triangle, so a piece is determined by the triangle alone and the image of
//! a piece under any lattice similitude is the piece on the image triangle.
//! Finite [`GasketUnion`]s model n-Sierpinski, the big gasket `C` (side 8),
//! and images `f(E)`.
//!
//! Cells of a triangle are addressed by words over `{0, 1, 2}`: corner 0 is
//! the bottom-left vertex of an up triangle (map `f1`), corner 1 the apex
//! (`f2`), corner 2 the bottom-right vertex (`f3`). For a down triangle the
//! corners are top-left, bottom and top-right.

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;

use crate::arith::{Point, Sign, Surd};
use crate::error::{LatticeError, ParseError};
use crate::lattice::{common_scale, lift, TriPoint};
use crate::similitude::Similitude;

/// State budget for membership descent on non-lattice points.
pub const DEFAULT_STATE_BUDGET: usize = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Orient {
    Up,
    Down,
}

impl fmt::Display for Orient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Orient::Up => "up",
            Orient::Down => "down",
        })
    }
}

impl FromStr for Orient {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Orient, ParseError> {
        match s {
            "up" => Ok(Orient::Up),
            "down" => Ok(Orient::Down),
            _ => Err(ParseError::new("orientation", s, "expected up or down")),
        }
    }
}

/// Equilateral lattice triangle with a horizontal side of length `2^-exp`.
/// The anchor is the leftmost vertex, which makes the representation unique.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticeTriangle {
    anchor: TriPoint,
    exp: i32,
    orient: Orient,
}

/// Twice the signed area of `(o, a, b)` in lattice units; same sign as the
/// Euclidean orientation because the y unit is a positive multiple.
pub(crate) fn orient2(o: (i64, i64), a: (i64, i64), b: (i64, i64)) -> i128 {
    let (ax, ay) = ((a.0 - o.0) as i128, (a.1 - o.1) as i128);
    let (bx, by) = ((b.0 - o.0) as i128, (b.1 - o.1) as i128);
    ax * by - ay * bx
}

/// Barycentric coordinates of lattice points w.r.t. a triangle, as integer
/// numerators over a common positive denominator, in corner order.
#[derive(Clone, Debug)]
pub(crate) struct Frame {
    pub scale: i32,
    verts: [(i64, i64); 3],
    sign: i128,
    pub denom: i128,
}

impl Frame {
    pub fn new(tri: &LatticeTriangle, scale: i32) -> Frame {
        let verts = tri.vertices().map(|v| v.at_scale(scale));
        let d = orient2(verts[0], verts[1], verts[2]);
        Frame { scale, verts, sign: d.signum(), denom: d.abs() }
    }

    pub fn bary(&self, p: (i64, i64)) -> [i128; 3] {
        let [a, b, c] = self.verts;
        [orient2(p, b, c), orient2(a, p, c), orient2(a, b, p)].map(|w| w * self.sign)
    }
}

impl LatticeTriangle {
    pub fn new(anchor: TriPoint, exp: i32, orient: Orient) -> LatticeTriangle {
        LatticeTriangle { anchor, exp, orient }
    }

    /// Unit up triangle `(0,0), (1,0), (1/2, sqrt3/2)`.
    pub fn unit() -> LatticeTriangle {
        LatticeTriangle::new(TriPoint::origin(), 0, Orient::Up)
    }

    pub fn anchor(&self) -> TriPoint {
        self.anchor
    }

    /// Side exponent: the side length is `2^-exp`.
    pub fn exp(&self) -> i32 {
        self.exp
    }

    pub fn orient(&self) -> Orient {
        self.orient
    }

    /// Finest scale needed to express all vertices.
    pub fn scale(&self) -> i32 {
        self.anchor.s().max(self.exp + 1)
    }

    /// Vertices in corner order `[corner 0, corner 1, corner 2]`.
    pub fn vertices(&self) -> [TriPoint; 3] {
        let s = self.scale();
        let (u, v) = self.anchor.at_scale(s);
        let h = lift(1, s - self.exp);
        let half = h / 2;
        let p = |du: i64, dv: i64| TriPoint::from_scaled(u + du, v + dv, s);
        match self.orient {
            Orient::Up => [p(0, 0), p(half, half), p(h, 0)],
            Orient::Down => [p(0, 0), p(half, -half), p(h, 0)],
        }
    }

    pub fn vertex_points(&self) -> [Point; 3] {
        self.vertices().map(|v| v.to_point())
    }

    pub fn from_vertices(vs: [TriPoint; 3]) -> Result<LatticeTriangle, LatticeError> {
        let bad = || LatticeError::NotLatticeTriangle(format!("{}, {}, {}", vs[0], vs[1], vs[2]));
        let mut sorted = vs;
        sorted.sort();
        let anchor = sorted[0];
        let s = common_scale(&vs);
        let pts = sorted.map(|p| p.at_scale(s));
        // the partner on the anchor's horizontal line, then the third vertex
        let (side, third) = if pts[1].1 == pts[0].1 {
            (pts[1], pts[2])
        } else if pts[2].1 == pts[0].1 {
            (pts[2], pts[1])
        } else {
            return Err(bad());
        };
        let h = side.0 - pts[0].0;
        if h <= 0 || h.count_ones() != 1 || h % 2 != 0 {
            return Err(bad());
        }
        let exp = s - h.trailing_zeros() as i32;
        let orient = if third == (pts[0].0 + h / 2, pts[0].1 + h / 2) {
            Orient::Up
        } else if third == (pts[0].0 + h / 2, pts[0].1 - h / 2) {
            Orient::Down
        } else {
            return Err(bad());
        };
        Ok(LatticeTriangle::new(anchor, exp, orient))
    }

    /// Child cell at corner `i` (the image under `x -> (x + V_i) / 2`).
    pub fn child(&self, i: u8) -> LatticeTriangle {
        let s = self.scale().max(self.exp + 2);
        let (u, v) = self.anchor.at_scale(s);
        let q = lift(1, s - self.exp - 2);
        let (du, dv) = match (self.orient, i) {
            (_, 0) => (0, 0),
            (Orient::Up, 1) => (q, q),
            (Orient::Down, 1) => (q, -q),
            (_, 2) => (2 * q, 0),
            _ => panic!("corner index {i} out of range"),
        };
        LatticeTriangle::new(TriPoint::from_scaled(u + du, v + dv, s), self.exp + 1, self.orient)
    }

    pub fn children(&self) -> [LatticeTriangle; 3] {
        [self.child(0), self.child(1), self.child(2)]
    }

    /// The central hole: the medial triangle, opposite orientation.
    pub fn hole(&self) -> LatticeTriangle {
        let [a, b, c] = self.vertices();
        LatticeTriangle::from_vertices([a.midpoint(&b), b.midpoint(&c), c.midpoint(&a)])
            .expect("medial triangle of a lattice triangle")
    }

    pub fn image(&self, f: &Similitude) -> LatticeTriangle {
        LatticeTriangle::from_vertices(self.vertices().map(|v| f.apply_lattice(&v)))
            .expect("lattice similitudes map lattice triangles to lattice triangles")
    }

    /// Closed containment of a lattice point.
    pub fn contains_lattice(&self, p: &TriPoint) -> bool {
        let frame = Frame::new(self, self.scale().max(p.s()));
        frame.bary(p.at_scale(frame.scale)).iter().all(|&w| w >= 0)
    }

    /// Closed containment of an exact point.
    pub fn contains_point(&self, p: &Point) -> bool {
        bary_exact(self, p).iter().all(|w| w.sign() != Sign::Negative)
    }

    /// Address of `self` as a cell of `root`, if it is one.
    pub fn address_in(&self, root: &LatticeTriangle) -> Option<CellAddress> {
        let depth = self.exp - root.exp;
        if depth < 0 || self.orient != root.orient {
            return None;
        }
        let frame = Frame::new(root, self.scale().max(root.scale()));
        let d = frame.denom;
        let mut ws: Vec<[i128; 3]> = self.vertices().iter().map(|v| frame.bary(v.at_scale(frame.scale))).collect();
        let mut word = Vec::with_capacity(depth as usize);
        for _ in 0..depth {
            let i = (0..3).find(|&i| ws.iter().all(|w| 2 * w[i] >= d))?;
            for w in ws.iter_mut() {
                descend(w, i, d);
            }
            word.push(i as u8);
        }
        // each vertex must land exactly on a corner of the final cell
        let corner =
            |w: &[i128; 3]| w.iter().filter(|&&c| c == d).count() == 1 && w.iter().filter(|&&c| c == 0).count() == 2;
        if ws.iter().all(corner) {
            Some(CellAddress { root: *root, word })
        } else {
            None
        }
    }
}

fn descend(w: &mut [i128; 3], i: usize, d: i128) {
    for (j, c) in w.iter_mut().enumerate() {
        *c = if j == i { 2 * *c - d } else { 2 * *c };
    }
}

impl fmt::Display for LatticeTriangle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.orient, self.anchor, self.exp)
    }
}

impl fmt::Debug for LatticeTriangle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Tri[{self}]")
    }
}

impl FromStr for LatticeTriangle {
    type Err = ParseError;

    /// `<orient> <anchor> <side-exp>`, e.g. `up (3/8, 1/4*sqrt3) 3`.
    fn from_str(s: &str) -> Result<LatticeTriangle, ParseError> {
        let bad = |why: &str| ParseError::new("triangle", s, why);
        let t = s.trim();
        let (orient, rest) = t.split_once(' ').ok_or_else(|| bad("missing anchor"))?;
        let close = rest.rfind(')').ok_or_else(|| bad("missing `)`"))?;
        let anchor: TriPoint = rest[..=close].parse()?;
        let exp: i32 = rest[close + 1..].trim().parse().map_err(|_| bad("bad side exponent"))?;
        let tri = LatticeTriangle::new(anchor, exp, orient.parse()?);
        // reject anchors that are not the leftmost vertex
        if tri.vertices().iter().min() != Some(&anchor) {
            return Err(bad("anchor is not the leftmost vertex"));
        }
        Ok(tri)
    }
}

impl serde::Serialize for LatticeTriangle {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Exact barycentric coordinates of an arbitrary point, in corner order.
pub(crate) fn bary_exact(tri: &LatticeTriangle, p: &Point) -> [Surd; 3] {
    let [a, b, c] = tri.vertex_points();
    let area = b.sub(&a).cross(&c.sub(&a));
    let w0 = b.sub(p).cross(&c.sub(p)) / &area;
    let w1 = c.sub(p).cross(&a.sub(p)) / &area;
    let w2 = Surd::one() - &w0 - &w1;
    [w0, w1, w2]
}

/// A cell of a root triangle, addressed by corner indices.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CellAddress {
    pub root: LatticeTriangle,
    pub word: Vec<u8>,
}

impl CellAddress {
    pub fn depth(&self) -> usize {
        self.word.len()
    }

    pub fn cell(&self) -> LatticeTriangle {
        self.word.iter().fold(self.root, |t, &i| t.child(i))
    }
}

impl fmt::Display for CellAddress {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]/", self.root)?;
        for i in &self.word {
            write!(f, "{i}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for CellAddress {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CellAddress({self})")
    }
}

/// The gasket on a lattice triangle.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GasketPiece {
    pub tri: LatticeTriangle,
}

impl GasketPiece {
    pub fn new(tri: LatticeTriangle) -> GasketPiece {
        GasketPiece { tri }
    }

    pub fn children(&self) -> [GasketPiece; 3] {
        self.tri.children().map(GasketPiece::new)
    }

    pub fn image(&self, f: &Similitude) -> GasketPiece {
        GasketPiece::new(self.tri.image(f))
    }
}

impl fmt::Display for GasketPiece {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "piece {}", self.tri)
    }
}

impl fmt::Debug for GasketPiece {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl serde::Serialize for GasketPiece {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(&self.tri)
    }
}

/// Finite union of gasket pieces, sorted, deduplicated, and with pieces
/// that are cells of another member merged into the larger one.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct GasketUnion {
    pieces: Vec<GasketPiece>,
}

impl GasketUnion {
    pub fn new(pieces: impl IntoIterator<Item = GasketPiece>) -> GasketUnion {
        let set: BTreeSet<GasketPiece> = pieces.into_iter().collect();
        let all: Vec<GasketPiece> = set.into_iter().collect();
        let pieces = all
            .iter()
            .filter(|p| !all.iter().any(|q| q != *p && p.tri.exp > q.tri.exp && p.tri.address_in(&q.tri).is_some()))
            .copied()
            .collect();
        GasketUnion { pieces }
    }

    pub fn pieces(&self) -> &[GasketPiece] {
        &self.pieces
    }

    pub fn len(&self) -> usize {
        self.pieces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty()
    }

    pub fn union(&self, other: &GasketUnion) -> GasketUnion {
        GasketUnion::new(self.pieces.iter().chain(other.pieces.iter()).copied())
    }

    /// Squared diameter: the largest squared distance between corner vertices,
    /// since each gasket contains its corners and lies in their convex hull.
    pub fn sq_diameter(&self) -> Surd {
        let pts: Vec<Point> = self.pieces.iter().flat_map(|p| p.tri.vertex_points()).collect();
        let mut best = Surd::zero();
        for (i, p) in pts.iter().enumerate() {
            for q in &pts[i + 1..] {
                let d = crate::arith::sqdist(p, q);
                if d > best {
                    best = d;
                }
            }
        }
        best
    }

    /// Closure of `self` minus the solid `cell`: the containing piece is
    /// split along the cell's address and the cell itself is dropped.
    /// Returns `None` when `cell` is not a cell of any piece.
    pub fn without_cell(&self, cell: &LatticeTriangle) -> Option<GasketUnion> {
        let (idx, addr) = self.pieces.iter().enumerate().find_map(|(i, p)| cell.address_in(&p.tri).map(|a| (i, a)))?;
        let mut out: Vec<GasketPiece> =
            self.pieces.iter().enumerate().filter(|&(i, _)| i != idx).map(|(_, p)| *p).collect();
        let mut cur = addr.root;
        for &step in &addr.word {
            for j in 0..3u8 {
                if j != step {
                    out.push(GasketPiece::new(cur.child(j)));
                }
            }
            cur = cur.child(step);
        }
        Some(GasketUnion::new(out))
    }

    /// One line per piece: `piece <orient> <anchor> <side-exp>`.
    pub fn to_scene_text(&self) -> String {
        self.pieces.iter().map(|p| format!("{p}\n")).collect()
    }

    pub fn from_scene_text(text: &str) -> Result<GasketUnion, ParseError> {
        let mut pieces = Vec::new();
        for line in text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')) {
            let rest = line
                .strip_prefix("piece ")
                .ok_or_else(|| ParseError::new("scene line", line, "expected `piece ...`"))?;
            pieces.push(GasketPiece::new(rest.parse()?));
        }
        Ok(GasketUnion::new(pieces))
    }
}

impl fmt::Debug for GasketUnion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.pieces.iter()).finish()
    }
}

impl serde::Serialize for GasketUnion {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        serde::Serialize::serialize(&self.pieces, s)
    }
}

/// n unit gaskets side by side along the x-axis, anchored at `(k, 0)`.
pub fn build_e(n: u32) -> GasketUnion {
    GasketUnion::new((0..n as i64).map(|k| {
        let anchor = TriPoint::new(2 * k, 0, 1).expect("lattice point");
        GasketPiece::new(LatticeTriangle::new(anchor, 0, Orient::Up))
    }))
}

/// The gasket of side 8 with corner at the origin.
pub fn big_gasket() -> GasketPiece {
    GasketPiece::new(LatticeTriangle::new(TriPoint::origin(), -3, Orient::Up))
}

/// The `3^(n+3)` cells of side `2^-n` making up the approximant `A_n` of the
/// big gasket, in address order.
pub fn cells(n: i32) -> Vec<LatticeTriangle> {
    assert!(n >= -3, "approximants start at n = -3");
    let mut level = vec![big_gasket().tri];
    for _ in 0..(n + 3) {
        level = level.iter().flat_map(|t| t.children()).collect();
    }
    level
}

/// Whether `tri` is one of the cells of `A_n`.
pub fn is_cell_of(tri: &LatticeTriangle, n: i32) -> bool {
    tri.exp == n && tri.address_in(&big_gasket().tri).is_some()
}

/// `B_n`: all vertices of the cells of `A_n`.
pub fn vertices_b(n: i32) -> BTreeSet<TriPoint> {
    cells(n).iter().flat_map(|t| t.vertices()).collect()
}

/// Membership in `B_n` by address descent in the big gasket.
pub fn is_vertex_b(p: &Point, n: i32) -> bool {
    TriPoint::from_point(p).is_some_and(|q| is_lattice_vertex_b(&q, n))
}

pub fn is_lattice_vertex_b(q: &TriPoint, n: i32) -> bool {
    assert!(n >= -3, "approximants start at n = -3");
    let root = big_gasket().tri;
    let frame = Frame::new(&root, root.scale().max(q.s()));
    let d = frame.denom;
    let mut w = frame.bary(q.at_scale(frame.scale));
    for level in 0..=(n + 3) {
        if w.iter().any(|&c| c < 0) {
            return false;
        }
        if w.contains(&d) {
            return true;
        }
        if level == n + 3 {
            return false;
        }
        match (0..3).find(|&i| 2 * w[i] >= d) {
            Some(i) => descend(&mut w, i, d),
            None => return false,
        }
    }
    false
}

/// Result of a membership query.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Membership {
    Inside,
    Outside,
    /// The descent exhausted its budget after this many steps.
    Inconclusive(usize),
}

/// Exact membership of a lattice point in a gasket piece. Always decisive:
/// a dyadic point reaches a cell edge or leaves the gasket within
/// `p.s() - g.tri.exp()` subdivision steps.
pub fn lattice_in_gasket(p: &TriPoint, g: &GasketPiece) -> Membership {
    let frame = Frame::new(&g.tri, g.tri.scale().max(p.s()));
    let d = frame.denom;
    let mut w = frame.bary(p.at_scale(frame.scale));
    let mut steps = 0;
    loop {
        if w.iter().any(|&c| c < 0) {
            return Membership::Outside;
        }
        if w.iter().any(|&c| c == 0 || 2 * c == d) {
            return Membership::Inside;
        }
        match (0..3).find(|&i| 2 * w[i] > d) {
            Some(i) => descend(&mut w, i, d),
            None => return Membership::Outside,
        }
        steps += 1;
        assert!(steps <= 128, "lattice descent did not terminate");
    }
}

/// Exact membership of any point of Q(sqrt3)^2 in a gasket piece.
///
/// The point is tracked by its barycentric coordinates in the current cell.
/// It is outside once it leaves the cell or enters the open central hole,
/// inside once it lands on a cell edge, and inside when the rescaled state
/// repeats, since a periodic orbit never leaves the nested cells.
pub fn point_in_gasket(p: &Point, g: &GasketPiece) -> Membership {
    point_in_gasket_with(p, g, DEFAULT_STATE_BUDGET)
}

pub fn point_in_gasket_with(p: &Point, g: &GasketPiece, max_states: usize) -> Membership {
    if let Some(q) = TriPoint::from_point(p) {
        return lattice_in_gasket(&q, g);
    }
    let one = Surd::one();
    let half = Surd::from_rational(BigRational::new(1.into(), 2.into()));
    let mut w = bary_exact(&g.tri, p);
    let mut seen: HashSet<[Surd; 3]> = HashSet::new();
    loop {
        if w.iter().any(|c| c.sign() == Sign::Negative) {
            return Membership::Outside;
        }
        if w.iter().any(|c| c.is_zero() || *c == half) {
            return Membership::Inside;
        }
        let Some(i) = (0..3).find(|&i| w[i] > half) else {
            return Membership::Outside;
        };
        if !seen.insert(w.clone()) {
            return Membership::Inside;
        }
        if seen.len() >= max_states {
            return Membership::Inconclusive(seen.len());
        }
        for (j, c) in w.iter_mut().enumerate() {
            let doubled = c.mul_pow2(1);
            *c = if j == i { &doubled - &one } else { doubled };
        }
    }
}

/// Membership in a union: inside if any piece says so.
pub fn point_in_union(p: &Point, u: &GasketUnion) -> Membership {
    let mut worst = Membership::Outside;
    for g in u.pieces() {
        match point_in_gasket(p, g) {
            Membership::Inside => return Membership::Inside,
            Membership::Inconclusive(n) => worst = Membership::Inconclusive(n),
            Membership::Outside => {}
        }
    }
    worst
}

pub fn lattice_in_union(p: &TriPoint, u: &GasketUnion) -> Membership {
    if u.pieces().iter().any(|g| lattice_in_gasket(p, g) == Membership::Inside) {
        Membership::Inside
    } else {
        Membership::Outside
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(s: &str) -> Point {
        s.parse().unwrap()
    }

    #[test]
    fn five_in_a_row() {
        let e = build_e(5);
        assert_eq!(e.len(), 5);
        assert_eq!(e.pieces()[4].tri.to_string(), "up (4, 0) 0");
        assert_eq!(e.sq_diameter(), Surd::from_int(25));
    }

    #[test]
    fn cell_counts() {
        assert_eq!(cells(-3).len(), 1);
        assert_eq!(cells(0).len(), 27);
        assert_eq!(cells(1).len(), 81);
        let small: LatticeTriangle = "up (3/8, 1/4*sqrt3) 3".parse().unwrap();
        assert!(is_cell_of(&small, 3));
        assert!(!is_cell_of(&small, 2));
        assert!(!is_cell_of(&LatticeTriangle::unit().hole(), 1));
    }

    #[test]
    fn vertex_sets() {
        assert!(is_vertex_b(&pt("(3/4, 1/4*sqrt3)"), 1));
        assert!(!is_vertex_b(&pt("(3/4, 1/4*sqrt3)"), 0));
        let fixed = Similitude::t_map().fixed_point().unwrap();
        for n in -3..=8 {
            assert!(!is_vertex_b(&fixed, n), "n = {n}");
        }
        let listed = vertices_b(1);
        assert!(listed.iter().all(|q| is_lattice_vertex_b(q, 1)));
        // a cell of side 2^-1 has 3 vertices; neighbours share them
        assert_eq!(listed.len(), 3 * (81 + 1) / 2);
    }

    #[test]
    fn membership_examples() {
        let e = build_e(5);
        assert_eq!(point_in_union(&pt("(1/2, 1/8*sqrt3)"), &e), Membership::Outside);
        assert_eq!(point_in_union(&pt("(3/7, 2/7*sqrt3)"), &e), Membership::Inside);
        assert_eq!(point_in_union(&pt("(3/8, 1/4*sqrt3)"), &e), Membership::Inside);
        assert_eq!(point_in_union(&pt("(-1, 0)"), &e), Membership::Outside);
        assert_eq!(point_in_union(&pt("(9/2, 0)"), &e), Membership::Inside);
    }

    #[test]
    fn scene_text_round_trip() {
        let e = build_e(3);
        assert_eq!(GasketUnion::from_scene_text(&e.to_scene_text()).unwrap(), e);
    }

    #[test]
    fn covered_pieces_are_dropped() {
        let unit = GasketPiece::new(LatticeTriangle::unit());
        let u = GasketUnion::new([unit.children()[1], unit]);
        assert_eq!(u.pieces(), &[unit]);
    }
}
