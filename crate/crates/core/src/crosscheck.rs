//! Floating-point rasterization oracle.
//!
//! Gaskets are replaced by their depth-9 approximants (unions of solid
//! triangles). The oracle answers only when the geometry clears a margin of
//! `2^-12`; otherwise it abstains. It is used to cross-check the exact
//! procedures and never decides a verdict.

use crate::algebra::Verdict;
use crate::gasket::{GasketPiece, GasketUnion, LatticeTriangle};

pub const ORACLE_DEPTH: u32 = 9;
pub const ORACLE_MARGIN: f64 = 1.0 / 4096.0;
/// Float noise floor: distances below it count as contact.
const NEGLIGIBLE: f64 = 1e-12;

type P = (f64, f64);
type Tri = [P; 3];

fn tri_f64(t: &LatticeTriangle) -> Tri {
    t.vertex_points().map(|p| p.to_f64())
}

fn sub(a: P, b: P) -> P {
    (a.0 - b.0, a.1 - b.1)
}

fn cross(a: P, b: P) -> f64 {
    a.0 * b.1 - a.1 * b.0
}

fn dist_point_segment(p: P, a: P, b: P) -> f64 {
    let ab = sub(b, a);
    let ap = sub(p, a);
    let len2 = ab.0 * ab.0 + ab.1 * ab.1;
    let t = if len2 == 0.0 { 0.0 } else { ((ap.0 * ab.0 + ap.1 * ab.1) / len2).clamp(0.0, 1.0) };
    let q = (a.0 + t * ab.0, a.1 + t * ab.1);
    ((p.0 - q.0).powi(2) + (p.1 - q.1).powi(2)).sqrt()
}

/// Signed depth of `p` inside `t`: positive inside, negative outside
/// (distance to the nearest edge line, sign by side).
fn inner_depth(p: P, t: &Tri) -> f64 {
    let orient = cross(sub(t[1], t[0]), sub(t[2], t[0])).signum();
    (0..3)
        .map(|i| {
            let (a, b) = (t[i], t[(i + 1) % 3]);
            let e = sub(b, a);
            orient * cross(e, sub(p, a)) / (e.0 * e.0 + e.1 * e.1).sqrt()
        })
        .fold(f64::INFINITY, f64::min)
}

fn dist_point_triangle(p: P, t: &Tri) -> f64 {
    if inner_depth(p, t) >= 0.0 {
        return 0.0;
    }
    (0..3).map(|i| dist_point_segment(p, t[i], t[(i + 1) % 3])).fold(f64::INFINITY, f64::min)
}

fn triangles_overlap(a: &Tri, b: &Tri) -> bool {
    let separated = |s: &Tri, o: &Tri| {
        let orient = cross(sub(s[1], s[0]), sub(s[2], s[0])).signum();
        (0..3).any(|i| {
            let (p, q) = (s[i], s[(i + 1) % 3]);
            o.iter().all(|&r| orient * cross(sub(q, p), sub(r, p)) < 0.0)
        })
    };
    !separated(a, b) && !separated(b, a)
}

fn dist_triangles(a: &Tri, b: &Tri) -> f64 {
    if triangles_overlap(a, b) {
        return 0.0;
    }
    let mut best = f64::INFINITY;
    for i in 0..3 {
        for &p in a {
            best = best.min(dist_point_segment(p, b[i], b[(i + 1) % 3]));
        }
        for &p in b {
            best = best.min(dist_point_segment(p, a[i], a[(i + 1) % 3]));
        }
    }
    best
}

fn children(t: &Tri) -> [Tri; 3] {
    let mid = |a: P, b: P| ((a.0 + b.0) / 2.0, (a.1 + b.1) / 2.0);
    let (m01, m12, m20) = (mid(t[0], t[1]), mid(t[1], t[2]), mid(t[2], t[0]));
    [[t[0], m01, m20], [m01, t[1], m12], [m20, m12, t[2]]]
}

/// Distance from `p` to the depth-`depth` approximant of the gasket on `t`,
/// with branch-and-bound pruning; `lower` is the distance to `t` itself.
fn dist_to_approximant(p: P, t: &Tri, lower: f64, depth: u32, best: f64) -> f64 {
    if lower >= best {
        return best;
    }
    if depth == 0 || lower > 0.0 && lower <= NEGLIGIBLE {
        return lower;
    }
    let mut kids = children(t).map(|c| (dist_point_triangle(p, &c), c));
    kids.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut best = best;
    for (l, c) in &kids {
        best = best.min(dist_to_approximant(p, c, *l, depth - 1, best));
        if best <= NEGLIGIBLE {
            break;
        }
    }
    best
}

/// Distance from a point to the depth-9 approximant of a union.
pub fn distance_to_approximant(p: (f64, f64), u: &GasketUnion) -> f64 {
    u.pieces().iter().fold(f64::INFINITY, |best, g| {
        let t = tri_f64(&g.tri);
        dist_to_approximant(p, &t, dist_point_triangle(p, &t), ORACLE_DEPTH, best)
    })
}

fn sample_points(t: &Tri, depth: u32, out: &mut Vec<P>) {
    out.extend_from_slice(t);
    if depth > 0 {
        for c in children(t) {
            sample_points(&c, depth - 1, out);
        }
    }
}

/// Oracle for `g ⊆ u`. Answers `Fails` when a vertex of a sub-cell of `g`
/// (to depth 5) lies farther than the margin from the approximant of `u`,
/// `Holds` when every such vertex lies inside the approximant, and abstains
/// in between.
pub fn subset_oracle(g: &GasketPiece, u: &GasketUnion) -> Option<Verdict> {
    let mut pts = Vec::new();
    sample_points(&tri_f64(&g.tri), 5, &mut pts);
    let mut worst: f64 = 0.0;
    for &p in &pts {
        worst = worst.max(distance_to_approximant(p, u));
        if worst > ORACLE_MARGIN {
            return Some(Verdict::Fails);
        }
    }
    if worst > ORACLE_MARGIN {
        Some(Verdict::Fails)
    } else if worst <= NEGLIGIBLE {
        Some(Verdict::Holds)
    } else {
        None
    }
}

fn vertex_inside(d: &Tri, t: &Tri, depth: u32) -> bool {
    if dist_triangles(d, t) > 0.0 {
        return false;
    }
    if t.iter().any(|&v| inner_depth(v, d) > ORACLE_MARGIN) {
        return true;
    }
    depth > 0 && children(t).iter().any(|c| vertex_inside(d, c, depth - 1))
}

/// Oracle for `d ∩ u = ∅`. `Holds` (disjoint) when `d` is farther than the
/// margin from the approximant of `u`; `Fails` when some approximant vertex,
/// which always belongs to the gasket, lies inside `d` by more than the
/// margin; otherwise abstains.
pub fn disjoint_oracle(d: &LatticeTriangle, u: &GasketUnion) -> Option<Verdict> {
    let dt = tri_f64(d);
    let gap =
        u.pieces().iter().map(|g| approximant_gap(&dt, &tri_f64(&g.tri), ORACLE_DEPTH)).fold(f64::INFINITY, f64::min);
    if gap > ORACLE_MARGIN {
        return Some(Verdict::Holds);
    }
    if u.pieces().iter().any(|g| vertex_inside(&dt, &tri_f64(&g.tri), ORACLE_DEPTH)) {
        return Some(Verdict::Fails);
    }
    None
}

fn approximant_gap(d: &Tri, t: &Tri, depth: u32) -> f64 {
    let here = dist_triangles(d, t);
    if here > ORACLE_MARGIN || depth == 0 {
        return here;
    }
    children(t).iter().map(|c| approximant_gap(d, c, depth - 1)).fold(f64::INFINITY, f64::min)
}

/// Minimum distance between sampled points of the solid triangle `d` and of
/// the depth-9 approximant of `u`: an upper estimate of the exact distance.
pub fn sampled_distance(d: &LatticeTriangle, u: &GasketUnion, samples_per_edge: usize) -> f64 {
    let t = tri_f64(d);
    let n = samples_per_edge.max(1);
    let mut best = f64::INFINITY;
    for i in 0..3 {
        let (a, b) = (t[i], t[(i + 1) % 3]);
        for k in 0..=n {
            let s = k as f64 / n as f64;
            let p = (a.0 + s * (b.0 - a.0), a.1 + s * (b.1 - a.1));
            best = best.min(distance_to_approximant(p, u));
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gasket::build_e;

    #[test]
    fn approximant_distance() {
        let e = build_e(1);
        assert_eq!(distance_to_approximant((0.5, 0.0), &e), 0.0);
        assert!((distance_to_approximant((-1.0, 0.0), &e) - 1.0).abs() < 1e-12);
        // centre of the unit hole, side 1/2: inradius sqrt3/12
        let d = distance_to_approximant((0.5, 3f64.sqrt() / 6.0), &e);
        assert!((d - 3f64.sqrt() / 12.0).abs() < 1e-12);
    }

    #[test]
    fn oracle_verdicts() {
        let e = build_e(5);
        let cell: LatticeTriangle = "up (3/8, 1/4*sqrt3) 3".parse().unwrap();
        assert_eq!(subset_oracle(&GasketPiece::new(cell), &e), Some(Verdict::Holds));
        let hole = GasketPiece::new(LatticeTriangle::unit().hole());
        assert_eq!(subset_oracle(&hole, &e), Some(Verdict::Fails));
        assert_eq!(disjoint_oracle(&"up (4, 2*sqrt3) 0".parse().unwrap(), &e), Some(Verdict::Holds));
    }
}
