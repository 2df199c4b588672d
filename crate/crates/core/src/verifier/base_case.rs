use std::collections::{BTreeSet, HashSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use sha2::{Digest, Sha256};

use crate::algebra::{
    image_of_union, piece_subset_union, triangle_meets_union, witness_meets, witness_refutes_subset, Decision, Verdict,
};
use crate::crosscheck::{disjoint_oracle, subset_oracle};
use crate::gasket::{build_e, cells, is_cell_of, is_lattice_vertex_b, GasketUnion, LatticeTriangle};
use crate::lattice::TriPoint;
use crate::similitude::Similitude;

use super::WitnessTally;

/// Offsets of the other two vertices of a side-`2^-m` triangle at scale
/// `m + 1`, for up and down orientation.
const UP: [(i64, i64); 2] = [(2, 0), (1, 1)];
const DOWN: [(i64, i64); 2] = [(2, 0), (1, -1)];

const PERMS: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];

/// Corners of the unit triangle in the order (apex, origin, (1, 0)).
fn unit_corners() -> [TriPoint; 3] {
    let [a, b, c] = LatticeTriangle::unit().vertices();
    [b, a, c]
}

/// Every lattice similitude of scale `2^-m` sending the unit triangle's
/// corners to three points of `B_m` that form a triangle of side `2^-m`,
/// of either orientation and under all six vertex assignments. Sorted and
/// free of duplicates.
pub fn enumerate_candidates(m: u32) -> Vec<Similitude> {
    assert!(m >= 1, "base cases start at m = 1");
    let s = m as i32 + 1;
    let verts: HashSet<(i64, i64)> = cells(m as i32).iter().flat_map(|c| c.vertices()).map(|v| v.at_scale(s)).collect();
    let src = unit_corners();
    let mut out = BTreeSet::new();
    for &(u, v) in &verts {
        for offs in [UP, DOWN] {
            let tri = [(u, v), (u + offs[0].0, v + offs[0].1), (u + offs[1].0, v + offs[1].1)];
            if !tri[1..].iter().all(|p| verts.contains(p)) {
                continue;
            }
            let pts = tri.map(|(a, b)| TriPoint::new(a, b, s).expect("lattice parity"));
            for perm in PERMS {
                let dst = perm.map(|i| pts[i]);
                let f = Similitude::from_lattice_triple(src, dst).expect("lattice triangles are similar in class");
                out.insert(f);
            }
        }
    }
    out.into_iter().collect()
}

/// Independent count of the candidates: scan the lattice grid over the
/// bounding box of the big gasket, test each point for membership in `B_m`
/// by address descent, count up and down triangles of side `2^-m` with all
/// corners in `B_m`, and multiply by the six vertex assignments.
pub fn recount_candidates(m: u32) -> usize {
    let s = m as i32 + 1;
    let w = 8i64 << s; // x in [0, 8]
    let h = 4i64 << s; // y / sqrt3 in [0, 4]
    let idx = |u: i64, v: i64| (v * (w + 1) + u) as usize;
    let mut grid = vec![false; ((w + 1) * (h + 1)) as usize];
    for v in 0..=h {
        for u in (v % 2..=w).step_by(2) {
            grid[idx(u, v)] = is_lattice_vertex_b(&TriPoint::new(u, v, s).expect("parity"), m as i32);
        }
    }
    let inside = |u: i64, v: i64| (0..=w).contains(&u) && (0..=h).contains(&v) && grid[idx(u, v)];
    let mut triangles = 0;
    for v in 0..=h {
        for u in (v % 2..=w).step_by(2) {
            if !inside(u, v) {
                continue;
            }
            for offs in [UP, DOWN] {
                if offs.iter().all(|&(du, dv)| inside(u + du, v + dv)) {
                    triangles += 1;
                }
            }
        }
    }
    6 * triangles
}

/// A disjointness failure for an admissible map.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct Violation {
    pub map: Similitude,
    pub decision: Decision,
}

/// For an admissible map of scale `2^-m`, the power `k` of `T` at which
/// `T^k(tri_678) ∩ f(E) = ∅` was verified.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct KEntry {
    pub map: Similitude,
    pub k: u32,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, serde::Serialize)]
pub struct CrossCheckSummary {
    pub sampled: usize,
    pub queries: usize,
    pub confident: usize,
    pub agreements: usize,
    pub disagreements: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct BaseCaseRecord {
    pub m: u32,
    pub candidate_count: usize,
    pub recount: usize,
    pub admissible_count: usize,
    /// Admissible maps whose image of the unit triangle is an up cell of `A_m`.
    pub up_cell_images: usize,
    pub violations: Vec<Violation>,
    pub inconclusive: usize,
    /// Disjointness also verified for `T^k`, `k = m..m+3`, for every admissible map.
    pub monotone_k: bool,
    pub max_depth_used: u32,
    pub witnesses: WitnessTally,
    pub decisions_digest: String,
    pub k_report: Vec<KEntry>,
    pub crosscheck: CrossCheckSummary,
}

impl BaseCaseRecord {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
            && self.inconclusive == 0
            && self.monotone_k
            && self.witnesses.all_verified()
            && self.candidate_count == self.recount
            && self.crosscheck.disagreements == 0
    }
}

struct Outcome {
    map: Similitude,
    admissibility: Decision,
    disjoint: Option<Decision>,
    monotone: bool,
    up_cell: bool,
    inconclusive: usize,
    max_depth: u32,
    witnesses: WitnessTally,
    crosscheck: CrossCheckSummary,
}

fn admissibility(f: &Similitude, e: &GasketUnion, budget: u32) -> (Decision, GasketUnion) {
    let image = image_of_union(f, e);
    let mut depth = 0;
    let mut worst = None;
    for g in image.pieces() {
        let d = piece_subset_union(g, e, budget);
        depth = depth.max(d.depth_used);
        match d.verdict {
            Verdict::Fails => return (d, image),
            Verdict::Inconclusive => worst = Some(d),
            Verdict::Holds => {}
        }
    }
    (worst.unwrap_or_else(|| Decision::holds(depth)), image)
}

fn evaluate(f: &Similitude, m: u32, tri_678: &LatticeTriangle, budget: u32, sample: bool) -> Outcome {
    let e = build_e(5);
    let mut witnesses = WitnessTally::default();
    let mut crosscheck = CrossCheckSummary::default();
    let (adm, image) = admissibility(f, &e, budget);
    let mut inconclusive = usize::from(adm.is_inconclusive());
    let mut max_depth = adm.depth_used;
    if let Some(w) = &adm.witness {
        witnesses.record(witness_refutes_subset(w, &image, &e));
    }
    if sample {
        crosscheck.sampled = 1;
        crosscheck.queries += 1;
        let votes: Vec<Option<Verdict>> = image.pieces().iter().map(|g| subset_oracle(g, &e)).collect();
        let oracle = if votes.contains(&Some(Verdict::Fails)) {
            Some(Verdict::Fails)
        } else if votes.iter().all(|v| *v == Some(Verdict::Holds)) {
            Some(Verdict::Holds)
        } else {
            None
        };
        tally(&mut crosscheck, oracle, adm.verdict);
    }

    let mut disjoint = None;
    let mut monotone = true;
    let mut up_cell = false;
    if adm.is_holds() {
        up_cell = is_cell_of(&LatticeTriangle::unit().image(f), m as i32);
        let t = Similitude::t_map();
        for k in m..=m + 3 {
            let target = tri_678.image(&t.pow(k));
            let d = triangle_meets_union(&target, &image, budget);
            max_depth = max_depth.max(d.depth_used);
            inconclusive += usize::from(d.is_inconclusive());
            if let Some(w) = &d.witness {
                witnesses.record(witness_meets(w, &target, &image));
            }
            if k == m {
                if sample {
                    crosscheck.queries += 1;
                    tally(&mut crosscheck, disjoint_oracle(&target, &image), d.verdict);
                }
                disjoint = Some(d);
            } else if !d.is_holds() {
                monotone = false;
            }
        }
    }
    Outcome { map: *f, admissibility: adm, disjoint, monotone, up_cell, inconclusive, max_depth, witnesses, crosscheck }
}

fn tally(c: &mut CrossCheckSummary, oracle: Option<Verdict>, exact: Verdict) {
    if let Some(v) = oracle {
        c.confident += 1;
        if v == exact {
            c.agreements += 1;
        } else {
            c.disagreements += 1;
        }
    }
}

/// Exhaustive check at scale `2^-m`: filter candidates by `f(E) ⊆ E`, then
/// prove `T^m(tri_678) ∩ f(E) = ∅` for each admissible map. A seeded
/// sample of `per_mille / 1000` of the candidates is cross-checked against
/// the floating oracle.
pub fn verify_base_case(m: u32, tri_678: &LatticeTriangle, budget: u32, seed: u64, per_mille: u32) -> BaseCaseRecord {
    let candidates = enumerate_candidates(m);
    let recount = recount_candidates(m);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ u64::from(m));
    let sampled: Vec<bool> = candidates.iter().map(|_| rng.gen_range(0..1000) < per_mille).collect();
    let outcomes: Vec<Outcome> =
        candidates.par_iter().zip(sampled.par_iter()).map(|(f, &s)| evaluate(f, m, tri_678, budget, s)).collect();

    let mut hasher = Sha256::new();
    let mut rec = BaseCaseRecord {
        m,
        candidate_count: candidates.len(),
        recount,
        admissible_count: 0,
        up_cell_images: 0,
        violations: Vec::new(),
        inconclusive: 0,
        monotone_k: true,
        max_depth_used: 0,
        witnesses: WitnessTally::default(),
        decisions_digest: String::new(),
        k_report: Vec::new(),
        crosscheck: CrossCheckSummary::default(),
    };
    for o in &outcomes {
        let disjoint = o.disjoint.as_ref().map_or("-".to_string(), |d| d.to_string());
        hasher.update(format!("{}\t{}\t{}\n", o.map, o.admissibility, disjoint).as_bytes());
        rec.inconclusive += o.inconclusive;
        rec.max_depth_used = rec.max_depth_used.max(o.max_depth);
        rec.witnesses.merge(&o.witnesses);
        let c = &o.crosscheck;
        rec.crosscheck.sampled += c.sampled;
        rec.crosscheck.queries += c.queries;
        rec.crosscheck.confident += c.confident;
        rec.crosscheck.agreements += c.agreements;
        rec.crosscheck.disagreements += c.disagreements;
        if !o.admissibility.is_holds() {
            continue;
        }
        rec.admissible_count += 1;
        rec.up_cell_images += usize::from(o.up_cell);
        rec.monotone_k &= o.monotone;
        let d = o.disjoint.as_ref().expect("admissible maps get a disjointness decision");
        match d.verdict {
            Verdict::Holds => rec.k_report.push(KEntry { map: o.map, k: m }),
            Verdict::Fails => rec.violations.push(Violation { map: o.map, decision: d.clone() }),
            Verdict::Inconclusive => {}
        }
    }
    rec.decisions_digest = hex::encode(hasher.finalize());
    rec
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::TriPoint;

    fn tri_678() -> LatticeTriangle {
        "up (3/8, 1/4*sqrt3) 3".parse().unwrap()
    }

    #[test]
    fn m1_candidates() {
        let c = enumerate_candidates(1);
        let half_shift = Similitude::homothety(1, TriPoint::new(2, 0, 2).unwrap());
        assert!(c.contains(&half_shift));
        assert!(c.iter().all(|f| f.e() == 1));
        assert_eq!(c.len(), recount_candidates(1));
    }

    #[test]
    fn m1_base_case() {
        let r = verify_base_case(1, &tri_678(), 12, 1, 0);
        assert_eq!(r.admissible_count, 12);
        assert!(r.violations.is_empty());
        assert!(r.holds(), "{r:?}");
        assert_eq!(r.up_cell_images, 12);
    }
}
