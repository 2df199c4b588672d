use std::collections::{BTreeMap, HashMap};

use crate::algebra::{image_of_union, union_equal, Decision};
use crate::gasket::{build_e, GasketUnion, LatticeTriangle};
use crate::similitude::{Ifs, Similitude};

/// Node budget for the exact-cover search before falling back to a cover
/// that allows overlapping images.
const EXACT_COVER_NODES: usize = 200_000;

#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct IfsSearch {
    pub n: u32,
    pub max_scale: i32,
    pub placements: usize,
    pub ifs: Option<Ifs>,
    /// The images tile without overlap (beyond shared boundaries).
    pub exact_cover: bool,
    /// A `None` result is only conclusive for the searched scales.
    pub note: String,
}

struct Placement {
    map: Similitude,
    cells: Vec<usize>,
}

fn descendants(t: &LatticeTriangle, depth: i32) -> Vec<LatticeTriangle> {
    let mut level = vec![*t];
    for _ in 0..depth {
        level = level.iter().flat_map(|c| c.children()).collect();
    }
    level
}

/// All distinct images `f(E_n)` whose pieces are cells of `E_n`, with
/// scale `2^-e` for `e = 1..=max_e`; one canonical map per image.
fn placements(n: u32, max_e: i32, finest: &HashMap<LatticeTriangle, usize>) -> Vec<Placement> {
    let e_n = build_e(n);
    let unit = LatticeTriangle::unit();
    let src = {
        let [a, b, c] = unit.vertices();
        [a, b, c]
    };
    let perms = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    let mut by_image: BTreeMap<Vec<LatticeTriangle>, Similitude> = BTreeMap::new();
    for e in 1..=max_e {
        for piece in e_n.pieces() {
            for cell in descendants(&piece.tri, e) {
                let vs = cell.vertices();
                for p in perms {
                    let Some(f) = Similitude::from_lattice_triple(src, p.map(|i| vs[i])) else {
                        continue;
                    };
                    let image = image_of_union(&f, &e_n);
                    let inside =
                        image.pieces().iter().all(|g| e_n.pieces().iter().any(|q| g.tri.address_in(&q.tri).is_some()));
                    if !inside || image.len() != n as usize {
                        continue;
                    }
                    let key: Vec<LatticeTriangle> = image.pieces().iter().map(|g| g.tri).collect();
                    by_image.entry(key).and_modify(|g| *g = (*g).min(f)).or_insert(f);
                }
            }
        }
    }
    let mut out: Vec<Placement> = by_image
        .into_iter()
        .map(|(tris, map)| {
            let cells = tris
                .iter()
                .flat_map(|t| descendants(t, max_e - t.exp()))
                .map(|c| *finest.get(&c).unwrap_or_else(|| panic!("{c:?} from {tris:?} {map}")))
                .collect();
            Placement { map, cells }
        })
        .collect();
    // larger images first
    out.sort_by_key(|p| (p.map.e(), p.map));
    out
}

fn exact_cover(
    placements: &[Placement],
    by_cell: &[Vec<usize>],
    covered: &mut [bool],
    chosen: &mut Vec<usize>,
    nodes: &mut usize,
) -> Option<bool> {
    *nodes += 1;
    if *nodes > EXACT_COVER_NODES {
        return None;
    }
    let fits = |p: usize| placements[p].cells.iter().all(|&c| !covered[c]);
    // most constrained uncovered cell
    let mut best: Option<(usize, Vec<usize>)> = None;
    for (c, ps) in by_cell.iter().enumerate() {
        if covered[c] {
            continue;
        }
        let options: Vec<usize> = ps.iter().copied().filter(|&p| fits(p)).collect();
        if best.as_ref().is_none_or(|(_, b)| options.len() < b.len()) {
            let done = options.is_empty();
            best = Some((c, options));
            if done {
                break;
            }
        }
    }
    let Some((_, options)) = best else {
        return Some(true);
    };
    for p in options {
        for &c in &placements[p].cells {
            covered[c] = true;
        }
        chosen.push(p);
        match exact_cover(placements, by_cell, covered, chosen, nodes) {
            Some(true) => return Some(true),
            None => return None,
            Some(false) => {}
        }
        chosen.pop();
        for &c in &placements[p].cells {
            covered[c] = false;
        }
    }
    Some(false)
}

/// Greedy cover allowing overlaps: repeatedly take the placement covering
/// the most uncovered cells among those covering the scarcest cell.
fn overlap_cover(placements: &[Placement], by_cell: &[Vec<usize>]) -> Option<Vec<usize>> {
    let mut covered = vec![false; by_cell.len()];
    let mut chosen = Vec::new();
    loop {
        let scarce = (0..by_cell.len()).filter(|&c| !covered[c]).min_by_key(|&c| by_cell[c].len());
        let Some(c) = scarce else {
            return Some(chosen);
        };
        let gain = |p: usize| placements[p].cells.iter().filter(|&&c| !covered[c]).count();
        let &p = by_cell[c].iter().max_by_key(|&&p| (gain(p), std::cmp::Reverse(p)))?;
        for &c in &placements[p].cells {
            covered[c] = true;
        }
        chosen.push(p);
    }
}

/// Search for an IFS of lattice similitudes whose attractor is
/// n-Sierpinski: a family of images `f(E_n)`, each a union of cells of
/// `E_n`, covering `E_n`. Images of scale down to `2^-max_e` are tried; an
/// exact tiling is preferred and overlapping covers are the fallback.
pub fn find_ifs(n: u32, max_e: i32) -> IfsSearch {
    let e_n = build_e(n);
    let finest_cells: Vec<LatticeTriangle> = e_n.pieces().iter().flat_map(|p| descendants(&p.tri, max_e)).collect();
    let finest: HashMap<LatticeTriangle, usize> = finest_cells.iter().enumerate().map(|(i, c)| (*c, i)).collect();
    let placements = placements(n, max_e, &finest);
    let mut by_cell = vec![Vec::new(); finest_cells.len()];
    for (i, p) in placements.iter().enumerate() {
        for &c in &p.cells {
            by_cell[c].push(i);
        }
    }
    let mut search = IfsSearch {
        n,
        max_scale: max_e,
        placements: placements.len(),
        ifs: None,
        exact_cover: false,
        note: String::new(),
    };
    if let Some(c) = by_cell.iter().position(|ps| ps.is_empty()) {
        search.note = format!(
            "no image of scale 2^-1..2^-{max_e} covers cell {}; bounded search only, not a proof of non-self-similarity",
            finest_cells[c]
        );
        return search;
    }
    let mut covered = vec![false; finest_cells.len()];
    let mut chosen = Vec::new();
    let mut nodes = 0;
    let picked = match exact_cover(&placements, &by_cell, &mut covered, &mut chosen, &mut nodes) {
        Some(true) => {
            search.exact_cover = true;
            Some(chosen)
        }
        _ => overlap_cover(&placements, &by_cell),
    };
    match picked {
        Some(ps) => {
            let mut maps: Vec<Similitude> = ps.iter().map(|&p| placements[p].map).collect();
            maps.sort();
            search.ifs = Some(Ifs::new(maps).expect("placements are contractive"));
            search.note =
                if search.exact_cover { "exact tiling".into() } else { "cover with overlapping images".into() };
        }
        None => search.note = "no cover found; bounded search only".into(),
    }
    search
}

/// `∪ f(E_n) = E_n`, decided exactly.
pub fn verify_attractor(ifs: &Ifs, n: u32, budget: u32) -> Decision {
    let e_n = build_e(n);
    let images = ifs.maps().iter().fold(GasketUnion::default(), |acc, f| acc.union(&image_of_union(f, &e_n)));
    union_equal(&images, &e_n, budget)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sierpinski_maps_are_an_ifs_for_one_gasket() {
        assert!(verify_attractor(&Ifs::sierpinski(), 1, 12).is_holds());
    }

    #[test]
    fn found_ifs_verify() {
        for n in 1..=4 {
            let s = find_ifs(n, 3);
            let ifs = s.ifs.unwrap_or_else(|| panic!("n = {n}: {}", s.note));
            assert!(verify_attractor(&ifs, n, 12).is_holds(), "n = {n}");
        }
    }

    #[test]
    fn five_in_a_row_has_no_bounded_cover() {
        let s = find_ifs(5, 3);
        assert!(s.ifs.is_none());
        assert!(s.note.contains("not a proof"));
    }

    #[test]
    fn wrong_ifs_fails() {
        let ifs = Ifs::new(vec![Similitude::homothety(1, crate::lattice::TriPoint::origin())]).unwrap();
        let d = verify_attractor(&ifs, 1, 12);
        assert!(d.is_fails());
    }
}
