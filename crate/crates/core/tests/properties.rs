use std::sync::OnceLock;

use gasket_core::algebra::{
    distance_to_union, image_of_union, piece_subset_union, triangle_in_triangle, triangle_meets_union, witness_meets,
    witness_refutes_subset, DEFAULT_DEPTH_BUDGET,
};
use gasket_core::arith::pow2;
use gasket_core::crosscheck::sampled_distance;
use gasket_core::gasket::{build_e, cells, point_in_gasket, point_in_union, vertices_b};
use gasket_core::verifier::{derive_geometry, enumerate_candidates};
use gasket_core::*;
use num_rational::BigRational;
use proptest::prelude::*;

fn surd() -> impl Strategy<Value = Surd> {
    (-50i64..50, 1i64..20, -50i64..50, 1i64..20).prop_map(|(a, b, c, d)| Surd::frac(a, b, c, d))
}

fn tripoint(max_s: i32) -> impl Strategy<Value = TriPoint> {
    (-64i64..64, -64i64..64, 0..=max_s).prop_map(|(u, v, s)| TriPoint::new(u, v + (u - v).rem_euclid(2), s).unwrap())
}

fn similitude() -> impl Strategy<Value = Similitude> {
    (0u8..6, any::<bool>(), -3i32..5, tripoint(4)).prop_map(|(rot, refl, e, t)| Similitude::new(rot, refl, e, t))
}

fn lattice_triangle() -> impl Strategy<Value = LatticeTriangle> {
    (tripoint(4), -2i32..5, any::<bool>())
        .prop_map(|(a, exp, up)| LatticeTriangle::new(a, exp, if up { Orient::Up } else { Orient::Down }))
}

fn unit_symmetries() -> Vec<Similitude> {
    let vs = LatticeTriangle::unit().vertices();
    let perms = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    perms.iter().map(|p| Similitude::from_lattice_triple(vs, p.map(|i| vs[i])).unwrap()).collect()
}

fn candidates(m: u32) -> &'static [Similitude] {
    static CACHE: OnceLock<Vec<Vec<Similitude>>> = OnceLock::new();
    &CACHE.get_or_init(|| (1..=3).map(enumerate_candidates).collect())[m as usize - 1]
}

proptest! {
    #[test]
    fn field_axioms(a in surd(), b in surd(), c in surd()) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        if !b.is_zero() {
            prop_assert_eq!(&(&a / &b) * &b, a);
        }
    }

    #[test]
    fn surd_text_round_trip(a in surd()) {
        prop_assert_eq!(a.to_string().parse::<Surd>().unwrap(), a);
    }

    #[test]
    fn tripoint_round_trip(t in tripoint(12)) {
        prop_assert_eq!(TriPoint::from_point(&t.to_point()), Some(t));
        prop_assert_eq!(t.to_string().parse::<TriPoint>().unwrap(), t);
    }

    #[test]
    fn sqdist_metric(p in tripoint(6), q in tripoint(6), r in tripoint(6)) {
        let (p, q, r) = (p.to_point(), q.to_point(), r.to_point());
        prop_assert_eq!(sqdist(&p, &q), sqdist(&q, &p));
        // sqrt(a) <= sqrt(b) + sqrt(c)  <=>  a - b - c <= 0  or  (a - b - c)^2 <= 4bc
        let (a, b, c) = (sqdist(&p, &r), sqdist(&p, &q), sqdist(&q, &r));
        let excess = &(&a - &b) - &c;
        let four_bc = (&b * &c).mul_pow2(2);
        prop_assert!(excess.sign() != Sign::Positive || excess.square() <= four_bc);
    }

    #[test]
    fn compose_is_composition(f in similitude(), g in similitude(), p in tripoint(6)) {
        let fg = f.compose(&g);
        prop_assert_eq!(fg.apply_lattice(&p), f.apply_lattice(&g.apply_lattice(&p)));
        prop_assert_eq!(fg.apply(&p.to_point()), f.apply(&g.apply(&p.to_point())));
    }

    #[test]
    fn scaling_law(f in similitude(), p in tripoint(6), q in tripoint(6)) {
        let (p, q) = (p.to_point(), q.to_point());
        let lhs = sqdist(&f.apply(&p), &f.apply(&q));
        prop_assert_eq!(lhs, sqdist(&p, &q).scale(&pow2(-2 * f.e())));
    }

    #[test]
    fn triple_recovers_map(f in similitude(), t in lattice_triangle()) {
        let src = t.vertex_points();
        let dst = src.clone().map(|p| f.apply(&p));
        let g = Similitude::from_triple([&src[0], &src[1], &src[2]], [&dst[0], &dst[1], &dst[2]]).unwrap();
        prop_assert_eq!(g, f);
    }

    #[test]
    fn gasket_has_triangle_symmetry(u in -8i64..72, v in -8i64..64, s in 0i32..=6) {
        let p = TriPoint::new(u, v + (u - v).rem_euclid(2), s).unwrap();
        let g = GasketPiece::new(LatticeTriangle::unit());
        let here = point_in_gasket(&p.to_point(), &g);
        for sigma in unit_symmetries() {
            prop_assert_eq!(point_in_gasket(&sigma.apply(&p.to_point()), &g), here);
        }
    }

    #[test]
    fn odd_denominators_decide(q in (1i64..=50).prop_map(|k| 2 * k - 1), a in 0i64..200, b in 0i64..200) {
        let g = GasketPiece::new(LatticeTriangle::unit());
        let rational = Point::new(Surd::frac(a % (q + 1), q, 0, 1), Surd::frac(b % (q + 1), q, 0, 1));
        let lattice_like = Point::new(Surd::frac(a % (q + 1), q, 0, 1), Surd::frac(0, 1, b % (q + 1), 2 * q));
        for p in [rational, lattice_like] {
            prop_assert!(!matches!(point_in_gasket(&p, &g), Membership::Inconclusive(_)), "{}", p);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn sign_matches_float(a in surd()) {
        let x = a.to_f64();
        prop_assume!(x.abs() > 1e-9);
        let want = if x > 0.0 { Sign::Positive } else { Sign::Negative };
        prop_assert_eq!(a.sign(), want);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn witnesses_reverify(m in 1u32..=3, pick in any::<prop::sample::Index>()) {
        let f = pick.get(candidates(m));
        let e = build_e(5);
        let image = image_of_union(f, &e);
        for g in image.pieces() {
            let d = piece_subset_union(g, &e, DEFAULT_DEPTH_BUDGET);
            prop_assert!(!d.is_inconclusive());
            if let Some(w) = &d.witness {
                prop_assert!(d.is_fails());
                prop_assert!(witness_refutes_subset(w, &GasketUnion::new([*g]), &e), "{} {}", f, w);
                prop_assert_eq!(point_in_union(w, &e), Membership::Outside);
            }
        }
        let (marks, _) = derive_geometry().unwrap();
        let target = marks.tri_678.image(&Similitude::t_map().pow(m));
        let meets = triangle_meets_union(&target, &image, DEFAULT_DEPTH_BUDGET);
        prop_assert!(!meets.is_inconclusive());
        if let Some(w) = &meets.witness {
            prop_assert!(witness_meets(w, &target, &image));
        }
    }

    #[test]
    fn subset_is_monotone(m in 1u32..=3, pick in any::<prop::sample::Index>(), extra in similitude()) {
        let f = pick.get(candidates(m));
        let e = build_e(5);
        let bigger = e.union(&image_of_union(&extra, &build_e(1)));
        for g in image_of_union(f, &e).pieces() {
            if piece_subset_union(g, &e, DEFAULT_DEPTH_BUDGET).is_holds() {
                prop_assert!(piece_subset_union(g, &bigger, DEFAULT_DEPTH_BUDGET).is_holds());
            }
        }
    }
}

#[test]
fn cell_counts_are_powers_of_three() {
    for n in -3..=4 {
        assert_eq!(cells(n).len(), 3usize.pow((n + 3) as u32), "n = {n}");
    }
}

#[test]
fn vertex_sets_grow() {
    for n in -3..=3 {
        let (small, big) = (vertices_b(n), vertices_b(n + 1));
        assert!(small.is_subset(&big) && small.len() < big.len(), "n = {n}");
    }
}

#[test]
fn approximants_nest() {
    for n in -3..=2 {
        let coarse = cells(n);
        for c in cells(n + 1) {
            assert!(coarse.iter().any(|p| triangle_in_triangle(&c, p)), "{c} in A_{n}");
        }
    }
}

#[test]
fn t_cubed_is_a_homothety() {
    let t = Similitude::t_map();
    let c = t.fixed_point().unwrap();
    assert_eq!(c, "(3/7, 2/7*sqrt3)".parse().unwrap());
    let t3 = t.pow(3);
    assert_eq!((t3.rot(), t3.refl(), t3.e()), (0, false, 3));
    assert_eq!(t3.apply(&c), c);
    assert_eq!(t3.scaling_factor(), BigRational::new(1.into(), 8.into()));
}

#[test]
fn exact_distance_matches_sampling() {
    let e = build_e(5);
    let (marks, _) = derive_geometry().unwrap();
    let cases = [
        (marks.tri_678, e.without_cell(&marks.tri_145).unwrap(), vec![marks.p4.clone(), marks.p5.clone()]),
        ("up (21/4, 0) 2".parse().unwrap(), e.clone(), vec![]),
        ("down (1/2, 1*sqrt3) 2".parse().unwrap(), e.clone(), vec![]),
        ("up (4, 2*sqrt3) 0".parse().unwrap(), e.clone(), vec![]),
        ("down (5/2, 1*sqrt3) 1".parse().unwrap(), e.clone(), vec![]),
    ];
    for (d, u, removed) in cases {
        let exact = distance_to_union(&d, &u, &removed).unwrap().sq_distance.to_f64().sqrt();
        let sampled = sampled_distance(&d, &u, 64);
        assert!(exact > 0.0);
        assert!((sampled - exact).abs() <= 1e-6 * exact, "{d}: exact {exact}, sampled {sampled}");
    }
}
