use std::cmp::Ordering::{Equal, Greater, Less};

use proptest::prelude::*;
use proptest::sample::Index;
use twinmorse::coxcomplex::FiniteType;
use twinmorse::exactgeom::{RationalVector, Q};
use twinmorse::sphbuild::{
    build_building, cos_angle_sign, cos_distance_sign, spherical_projection, BuildingSpec, NorthPole, SphericalBuilding,
};

fn specs() -> Vec<BuildingSpec> {
    let p = BuildingSpec::Points;
    vec![
        p(3),
        BuildingSpec::join(p(3), p(3)),
        BuildingSpec::Flags { q: 2, n: 2 },
        BuildingSpec::Coxeter(FiniteType::A2),
        BuildingSpec::Coxeter(FiniteType::B2),
        BuildingSpec::Coxeter(FiniteType::G2),
        BuildingSpec::Coxeter(FiniteType::A3),
        BuildingSpec::join(p(3), BuildingSpec::Flags { q: 2, n: 2 }),
    ]
}

fn building(i: usize) -> SphericalBuilding {
    build_building(&specs()[i]).unwrap()
}

fn pole(b: &SphericalBuilding, ch: Index, ws: &[u32]) -> NorthPole {
    let c = b.chambers()[ch.index(b.chambers().len())].clone();
    let mut w: Vec<Q> = c.iter().zip(ws).map(|(_, &x)| Q::from_integer(x.into())).collect();
    if w.iter().all(|x| x == &Q::from_integer(0.into())) {
        w[0] = Q::from_integer(1.into());
    }
    NorthPole::new(c, w)
}

fn weights() -> impl Strategy<Value = Vec<u32>> {
    proptest::collection::vec(0u32..=5, 8)
}

fn apartment(b: &SphericalBuilding, ch: Index) -> Vec<RationalVector> {
    let c = b.chambers()[ch.index(b.chambers().len())].clone();
    b.apartments(&c, 1).pop().expect("an apartment through a chamber").into_values().collect()
}

fn proper_triangle(a: &RationalVector, b: &RationalVector, c: &RationalVector) -> bool {
    // distinct and pairwise not antipodal
    let ok = |x: &RationalVector, y: &RationalVector| twinmorse::exactgeom::rank(&[x.clone(), y.clone()]) == 2;
    ok(a, b) && ok(b, c) && ok(a, c)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn polar_class_is_apartment_independent(i in 0usize..8, ch: Index, ws in weights()) {
        let b = building(i);
        let n = pole(&b, ch, &ws);
        for v in b.vertices() {
            let cs = b.polar_class_of_vertex(&n, v, 3);
            prop_assert!(!cs.is_empty());
            prop_assert!(cs.windows(2).all(|w| w[0] == w[1]), "vertex {} gets {:?}", v, cs);
        }
    }

    #[test]
    fn horizontal_times_vertical_is_everything(i in 0usize..8, ch: Index, ws in weights()) {
        let b = building(i);
        let hc = b.hemisphere_complexes(&b.polar_class(&pole(&b, ch, &ws)));
        prop_assert!(hc.horizontal.is_subcomplex_of(&hc.equator));
        prop_assert_eq!(hc.horizontal.join(&hc.vertical).f_vector(), b.complex.f_vector());
        prop_assert!(hc.horizontal.join(&hc.vertical).is_subcomplex_of(&b.complex));
        prop_assert!(hc.open.is_subcomplex_of(&hc.closed));
    }

    #[test]
    fn criteria_agree(i in 0usize..8, ch: Index, ws in weights()) {
        let b = building(i);
        let polar = b.polar_class(&pole(&b, ch, &ws));
        let hc = b.hemisphere_complexes(&polar);
        for s in hc.equator.simplices() {
            let (g, d) = b.horizontality_criteria(&polar, s);
            prop_assert_eq!(g, d);
            prop_assert_eq!(g, hc.horizontal.contains(s));
        }
    }

    #[test]
    fn spherical_triangles(i in 3usize..7, ch: Index, picks in proptest::collection::vec(any::<Index>(), 3)) {
        let b = building(i);
        let ap = apartment(&b, ch);
        let [a, bb, c] = [0, 1, 2].map(|k| ap[picks[k].index(ap.len())].clone());
        prop_assume!(proper_triangle(&a, &bb, &c));
        let d = cos_distance_sign;
        let (beta, gamma) = (cos_angle_sign(&bb, &a, &c), cos_angle_sign(&c, &a, &bb));
        if d(&a, &bb) == Equal && d(&bb, &c) != Less && d(&a, &c) != Less {
            prop_assert!(gamma != Greater);
        }
        if d(&a, &bb) == Equal && beta == Equal {
            prop_assert!(d(&a, &c) == Equal && gamma == Equal);
        }
        if d(&a, &bb) == Equal && beta == Greater {
            prop_assert_eq!(d(&a, &c), Greater);
        }
        if d(&a, &bb) == Equal && d(&a, &c) == Equal {
            prop_assert!(beta == Equal && gamma == Equal);
        }
        if beta == Equal && gamma == Equal {
            prop_assert!(d(&a, &bb) == Equal && d(&a, &c) == Equal);
        }
    }

    #[test]
    fn projection_to_a_chamber(i in 3usize..7, ch: Index, p in proptest::collection::vec(-9i64..=9, 4), ws in proptest::collection::vec(1u32..=7, 4)) {
        let b = building(i);
        let c = b.chambers()[ch.index(b.chambers().len())].clone();
        let ap = b.apartments(&c, 1).pop().unwrap();
        let verts: Vec<RationalVector> = c.iter().map(|v| ap[v].clone()).collect();
        let dim = verts[0].dim();
        let p = RationalVector::from_ints(&p[..dim]);
        let Some(proj) = spherical_projection(&p, &verts) else {
            // then every point of the chamber is at least π/2 away
            prop_assert!(verts.iter().all(|v| cos_distance_sign(&p, v) != Greater));
            return Ok(());
        };
        prop_assert_eq!(cos_distance_sign(&p, &proj), Greater);
        // a sample point of the chamber is no closer, and the angle at the projection is obtuse
        let mut m = RationalVector::zeros(dim);
        for (v, w) in verts.iter().zip(&ws) {
            m = m.axpy(&Q::from_integer((*w).into()), v);
        }
        let closeness = |x: &RationalVector| {
            let t = p.dot(x);
            if t <= Q::from_integer(0.into()) { Q::from_integer((-1).into()) } else { &t * &t / x.norm_sq() }
        };
        prop_assert!(closeness(&proj) >= closeness(&m));
        if twinmorse::exactgeom::rank(&[proj.clone(), m.clone()]) == 2 && twinmorse::exactgeom::rank(&[proj.clone(), p.clone()]) == 2 {
            prop_assert!(cos_angle_sign(&proj, &p, &m) != Greater);
        }
        for v in &verts {
            if twinmorse::exactgeom::rank(&[proj.clone(), v.clone()]) == 2 && twinmorse::exactgeom::rank(&[proj.clone(), p.clone()]) == 2 {
                prop_assert!(cos_angle_sign(&proj, &p, v) != Greater);
            }
        }
    }
}

#[test]
fn spherical_triangles_exhaustive() {
    let mut hits = [0usize; 5];
    for i in 3..7 {
        let b = building(i);
        let ap: Vec<RationalVector> = b.apartments(&b.chambers()[0], 1).pop().unwrap().into_values().collect();
        for a in &ap {
            for bb in &ap {
                for c in &ap {
                    if !proper_triangle(a, bb, c) {
                        continue;
                    }
                    let d = cos_distance_sign;
                    let (beta, gamma) = (cos_angle_sign(bb, a, c), cos_angle_sign(c, a, bb));
                    if d(a, bb) == Equal && d(bb, c) != Less && d(a, c) != Less {
                        hits[0] += 1;
                        assert!(gamma != Greater);
                    }
                    if d(a, bb) == Equal && beta == Equal {
                        hits[1] += 1;
                        assert!(d(a, c) == Equal && gamma == Equal);
                    }
                    if d(a, bb) == Equal && beta == Greater {
                        hits[2] += 1;
                        assert_eq!(d(a, c), Greater);
                    }
                    if d(a, bb) == Equal && d(a, c) == Equal {
                        hits[3] += 1;
                        assert!(beta == Equal && gamma == Equal);
                    }
                    if beta == Equal && gamma == Equal {
                        hits[4] += 1;
                        assert!(d(a, bb) == Equal && d(a, c) == Equal);
                    }
                }
            }
        }
    }
    assert!(hits.iter().all(|&h| h > 0), "every premise should occur: {hits:?}");
}
