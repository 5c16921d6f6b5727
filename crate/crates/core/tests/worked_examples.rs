//! Small worked cases with answers computed by hand or by an independent brute force.

use std::cmp::Ordering;
use std::collections::{BTreeSet, VecDeque};

use num_traits::Zero;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use twinmorse::coxcomplex::{build_affine_window, link_with_types, AffineRealization, AffineType};
use twinmorse::exactgeom::{cmp_sum_sqrt, perp_component, q, qi, solve_square, RationalVector, SqrtRational, Q};
use twinmorse::homology::{greedy_collapse, reduced_homology, sphericity_report, CollapseOutcome, Sphericity};
use twinmorse::horolinks::move_bound;
use twinmorse::morse::{punctured_boundary, CellClass, MorseModel, MorseValue};
use twinmorse::polycomplex::{barycentric_subdivide, join_exists, PolyCell, PolyComplex};
use twinmorse::sphbuild::{build_building, BuildingSpec, NorthPole, Polar};
use twinmorse::twin::{make_rich_generators, Richness, ThinTwinModel};
use twinmorse::zonotope::{embed_parallel_translate, is_sufficiently_rich, minmax_over_polytope, sum_rich_generators, Zonotope};

fn v(xs: &[i64]) -> RationalVector {
    RationalVector::from_ints(xs)
}

#[test]
fn square_root_comparisons() {
    let s = SqrtRational::from_square;
    assert_eq!(s(qi(5)).cmp(&s(q(49, 10))), Ordering::Greater);
    // (√2 + √8)/2 = (3/2)√2 = √(9/2)
    assert_eq!(cmp_sum_sqrt(&s(qi(2)), &s(qi(8)), &s(q(9, 2))), Ordering::Equal);
    assert_eq!(cmp_sum_sqrt(&s(qi(2)), &s(qi(8)), &s(q(44, 10))), Ordering::Greater);
}

#[test]
fn perpendicular_part() {
    let p = perp_component(&v(&[1, 2, 3]), &[v(&[1, 1, 0]), v(&[0, 0, 1])]).unwrap();
    assert_eq!(p, RationalVector::new(vec![q(-1, 2), q(1, 2), qi(0)]));
}

#[test]
fn a2_vertex_link_is_a_hexagon() {
    let (_, w) = build_affine_window(AffineType::A2, &qi(2)).unwrap();
    let o = w.vertex_id(&RationalVector::zeros(3)).unwrap();
    let l = link_with_types(&w, &[o]).unwrap();
    assert_eq!(l.complex.f_vector(), vec![6, 6]);
    for e in l.complex.of_dim(1) {
        assert_ne!(l.vertex_type[&e[0]], l.vertex_type[&e[1]]);
    }
    for x in l.complex.vertices() {
        assert_eq!(l.complex.of_dim(1).iter().filter(|e| e.contains(&x)).count(), 2);
    }
    assert_eq!(reduced_homology(&l.complex).betti, vec![0, 1]);
}

#[test]
fn join_agrees_with_coface_search() {
    let (_, w2) = build_affine_window(AffineType::A2, &qi(2)).unwrap();
    let (_, w1) = build_affine_window(AffineType::A1, &qi(2)).unwrap();
    let p = PolyComplex::product(vec![w2.complex.clone(), w1.complex.clone()]);
    let brute = |cs: &[PolyCell]| -> Option<PolyCell> {
        p.cells().filter(|c| cs.iter().all(|x| x.is_face_of(c))).min_by_key(|c| c.dim()).cloned()
    };
    let t = w2.alcoves_containing(&[w2.vertex_id(&RationalVector::zeros(3)).unwrap()]).next().unwrap().clone();
    let e = vec![w1.vertex_id(&v(&[0])).unwrap(), w1.vertex_id(&v(&[1])).unwrap()];
    let cells = vec![
        PolyCell::new(vec![vec![t[0]], vec![e[0]]]),
        PolyCell::new(vec![vec![t[1]], vec![e[1]]]),
        PolyCell::new(vec![vec![t[2]], vec![e[0]]]),
    ];
    let j = join_exists(&cells, &p).unwrap();
    assert_eq!(j, PolyCell::new(vec![t.clone(), e.clone()]));
    assert_eq!(Some(j), brute(&cells));
    // two vertices far apart have no common coface
    let far = PolyCell::new(vec![vec![w2.vertex_id(&RationalVector::zeros(3)).unwrap()], vec![w1.vertex_id(&v(&[2])).unwrap()]]);
    let c = vec![cells[0].clone(), far];
    assert_eq!(join_exists(&c, &p), None);
    assert_eq!(brute(&c), None);
}

#[test]
fn subdivided_square() {
    let e = twinmorse::polycomplex::SimplicialComplex::from_facets([vec![0, 1]]);
    let s = barycentric_subdivide(&PolyComplex::product(vec![e.clone(), e]));
    assert_eq!(s.complex.f_vector(), vec![9, 16, 8]);
}

/// Distance² from `x` to `Z` by projecting onto the affine hull of every face and keeping
/// the in-face candidates.
fn distance_by_faces(z: &Zonotope, x: &RationalVector) -> Q {
    let mut best: Option<Q> = None;
    for f in z.faces() {
        let fd = z.descriptor(f);
        let basis = twinmorse::exactgeom::orthogonal_basis(&fd.zero_set);
        let rel = x - &fd.offset;
        let mut p = fd.offset.clone();
        for b in &basis {
            p = p.axpy(&(rel.dot(b) / b.norm_sq()), b);
        }
        if !z.contains(&p) {
            continue;
        }
        let d = (x - &p).norm_sq();
        if best.as_ref().map_or(true, |b| &d < b) {
            best = Some(d);
        }
    }
    best.unwrap()
}

/// Distance² from the origin to the convex hull of `pts`, by Carathéodory over affinely independent subsets.
fn origin_to_hull(pts: &[RationalVector], dim: usize) -> Q {
    let mut best: Option<Q> = None;
    let n = pts.len();
    let mut stack: Vec<Vec<usize>> = (0..n).map(|i| vec![i]).collect();
    while let Some(s) = stack.pop() {
        // nearest point of the affine hull: minimize |Σ λ_i p_i| with Σ λ_i = 1
        let k = s.len();
        let mut m = vec![vec![Q::zero(); k + 1]; k + 1];
        let mut rhs = vec![Q::zero(); k + 1];
        for a in 0..k {
            for b in 0..k {
                m[a][b] = pts[s[a]].dot(&pts[s[b]]);
            }
            m[a][k] = qi(1);
            m[k][a] = qi(1);
        }
        rhs[k] = qi(1);
        if let Some(sol) = solve_square(&m, &rhs) {
            if sol[..k].iter().all(|l| l >= &Q::zero()) {
                let mut p = RationalVector::zeros(dim);
                for (l, &i) in sol[..k].iter().zip(&s) {
                    p = p.axpy(l, &pts[i]);
                }
                let d = p.norm_sq();
                if best.as_ref().map_or(true, |b| &d < b) {
                    best = Some(d);
                }
            }
            if k < dim + 1 {
                for j in s[k - 1] + 1..n {
                    let mut t = s.clone();
                    t.push(j);
                    stack.push(t);
                }
            }
        }
    }
    best.unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn projection_matches_face_search(gens in proptest::collection::vec(proptest::collection::vec(-4i64..=4, 3), 1..=6), x in proptest::collection::vec(-30i64..=30, 3), dim in 1usize..=3) {
        let gens: Vec<RationalVector> = gens.iter().map(|g| v(&g[..dim])).filter(|g| !g.is_zero()).collect();
        prop_assume!(!gens.is_empty());
        let z = Zonotope::new(dim, gens).unwrap();
        let x = RationalVector::new(x[..dim].iter().map(|&a| q(a, 3)).collect());
        prop_assert_eq!(z.distance_sq(&x), distance_by_faces(&z, &x));
    }

    #[test]
    fn vertex_minimum_is_the_hull_minimum(pts in proptest::collection::vec(proptest::collection::vec(-3i64..=3, 2), 2..=3), shift in proptest::collection::vec(-9i64..=9, 2)) {
        let sigma: Vec<RationalVector> = pts.iter().map(|p| v(&[p[0] + shift[0], p[1] + shift[1]])).collect();
        let mut d = Vec::new();
        for a in &sigma {
            for b in &sigma {
                if a != b {
                    d.push(a - b);
                }
            }
        }
        prop_assume!(!d.is_empty());
        let z = Zonotope::new(2, d).unwrap();
        let mm = minmax_over_polytope(&sigma, &z).unwrap();
        // conv σ − Z has vertices among a − z_v
        let diffs: BTreeSet<RationalVector> = sigma.iter().flat_map(|a| z.vertices().into_iter().map(move |zv| a - &zv)).collect();
        let diffs: Vec<RationalVector> = diffs.into_iter().collect();
        prop_assert_eq!(mm.min_dist_sq, origin_to_hull(&diffs, 2));
    }
}

#[test]
fn segment_translate_picks_the_far_end() {
    let sigma = [v(&[0, 0]), v(&[1, 0])];
    let d = [v(&[1, 0]), v(&[-1, 0])];
    let x = RationalVector::new(vec![q(1, 2), qi(0)]);
    let cert = embed_parallel_translate(&x, &sigma, &d).unwrap();
    assert_eq!(cert.vertex, 1);
    assert!(cert.verify(&x, &Zonotope::new(2, d.to_vec()).unwrap()));
}

#[test]
fn unit_square_translates() {
    let sq = [v(&[0, 0]), v(&[1, 0]), v(&[0, 1]), v(&[1, 1])];
    let mut d = Vec::new();
    for a in &sq {
        for b in &sq {
            if a != b && !d.contains(&(a - b)) {
                d.push(a - b);
            }
        }
    }
    assert_eq!(d.len(), 8);
    let z = Zonotope::new(2, d.clone()).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..200 {
        let mut x = z.translation().clone();
        for g in z.generators() {
            x = x.axpy(&q(rng.gen_range(0..=12), 12), g);
        }
        let cert = embed_parallel_translate(&x, &sq, &d).unwrap();
        assert!(cert.verify(&x, &z));
    }
}

#[test]
fn sums_of_rich_sets_are_rich_for_differences() {
    let s1 = [v(&[0, 0]), v(&[2, 1]), v(&[1, 3])];
    let s2 = [v(&[0, 0]), v(&[-1, 2])];
    let rich = |s: &[RationalVector]| -> Vec<RationalVector> { s.iter().flat_map(|a| s.iter().filter(move |b| *b != a).map(move |b| a - b)).collect() };
    let (d1, d2) = (rich(&s1), rich(&s2));
    let d = sum_rich_generators(&d1, &d2, 2);
    let diff: Vec<RationalVector> = s1.iter().flat_map(|a| s2.iter().map(move |b| a - b)).collect();
    assert!(is_sufficiently_rich(&d, &diff));
    // the pieces alone are not enough
    assert!(!is_sufficiently_rich(&d1, &diff));
}

fn girth(adj: &[Vec<usize>]) -> usize {
    let mut best = usize::MAX;
    for s in 0..adj.len() {
        let mut dist = vec![usize::MAX; adj.len()];
        let mut par = vec![usize::MAX; adj.len()];
        dist[s] = 0;
        let mut q = VecDeque::from([s]);
        while let Some(x) = q.pop_front() {
            for &y in &adj[x] {
                if dist[y] == usize::MAX {
                    dist[y] = dist[x] + 1;
                    par[y] = x;
                    q.push_back(y);
                } else if par[x] != y {
                    best = best.min(dist[x] + dist[y] + 1);
                }
            }
        }
    }
    best
}

#[test]
fn fano_incidence_graph() {
    let b = build_building(&BuildingSpec::Flags { q: 2, n: 2 }).unwrap();
    assert_eq!(b.complex.f_vector(), vec![14, 21]);
    let ids: Vec<u32> = b.vertices().into_iter().collect();
    let pos = |x: u32| ids.iter().position(|&y| y == x).unwrap();
    let mut adj = vec![Vec::new(); ids.len()];
    for e in b.complex.of_dim(1) {
        assert_ne!(b.vertex_type[&e[0]], b.vertex_type[&e[1]], "bipartite");
        adj[pos(e[0])].push(pos(e[1]));
        adj[pos(e[1])].push(pos(e[0]));
    }
    assert_eq!(girth(&adj), 6);
    let h = reduced_homology(&b.complex);
    assert_eq!(h.betti, vec![0, 8]);
    assert_eq!(21 - 14 + 1, 8);
}

#[test]
fn fano_point_pole() {
    let b = build_building(&BuildingSpec::Flags { q: 2, n: 2 }).unwrap();
    let pt = b.vertices().iter().filter_map(|&x| b.flag_dim(x)).min().unwrap();
    let p = *b.vertices().iter().find(|&&x| b.flag_dim(x) == Some(pt)).unwrap();
    let polar = b.polar_class(&NorthPole::vertex(p));
    let incident: BTreeSet<u32> = b.complex.of_dim(1).iter().filter(|e| e.contains(&p)).map(|e| if e[0] == p { e[1] } else { e[0] }).collect();
    let mut open = BTreeSet::new();
    for x in b.vertices() {
        let expect = if x == p || incident.contains(&x) { Polar::Lt } else { Polar::Gt };
        assert_eq!(polar[&x], expect, "vertex {x}");
        if expect == Polar::Gt {
            open.insert(x);
        }
    }
    let points = open.iter().filter(|&&x| b.flag_dim(x) == Some(pt)).count();
    assert_eq!((points, open.len() - points), (6, 4));
    let hc = b.hemisphere_complexes(&polar);
    assert_eq!(hc.open.vertices(), open);
    assert_eq!(hc.open, b.complex.full_subcomplex(&open));
    // 12 incidences among 10 vertices, connected
    assert_eq!(hc.open.f_vector(), vec![10, 12]);
    assert_eq!(reduced_homology(&hc.open).betti, vec![0, 3]);
}

#[test]
fn k33_vertex_pole() {
    let p3 = BuildingSpec::Points(3);
    let b = build_building(&BuildingSpec::join(p3.clone(), p3)).unwrap();
    let p = *b.vertices().iter().next().unwrap();
    let own: BTreeSet<u32> = b.vertices().into_iter().filter(|x| b.vertex_type[x] == b.vertex_type[&p]).collect();
    let other: BTreeSet<u32> = b.vertices().difference(&own).copied().collect();
    let hc = b.hemisphere_complexes(&b.polar_class(&NorthPole::vertex(p)));
    assert_eq!(hc.horizontal.vertices(), other);
    assert_eq!(hc.vertical.vertices(), own);
    let mut rest = own.clone();
    rest.remove(&p);
    assert_eq!(hc.open.vertices(), rest);
}

#[test]
fn criteria_agree_on_twenty_poles() {
    let specs = [
        BuildingSpec::join(BuildingSpec::Points(3), BuildingSpec::Points(3)),
        BuildingSpec::Flags { q: 2, n: 2 },
        BuildingSpec::join(BuildingSpec::Coxeter(twinmorse::coxcomplex::FiniteType::A2), BuildingSpec::Coxeter(twinmorse::coxcomplex::FiniteType::A1)),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    for spec in &specs {
        let b = build_building(spec).unwrap();
        for _ in 0..20 {
            let c = b.chambers()[rng.gen_range(0..b.chambers().len())].clone();
            let mut ws: Vec<Q> = c.iter().map(|_| qi(rng.gen_range(0..=4))).collect();
            if ws.iter().all(|w| w.is_zero()) {
                ws[0] = qi(1);
            }
            let polar = b.polar_class(&NorthPole::new(c, ws));
            for s in b.complex.simplices() {
                let (g, d) = b.horizontality_criteria(&polar, s);
                assert_eq!(g, d, "{}: {s:?}", spec.name());
            }
        }
    }
}

#[test]
fn points_vertex_pole_open_hemisphere() {
    let b = build_building(&BuildingSpec::Points(3)).unwrap();
    let p = *b.vertices().iter().next().unwrap();
    let hc = b.hemisphere_complexes(&b.polar_class(&NorthPole::vertex(p)));
    assert_eq!(hc.open.f_vector(), vec![2]);
    assert_eq!(sphericity_report(&hc.open, 0).unwrap().verdict, Sphericity::ProperlySphericalHomology);
}

fn line_model(radius: i64, offset: i64) -> ThinTwinModel {
    ThinTwinModel::with_generators(AffineType::A1, &qi(radius), vec![v(&[1]), v(&[-1])], Richness::AlmostRich, v(&[offset])).unwrap()
}

#[test]
fn interval_height_and_gradient() {
    let m = line_model(6, 0);
    // D = {±1} gives Z = [−3, 3]
    assert!(m.zonotope.contains(&v(&[3])) && m.zonotope.contains(&v(&[-3])) && !m.zonotope.contains(&v(&[4])));
    assert_eq!(m.height_sq_of_difference(&v(&[5])), qi(4));
    let g = m.gradient_of_difference(&v(&[5])).unwrap();
    assert_eq!(g.n, v(&[2]));
    assert_eq!(g.product(), (v(&[2]), v(&[-2])));
}

#[test]
fn interval_roof() {
    let m = line_model(6, 0);
    let w = &m.window;
    let id = |x: i64| w.vertex_id(&v(&[x])).unwrap();
    let edge = PolyCell::new(vec![vec![id(4), id(5)], vec![id(0)]]);
    assert_eq!(m.cell_differences(&edge), vec![v(&[4]), v(&[5])]);
    assert_eq!(m.roof(&edge).unwrap(), PolyCell::new(vec![vec![id(5)], vec![id(0)]]));
}

#[test]
fn a2_generator_sets() {
    let real = AffineRealization::new(AffineType::A2);
    let almost = make_rich_generators(&real, Richness::AlmostRich).unwrap();
    let rich = make_rich_generators(&real, Richness::Rich).unwrap();
    for d in [&almost, &rich] {
        assert!(real.roots.is_invariant(d));
        assert!(d.iter().all(|g| d.contains(&-g)));
    }
    assert!(almost.iter().all(|g| rich.contains(g)));
    assert!(rich.len() > almost.len());
}

#[test]
fn move_bounds() {
    assert_eq!(move_bound(&[1, 1]), 27);
    assert_eq!(move_bound(&[1, 2]), 84);
}

#[test]
fn non_horizontal_edge_under_essential_roof() {
    let m = MorseModel::new(AffineType::A1, &qi(3), Richness::Rich, false).unwrap();
    let mut found = 0;
    for c in m.core_cells() {
        if c.dim() != 1 || m.classify(&c).unwrap() != CellClass::NonHorizontal {
            continue;
        }
        let roof = m.twin.roof(&c).unwrap();
        if roof.dim() != 0 || m.classify(&roof).unwrap() != CellClass::Essential {
            continue;
        }
        let rv = m.morse_value(&roof).unwrap();
        let expect = MorseValue { h_sq: rv.h_sq.clone(), depth: &rv.depth - q(1, 2), dim: 1 };
        assert_eq!(m.morse_value(&c).unwrap(), expect);
        found += 1;
    }
    assert!(found > 0);
}

#[test]
fn adjacent_flags_have_distinct_values() {
    let m = MorseModel::new(AffineType::A1, &qi(3), Richness::Rich, false).unwrap();
    let cells = m.core_cells();
    let mut rng = ChaCha8Rng::seed_from_u64(1000);
    let mut n = 0;
    while n < 1000 {
        let c = &cells[rng.gen_range(0..cells.len())];
        let fs: Vec<PolyCell> = c.faces().into_iter().filter(|f| f != c).collect();
        if fs.is_empty() {
            continue;
        }
        let f = &fs[rng.gen_range(0..fs.len())];
        assert_ne!(m.morse_value(c).unwrap(), m.morse_value(f).unwrap());
        n += 1;
    }
}

#[test]
fn punctured_square_collapses() {
    let c = PolyCell::new(vec![vec![0, 1], vec![0, 1]]);
    let (_, k) = punctured_boundary(&c, Some(&PolyCell::new(vec![vec![0], vec![0]])));
    assert_eq!(greedy_collapse(&k), CollapseOutcome::CollapsedToPoint);
    let (_, whole) = punctured_boundary(&c, None);
    assert_eq!(reduced_homology(&whole).betti, vec![0, 1]);
}
