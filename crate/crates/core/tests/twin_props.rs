use std::cmp::Ordering;
use std::sync::OnceLock;

use num_traits::{Signed, Zero};
use proptest::prelude::*;
use proptest::sample::Index;
use twinmorse::coxcomplex::AffineType;
use twinmorse::exactgeom::{cmp_sum_sqrt, q, qi, RationalVector};
use twinmorse::polycomplex::PolyCell;
use twinmorse::twin::{barycentric_point, reflect_in_wall, Richness, ThinTwinModel};

fn model(k: usize) -> &'static ThinTwinModel {
    static M: OnceLock<Vec<ThinTwinModel>> = OnceLock::new();
    &M.get_or_init(|| {
        [AffineType::A1, AffineType::A2].iter().map(|&t| ThinTwinModel::new(t, &qi(2), Richness::Rich).unwrap()).collect()
    })[k]
}

fn cells(k: usize) -> &'static [PolyCell] {
    static C: OnceLock<Vec<Vec<PolyCell>>> = OnceLock::new();
    &C.get_or_init(|| (0..2).map(|i| model(i).product_complex().cells().cloned().collect()).collect())[k]
}

fn point(m: &ThinTwinModel, s: &[u32], ws: &[u32]) -> RationalVector {
    let pts: Vec<&RationalVector> = s.iter().map(|&v| m.window.coords(v)).collect();
    barycentric_point(&pts, &ws[..s.len()])
}

fn weights() -> impl Strategy<Value = Vec<u32>> {
    proptest::collection::vec(1u32..=9, 3)
}

fn cell_point(m: &ThinTwinModel, c: &PolyCell, a: &[u32], b: &[u32]) -> (RationalVector, RationalVector) {
    (point(m, &c.factors[0], a), point(m, &c.factors[1], b))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn midpoint_convexity(k in 0usize..2, c1: Index, c2: Index, w in proptest::collection::vec(weights(), 4)) {
        let (m, cs) = (model(k), cells(k));
        let p = cell_point(m, &cs[c1.index(cs.len())], &w[0], &w[1]);
        let r = cell_point(m, &cs[c2.index(cs.len())], &w[2], &w[3]);
        let half = q(1, 2);
        let mid = (p.0.axpy(&half, &(&r.0 - &p.0)), p.1.axpy(&half, &(&r.1 - &p.1)));
        let (hp, hr, hm) = (m.perturbed_height(&p.0, &p.1), m.perturbed_height(&r.0, &r.1), m.perturbed_height(&mid.0, &mid.1));
        prop_assert!(cmp_sum_sqrt(&hp, &hr, &hm) != Ordering::Less);
    }

    // along an edge of a cell h is monotone, and the sign of the gradient pairing predicts the direction
    #[test]
    fn monotone_on_edges(k in 0usize..2, c: Index, i: Index, j: Index, t in 1i64..8) {
        let (m, cs) = (model(k), cells(k));
        let verts = cs[c.index(cs.len())].vertices();
        let (v, w) = (&verts[i.index(verts.len())], &verts[j.index(verts.len())]);
        prop_assume!(v != w);
        let (pv, pw) = (m.vertex_difference(v), m.vertex_difference(w));
        let (hv, hw) = (m.vertex_height_sq(v), m.vertex_height_sq(w));
        let hm = m.height_sq_of_difference(&pv.axpy(&q(t, 8), &(&pw - &pv)));
        prop_assert!((hv <= hm && hm <= hw) || (hw <= hm && hm <= hv));
        if !hv.is_zero() {
            let ip = m.vertex_gradient(v).unwrap().n.dot(&(&pw - &pv));
            prop_assert_eq!(hv > hw, ip.is_negative());
            if ip.is_positive() {
                prop_assert!(hw > hv);
            }
        }
    }

    #[test]
    fn gradient_same_at_all_points_of_horizontal_cells(k in 0usize..2, c: Index, w in proptest::collection::vec(weights(), 2)) {
        let (m, cs) = (model(k), cells(k));
        let cell = &cs[c.index(cs.len())];
        prop_assume!(m.is_h_horizontal(cell) && !m.max_height_sq(cell).is_zero());
        let g0 = m.vertex_gradient(&cell.vertices()[0]).unwrap().n.primitive();
        let (xp, xm) = cell_point(m, cell, &w[0], &w[1]);
        prop_assert_eq!(m.gradient_direction(&xp, &xm).unwrap().n.primitive(), g0.clone());
        for v in cell.vertices() {
            prop_assert_eq!(m.vertex_gradient(&v).unwrap().n.primitive(), g0.clone());
        }
    }

    // β = ⟨(n, −n), ·⟩ is constant on a factor exactly when n is perpendicular to it
    #[test]
    fn beta_constant_iff_perpendicular(k in 0usize..2, c: Index, v: Index) {
        let (m, cs) = (model(k), cells(k));
        let cell = &cs[c.index(cs.len())];
        let verts = cell.vertices();
        let base = &verts[v.index(verts.len())];
        let Ok(g) = m.vertex_gradient(base) else { return Ok(()) };
        let w = &m.window;
        for f in 0..2 {
            let values: std::collections::BTreeSet<_> = cell.factors[f].iter().map(|&x| {
                let mut p = [w.coords(base[0]).clone(), w.coords(base[1]).clone()];
                p[f] = w.coords(x).clone();
                g.pair(&m.iota_plus(&p[0]), &m.iota_minus(&p[1]))
            }).collect();
            let perp = w.edge_vectors(&cell.factors[f]).iter().all(|e| g.n.dot(e).is_zero());
            prop_assert_eq!(values.len() == 1, perp);
        }
    }

    #[test]
    fn codistance_interpretations(k in 0usize..2, c: Index, w in proptest::collection::vec(weights(), 2)) {
        let (m, cs) = (model(k), cells(k));
        let (xp, xm) = cell_point(m, &cs[c.index(cs.len())], &w[0], &w[1]);
        let h = m.height_sq(&xp, &xm);
        prop_assert_eq!(m.height_sq_translated_minus(&xp, &xm), h.clone());
        prop_assert_eq!(m.height_sq_translated_plus(&xp, &xm), h);
    }

    // walls of the model space through at least one vertex of each half
    #[test]
    fn reflecting_one_half_keeps_height(c: Index, w in proptest::collection::vec(weights(), 2), root: Index) {
        let m = model(1);
        let cs = cells(1);
        let cell = &cs[c.index(cs.len())];
        let (xp, xm) = cell_point(m, cell, &w[0], &w[1]);
        let roots = m.realization.roots.positive_roots();
        let alpha = &roots[root.index(roots.len())];
        let win = &m.window;
        // a wall containing a vertex of the minus cell, if it passes through the plus window's lattice too
        let k = m.iota_minus(win.coords(cell.factors[1][0])).dot(alpha);
        prop_assume!(k.is_integer());
        let hits_plus = win.complex.vertices().into_iter().any(|v| m.iota_plus(win.coords(v)).dot(alpha) == k);
        prop_assume!(hits_plus);
        let r = reflect_in_wall(&xp, alpha, &k);
        prop_assert_eq!(m.height_sq(&r, &xm), m.height_sq(&xp, &xm));
    }
}
