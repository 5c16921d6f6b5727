//! Perturbed codistance on thin twin models: interpretations, convexity, monotonicity,
//! roofs, vertex minima and wall reflections.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{Signed, Zero};
use rand::seq::SliceRandom;
use rand::Rng;
use serde_json::json;

use super::{parse_kind, stream, Case, SuiteConfig, SuiteError, SuiteOutput};
use crate::coxcomplex::{AffineType, Window};
use crate::exactgeom::{cmp_sum_sqrt, q, qi, qstr, RationalVector, Q};
use crate::polycomplex::{PolyCell, Simplex};
use crate::twin::{barycentric_point, reflect_in_wall, Richness, ThinTwinModel};
use crate::zonotope::min_distance_sq_over_hull;

fn point_in(rng: &mut impl Rng, w: &Window, cell: &Simplex) -> RationalVector {
    let pts: Vec<&RationalVector> = cell.iter().map(|&v| w.coords(v)).collect();
    let weights: Vec<u32> = cell.iter().map(|_| rng.gen_range(1..=9)).collect();
    barycentric_point(&pts, &weights)
}

fn random_point(rng: &mut impl Rng, w: &Window, facets: &[Simplex]) -> RationalVector {
    let f = facets.choose(rng).unwrap();
    point_in(rng, w, f)
}

fn lerp(a: &RationalVector, b: &RationalVector, t: &Q) -> RationalVector {
    a.axpy(t, &(b - a))
}

/// Closed neighbourhoods in the 1-skeleton.
fn neighbours(w: &Window) -> BTreeMap<u32, Vec<u32>> {
    let mut out: BTreeMap<u32, Vec<u32>> = w.complex.vertices().into_iter().map(|v| (v, vec![v])).collect();
    for e in w.complex.of_dim(1) {
        out.get_mut(&e[0]).unwrap().push(e[1]);
        out.get_mut(&e[1]).unwrap().push(e[0]);
    }
    out
}

fn model_cases(kind: AffineType, radius: &Q, trials: usize, seed: u64) -> Result<(Vec<Case>, serde_json::Value), SuiteError> {
    let m = ThinTwinModel::new(kind, radius, Richness::Rich)?;
    let w = &m.window;
    let facets = w.complex.facets();
    let tag = kind.to_string();
    let mut rng = stream(seed, &format!("twin-metric/{tag}"));

    let mut interp = Case::new(&format!("{tag}/codistance_interpretations"));
    for _ in 0..200 {
        let (xp, xm) = (random_point(&mut rng, w, &facets), random_point(&mut rng, w, &facets));
        let h = m.height_sq(&xp, &xm);
        let a = m.height_sq_translated_minus(&xp, &xm);
        let b = m.height_sq_translated_plus(&xp, &xm);
        interp.check(h == a && h == b, || format!("x+ = {xp:?}, x- = {xm:?}: {h} {a} {b}"));
    }

    let mut conv = Case::new(&format!("{tag}/midpoint_convexity"));
    for _ in 0..trials {
        let p = (random_point(&mut rng, w, &facets), random_point(&mut rng, w, &facets));
        let r = (random_point(&mut rng, w, &facets), random_point(&mut rng, w, &facets));
        let mid = (lerp(&p.0, &r.0, &q(1, 2)), lerp(&p.1, &r.1, &q(1, 2)));
        let (hp, hr, hm) = (m.perturbed_height(&p.0, &p.1), m.perturbed_height(&r.0, &r.1), m.perturbed_height(&mid.0, &mid.1));
        conv.check(cmp_sum_sqrt(&hp, &hr, &hm) != std::cmp::Ordering::Less, || {
            format!("endpoints {:?} {:?}, h² {} {} midpoint {}", p, r, hp.square(), hr.square(), hm.square())
        });
    }

    // vertex pairs in a common cell
    let nb = neighbours(w);
    let verts: Vec<u32> = nb.keys().copied().collect();
    let mut pairs = Vec::new();
    for &a in &verts {
        for &b in &verts {
            for &a2 in &nb[&a] {
                for &b2 in &nb[&b] {
                    if (a, b) != (a2, b2) {
                        pairs.push(([a, b], [a2, b2]));
                    }
                }
            }
        }
    }
    let mut angle = Case::new(&format!("{tag}/angle_criterion_on_edges"));
    for (v, x) in &pairs {
        let hv = m.vertex_height_sq(v);
        if hv.is_zero() {
            continue;
        }
        let g = m.vertex_gradient(v)?;
        let ip = g.n.dot(&(&m.vertex_difference(x) - &m.vertex_difference(v)));
        let hx = m.vertex_height_sq(x);
        angle.check((hv > hx) == ip.is_negative(), || format!("v = {v:?}, w = {x:?}: h² {hv} vs {hx}, ⟨∇, w − v⟩ = {ip}"));
    }
    angle.detail("pairs", pairs.len());
    let mut mono = Case::new(&format!("{tag}/monotone_on_edges"));
    let ts: Vec<Q> = (0..=4).map(|i| q(i, 4)).collect();
    for _ in 0..trials.max(200) * 4 {
        let (v, x) = pairs.choose(&mut rng).unwrap();
        let (pv, px) = (m.vertex_difference(v), m.vertex_difference(x));
        let hs: Vec<Q> = ts.iter().map(|t| m.height_sq_of_difference(&lerp(&pv, &px, t))).collect();
        let up = hs.windows(2).all(|p| p[0] <= p[1]);
        let down = hs.windows(2).all(|p| p[0] >= p[1]);
        mono.check(up || down, || format!("v = {v:?}, w = {x:?}: {:?}", hs.iter().map(qstr).collect::<Vec<_>>()));
    }

    let mut roof = Case::new(&format!("{tag}/roof_is_face"));
    let mut kkt = Case::new(&format!("{tag}/min_at_vertex"));
    let mut grad = Case::new(&format!("{tag}/gradient_constant_on_horizontal"));
    let product = m.product_complex();
    let cells: Vec<&PolyCell> = product.cells().collect();
    let mut horizontal = 0usize;
    for c in &cells {
        match m.roof(c) {
            Ok(r) => {
                let top: BTreeSet<Vec<u32>> = r.vertices().into_iter().collect();
                roof.check(r.is_face_of(c) && top == m.maximal_vertices(c), || format!("cell {:?}", c.factors));
            }
            Err(e) => {
                roof.check(false, || format!("cell {:?}: {e}", c.factors));
            }
        }
        kkt.check(m.certified_min_vertex(c).is_some(), || format!("cell {:?}", c.factors));
        if m.is_h_horizontal(c) && !m.max_height_sq(c).is_zero() {
            horizontal += 1;
            let dirs: BTreeSet<RationalVector> = c.vertices().iter().map(|v| m.vertex_gradient(v).map(|g| g.n.primitive())).collect::<Result<_, _>>()?;
            grad.check(dirs.len() == 1, || format!("cell {:?}", c.factors));
        }
    }
    roof.detail("cells", cells.len());
    grad.detail("horizontal_cells", horizontal);
    let mut oracle = Case::new(&format!("{tag}/min_at_vertex_oracle"));
    let sample: usize = if kind == AffineType::A1 { 60 } else { 20 };
    for c in cells.choose_multiple(&mut rng, sample) {
        let pts = m.cell_differences(c);
        let exact = min_distance_sq_over_hull(&pts, &m.zonotope);
        let vmin = c.vertices().iter().map(|v| m.vertex_height_sq(v)).min().unwrap();
        oracle.check(exact == vmin, || format!("cell {:?}: hull min {exact}, vertex min {vmin}", c.factors));
    }

    let (reflect, walls_info) = reflect_halve(&m, &mut rng, trials)?;

    let summary = json!({
        "model": m.summary(),
        "cells": cells.len(),
        "walls": walls_info,
    });
    Ok((vec![interp, conv, angle, mono, roof, kkt, oracle, grad, reflect], summary))
}

/// Walls `⟨·, α⟩ = k` carrying a star-complete vertex of each half.
fn reflect_halve(m: &ThinTwinModel, rng: &mut impl Rng, trials: usize) -> Result<(Case, serde_json::Value), SuiteError> {
    let w = &m.window;
    let tag = m.realization.kind.to_string();
    let mut case = Case::new(&format!("{tag}/reflect_halve_preserves_height"));
    let complete: Vec<u32> = w.complex.vertices().into_iter().filter(|&v| w.star_complete(&[v])).collect();
    let mut walls = Vec::new();
    let mut positive = 0u64;
    let per_wall = 200.min(trials.max(1) * 4);
    for alpha in m.realization.roots.positive_roots() {
        let mut by_k: BTreeMap<Q, (Vec<u32>, Vec<u32>)> = BTreeMap::new();
        for &v in &complete {
            by_k.entry(m.iota_plus(w.coords(v)).dot(&alpha)).or_default().0.push(v);
            by_k.entry(m.iota_minus(w.coords(v)).dot(&alpha)).or_default().1.push(v);
        }
        for (k, (plus, minus)) in by_k {
            if plus.is_empty() || minus.is_empty() || !k.is_integer() {
                continue;
            }
            walls.push(json!({"root": alpha.to_strings(), "level": qstr(&k)}));
            for _ in 0..per_wall {
                let cp = *plus.choose(rng).unwrap();
                let cm = *minus.choose(rng).unwrap();
                let sp: Vec<&Simplex> = w.alcoves_containing(std::slice::from_ref(&cp)).collect();
                let sm: Vec<&Simplex> = w.alcoves_containing(std::slice::from_ref(&cm)).collect();
                let (ap, am) = (*sp.choose(rng).unwrap(), *sm.choose(rng).unwrap());
                let xp = point_in(rng, w, ap);
                let xm = point_in(rng, w, am);
                // the wall in Σ+ coordinates is ι+⁻¹ H, with ι+ the identity
                let r = reflect_in_wall(&xp, &alpha, &k);
                let (h, hr) = (m.height_sq(&xp, &xm), m.height_sq(&r, &xm));
                if h.is_positive() {
                    positive += 1;
                }
                case.check(h == hr, || format!("α = {alpha:?}, k = {k}: x+ = {xp:?}, x- = {xm:?}: {h} vs {hr}"));
                // and with signs reversed
                let rm = &reflect_in_wall(&m.iota_minus(&xm), &alpha, &k) - &m.offset;
                let hm = m.height_sq(&xp, &rm);
                case.check(h == hm, || format!("reversed: α = {alpha:?}, k = {k}: {h} vs {hm}"));
            }
        }
    }
    case.detail("walls", walls.len());
    case.detail("positive_height_samples", positive);
    if walls.is_empty() || positive == 0 {
        case.warn(format!("{tag}: the check is vacuous here ({} walls, {positive} samples of positive height)", walls.len()));
    }
    Ok((case, json!(walls.len())))
}

pub(super) fn run(cfg: &SuiteConfig) -> SuiteOutput {
    let trials = cfg.trials.unwrap_or(500);
    let kinds = match &cfg.kind {
        Some(_) => vec![parse_kind(cfg, "A1")?],
        None => vec![AffineType::A1, AffineType::A2],
    };
    let radius = cfg.radius.clone().unwrap_or_else(|| qi(3));
    let mut cases = Vec::new();
    let mut summary = serde_json::Map::new();
    for k in kinds {
        let (cs, s) = model_cases(k, &radius, trials, cfg.seed)?;
        cases.extend(cs.into_iter().map(|c| c.finish()));
        summary.insert(k.to_string(), s);
    }
    Ok((cases, serde_json::Value::Object(summary)))
}
