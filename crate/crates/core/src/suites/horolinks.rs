//! Horizontal links in products of affine windows, for sampled directions at infinity.

use std::collections::{BTreeMap, BTreeSet};
use std::rc::Rc;

use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::Rng;
use serde_json::json;

use super::{rand_q, stream, Case, SuiteConfig, SuiteError, SuiteOutput};
use crate::coxcomplex::{build_affine_window, AffineType, Window};
use crate::error::{Error, Result};
use crate::exactgeom::{perp_component, qi, RationalVector, Q};
use crate::horolinks::{move_bound, Horo, MoveKind, ProductWindow, Xi};
use crate::polycomplex::PolyCell;

const CASES: [&str; 19] = [
    "criteria_agree",
    "factorwise",
    "tau_min_defined",
    "tau_min_interval",
    "faces",
    "join",
    "transitivity",
    "meets",
    "factor_meets",
    "min_min",
    "min_in_vertical_link",
    "no_up_down_cycle",
    "essential_either_or",
    "up_not_transitive",
    "down_transitive",
    "up_down_join",
    "shortening",
    "vee_of_lower_terms",
    "depth",
];

/// Extra radius of the window used for links and move searches.
const LINK_MARGIN: i64 = 2;

struct Cases {
    by_name: BTreeMap<&'static str, Case>,
    truncated: BTreeMap<&'static str, u64>,
}

impl Cases {
    fn new() -> Self {
        Cases { by_name: CASES.iter().map(|&n| (n, Case::new(n))).collect(), truncated: BTreeMap::new() }
    }

    fn check(&mut self, name: &'static str, ok: bool, what: impl FnOnce() -> String) {
        self.by_name.get_mut(name).expect("known case").check(ok, what);
    }

    /// Unwraps a query, counting truncation by the window and failing on anything else.
    fn get<T>(&mut self, name: &'static str, r: Result<T>) -> Option<T> {
        match r {
            Ok(x) => Some(x),
            Err(Error::BoundaryTruncated) => {
                *self.truncated.entry(name).or_default() += 1;
                None
            }
            Err(e) => {
                self.check(name, false, || format!("unexpected error: {e}"));
                None
            }
        }
    }
}

struct Product {
    label: String,
    kinds: Vec<AffineType>,
    radius: Q,
}

fn products(cfg: &SuiteConfig) -> std::result::Result<Vec<Product>, SuiteError> {
    let make = |kinds: Vec<AffineType>| {
        let default = if kinds.iter().all(|k| *k == AffineType::A1) { qi(3) } else { qi(2) };
        let label = kinds.iter().map(|k| format!("{k:?}")).collect::<Vec<_>>().join("x");
        Product { label, kinds, radius: cfg.radius.clone().unwrap_or(default) }
    };
    match &cfg.kind {
        None => Ok(vec![make(vec![AffineType::A1, AffineType::A1]), make(vec![AffineType::A1, AffineType::A2])]),
        Some(s) => {
            let kinds = s
                .split(|c| c == 'x' || c == '×' || c == '*')
                .map(|p| AffineType::parse(p.trim()).map_err(|e| SuiteError::Usage(e.to_string())))
                .collect::<std::result::Result<Vec<_>, _>>()?;
            if kinds.len() < 2 {
                return Err(SuiteError::Usage(format!("expected a product such as A1xA2, got `{s}`")));
            }
            Ok(vec![make(kinds)])
        }
    }
}

fn window(kind: AffineType, r: &Q) -> Result<Window> {
    Ok(build_affine_window(kind, r)?.1)
}

/// Direction in one factor. Rank one: a nonzero multiple of the line; otherwise
/// mode 0 is generic, mode 1 is perpendicular to an edge class, mode 2 points along a root.
fn factor_direction<R: Rng>(rng: &mut R, w: &Window, mode: usize) -> RationalVector {
    let real = &w.realization;
    let span = real.span();
    let random = |rng: &mut R| {
        let mut v = RationalVector::zeros(real.ambient_dim);
        for a in span {
            v = v.axpy(&rand_q(rng, 9, 4), a);
        }
        v
    };
    if span.len() == 1 {
        loop {
            let v = random(rng);
            if !v.is_zero() {
                return v;
            }
        }
    }
    let a = &real.fundamental_alcove;
    let edge_classes: Vec<RationalVector> = {
        let mut es = Vec::new();
        for i in 0..a.len() {
            for j in i + 1..a.len() {
                es.push(&a[j] - &a[i]);
            }
        }
        real.roots.orbit_closure(&es)
    };
    match mode % 3 {
        0 => loop {
            let v = random(rng);
            if !v.is_zero() && edge_classes.iter().chain(&real.roots.roots).all(|e| !v.dot(e).is_zero()) {
                return v;
            }
        },
        1 => {
            let e = edge_classes.choose(rng).unwrap().clone();
            loop {
                let v = perp_component(&random(rng), &[e.clone()]).unwrap();
                if !v.is_zero() {
                    return v;
                }
            }
        }
        _ => {
            let r = real.roots.roots.choose(rng).unwrap();
            r.scale(&Q::from_integer(rng.gen_range(1..=3).into()))
        }
    }
}

/// Every vertex of the cell has a complete star, so every face does.
fn testable(y: &ProductWindow, c: &PolyCell) -> bool {
    c.vertices().iter().all(|v| y.star_complete(&PolyCell::vertex_cell(v)))
}

fn faces_between(lo: &PolyCell, hi: &PolyCell) -> Vec<PolyCell> {
    hi.faces().into_iter().filter(|f| lo.is_face_of(f)).collect()
}

fn proper(c: &PolyCell, d: &PolyCell) -> bool {
    c != d && c.is_face_of(d)
}

fn check_horo(h: &Horo, cs: &mut Cells, out: &mut Cases, dims: &[usize]) {
    let y = h.y.clone();
    let bound = move_bound(dims);
    for tau in cs.horizontal.clone() {
        let show = |c: &PolyCell| format!("{:?}", c.factors);
        let faces = tau.faces();
        let mut t_set = BTreeSet::new();
        for s in &faces {
            let Some(v) = out.get("criteria_agree", h.cohorizontal(&tau, s)) else { continue };
            out.check("criteria_agree", v.definition == v.geometric && v.definition == v.diagrammatic, || {
                format!("τ = {}, σ = {}: {v:?}", show(&tau), show(s))
            });
            if let Some(fw) = out.get("factorwise", h.rel_factorwise(&tau, s)) {
                out.check("factorwise", fw == v.definition, || format!("τ = {}, σ = {}", show(&tau), show(s)));
            }
            if v.definition {
                t_set.insert(s.clone());
            }
        }
        cs.proper_rel += t_set.len() - 1;
        for s in &t_set {
            for mid in faces_between(s, &tau) {
                if let Some(r) = out.get("faces", h.rel(&mid, s)) {
                    out.check("faces", r, || format!("τ = {}, τ' = {}, σ = {}", show(&tau), show(&mid), show(s)));
                }
            }
            for s2 in s.faces() {
                if let Some(true) = out.get("transitivity", h.rel(s, &s2)) {
                    out.check("transitivity", t_set.contains(&s2), || format!("τ = {}, σ' = {}, σ = {}", show(&tau), show(s), show(&s2)));
                }
            }
        }
        // join: τ ⊸ σ and τ ∨ σ' horizontal give τ ∨ σ' ⊸ σ ∨ σ'
        for rho in y.cofaces(&tau) {
            if rho == tau || !h.is_horizontal(&rho) || !testable(&y, &rho) {
                continue;
            }
            for s2 in rho.faces() {
                if tau.union(&s2) != rho {
                    continue;
                }
                for s in &t_set {
                    if let Some(r) = out.get("join", h.rel(&rho, &s.union(&s2))) {
                        out.check("join", r, || format!("τ = {}, σ = {}, σ' = {}", show(&tau), show(s), show(&s2)));
                    }
                }
            }
        }

        // the rest needs ξ in general position
        if !h.xi.general_position() {
            continue;
        }
        let Some(m) = out.get("tau_min_defined", h.tau_min(&tau)) else { continue };
        out.check("tau_min_defined", true, String::new);
        let interval: BTreeSet<PolyCell> = faces_between(&m, &tau).into_iter().collect();
        out.check("tau_min_interval", interval == t_set, || format!("τ = {}", show(&tau)));

        for s in &t_set {
            for s2 in &t_set {
                let meet = s.intersection(s2);
                out.check("meets", meet.as_ref().map_or(false, |x| t_set.contains(x)), || {
                    format!("τ = {}: {} and {} meet in {:?}", show(&tau), show(s), show(s2), meet.as_ref().map(|x| x.factors.clone()))
                });
            }
            if let Some(mm) = out.get("min_min", h.tau_min(s)) {
                out.check("min_min", mm == m, || format!("τ = {}, σ = {}", show(&tau), show(s)));
            }
        }
        for i in 0..tau.factors.len() {
            let ti = &tau.factors[i];
            let sub = crate::polycomplex::SimplicialComplex::from_facets([ti.clone()]);
            let mut ts = Vec::new();
            for si in sub.simplices() {
                if let Some(true) = out.get("factor_meets", h.rel_factor(i, ti, si)) {
                    ts.push(si.clone());
                }
            }
            for a in &ts {
                for b in &ts {
                    out.check("factor_meets", a.iter().any(|v| b.contains(v)), || format!("factor {i}: τ_i = {ti:?}, {a:?} and {b:?}"));
                }
            }
        }
        for s in &faces {
            if let Some(r) = out.get("min_in_vertical_link", h.in_vertical_link(&m.union(s), s)) {
                out.check("min_in_vertical_link", r, || format!("τ = {}, σ = {}", show(&tau), show(s)));
            }
        }
        let Some(moves) = out.get("essential_either_or", h.moves_from(&tau)) else { continue };
        cs.up += moves.iter().filter(|m| m.kind == MoveKind::Up).count();
        cs.down += moves.iter().filter(|m| m.kind == MoveKind::Down).count();
        if m == tau {
            for t in y.cofaces(&tau) {
                if t == tau || !h.is_horizontal(&t) {
                    continue;
                }
                let up = moves.iter().any(|mv| mv.kind == MoveKind::Up && mv.to == t);
                if let Some(r) = out.get("essential_either_or", h.rel(&t, &tau)) {
                    out.check("essential_either_or", up != !r, || format!("σ = {}, τ = {}", show(&tau), show(&t)));
                }
            }
        }
        for mv in &moves {
            match mv.kind {
                MoveKind::Up => {
                    let t = &mv.to;
                    if let Some(next) = out.get("up_not_transitive", h.moves_from(t)) {
                        out.check("no_up_down_cycle", !next.iter().any(|n| n.kind == MoveKind::Down && &n.to == &tau), || {
                            format!("{} ↗ {} ↘ back", show(&tau), show(t))
                        });
                        out.check("up_not_transitive", !next.iter().any(|n| n.kind == MoveKind::Up), || format!("{} ↗ {} ↗ …", show(&tau), show(t)));
                        for n in next.iter().filter(|n| n.kind == MoveKind::Down) {
                            let s2 = &n.to;
                            let j = tau.union(s2);
                            let jm = out.get("up_down_join", h.tau_min(&j));
                            let down = proper(s2, &j) && out.get("up_down_join", h.rel(&j, s2)) == Some(false);
                            out.check("up_down_join", jm.as_ref() == Some(&tau) && down, || {
                                format!("{} ↗ {} ↘ {}", show(&tau), show(t), show(s2))
                            });
                            shortening(h, out, &tau, t, s2);
                        }
                    }
                }
                MoveKind::Down => {
                    let a = &mv.to;
                    if let Some(next) = out.get("down_transitive", h.moves_from(a)) {
                        for n in next.iter().filter(|n| n.kind == MoveKind::Down) {
                            let ok = out.get("down_transitive", h.rel(&tau, &n.to)) == Some(false);
                            out.check("down_transitive", ok, || format!("{} ↘ {} ↘ {}", show(&tau), show(a), show(&n.to)));
                        }
                    }
                }
            }
        }
        lower_terms(h, out, &tau, bound);
        if let Some(d) = out.get("depth", h.depth(&tau)) {
            let brute = out.get("depth", h.depth_bruteforce(&tau));
            out.check("depth", d <= bound && brute == Some(d), || format!("τ = {}: depth {d}, brute {brute:?}, bound {bound}", show(&tau)));
            cs.max_depth = cs.max_depth.max(d);
        }
    }
}

fn shortening(h: &Horo, out: &mut Cases, s1: &PolyCell, t1: &PolyCell, s2: &PolyCell) {
    let Some(next) = out.get("shortening", h.moves_from(s2)) else { return };
    for n in next.iter().filter(|n| n.kind == MoveKind::Up) {
        let t2 = &n.to;
        let join = h.y.join(t2, s1);
        let Some(j) = join else {
            out.check("shortening", false, || format!("τ2 ∨ σ1 missing for {:?}", t2.factors));
            continue;
        };
        let jm = out.get("shortening", h.tau_min(&j));
        let short = if &j != s1 {
            proper(t2, &j) && out.get("shortening", h.rel(&j, t2)) == Some(false)
        } else {
            proper(t2, t1) && out.get("shortening", h.rel(t1, t2)) == Some(false)
        };
        out.check("shortening", jm.as_ref() == Some(s1) && short, || format!("σ1 = {:?}, τ2 = {:?}", s1.factors, t2.factors));
    }
}

/// Walks alternating chains `σ1 ↗ τ1 ↘ σ2 ↗ …` from `start` and checks that the lower terms have a join.
fn lower_terms(h: &Horo, out: &mut Cases, start: &PolyCell, bound: usize) {
    let mut stack: Vec<(PolyCell, Vec<PolyCell>, usize)> = vec![(start.clone(), vec![start.clone()], 0)];
    while let Some((at, lowers, len)) = stack.pop() {
        let up_next = len % 2 == 0;
        let Some(moves) = out.get("vee_of_lower_terms", h.moves_from(&at)) else { continue };
        for mv in moves {
            if (mv.kind == MoveKind::Up) != up_next {
                continue;
            }
            let mut l = lowers.clone();
            if !up_next {
                l.push(mv.to.clone());
                let mut acc = Some(l[0].clone());
                for x in &l[1..] {
                    acc = acc.and_then(|a| h.y.join(&a, x));
                }
                out.check("vee_of_lower_terms", acc.is_some() && len + 1 <= bound, || format!("chain from {:?} of length {}", start.factors, len + 1));
            }
            if len + 1 <= bound {
                stack.push((mv.to, l, len + 1));
            }
        }
    }
}

struct Cells {
    horizontal: Vec<PolyCell>,
    max_depth: usize,
    up: usize,
    down: usize,
    /// pairs τ ⊸ σ with σ a proper face
    proper_rel: usize,
}

fn cohorizontal_faces_need_not_meet() -> Result<Case> {
    let mut c = Case::new("cohorizontal_faces_need_not_meet");
    let w = window(AffineType::A1, &qi(3))?;
    let id = |x: i64| w.vertex_id(&RationalVector::from_ints(&[x])).unwrap();
    let y = Rc::new(ProductWindow::new(vec![w.clone(), w.clone()]));
    let h = Horo::new(y, Xi::new(vec![RationalVector::from_ints(&[1]), RationalVector::from_ints(&[0])]));
    let tau = PolyCell::new(vec![vec![id(0)], vec![id(0), id(1)]]);
    let a = PolyCell::new(vec![vec![id(0)], vec![id(0)]]);
    let b = PolyCell::new(vec![vec![id(0)], vec![id(1)]]);
    c.check(h.is_horizontal(&tau), || "v × C not horizontal".into());
    c.check(h.rel(&tau, &a)? && h.rel(&tau, &b)?, || "both vertices should be cohorizontal faces".into());
    c.check(a.intersection(&b).is_none(), || "faces meet".into());
    c.check(matches!(h.tau_min(&tau), Err(Error::NotGeneralPosition)), || "τ^min should be undefined".into());
    c.detail("product", "A_1xA_1");
    c.detail("xi", [["1"], ["0"]]);
    Ok(c)
}

fn square_counterexample() -> Result<(Case, BTreeMap<&'static str, Vec<String>>)> {
    let mut c = Case::new("square_counterexample");
    let w1 = window(AffineType::A1, &qi(2))?;
    let w2 = window(AffineType::A2, &qi(2))?;
    let a = &w2.realization.fundamental_alcove;
    let e = &a[1] - &a[0];
    let u2 = perp_component(&a[2], &[e.clone()])?;
    let y = Rc::new(ProductWindow::new(vec![w1.clone(), w2.clone()]));
    let h = Horo::new(y, Xi::new(vec![RationalVector::zeros(1), u2.clone()]));
    let id1 = |x: i64| w1.vertex_id(&RationalVector::from_ints(&[x])).unwrap();
    let (o, p) = (w2.vertex_id(&a[0]).unwrap(), w2.vertex_id(&a[1]).unwrap());
    let e1 = vec![id1(0), id1(1)];
    let e2 = { let mut s = vec![o, p]; s.sort(); s };
    let tau = PolyCell::new(vec![e1.clone(), e2.clone()]);
    let vx = PolyCell::new(vec![vec![id1(0)], e2.clone()]);
    let wx = PolyCell::new(vec![vec![id1(1)], e2.clone()]);
    c.check(h.is_horizontal(&tau), || "square not horizontal".into());
    c.check(h.rel(&tau, &vx)? && h.rel(&tau, &wx)?, || "v × e and w × e should both be cohorizontal".into());
    c.check(vx.intersection(&wx).is_none(), || "faces meet".into());
    c.check(matches!(h.tau_min(&tau), Err(Error::NotGeneralPosition)), || "τ^min should be undefined".into());
    for v in tau.vertices() {
        let vc = PolyCell::vertex_cell(&v);
        c.check(!h.rel(&tau, &vc)?, || format!("square lies in the horizontal link of {v:?}"));
    }
    let mut info = BTreeMap::new();
    info.insert("u2", u2.to_strings());
    info.insert("edge", e.to_strings());
    c.detail("product", "A_1xA_2");
    c.detail("xi", [vec!["0".to_string()], u2.to_strings()]);
    Ok((c, info))
}

pub(super) fn run(cfg: &SuiteConfig) -> SuiteOutput {
    let trials = cfg.trials.unwrap_or(20);
    let mut out = Cases::new();
    let mut summary = serde_json::Map::new();
    for p in products(cfg)? {
        // links and move searches run in a larger window; tested cells stay inside the nominal radius
        let big = &p.radius + qi(LINK_MARGIN);
        let ws: Vec<Window> = p.kinds.iter().map(|k| window(*k, &big)).collect::<Result<_>>()?;
        let dims: Vec<usize> = ws.iter().map(|w| w.realization.roots.rank()).collect();
        let y = Rc::new(ProductWindow::new(ws.clone()));
        let r2 = &p.radius * &p.radius;
        let inside = |c: &PolyCell| c.vertices().iter().all(|v| y.point(v).iter().all(|x| x.norm_sq() <= r2));
        let all: Vec<PolyCell> = y.complex().cells().filter(|c| inside(c) && testable(&y, c)).cloned().collect();
        let mut rng = stream(cfg.seed, &format!("horolinks/{}", p.label));
        let mut horizontal_total = 0usize;
        let mut max_depth = 0;
        let mut moves_seen = (0usize, 0usize);
        let mut proper_gp = 0usize;
        for t in 0..trials {
            let parts: Vec<RationalVector> = ws.iter().map(|w| factor_direction(&mut rng, w, t)).collect();
            let h = Horo::new(y.clone(), Xi::new(parts));
            let mut cs = Cells { horizontal: all.iter().filter(|c| h.is_horizontal(c)).cloned().collect(), max_depth: 0, up: 0, down: 0, proper_rel: 0 };
            horizontal_total += cs.horizontal.len();
            check_horo(&h, &mut cs, &mut out, &dims);
            max_depth = max_depth.max(cs.max_depth);
            moves_seen.0 += cs.up;
            moves_seen.1 += cs.down;
            proper_gp += cs.proper_rel;
        }
        // directions vanishing on one factor: ⊸ is no longer trivial there
        let degenerate = (trials / 2).max(2);
        let mut proper_degenerate = 0usize;
        for t in 0..degenerate {
            let zero = t % ws.len();
            let parts: Vec<RationalVector> = ws
                .iter()
                .enumerate()
                .map(|(i, w)| if i == zero { RationalVector::zeros(w.realization.roots.ambient_dim) } else { factor_direction(&mut rng, w, t) })
                .collect();
            let h = Horo::new(y.clone(), Xi::new(parts));
            let mut cs = Cells { horizontal: all.iter().filter(|c| h.is_horizontal(c)).cloned().collect(), max_depth: 0, up: 0, down: 0, proper_rel: 0 };
            check_horo(&h, &mut cs, &mut out, &dims);
            proper_degenerate += cs.proper_rel;
        }
        summary.insert(
            p.label.clone(),
            json!({
                "radius": crate::exactgeom::qstr(&p.radius),
                "directions": trials,
                "link_window_radius": crate::exactgeom::qstr(&big),
                "cells_in_radius": all.len(),
                "up_moves": moves_seen.0,
                "down_moves": moves_seen.1,
                "horizontal_cells": horizontal_total,
                "max_depth": max_depth,
                "proper_cohorizontal_pairs": proper_gp,
                "degenerate_directions": degenerate,
                "degenerate_proper_cohorizontal_pairs": proper_degenerate,
                "move_bound": move_bound(&dims),
            }),
        );
    }
    let truncated = out.truncated.clone();
    let mut cases: Vec<_> = out
        .by_name
        .into_iter()
        .map(|(name, mut c)| {
            if let Some(n) = truncated.get(name) {
                c.detail("truncated_by_window", n);
            }
            c.finish()
        })
        .collect();
    cases.push(cohorizontal_faces_need_not_meet()?.finish_expected_failure());
    cases.push(square_counterexample()?.0.finish_expected_failure());
    Ok((cases, serde_json::Value::Object(summary)))
}
