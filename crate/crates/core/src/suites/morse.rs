//! Morse values, descending links and the sublevel filtration on a twin product.

use std::collections::{BTreeMap, BTreeSet};

use serde_json::json;

use super::{parse_kind, Case, SuiteConfig, SuiteOutput};
use crate::exactgeom::{qi, qstr};
use crate::homology::{greedy_collapse, reduced_homology, CollapseOutcome};
use crate::horolinks::MoveKind;
use crate::morse::{check_attaching, filtration, punctured_boundary, CellClass, DescendingLink, MorseModel};
use crate::polycomplex::{PolyCell, SimplicialComplex};

/// Simplices of a chain complex spelled out as cells, so differently labelled copies compare.
fn chains(cells: &[PolyCell], k: &SimplicialComplex) -> BTreeSet<Vec<PolyCell>> {
    k.simplices().map(|s| s.iter().map(|&i| cells[i as usize].clone()).collect()).collect()
}

fn face_part_is(dl: &DescendingLink, c: &PolyCell, hole: Option<&PolyCell>) -> bool {
    let (cells, k) = punctured_boundary(c, hole);
    chains(&dl.cells, &dl.face_part) == chains(&cells, &k)
}

pub(super) fn run(cfg: &SuiteConfig) -> SuiteOutput {
    let kind = parse_kind(cfg, "A1")?;
    let core = cfg.radius.clone().unwrap_or_else(|| qi(4));
    let m = MorseModel::new(kind, &core, crate::twin::Richness::Rich, cfg.strict_window)?;
    let cells = m.core_cells();

    let mut classify = Case::new("classification");
    let mut essential = Case::new("essential_links");
    let mut punct = Case::new("nonessential_links_contractible");
    let mut morse = Case::new("morse_property");
    let mut moves = Case::new("depth_decreases_along_moves");
    let mut counts: BTreeMap<CellClass, usize> = BTreeMap::new();
    let (mut attempts, mut collapsed) = (0usize, 0usize);
    let mut records = Vec::new();
    for (i, c) in cells.iter().enumerate() {
        let show = || format!("{:?}", c.factors);
        let (v, class) = match (m.morse_value(c), m.classify(c)) {
            (Ok(v), Ok(k)) => (v, k),
            (a, b) => {
                classify.check(false, || format!("{}: {:?} {:?}", show(), a.err(), b.err()));
                continue;
            }
        };
        classify.check(true, String::new);
        *counts.entry(class).or_default() += 1;
        for f in c.faces() {
            if &f != c {
                let fv = m.morse_value(&f)?;
                morse.check(fv != v, || format!("{} and its face {:?} share {v}", show(), f.factors));
            }
        }
        if class == CellClass::ZeroHeight {
            continue;
        }
        let dl = m.descending_link(c)?;
        match class {
            CellClass::Essential => {
                let d = dl.unsubdivided.as_ref().unwrap();
                let (hor, ver) = (dl.horizontal_part.as_ref().unwrap(), dl.vertical_part.as_ref().unwrap());
                essential.check(d.is_face_closed(), || format!("{}: descending cofaces not closed under faces", show()));
                essential.check(face_part_is(&dl, c, None), || format!("{}: face part is not the whole boundary", show()));
                essential.check(ver == &m.open_hemisphere_of_link(c)?, || format!("{}: vertical part is not the open hemisphere complex", show()));
                essential.check(hor == &m.expected_horizontal_part(c)?, || format!("{}: horizontal part mismatch", show()));
                essential.check(d == &hor.join(ver), || format!("{}: not the join of its parts", show()));
            }
            CellClass::NonEssentialHorizontal => {
                let h = m.horo(&m.xi_at(c)?);
                let tm = h.tau_min(c)?;
                punct.check(face_part_is(&dl, c, Some(&tm)), || format!("{}: face part is not the boundary punctured at τ^min", show()));
                punct.check(reduced_homology(&dl.full()).is_acyclic(), || format!("{}: descending link not acyclic", show()));
            }
            CellClass::NonHorizontal => {
                let roof = m.twin.roof(c)?;
                if m.classify(&roof)? == CellClass::Essential {
                    punct.check(face_part_is(&dl, c, Some(&roof)), || format!("{}: face part is not punctured at the roof", show()));
                }
                punct.check(reduced_homology(&dl.full()).is_acyclic(), || format!("{}: descending link not acyclic", show()));
            }
            CellClass::ZeroHeight => unreachable!(),
        }
        if !dl.essential {
            attempts += 1;
            if greedy_collapse(&dl.full()) == CollapseOutcome::CollapsedToPoint {
                collapsed += 1;
            }
        }
        if matches!(class, CellClass::Essential | CellClass::NonEssentialHorizontal) {
            let h = m.horo(&m.xi_at(c)?);
            for mv in h.moves_from(c)? {
                if m.twin.max_height_sq(&mv.to) != v.h_sq || !m.twin.is_h_horizontal(&mv.to) {
                    continue;
                }
                let tv = m.morse_value(&mv.to)?;
                moves.check(tv.depth < v.depth, || format!("{:?} move {} → {:?} keeps depth {}", mv.kind == MoveKind::Up, show(), mv.to.factors, qstr(&v.depth)));
            }
        }
        let mut r = serde_json::to_value(m.record(c, &dl)?).expect("record serializes");
        r["id"] = json!(i);
        records.push(r);
    }

    let mut filt = Case::new("filtration_attaching");
    let f = filtration(&m)?;
    filt.check(f.sizes.windows(2).all(|w| w[0] < w[1]), || format!("sizes not increasing: {:?}", f.sizes));
    let (checked, bad) = check_attaching(&m, &f)?;
    for c in &bad {
        filt.check(false, || format!("attaching link differs at {:?}", c.factors));
    }
    for _ in 0..checked - bad.len() {
        filt.check(true, String::new);
    }
    filt.detail("levels", f.levels.len());
    filt.detail("sizes", &f.sizes);
    filt.detail("core_interior_checked", checked);

    let zero = counts.get(&CellClass::ZeroHeight).copied().unwrap_or(0);
    let summary = json!({
        "type": kind.to_string(),
        "core_radius": qstr(&m.core_radius),
        "enlarged_radius": qstr(&m.enlarged_radius),
        "cells": cells.len(),
        "classes": counts.iter().map(|(k, v)| (serde_json::to_value(k).unwrap().as_str().unwrap().to_string(), json!(v))).collect::<serde_json::Map<_, _>>(),
        "zero_height_cells": zero,
        "collapse": {"attempts": attempts, "collapsed_to_point": collapsed},
        "positive_levels": f.levels.iter().skip(1).map(|l| l.as_ref().map(|v| v.to_string())).collect::<Vec<_>>(),
        "records": records,
    });
    Ok((vec![classify.finish(), morse.finish(), essential.finish(), punct.finish(), moves.finish(), filt.finish()], summary))
}
