//! Hemisphere complexes of small thick buildings against several poles.

use rand::seq::SliceRandom;
use rand::Rng;
use serde_json::json;

use super::{stream, Case, SuiteConfig, SuiteError, SuiteOutput};
use crate::exactgeom::Q;
use crate::homology::reduced_homology;
use crate::sphbuild::{build_building, BuildingSpec, NorthPole, SphericalBuilding};

fn buildings(cfg: &SuiteConfig) -> std::result::Result<Vec<(String, BuildingSpec)>, SuiteError> {
    let qs: Vec<u32> = match cfg.q {
        None => vec![2, 3],
        Some(q @ (2 | 3)) => vec![q],
        Some(q) => return Err(SuiteError::Usage(format!("--q must be 2 or 3, got {q}"))),
    };
    let p = BuildingSpec::Points;
    let mut out = vec![
        ("points(3)".to_string(), p(3)),
        ("points(4)".to_string(), p(4)),
        ("K33".to_string(), BuildingSpec::join(p(3), p(3))),
        ("K44".to_string(), BuildingSpec::join(p(4), p(4))),
    ];
    for q in qs {
        out.push((format!("flags({q},2)"), BuildingSpec::Flags { q, n: 2 }));
    }
    Ok(out)
}

fn poles(b: &SphericalBuilding, rng: &mut impl Rng) -> Vec<(String, Option<NorthPole>)> {
    let v = *b.vertices().iter().next().unwrap();
    let edge = b.complex.of_dim(1).first().map(|e| NorthPole::new((*e).clone(), vec![Q::new(1.into(), 2.into()); 2]));
    let ch = b.chambers().choose(rng).unwrap().clone();
    let weights: Vec<Q> = ch.iter().map(|_| Q::from_integer(rng.gen_range(1..=9).into())).collect();
    vec![
        ("vertex".to_string(), Some(NorthPole::vertex(v))),
        ("edge_midpoint".to_string(), edge),
        ("chamber_point".to_string(), Some(NorthPole::new(ch, weights))),
    ]
}

pub(super) fn run(cfg: &SuiteConfig) -> SuiteOutput {
    let mut closed = Case::new("closed_hemisphere_spherical");
    let mut open = Case::new("open_hemisphere_connectivity");
    let mut crit = Case::new("equator_criteria_agree");
    let mut well = Case::new("polar_class_well_defined");
    let mut profiles = Vec::new();
    let mut rng = stream(cfg.seed, "hemispheres");
    for (name, spec) in buildings(cfg)? {
        let b = build_building(&spec)?;
        let dim = b.dim();
        for (pname, pole) in poles(&b, &mut rng) {
            let Some(pole) = pole else {
                profiles.push(json!({"building": name, "pole": pname, "skipped": "no edges in a rank-one building"}));
                continue;
            };
            let polar = b.polar_class(&pole);
            for v in b.vertices() {
                let cs = b.polar_class_of_vertex(&pole, v, 3);
                well.check(cs.windows(2).all(|w| w[0] == w[1]), || format!("{name}/{pname}: vertex {v} gets {cs:?}"));
            }
            let hc = b.hemisphere_complexes(&polar);
            for s in hc.equator.simplices() {
                let (g, d) = b.horizontality_criteria(&polar, s);
                let def = hc.horizontal.contains(s);
                crit.check(g == def && d == def, || format!("{name}/{pname}: simplex {s:?} def {def} geometric {g} diagram {d}"));
            }
            let hcl = reduced_homology(&hc.closed);
            closed.check(hcl.vanishes_below(dim) && hcl.nonzero_in(dim), || format!("{name}/{pname}: closed betti {:?}", hcl.betti));
            let dv = hc.vertical.dim();
            let hop = reduced_homology(&hc.open);
            open.check(hop.vanishes_below(dv), || format!("{name}/{pname}: open betti {:?} below {dv}", hop.betti));
            let flagged = !hop.nonzero_in(dv);
            if flagged {
                open.warn(format!("{name}/{pname}: open hemisphere complex has no homology in degree {dv}"));
            }
            profiles.push(json!({
                "building": name,
                "pole": pname,
                "carrier": pole.carrier,
                "weights": pole.coords.iter().map(crate::exactgeom::qstr).collect::<Vec<_>>(),
                "dim": dim,
                "dim_vertical": dv,
                "f_vector": b.complex.f_vector(),
                "equator": hc.equator.f_vector(),
                "closed": hcl,
                "open": hop,
                "open_top_vanishes": flagged,
            }));
        }
    }
    let cases = vec![closed.finish(), open.finish(), crit.finish(), well.finish()];
    Ok((cases, json!({"profiles": profiles})))
}
