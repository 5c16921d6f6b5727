//! Random zonotopes: normal-cone decomposition, parallel translates, vertex minima, W-chambers.

use num_traits::Zero;
use rand::Rng;
use serde_json::json;

use super::{rand_q, rand_vec, stream, Case, SuiteConfig, SuiteError, SuiteOutput};
use crate::coxcomplex::{FiniteType, RootSystem};
use crate::exactgeom::{RationalVector, Q};
use crate::zonotope::{
    embed_parallel_translate, min_distance_sq_over_hull, minmax_over_polytope, wchamber_contains, Zonotope,
};

const MAX_GENERATORS: usize = 8;

fn random_generators(rng: &mut impl Rng, dim: usize) -> Vec<RationalVector> {
    let k = rng.gen_range(1..=MAX_GENERATORS);
    (0..k).map(|_| rand_vec(rng, dim, 6, 3)).filter(|g| !g.is_zero()).collect()
}

/// A point of `Z(D)` as `Σ α_i g_i` with random `α_i ∈ [0, 1]`.
fn random_member(rng: &mut impl Rng, z: &Zonotope) -> RationalVector {
    let mut x = z.translation().clone();
    for g in z.generators() {
        let den: i64 = rng.gen_range(1..=5);
        x = x.axpy(&Q::new(rng.gen_range(0..=den).into(), den.into()), g);
    }
    x
}

/// `m` points with all their differences, padded with random generators up to the cap.
fn rich_instance(rng: &mut impl Rng, dim: usize) -> (Vec<RationalVector>, Vec<RationalVector>) {
    let m = rng.gen_range(2..=3);
    let sigma: Vec<RationalVector> = (0..m).map(|_| rand_vec(rng, dim, 4, 2)).collect();
    let mut d = Vec::new();
    for a in &sigma {
        for b in &sigma {
            if a != b && !d.contains(&(a - b)) {
                d.push(a - b);
            }
        }
    }
    while d.len() < MAX_GENERATORS && rng.gen_bool(0.5) {
        let g = rand_vec(rng, dim, 5, 2);
        if !g.is_zero() {
            d.push(g);
        }
    }
    (sigma, d)
}

pub(super) fn run(cfg: &SuiteConfig) -> SuiteOutput {
    let trials = cfg.trials.unwrap_or(200);
    if let Some(d) = cfg.dim {
        if !(1..=4).contains(&d) {
            return Err(SuiteError::Usage(format!("--dim must be between 1 and 4, got {d}")));
        }
    }
    let mut rng = stream(cfg.seed, "zonotopes");
    let mut dec = Case::new("space_decomposition");
    let mut emb = Case::new("parallel_translate");
    let mut mins = Case::new("rich_min_at_vertex");
    let mut dims = [0u64; 5];
    for t in 0..trials {
        let dim = cfg.dim.unwrap_or_else(|| rng.gen_range(2..=4));
        dims[dim] += 1;
        let gens = random_generators(&mut rng, dim);
        let z = Zonotope::new(dim, gens.clone())?;
        for _ in 0..3 {
            let x = rand_vec(&mut rng, dim, 15, 4);
            let d = z.decompose(&x);
            let ctx = || format!("instance {t}: x = {x:?}");
            dec.check(&d.f + &d.n == x, || format!("{}: f + n != x", ctx()));
            let face = if d.face.zero_set.is_empty() {
                d.f == d.face.offset
            } else {
                Zonotope::new(dim, d.face.zero_set.clone())?.translated(&d.face.offset).contains_relint(&d.f)
            };
            dec.check(face, || format!("{}: f not in relint F", ctx()));
            dec.check(z.contains(&d.f), || format!("{}: f not in Z", ctx()));
            // n ∈ N(F): the whole face is n-maximal
            let flat = d.face.zero_set.iter().all(|g| d.n.dot(g).is_zero());
            dec.check(flat && z.support(&d.n) == d.n.dot(&d.f), || format!("{}: n not in N(F)", ctx()));
            let w = &d.face.witness;
            let consistent = z.generators().iter().all(|g| w.dot(g).is_zero() == d.face.zero_set.contains(g));
            dec.check(consistent, || format!("{}: witness does not cut out the zero set", ctx()));
        }

        let (sigma, d) = rich_instance(&mut rng, dim);
        let zr = Zonotope::new(dim, d.clone())?;
        let x = random_member(&mut rng, &zr);
        match embed_parallel_translate(&x, &sigma, &d) {
            Ok(cert) => {
                emb.check(cert.verify(&x, &zr), || format!("instance {t}: certificate rejected"));
                let v = &sigma[cert.vertex];
                let inside = sigma.iter().all(|w| zr.contains(&(&x + &(w - v))));
                emb.check(inside, || format!("instance {t}: translate leaves Z"));
            }
            Err(e) => {
                emb.check(false, || format!("instance {t}: {e}"));
            }
        }

        let shift = rand_vec(&mut rng, dim, 20, 1);
        let moved: Vec<RationalVector> = sigma.iter().map(|p| p + &shift).collect();
        let mm = minmax_over_polytope(&moved, &zr)?;
        let exact = min_distance_sq_over_hull(&moved, &zr);
        mins.check(mm.min_dist_sq == exact, || format!("instance {t}: vertex min {} vs hull min {}", mm.min_dist_sq, exact));
    }
    dec.detail("instances", trials);
    dec.detail("points_per_instance", 3);
    dec.detail("instances_by_dim", json!({"2": dims[2], "3": dims[3], "4": dims[4], "1": dims[1]}));
    emb.detail("instances", trials);
    mins.detail("oracle", "exhaustive vertex-simplex against zonotope-face search");

    let mut nf = Case::new("weyl_chamber_normal");
    let mut per_type = serde_json::Map::new();
    let mut rng = stream(cfg.seed, "zonotopes/weyl");
    for kind in [FiniteType::A2, FiniteType::B2, FiniteType::G2] {
        let rs = RootSystem::new(kind);
        let before = nf.violations();
        let mut points = 0;
        for _ in 0..3 {
            let seeds: Vec<RationalVector> = (0..2).map(|_| in_span(&mut rng, &rs, 3)).collect();
            let orbit = rs.orbit_closure(&seeds);
            let z = Zonotope::symmetric(rs.ambient_dim, orbit)?;
            for _ in 0..100 {
                let v = in_span(&mut rng, &rs, 12);
                let d = z.decompose(&v);
                nf.check(wchamber_contains(&rs, &v, &d.n), || format!("{kind}: v = {v:?}, n = {:?}", d.n));
                points += 1;
            }
        }
        per_type.insert(kind.to_string(), json!({"points": points, "violations": nf.violations() - before}));
    }
    nf.detail("types", per_type);

    let cases = vec![dec.finish(), emb.finish(), mins.finish(), nf.finish()];
    Ok((cases, json!({"instances": trials, "max_generators": MAX_GENERATORS})))
}

fn in_span(rng: &mut impl Rng, rs: &RootSystem, bound: i64) -> RationalVector {
    let mut v = RationalVector::zeros(rs.ambient_dim);
    for a in &rs.simple {
        v = v.axpy(&rand_q(rng, bound, 4), a);
    }
    v
}
