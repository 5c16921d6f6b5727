//! Zonotopes: faces, closest-point projection, normal-cone decomposition and
//! the parallel-translate certificate.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::OnceLock;

use num_traits::{One, Signed, Zero};

use crate::coxcomplex::RootSystem;
use crate::error::{Error, Result};
use crate::exactgeom::{
    complement_basis, independent_subset, orthogonal_basis, perp_component, project_onto_span, q, sign,
    solve_square, RationalVector, SqrtRational, Q,
};

/// Face of the merged zonotope: sign vector over merged generators.
#[derive(Clone, Debug)]
pub struct Face {
    pub covector: Vec<i8>,
    /// Strictly inside the normal cone, realizing `covector`.
    pub witness: RationalVector,
    /// `Σ_{+} g + shift`
    pub offset: RationalVector,
    /// Merged generators spanning the face.
    pub zero: Vec<usize>,
    /// Facet inequalities `⟨u, p⟩ ≤ h` of `Z(zero)` inside its span.
    relint: Vec<(RationalVector, Q)>,
    zero_basis: Vec<RationalVector>,
}

impl Face {
    pub fn dim(&self) -> usize {
        self.zero_basis.len()
    }
}

/// `F = Z(D_v) + Σ_{⟨v,z⟩>0} z` for a witness `v` in the relative interior of `N(F)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FaceDescriptor {
    pub witness: RationalVector,
    pub zero_set: Vec<RationalVector>,
    pub offset: RationalVector,
}

#[derive(Clone, Debug)]
pub struct Decomposition {
    pub face: FaceDescriptor,
    pub f: RationalVector,
    pub n: RationalVector,
}

#[derive(Debug)]
struct FaceData {
    faces: Vec<Face>,
    /// Facet inequalities of the whole merged zonotope.
    facets: Vec<(RationalVector, Q)>,
    basis: Vec<RationalVector>,
}

#[derive(Debug)]
pub struct Zonotope {
    dim: usize,
    generators: Vec<RationalVector>,
    merged: Vec<RationalVector>,
    shift: RationalVector,
    translation: RationalVector,
    data: OnceLock<FaceData>,
}

impl Clone for Zonotope {
    fn clone(&self) -> Self {
        Zonotope {
            dim: self.dim,
            generators: self.generators.clone(),
            merged: self.merged.clone(),
            shift: self.shift.clone(),
            translation: self.translation.clone(),
            data: OnceLock::new(),
        }
    }
}

/// Representative of the line through `z`: first nonzero coordinate 1.
fn direction_key(z: &RationalVector) -> (RationalVector, Q) {
    let lead = z.coords().iter().find(|c| !c.is_zero()).unwrap().clone();
    (z.scale(&(Q::one() / &lead)), lead)
}

impl Zonotope {
    /// Zero vectors are dropped and repeated generators merged into one.
    pub fn new(dim: usize, gens: Vec<RationalVector>) -> Result<Self> {
        for g in &gens {
            if g.dim() != dim {
                return Err(Error::DimensionMismatch { expected: dim, actual: g.dim() });
            }
        }
        let set: BTreeSet<RationalVector> = gens.into_iter().filter(|g| !g.is_zero()).collect();
        let generators: Vec<RationalVector> = set.into_iter().collect();
        let mut classes: BTreeMap<RationalVector, (Q, Q)> = BTreeMap::new();
        for g in &generators {
            let (p, c) = direction_key(g);
            let e = classes.entry(p).or_insert((Q::zero(), Q::zero()));
            if c.is_negative() {
                e.0 += &c;
            } else {
                e.1 += &c;
            }
        }
        let mut merged = Vec::new();
        let mut shift = RationalVector::zeros(dim);
        for (p, (lo, hi)) in classes {
            shift = shift.axpy(&lo, &p);
            merged.push(p.scale(&(hi - lo)));
        }
        Ok(Zonotope { dim, generators, merged, shift, translation: RationalVector::zeros(dim), data: OnceLock::new() })
    }

    /// `t + Z`
    pub fn translated(&self, t: &RationalVector) -> Zonotope {
        let mut z = self.clone();
        z.shift = &z.shift + t;
        z.translation = &z.translation + t;
        z
    }

    pub fn translation(&self) -> &RationalVector {
        &self.translation
    }

    /// `D ∪ −D`
    pub fn symmetric(dim: usize, gens: Vec<RationalVector>) -> Result<Self> {
        let mut all = gens.clone();
        all.extend(gens.iter().map(|g| -g));
        Zonotope::new(dim, all)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generators(&self) -> &[RationalVector] {
        &self.generators
    }

    pub fn is_symmetric(&self) -> bool {
        let s: BTreeSet<&RationalVector> = self.generators.iter().collect();
        self.generators.iter().all(|g| s.contains(&-g))
    }

    pub fn center(&self) -> RationalVector {
        &RationalVector::sum(self.dim, self.generators.iter()).scale(&q(1, 2)) + &self.translation
    }

    /// `max_{y ∈ Z} ⟨u, y⟩`
    pub fn support(&self, u: &RationalVector) -> Q {
        self.generators.iter().map(|z| u.dot(z)).filter(|x| x.is_positive()).fold(u.dot(&self.translation), |a, b| a + b)
    }

    fn data(&self) -> &FaceData {
        self.data.get_or_init(|| {
            let mut memo = HashMap::new();
            let all: Vec<usize> = (0..self.merged.len()).collect();
            let raw = faces_rec(&self.merged, &all, &mut memo);
            let mut faces = Vec::with_capacity(raw.len());
            for (cov, witness) in raw {
                let zero: Vec<usize> = (0..cov.len()).filter(|&j| cov[j] == 0).collect();
                let mut offset = self.shift.clone();
                for (j, c) in cov.iter().enumerate() {
                    if *c > 0 {
                        offset = &offset + &self.merged[j];
                    }
                }
                let zg: Vec<RationalVector> = zero.iter().map(|&j| self.merged[j].clone()).collect();
                let relint = rays(&self.merged, &zero, &mut memo)
                    .into_iter()
                    .map(|u| {
                        let h = support_of(&zg, &u);
                        (u, h)
                    })
                    .collect();
                faces.push(Face { covector: cov, witness, offset, zero, relint, zero_basis: orthogonal_basis(&zg) });
            }
            let facets = rays(&self.merged, &all, &mut memo).into_iter().map(|u| {
                let h = support_of(&self.merged, &u);
                (u, h)
            }).collect();
            FaceData { faces, facets, basis: orthogonal_basis(&self.merged) }
        })
    }

    pub fn faces(&self) -> &[Face] {
        &self.data().faces
    }

    pub fn vertices(&self) -> Vec<RationalVector> {
        self.faces().iter().filter(|f| f.zero.is_empty()).map(|f| f.offset.clone()).collect()
    }

    /// Facet inequalities `⟨u, x − shift⟩ ≤ h` restricted to the span.
    pub fn facet_normals(&self) -> Vec<RationalVector> {
        self.data().facets.iter().map(|(u, _)| u.clone()).collect()
    }

    pub fn span_basis(&self) -> &[RationalVector] {
        &self.data().basis
    }

    pub fn contains(&self, x: &RationalVector) -> bool {
        let d = self.data();
        let p = x - &self.shift;
        in_span(&p, &d.basis) && d.facets.iter().all(|(u, h)| &u.dot(&p) <= h)
    }

    pub fn contains_relint(&self, x: &RationalVector) -> bool {
        let d = self.data();
        let p = x - &self.shift;
        if self.merged.is_empty() {
            return p.is_zero();
        }
        in_span(&p, &d.basis) && d.facets.iter().all(|(u, h)| &u.dot(&p) < h)
    }

    fn face_index_of(&self, x: &RationalVector) -> (usize, RationalVector, RationalVector) {
        for (i, f) in self.faces().iter().enumerate() {
            let rel = x - &f.offset;
            let y_rel = project_onto_span(&rel, &f.zero_basis);
            let n = &rel - &y_rel;
            let cone_ok = f.covector.iter().zip(&self.merged).all(|(c, g)| {
                let s = sign(&n.dot(g));
                match c {
                    1 => s >= 0,
                    -1 => s <= 0,
                    _ => s == 0,
                }
            });
            if !cone_ok {
                continue;
            }
            let inside = if f.zero.is_empty() { true } else { f.relint.iter().all(|(u, h)| &u.dot(&y_rel) < h) };
            if inside {
                return (i, &f.offset + &y_rel, n);
            }
        }
        unreachable!("the relative interiors plus normal cones cover the space")
    }

    /// Closest point and distance.
    pub fn project(&self, x: &RationalVector) -> (RationalVector, SqrtRational) {
        let (_, y, n) = self.face_index_of(x);
        (y, SqrtRational::from_square(n.norm_sq()))
    }

    pub fn distance_sq(&self, x: &RationalVector) -> Q {
        if self.contains(x) {
            return Q::zero();
        }
        self.face_index_of(x).2.norm_sq()
    }

    pub fn descriptor(&self, face: &Face) -> FaceDescriptor {
        let v = &face.witness;
        let zero_set = self.generators.iter().filter(|z| v.dot(z).is_zero()).cloned().collect();
        let offset = &RationalVector::sum(self.dim, self.generators.iter().filter(|z| v.dot(z).is_positive())) + &self.translation;
        FaceDescriptor { witness: v.clone(), zero_set, offset }
    }

    /// `x = f + n` with `f ∈ relint F` and `n ∈ N(F)`.
    pub fn decompose(&self, x: &RationalVector) -> Decomposition {
        let (i, f, n) = self.face_index_of(x);
        Decomposition { face: self.descriptor(&self.faces()[i]), f, n }
    }
}

fn in_span(p: &RationalVector, orth: &[RationalVector]) -> bool {
    perp_component(p, orth).map(|r| r.is_zero()).unwrap_or(false)
}

fn support_of(gens: &[RationalVector], u: &RationalVector) -> Q {
    gens.iter().map(|z| u.dot(z)).filter(|x| x.is_positive()).fold(Q::zero(), |a, b| a + b)
}

type Memo = HashMap<Vec<usize>, (Vec<RationalVector>, Vec<(Vec<i8>, RationalVector)>)>;

/// Facet normals of `Z(gens[idx])` inside its span, both orientations.
fn rays(gens: &[RationalVector], idx: &[usize], memo: &mut Memo) -> Vec<RationalVector> {
    if let Some((r, _)) = memo.get(idx) {
        if !r.is_empty() || idx.is_empty() {
            return r.clone();
        }
    }
    let vs: Vec<RationalVector> = idx.iter().map(|&j| gens[j].clone()).collect();
    let basis = orthogonal_basis(&vs);
    let k = basis.len();
    let mut out: BTreeSet<RationalVector> = BTreeSet::new();
    if k == 1 {
        out.insert(basis[0].primitive());
        out.insert((-&basis[0]).primitive());
    } else if k > 1 {
        let mut seen_hyper: BTreeSet<RationalVector> = BTreeSet::new();
        for sub in subsets_of_size(idx.len(), k - 1) {
            let fam: Vec<RationalVector> = sub.iter().map(|&i| vs[i].clone()).collect();
            if independent_subset(&fam).len() != k - 1 {
                continue;
            }
            let c = complement_basis(&fam, &basis);
            debug_assert_eq!(c.len(), 1);
            let r = c[0].primitive();
            let key = direction_key(&r).0;
            if seen_hyper.insert(key) {
                out.insert(r.clone());
                out.insert((-&r).primitive());
            }
        }
    }
    let out: Vec<RationalVector> = out.into_iter().collect();
    memo.entry(idx.to_vec()).or_insert_with(|| (vec![], vec![])).0 = out.clone();
    out
}

fn subsets_of_size(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    go(0, n, k, &mut cur, &mut out);
    out
}

/// All covectors of `Z(gens[idx])` (entries outside `idx` are 0) with witnesses.
fn faces_rec(gens: &[RationalVector], idx: &[usize], memo: &mut Memo) -> Vec<(Vec<i8>, RationalVector)> {
    if let Some((_, f)) = memo.get(idx) {
        if !f.is_empty() {
            return f.clone();
        }
    }
    let m = gens.len();
    let d = gens.first().map(|g| g.dim()).unwrap_or(0);
    let mut out: BTreeMap<Vec<i8>, RationalVector> = BTreeMap::new();
    out.insert(vec![0; m], RationalVector::zeros(d));
    for r in rays(gens, idx, memo) {
        let sub_idx: Vec<usize> = idx.iter().copied().filter(|&j| r.dot(&gens[j]).is_zero()).collect();
        let active: Vec<(usize, Q)> = idx.iter().map(|&j| (j, r.dot(&gens[j]))).filter(|(_, x)| !x.is_zero()).collect();
        for (cov, w) in faces_rec(gens, &sub_idx, memo) {
            let mut lambda = Q::one();
            for (j, rg) in &active {
                let ratio = w.dot(&gens[*j]).abs() / rg.abs();
                if ratio >= lambda {
                    lambda = ratio + Q::one();
                }
            }
            let v = &r.scale(&lambda) + &w;
            let mut c = cov.clone();
            for (j, rg) in &active {
                c[*j] = sign(rg);
            }
            out.entry(c).or_insert(v);
        }
    }
    let res: Vec<(Vec<i8>, RationalVector)> = out.into_iter().collect();
    memo.entry(idx.to_vec()).or_insert_with(|| (vec![], vec![])).1 = res.clone();
    res
}

// ---------------------------------------------------------------------------
// Richness and the parallel-translate certificate

pub fn is_sufficiently_rich(d: &[RationalVector], sigma: &[RationalVector]) -> bool {
    let set: BTreeSet<&RationalVector> = d.iter().collect();
    sigma.iter().enumerate().all(|(i, v)| sigma.iter().enumerate().all(|(j, w)| i == j || v == w || set.contains(&(w - v))))
}

/// `((D1 ∪ {0}) + (D2 ∪ {0})) ∖ {0}`
pub fn sum_rich_generators(d1: &[RationalVector], d2: &[RationalVector], dim: usize) -> Vec<RationalVector> {
    let zero = RationalVector::zeros(dim);
    let a: Vec<&RationalVector> = d1.iter().chain(std::iter::once(&zero)).collect();
    let b: Vec<&RationalVector> = d2.iter().chain(std::iter::once(&zero)).collect();
    let mut out = BTreeSet::new();
    for x in &a {
        for y in &b {
            let s = *x + *y;
            if !s.is_zero() {
                out.insert(s);
            }
        }
    }
    out.into_iter().collect()
}

/// Coefficients `0 ≤ α ≤ 1` with `Σ α_z z = x`, one generator at a time.
pub fn subunit_coefficients(x: &RationalVector, d: &[RationalVector]) -> Result<Vec<Q>> {
    let dim = x.dim();
    let mut rest = x.clone();
    let mut alpha = Vec::with_capacity(d.len());
    for (i, z) in d.iter().enumerate() {
        let tail: Vec<RationalVector> = d[i + 1..].to_vec();
        let zt = Zonotope::new(dim, tail.clone())?;
        let basis = zt.span_basis().to_vec();
        let (mut lo, mut hi) = (Q::zero(), Q::one());
        let perp = perp_component(z, &basis)?;
        if !perp.is_zero() {
            let t = rest.dot(&perp) / z.dot(&perp);
            lo = lo.max(t.clone());
            hi = hi.min(t);
        } else if !in_span(&rest, &basis) {
            return Err(Error::NotInZonotope);
        }
        // ⟨u, rest − t z⟩ ≤ h(u) over the facets of the tail, in span coordinates
        for u in zt.facet_normals() {
            let h = support_of(&tail, &u);
            let a = rest.dot(&u);
            let b = z.dot(&u);
            // a − t b ≤ h
            if b.is_positive() {
                lo = lo.max((&a - &h) / &b);
            } else if b.is_negative() {
                hi = hi.min((&a - &h) / &b);
            } else if a > h {
                return Err(Error::NotInZonotope);
            }
        }
        if lo > hi {
            return Err(Error::NotInZonotope);
        }
        let t = (&lo + &hi) / Q::from_integer(2.into());
        rest = rest.axpy(&-&t, z);
        alpha.push(t);
    }
    if !rest.is_zero() {
        return Err(Error::NotInZonotope);
    }
    Ok(alpha)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EmbedCertificate {
    /// Index into the vertex list of the polytope.
    pub vertex: usize,
    /// Final coefficients, aligned with the canonical generator list.
    pub alpha: Vec<Q>,
    pub generators: Vec<RationalVector>,
    /// `E_v`
    pub edges: Vec<RationalVector>,
}

impl EmbedCertificate {
    /// Checks the coefficients and that every extreme point of `x + Z(E_v)` lies in `Z(D)`.
    pub fn verify(&self, x: &RationalVector, z: &Zonotope) -> bool {
        let dim = x.dim();
        let mut sum = RationalVector::zeros(dim);
        for (a, g) in self.alpha.iter().zip(&self.generators) {
            if a.is_negative() || a > &Q::one() {
                return false;
            }
            sum = sum.axpy(a, g);
        }
        if &sum != x {
            return false;
        }
        for (a, g) in self.alpha.iter().zip(&self.generators) {
            if self.edges.contains(g) && !a.is_zero() {
                return false;
            }
        }
        let k = self.edges.len();
        (0u32..1 << k).all(|bits| {
            let mut p = x.clone();
            for (i, e) in self.edges.iter().enumerate() {
                if bits >> i & 1 == 1 {
                    p = &p + e;
                }
            }
            z.contains(&p)
        })
    }
}

pub fn embed_parallel_translate(x: &RationalVector, sigma: &[RationalVector], d: &[RationalVector]) -> Result<EmbedCertificate> {
    let dim = x.dim();
    let z = Zonotope::new(dim, d.to_vec())?;
    let gens = z.generators().to_vec();
    if !is_sufficiently_rich(&gens, sigma) {
        return Err(Error::InsufficientGenerators);
    }
    if !z.contains(x) {
        return Err(Error::NotInZonotope);
    }
    let mut alpha = subunit_coefficients(x, &gens)?;
    let index: HashMap<&RationalVector, usize> = gens.iter().enumerate().map(|(i, g)| (g, i)).collect();
    let nv = sigma.len();
    let label = |alpha: &[Q], v: usize, w: usize| -> Option<usize> {
        if v == w || sigma[v] == sigma[w] {
            None
        } else {
            Some(index[&(&sigma[w] - &sigma[v])]).filter(|&i| alpha[i].is_positive())
        }
    };
    loop {
        if let Some(v) = (0..nv).find(|&v| (0..nv).all(|w| label(&alpha, v, w).is_none())) {
            let edges: Vec<RationalVector> =
                (0..nv).filter(|&w| sigma[w] != sigma[v]).map(|w| &sigma[w] - &sigma[v]).collect::<BTreeSet<_>>().into_iter().collect();
            return Ok(EmbedCertificate { vertex: v, alpha, generators: gens, edges });
        }
        // every vertex has a positive outgoing edge; walk until a repeat
        let mut path = vec![0usize];
        let mut pos: HashMap<usize, usize> = HashMap::from([(0, 0)]);
        let cycle_start = loop {
            let v = *path.last().unwrap();
            let w = (0..nv).find(|&w| label(&alpha, v, w).is_some()).unwrap();
            if let Some(&p) = pos.get(&w) {
                break p;
            }
            pos.insert(w, path.len());
            path.push(w);
        };
        let mut cyc: Vec<usize> = path[cycle_start..].to_vec();
        cyc.push(path[cycle_start]);
        let mut mult: BTreeMap<usize, i64> = BTreeMap::new();
        for e in cyc.windows(2) {
            *mult.entry(label(&alpha, e[0], e[1]).unwrap()).or_insert(0) += 1;
        }
        let m = mult.iter().map(|(&i, &k)| &alpha[i] / Q::from_integer(k.into())).min().unwrap();
        for (i, k) in mult {
            alpha[i] -= &m * Q::from_integer(k.into());
        }
    }
}

// ---------------------------------------------------------------------------
// Distances over a polytope

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinMax {
    pub min_vertex: usize,
    pub min_dist_sq: Q,
    pub max_face: Vec<usize>,
    pub max_dist_sq: Q,
}

pub fn minmax_over_polytope(sigma: &[RationalVector], z: &Zonotope) -> Result<MinMax> {
    if !is_sufficiently_rich(z.generators(), sigma) {
        return Err(Error::InsufficientGenerators);
    }
    let ds: Vec<Q> = sigma.iter().map(|v| z.distance_sq(v)).collect();
    let min_vertex = (0..ds.len()).min_by(|&a, &b| ds[a].cmp(&ds[b]).then(a.cmp(&b))).unwrap();
    let max_dist_sq = ds.iter().max().unwrap().clone();
    let max_face = (0..ds.len()).filter(|&i| ds[i] == max_dist_sq).collect();
    Ok(MinMax { min_vertex, min_dist_sq: ds[min_vertex].clone(), max_face, max_dist_sq })
}

/// Exact `min_{a ∈ conv σ} dist(a, Z)²` by enumerating pairs of a vertex simplex of `σ` and a face of `Z`.
pub fn min_distance_sq_over_hull(sigma: &[RationalVector], z: &Zonotope) -> Q {
    let n = sigma.len();
    let mut best: Option<Q> = None;
    for bits in 1u32..(1 << n) {
        let pts: Vec<&RationalVector> = (0..n).filter(|i| bits >> i & 1 == 1).map(|i| &sigma[i]).collect();
        let p0 = pts[0];
        let edges: Vec<RationalVector> = pts[1..].iter().map(|p| *p - p0).collect();
        if independent_subset(&edges).len() != edges.len() {
            continue;
        }
        for f in z.faces() {
            let fb: Vec<RationalVector> = {
                let zg: Vec<RationalVector> = f.zero.iter().map(|&j| z.merged[j].clone()).collect();
                independent_subset(&zg).into_iter().map(|i| zg[i].clone()).collect()
            };
            let mut all = edges.clone();
            all.extend(fb.iter().map(|v| -v));
            if independent_subset(&all).len() != all.len() {
                continue;
            }
            // minimize |p0 + Σ s e − o − Σ t g|²
            let r = &f.offset - p0;
            let gram: Vec<Vec<Q>> = all.iter().map(|a| all.iter().map(|b| a.dot(b)).collect()).collect();
            let rhs: Vec<Q> = all.iter().map(|a| a.dot(&r)).collect();
            let c = if all.is_empty() { vec![] } else { solve_square(&gram, &rhs).unwrap() };
            let s = &c[..edges.len()];
            let bary_rest = Q::one() - s.iter().fold(Q::zero(), |a, b| a + b);
            if bary_rest.is_negative() || s.iter().any(|x| x.is_negative()) {
                continue;
            }
            let mut a = p0.clone();
            for (si, e) in s.iter().zip(&edges) {
                a = a.axpy(si, e);
            }
            let mut b = f.offset.clone();
            for (ti, g) in c[edges.len()..].iter().zip(&fb) {
                b = b.axpy(ti, g);
            }
            if !z.contains(&b) {
                continue;
            }
            let d = (&a - &b).norm_sq();
            if best.as_ref().map(|x| &d < x).unwrap_or(true) {
                best = Some(d);
            }
        }
    }
    best.expect("some vertex-vertex pair is always feasible")
}

/// Whether every closed W-chamber containing `v` contains `n`.
pub fn wchamber_contains(w: &RootSystem, v: &RationalVector, n: &RationalVector) -> bool {
    w.roots.iter().all(|a| {
        let (sv, sn) = (sign(&v.dot(a)), sign(&n.dot(a)));
        sn == 0 || sn == sv
    })
}
