//! Finite spherical buildings, polar classification and hemisphere complexes.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::OnceLock;

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::coxcomplex::{mat_apply, mat_identity, mat_mul, CoxeterSystem, FiniteType, RootSystem};
use crate::error::{Error, Result};
use crate::exactgeom::{q, sign, RationalVector, Q};
use crate::polycomplex::{is_subset, Simplex, SimplicialComplex};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BuildingSpec {
    Coxeter(FiniteType),
    Flags { q: u32, n: usize },
    Points(usize),
    Join(Box<BuildingSpec>, Box<BuildingSpec>),
}

impl BuildingSpec {
    pub fn join(a: BuildingSpec, b: BuildingSpec) -> Self {
        BuildingSpec::Join(Box::new(a), Box::new(b))
    }

    pub fn name(&self) -> String {
        match self {
            BuildingSpec::Coxeter(t) => format!("coxeter({t})"),
            BuildingSpec::Flags { q, n } => format!("flags({q},{n})"),
            BuildingSpec::Points(k) => format!("points({k})"),
            BuildingSpec::Join(a, b) => format!("join({},{})", a.name(), b.name()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Polar {
    Lt,
    Eq,
    Gt,
}

/// Point of the building given by nonnegative barycentric weights on a carrier simplex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NorthPole {
    pub carrier: Simplex,
    pub coords: Vec<Q>,
}

impl NorthPole {
    pub fn new(carrier: Simplex, coords: Vec<Q>) -> Self {
        assert_eq!(carrier.len(), coords.len());
        assert!(coords.iter().all(|c| c >= &Q::zero()) && coords.iter().any(|c| c > &Q::zero()));
        let mut pairs: Vec<(u32, Q)> = carrier.into_iter().zip(coords).collect();
        pairs.sort_by_key(|p| p.0);
        let (carrier, coords) = pairs.into_iter().unzip();
        NorthPole { carrier, coords }
    }

    pub fn vertex(v: u32) -> Self {
        NorthPole { carrier: vec![v], coords: vec![Q::one()] }
    }
}

/// Directions of the vertices of one apartment.
pub type Apartment = BTreeMap<u32, RationalVector>;

#[derive(Clone, Debug)]
enum Geometry {
    Thin { dirs: BTreeMap<u32, RationalVector>, dim: usize },
    Points { k: usize },
    Flags(Box<FlagGeometry>),
    Join { left: Box<SphericalBuilding>, right: Box<SphericalBuilding>, offset: u32 },
}

#[derive(Clone, Debug)]
pub struct SphericalBuilding {
    pub complex: SimplicialComplex,
    pub vertex_type: BTreeMap<u32, usize>,
    /// Diagram over all type indices; only `types` occur.
    pub diagram: CoxeterSystem,
    pub types: BTreeSet<usize>,
    geometry: Geometry,
    chambers: OnceLock<Vec<Simplex>>,
}

impl SphericalBuilding {
    /// One apartment with explicit directions (a Coxeter complex or a link in one).
    pub fn thin(
        complex: SimplicialComplex,
        vertex_type: BTreeMap<u32, usize>,
        diagram: CoxeterSystem,
        dirs: BTreeMap<u32, RationalVector>,
        dim: usize,
    ) -> Self {
        let types = vertex_type.values().copied().collect();
        SphericalBuilding { complex, vertex_type, diagram, types, geometry: Geometry::Thin { dirs, dim }, chambers: OnceLock::new() }
    }

    pub fn dim(&self) -> i32 {
        self.complex.dim()
    }

    pub fn kind(&self) -> &'static str {
        match self.geometry {
            Geometry::Thin { .. } => "thin",
            Geometry::Points { .. } => "points",
            Geometry::Flags(_) => "flags",
            Geometry::Join { .. } => "join",
        }
    }

    pub fn vertices(&self) -> BTreeSet<u32> {
        self.complex.vertices()
    }

    pub fn chambers(&self) -> &[Simplex] {
        self.chambers.get_or_init(|| self.complex.facets())
    }

    fn realization_dim(&self) -> usize {
        match &self.geometry {
            Geometry::Thin { dim, .. } => *dim,
            Geometry::Points { .. } => 1,
            Geometry::Flags(f) => f.n + 1,
            Geometry::Join { left, right, .. } => left.realization_dim() + right.realization_dim(),
        }
    }

    /// Up to `limit` apartments containing all vertices in `xs`.
    pub fn apartments(&self, xs: &[u32], limit: usize) -> Vec<Apartment> {
        match &self.geometry {
            Geometry::Thin { dirs, .. } => {
                if xs.iter().all(|x| dirs.contains_key(x)) {
                    vec![dirs.clone()]
                } else {
                    vec![]
                }
            }
            Geometry::Points { k } => {
                let distinct: BTreeSet<u32> = xs.iter().copied().collect();
                let pairs: Vec<(u32, u32)> = match distinct.len() {
                    0 => (0..*k as u32).flat_map(|a| ((a + 1)..*k as u32).map(move |b| (a, b))).collect(),
                    1 => {
                        let a = *distinct.iter().next().unwrap();
                        (0..*k as u32).filter(|&b| b != a).map(|b| (a, b)).collect()
                    }
                    2 => {
                        let mut it = distinct.iter();
                        vec![(*it.next().unwrap(), *it.next().unwrap())]
                    }
                    _ => vec![],
                };
                pairs
                    .into_iter()
                    .take(limit)
                    .map(|(a, b)| BTreeMap::from([(a, RationalVector::from_ints(&[1])), (b, RationalVector::from_ints(&[-1]))]))
                    .collect()
            }
            Geometry::Flags(f) => f.apartments(xs, limit),
            Geometry::Join { left, right, offset } => {
                let lx: Vec<u32> = xs.iter().copied().filter(|&x| x < *offset).collect();
                let rx: Vec<u32> = xs.iter().copied().filter(|&x| x >= *offset).map(|x| x - offset).collect();
                let la = left.apartments(&lx, limit);
                let ra = right.apartments(&rx, limit);
                let (dl, dr) = (left.realization_dim(), right.realization_dim());
                let mut out = Vec::new();
                'outer: for a in &la {
                    for b in &ra {
                        if out.len() >= limit {
                            break 'outer;
                        }
                        let mut ap = Apartment::new();
                        for (v, d) in a {
                            ap.insert(*v, d.concat(&RationalVector::zeros(dr)));
                        }
                        for (v, d) in b {
                            ap.insert(v + offset, RationalVector::zeros(dl).concat(d));
                        }
                        out.push(ap);
                    }
                }
                out
            }
        }
    }

    /// Pole direction inside an apartment containing its carrier.
    fn pole_in(ap: &Apartment, pole: &NorthPole) -> RationalVector {
        let d = ap.values().next().unwrap().dim();
        let mut p = RationalVector::zeros(d);
        for (c, l) in pole.carrier.iter().zip(&pole.coords) {
            p = p.axpy(l, &ap[c]);
        }
        p
    }

    fn class_of(x: &Q) -> Polar {
        match sign(x) {
            1 => Polar::Lt,
            0 => Polar::Eq,
            _ => Polar::Gt,
        }
    }

    /// Class of `v` evaluated in up to `limit` apartments containing the carrier and `v`.
    pub fn polar_class_of_vertex(&self, pole: &NorthPole, v: u32, limit: usize) -> Vec<Polar> {
        let mut xs = pole.carrier.clone();
        xs.push(v);
        self.apartments(&xs, limit).iter().map(|ap| Self::class_of(&Self::pole_in(ap, pole).dot(&ap[&v]))).collect()
    }

    pub fn polar_class(&self, pole: &NorthPole) -> BTreeMap<u32, Polar> {
        self.vertices()
            .into_iter()
            .map(|v| {
                let c = self.polar_class_of_vertex(pole, v, 1);
                (v, *c.first().expect("carrier and vertex share an apartment"))
            })
            .collect()
    }

    /// Polar classes against a direction vector; thin buildings and joins of them.
    pub fn polar_class_vector(&self, pole: &RationalVector) -> BTreeMap<u32, Polar> {
        match &self.geometry {
            Geometry::Thin { dirs, .. } => dirs.iter().map(|(v, d)| (*v, Self::class_of(&pole.dot(d)))).collect(),
            Geometry::Join { left, right, offset } => {
                let dl = left.realization_dim();
                let mut out = left.polar_class_vector(&pole.slice(0, dl));
                for (v, c) in right.polar_class_vector(&pole.slice(dl, pole.dim() - dl)) {
                    out.insert(v + offset, c);
                }
                out
            }
            _ => panic!("vector poles need a thin building"),
        }
    }

    /// Inner product of two vertex directions in an apartment containing both.
    pub fn inner(&self, a: u32, b: u32) -> Q {
        let ap = self.apartments(&[a, b], 1);
        ap[0][&a].dot(&ap[0][&b])
    }

    /// Diagram components of the building's types.
    pub fn type_components(&self) -> Vec<Vec<usize>> {
        self.diagram.components_of(&self.types)
    }

    pub fn hemisphere_complexes(&self, polar: &BTreeMap<u32, Polar>) -> HemisphereComplexes {
        let pick = |f: &dyn Fn(Polar) -> bool| -> BTreeSet<u32> { polar.iter().filter(|(_, c)| f(**c)).map(|(v, _)| *v).collect() };
        let eq = pick(&|c| c == Polar::Eq);
        let far = pick(&|c| c != Polar::Lt);
        let gt = pick(&|c| c == Polar::Gt);
        let mut horizontal_types = BTreeSet::new();
        let mut vertical_types = BTreeSet::new();
        for comp in self.type_components() {
            let flat = polar.iter().filter(|(v, _)| comp.contains(&self.vertex_type[v])).all(|(_, c)| *c == Polar::Eq);
            if flat {
                horizontal_types.extend(comp);
            } else {
                vertical_types.extend(comp);
            }
        }
        let of_types = |ts: &BTreeSet<usize>| -> BTreeSet<u32> {
            self.vertex_type.iter().filter(|(_, t)| ts.contains(t)).map(|(v, _)| *v).collect()
        };
        HemisphereComplexes {
            equator: self.complex.full_subcomplex(&eq),
            closed: self.complex.full_subcomplex(&far),
            open: self.complex.full_subcomplex(&gt),
            horizontal: self.complex.full_subcomplex(&of_types(&horizontal_types)),
            vertical: self.complex.full_subcomplex(&of_types(&vertical_types)),
            horizontal_types,
            vertical_types,
        }
    }

    /// Geometric and diagrammatic verdicts on whether `s` lies in the horizontal part.
    pub fn horizontality_criteria(&self, polar: &BTreeMap<u32, Polar>, s: &[u32]) -> (bool, bool) {
        (self.geometric_criterion(polar, s), self.diagram_criterion(polar, s))
    }

    pub fn geometric_criterion(&self, polar: &BTreeMap<u32, Polar>, s: &[u32]) -> bool {
        if s.iter().any(|v| polar[v] != Polar::Eq) {
            return false;
        }
        for (&v, &c) in polar {
            if c == Polar::Eq || s.contains(&v) {
                continue;
            }
            let mut t = s.to_vec();
            t.push(v);
            t.sort_unstable();
            if !self.complex.contains(&t) {
                continue;
            }
            let ap = &self.apartments(&t, 1)[0];
            if s.iter().any(|x| !ap[x].dot(&ap[&v]).is_zero()) {
                return false;
            }
        }
        true
    }

    pub fn diagram_criterion(&self, polar: &BTreeMap<u32, Polar>, s: &[u32]) -> bool {
        let styp: BTreeSet<usize> = s.iter().map(|v| self.vertex_type[v]).collect();
        let reach: BTreeSet<usize> = self.type_components().into_iter().filter(|c| c.iter().any(|t| styp.contains(t))).flatten().collect();
        self.chambers()
            .iter()
            .filter(|c| is_subset(s, c))
            .all(|c| c.iter().all(|v| !reach.contains(&self.vertex_type[v]) || polar[v] == Polar::Eq))
    }
}

#[derive(Clone, Debug)]
pub struct HemisphereComplexes {
    pub equator: SimplicialComplex,
    pub closed: SimplicialComplex,
    pub open: SimplicialComplex,
    pub horizontal: SimplicialComplex,
    pub vertical: SimplicialComplex,
    pub horizontal_types: BTreeSet<usize>,
    pub vertical_types: BTreeSet<usize>,
}

fn path_diagram(r: usize) -> CoxeterSystem {
    let m = (0..r)
        .map(|i| (0..r).map(|j| Some(if i == j { 1 } else if i.abs_diff(j) == 1 { 3 } else { 2 })).collect())
        .collect();
    CoxeterSystem::new(m).unwrap()
}

fn linear_coxeter(rs: &RootSystem) -> CoxeterSystem {
    let gens: Vec<_> = rs.simple.iter().map(crate::coxcomplex::reflection_matrix).collect();
    let r = gens.len();
    let id = mat_identity(rs.ambient_dim);
    let m = (0..r)
        .map(|i| {
            (0..r)
                .map(|j| {
                    let p = mat_mul(&gens[i], &gens[j]);
                    let mut acc = p.clone();
                    let mut k = 1;
                    while acc != id {
                        acc = mat_mul(&acc, &p);
                        k += 1;
                    }
                    Some(k)
                })
                .collect()
        })
        .collect();
    CoxeterSystem::new(m).unwrap()
}

fn ensure(cond: bool, what: &str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::UnsupportedType(what.to_string()))
    }
}

pub fn build_building(spec: &BuildingSpec) -> Result<SphericalBuilding> {
    match spec {
        BuildingSpec::Points(k) => {
            ensure(*k >= 2, &spec.name())?;
            let complex = SimplicialComplex::from_facets((0..*k as u32).map(|v| vec![v]));
            let vertex_type = (0..*k as u32).map(|v| (v, 0)).collect();
            Ok(SphericalBuilding {
                complex,
                vertex_type,
                diagram: path_diagram(1),
                types: BTreeSet::from([0]),
                geometry: Geometry::Points { k: *k },
                chambers: OnceLock::new(),
            })
        }
        BuildingSpec::Coxeter(t) => {
            let rs = RootSystem::new(*t);
            let ws = rs.fundamental_coweights();
            let mut ids: BTreeMap<(usize, RationalVector), u32> = BTreeMap::new();
            let mut chambers_raw = Vec::new();
            for g in rs.weyl_group() {
                let c: Vec<(usize, RationalVector)> = ws.iter().enumerate().map(|(i, w)| (i, mat_apply(g, w))).collect();
                for x in &c {
                    ids.entry(x.clone()).or_insert(0);
                }
                chambers_raw.push(c);
            }
            for (i, v) in ids.values_mut().enumerate() {
                *v = i as u32;
            }
            let complex = SimplicialComplex::from_facets(chambers_raw.iter().map(|c| c.iter().map(|x| ids[x]).collect()));
            let vertex_type = ids.iter().map(|((t, _), v)| (*v, *t)).collect();
            let dirs = ids.iter().map(|((_, d), v)| (*v, d.clone())).collect();
            Ok(SphericalBuilding::thin(complex, vertex_type, linear_coxeter(&rs), dirs, rs.ambient_dim))
        }
        BuildingSpec::Flags { q, n } => {
            ensure(matches!(q, 2 | 3) && (1..=3).contains(n), &spec.name())?;
            Ok(FlagGeometry::build(*q, *n))
        }
        BuildingSpec::Join(a, b) => {
            let l = build_building(a)?;
            let r = build_building(b)?;
            Ok(join_buildings(l, r))
        }
    }
}

pub fn join_buildings(l: SphericalBuilding, r: SphericalBuilding) -> SphericalBuilding {
    let offset = l.vertices().iter().max().map(|m| m + 1).unwrap_or(0);
    join_buildings_at(l, r, offset)
}

/// Join with the right factor's vertex ids shifted by `offset`, which must exceed every left id.
pub fn join_buildings_at(l: SphericalBuilding, r: SphericalBuilding, offset: u32) -> SphericalBuilding {
    assert!(l.vertices().iter().all(|&v| v < offset));
    let toff = l.diagram.rank();
    let shifted = r.complex.relabel(|v| v + offset);
    let complex = l.complex.join(&shifted);
    let mut vertex_type = l.vertex_type.clone();
    for (v, t) in &r.vertex_type {
        vertex_type.insert(v + offset, t + toff);
    }
    let mut types = l.types.clone();
    types.extend(r.types.iter().map(|t| t + toff));
    let diagram = l.diagram.direct_sum(&r.diagram);
    SphericalBuilding {
        complex,
        vertex_type,
        diagram,
        types,
        geometry: Geometry::Join { left: Box::new(l), right: Box::new(r), offset },
        chambers: OnceLock::new(),
    }
}

// ---------------------------------------------------------------------------
// Flag complexes of F_q^{n+1}

#[derive(Clone, Debug)]
struct FlagGeometry {
    q: u32,
    n: usize,
    /// Vertex id -> subspace as a bitmask over vector indices.
    subspaces: Vec<u128>,
    dims: Vec<usize>,
    by_mask: HashMap<u128, u32>,
    points: Vec<u32>,
    frames: OnceLock<Vec<Vec<u32>>>,
}

impl FlagGeometry {
    fn digits(&self, x: u32) -> Vec<u32> {
        let m = self.n + 1;
        let mut d = Vec::with_capacity(m);
        let mut y = x;
        for _ in 0..m {
            d.push(y % self.q);
            y /= self.q;
        }
        d
    }

    fn undigits(&self, d: &[u32]) -> u32 {
        d.iter().rev().fold(0, |acc, &c| acc * self.q + c)
    }

    fn add_scaled(&self, a: u32, c: u32, b: u32) -> u32 {
        let (da, db) = (self.digits(a), self.digits(b));
        let s: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + c * y) % self.q).collect();
        self.undigits(&s)
    }

    fn span(&self, base: u128, g: u32) -> u128 {
        let mut out = base;
        for x in 0..128u32 {
            if base >> x & 1 == 1 {
                for c in 1..self.q {
                    out |= 1u128 << self.add_scaled(x, c, g);
                }
            }
        }
        out
    }

    fn dim_of(&self, mask: u128) -> usize {
        let mut size = mask.count_ones();
        let mut d = 0;
        while size > 1 {
            size /= self.q;
            d += 1;
        }
        d
    }

    fn build(q: u32, n: usize) -> SphericalBuilding {
        let m = n + 1;
        let total = q.pow(m as u32);
        let mut g = FlagGeometry { q, n, subspaces: vec![], dims: vec![], by_mask: HashMap::new(), points: vec![], frames: OnceLock::new() };
        let projective: Vec<u32> = (1..total)
            .filter(|&x| {
                let d = g.digits(x);
                d.iter().find(|&&c| c != 0) == Some(&1)
            })
            .collect();
        let mut levels: Vec<BTreeSet<u128>> = vec![BTreeSet::from([1u128])];
        for k in 1..=n {
            let mut next = BTreeSet::new();
            for &s in &levels[k - 1] {
                for &p in &projective {
                    if s >> p & 1 == 0 {
                        next.insert(g.span(s, p));
                    }
                }
            }
            levels.push(next);
        }
        for (k, level) in levels.iter().enumerate().skip(1) {
            for &s in level {
                g.by_mask.insert(s, g.subspaces.len() as u32);
                g.subspaces.push(s);
                g.dims.push(k);
            }
        }
        g.points = projective;
        // chambers: complete flags
        let mut chambers: Vec<Simplex> = (0..g.subspaces.len() as u32).filter(|&v| g.dims[v as usize] == 1).map(|v| vec![v]).collect();
        for k in 2..=n {
            let mut next = Vec::new();
            for c in &chambers {
                let top = g.subspaces[*c.last().unwrap() as usize];
                for (v, &s) in g.subspaces.iter().enumerate() {
                    if g.dims[v] == k && s & top == top {
                        let mut d = c.clone();
                        d.push(v as u32);
                        next.push(d);
                    }
                }
            }
            chambers = next.into_iter().map(|mut c| {
                c.sort_unstable();
                c
            }).collect();
            // keep the chain order for extension: ids grow with dimension
        }
        let complex = SimplicialComplex::from_facets(chambers);
        let vertex_type = (0..g.subspaces.len() as u32).map(|v| (v, g.dims[v as usize] - 1)).collect();
        SphericalBuilding {
            complex,
            vertex_type,
            diagram: path_diagram(n),
            types: (0..n).collect(),
            geometry: Geometry::Flags(Box::new(g)),
            chambers: OnceLock::new(),
        }
    }

    fn frames(&self) -> &[Vec<u32>] {
        self.frames.get_or_init(|| {
            let m = self.n + 1;
            let mut out = Vec::new();
            let mut stack: Vec<(Vec<usize>, u128)> = vec![(vec![], 1u128)];
            while let Some((chosen, span)) = stack.pop() {
                if chosen.len() == m {
                    out.push(chosen.iter().map(|&i| self.points[i]).collect());
                    continue;
                }
                let start = chosen.last().map(|i| i + 1).unwrap_or(0);
                for i in (start..self.points.len()).rev() {
                    let p = self.points[i];
                    if span >> p & 1 == 0 {
                        let mut c = chosen.clone();
                        c.push(i);
                        stack.push((c, self.span(span, p)));
                    }
                }
            }
            out.sort();
            out
        })
    }

    fn apartments(&self, xs: &[u32], limit: usize) -> Vec<Apartment> {
        let m = self.n + 1;
        let mut out = Vec::new();
        for frame in self.frames() {
            if out.len() >= limit {
                break;
            }
            let adapted = xs.iter().all(|&x| {
                let s = self.subspaces[x as usize];
                frame.iter().filter(|&&b| s >> b & 1 == 1).count() == self.dims[x as usize]
            });
            if !adapted {
                continue;
            }
            let mut ap = Apartment::new();
            for bits in 1u32..(1 << m) - 1 {
                let mut s = 1u128;
                for (i, &b) in frame.iter().enumerate() {
                    if bits >> i & 1 == 1 {
                        s = self.span(s, b);
                    }
                }
                let k = bits.count_ones() as i64;
                let dir: Vec<Q> = (0..m).map(|i| Q::from_integer(((bits >> i & 1) as i64).into()) - q(k, m as i64)).collect();
                ap.insert(self.by_mask[&s], RationalVector::new(dir));
            }
            out.push(ap);
        }
        out
    }
}

impl SphericalBuilding {
    /// `dim(A ∩ B) − dim A · dim B / (n+1)` for flag complexes; used as an independent check.
    pub fn intrinsic_flag_inner(&self, a: u32, b: u32) -> Option<Q> {
        match &self.geometry {
            Geometry::Flags(f) => {
                let (sa, sb) = (f.subspaces[a as usize], f.subspaces[b as usize]);
                let meet = f.dim_of(sa & sb) as i64;
                let (da, db) = (f.dims[a as usize] as i64, f.dims[b as usize] as i64);
                Some(Q::from_integer(meet.into()) - q(da * db, f.n as i64 + 1))
            }
            _ => None,
        }
    }

    /// Subspace dimension of a flag-complex vertex.
    pub fn flag_dim(&self, v: u32) -> Option<usize> {
        match &self.geometry {
            Geometry::Flags(f) => Some(f.dims[v as usize]),
            _ => None,
        }
    }
}

// ---------------------------------------------------------------------------
// Spherical geometry on directions. Points of the sphere are nonzero vectors up to
// positive scaling, so only signs of cosines are exact and that is all we need.

/// Sign of `cos d(a, b)`: `Less` means more than π/2 apart.
pub fn cos_distance_sign(a: &RationalVector, b: &RationalVector) -> std::cmp::Ordering {
    a.dot(b).cmp(&Q::zero())
}

/// Sign of `cos ∠_x(y, z)`, the angle at `x` between the geodesics towards `y` and `z`.
pub fn cos_angle_sign(x: &RationalVector, y: &RationalVector, z: &RationalVector) -> std::cmp::Ordering {
    // tangent parts of y and z at x, scaled by |x|²
    let v = y.dot(z) * x.norm_sq() - y.dot(x) * z.dot(x);
    v.cmp(&Q::zero())
}

/// Closest point of the spherical simplex spanned by `verts` to `p`, as a vector in the cone
/// over the simplex. `None` when `d(p, simplex) ≥ π/2`, where there is no unique projection.
pub fn spherical_projection(p: &RationalVector, verts: &[RationalVector]) -> Option<RationalVector> {
    // the nearest point of the cone is the Euclidean projection; search the active faces
    let n = verts.len();
    for mask in 1u32..(1 << n) {
        let face: Vec<RationalVector> = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| verts[i].clone()).collect();
        let gram: Vec<Vec<Q>> = face.iter().map(|a| face.iter().map(|b| a.dot(b)).collect()).collect();
        let rhs: Vec<Q> = face.iter().map(|a| a.dot(p)).collect();
        let Some(c) = crate::exactgeom::solve_square(&gram, &rhs) else { continue };
        if c.iter().any(|x| !x.is_positive()) {
            continue;
        }
        let mut proj = RationalVector::zeros(p.dim());
        for (x, a) in c.iter().zip(&face) {
            proj = proj.axpy(x, a);
        }
        let r = p - &proj;
        if verts.iter().all(|v| !r.dot(v).is_positive()) {
            return Some(proj);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homology::reduced_homology;

    #[test]
    fn fano_counts() {
        let b = build_building(&BuildingSpec::Flags { q: 2, n: 2 }).unwrap();
        assert_eq!(b.complex.f_vector(), vec![14, 21]);
        let h = reduced_homology(&b.complex);
        assert_eq!(h.betti, vec![0, 8]);
        let b3 = build_building(&BuildingSpec::Flags { q: 3, n: 2 }).unwrap();
        assert_eq!(b3.complex.f_vector(), vec![26, 52]);
    }

    #[test]
    fn points_and_k33() {
        let p = build_building(&BuildingSpec::Points(3)).unwrap();
        assert_eq!(p.complex.f_vector(), vec![3]);
        let k = build_building(&BuildingSpec::join(BuildingSpec::Points(3), BuildingSpec::Points(3))).unwrap();
        assert_eq!(k.complex.f_vector(), vec![6, 9]);
        let pc = k.polar_class(&NorthPole::vertex(0));
        assert_eq!(pc[&1], Polar::Gt);
        assert_eq!(pc[&3], Polar::Eq);
        let hc = k.hemisphere_complexes(&pc);
        assert_eq!(hc.open.vertices(), BTreeSet::from([1, 2]));
        assert_eq!(hc.horizontal.vertices(), BTreeSet::from([3, 4, 5]));
    }

    #[test]
    fn fano_point_pole() {
        let b = build_building(&BuildingSpec::Flags { q: 2, n: 2 }).unwrap();
        let p = 0u32;
        let pc = b.polar_class(&NorthPole::vertex(p));
        for v in b.vertices() {
            let incident = b.complex.contains(&[p.min(v), p.max(v)]) && p != v;
            let expect = if v == p || incident { Polar::Lt } else { Polar::Gt };
            assert_eq!(pc[&v], expect, "vertex {v}");
        }
    }

    #[test]
    fn flag_apartments_match_intrinsic_inner() {
        let b = build_building(&BuildingSpec::Flags { q: 2, n: 2 }).unwrap();
        for a in b.vertices() {
            for c in b.vertices() {
                for ap in b.apartments(&[a, c], 3) {
                    assert_eq!(ap[&a].dot(&ap[&c]), b.intrinsic_flag_inner(a, c).unwrap());
                }
            }
        }
    }

    #[test]
    fn thin_a2_is_hexagon() {
        let b = build_building(&BuildingSpec::Coxeter(FiniteType::A2)).unwrap();
        assert_eq!(b.complex.f_vector(), vec![6, 6]);
        let g2 = build_building(&BuildingSpec::Coxeter(FiniteType::G2)).unwrap();
        assert_eq!(g2.complex.f_vector(), vec![12, 12]);
    }
}
