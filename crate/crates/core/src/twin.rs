//! Thin twin apartments: two copies of an affine Coxeter complex over one model space,
//! the zonotope-perturbed codistance and the height on their product.

use std::collections::{BTreeSet, HashMap};
use std::sync::Mutex;

use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::coxcomplex::{build_affine_window, AffineRealization, AffineType, Window};
use crate::error::{Error, Result};
use crate::exactgeom::{ceil_sqrt, qstr, RationalVector, SqrtRational, Q};
use crate::polycomplex::{PolyCell, PolyComplex};
use crate::zonotope::{is_sufficiently_rich, sum_rich_generators, Zonotope};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Richness {
    AlmostRich,
    Rich,
}

/// Differences of adjacent vertices (almost rich) or of vertices sharing a closed star (rich),
/// closed under the finite Weyl group and negation.
pub fn make_rich_generators(real: &AffineRealization, level: Richness) -> Result<Vec<RationalVector>> {
    let max_sq = real.fundamental_alcove.iter().map(|v| v.norm_sq()).max().unwrap();
    let radius = Q::from_integer(ceil_sqrt(&max_sq) * 3 + 1);
    let (_, w) = build_affine_window(real.kind, &radius)?;
    let ids: Vec<u32> = real.fundamental_alcove.iter().map(|v| w.vertex_id(v).expect("alcove in window")).collect();
    let mut diffs = BTreeSet::new();
    let mut add_pairs = |vs: &[u32]| {
        for &a in vs {
            for &b in vs {
                if a != b {
                    diffs.insert(w.coords(b) - w.coords(a));
                }
            }
        }
    };
    match level {
        Richness::AlmostRich => add_pairs(&ids),
        Richness::Rich => {
            for &u in &ids {
                let star: BTreeSet<u32> = w.alcoves_containing(&[u]).flatten().copied().collect();
                add_pairs(&star.into_iter().collect::<Vec<_>>());
            }
        }
    }
    // every alcove is w(A) + t, so the fundamental alcove's differences generate the rest
    let mut all: Vec<RationalVector> = diffs.into_iter().collect();
    all.extend(all.clone().iter().map(|d| -d));
    Ok(real.roots.orbit_closure(&all))
}

/// Direction of steepest ascent of `h`; the product direction is `(n, −n)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GradientDir {
    pub n: RationalVector,
}

impl GradientDir {
    pub fn product(&self) -> (RationalVector, RationalVector) {
        (self.n.clone(), -&self.n)
    }

    pub fn general_position(&self) -> bool {
        !self.n.is_zero()
    }

    /// `⟨(n, −n), (a, b)⟩`
    pub fn pair(&self, a: &RationalVector, b: &RationalVector) -> Q {
        self.n.dot(a) - self.n.dot(b)
    }
}

#[derive(Debug)]
pub struct ThinTwinModel {
    pub realization: AffineRealization,
    /// Serves as both Σ+ and Σ−; ι+ is the identity and ι− translates by `offset`.
    pub window: Window,
    pub richness: Richness,
    pub d: Vec<RationalVector>,
    pub zonotope: Zonotope,
    pub offset: RationalVector,
    cache: Mutex<HashMap<RationalVector, (Q, RationalVector)>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ModelSummary {
    #[serde(rename = "type")]
    pub kind: String,
    pub radius: String,
    pub richness: Richness,
    pub generators: usize,
    pub zonotope_generators: usize,
    pub offset: Vec<String>,
}

impl ThinTwinModel {
    /// Model whose ι− offset is the first type-0 lattice point outside `Z`, so heights vary across the window.
    pub fn new(kind: AffineType, radius: &Q, richness: Richness) -> Result<Self> {
        let real = AffineRealization::new(kind);
        let d = make_rich_generators(&real, richness)?;
        let z = perturbation_zonotope(real.ambient_dim, &d)?;
        let (_, w) = build_affine_window(kind, &Q::from_integer(2.into()))?;
        // prefer a step perpendicular to some root so that walls meet both halves
        let special: Vec<&RationalVector> = (0..w.points().len() as u32).filter(|&v| w.type_of(v) == 0).map(|v| w.coords(v)).filter(|p| !p.is_zero()).collect();
        let step = special
            .iter()
            .find(|p| real.roots.roots.iter().any(|a| a.dot(p).is_zero()))
            .or(special.first())
            .map(|p| (*p).clone())
            .expect("a nonzero special vertex");
        let mut offset = step.clone();
        while z.contains(&offset) {
            offset = &offset + &step;
        }
        Self::with_generators(kind, radius, d, richness, offset)
    }

    pub fn with_generators(kind: AffineType, radius: &Q, d: Vec<RationalVector>, richness: Richness, offset: RationalVector) -> Result<Self> {
        let (realization, window) = build_affine_window(kind, radius)?;
        if offset.dim() != realization.ambient_dim {
            return Err(Error::DimensionMismatch { expected: realization.ambient_dim, actual: offset.dim() });
        }
        let zonotope = perturbation_zonotope(realization.ambient_dim, &d)?;
        Ok(ThinTwinModel { realization, window, richness, d, zonotope, offset, cache: Mutex::new(HashMap::new()) })
    }

    pub fn summary(&self) -> ModelSummary {
        ModelSummary {
            kind: self.realization.kind.to_string(),
            radius: qstr(&self.window.radius),
            richness: self.richness,
            generators: self.d.len(),
            zonotope_generators: self.zonotope.generators().len(),
            offset: self.offset.to_strings(),
        }
    }

    pub fn iota_plus(&self, x: &RationalVector) -> RationalVector {
        x.clone()
    }

    pub fn iota_minus(&self, x: &RationalVector) -> RationalVector {
        x + &self.offset
    }

    /// `ι−⁻¹ ∘ ι+`
    pub fn opposite(&self, x_plus: &RationalVector) -> RationalVector {
        x_plus - &self.offset
    }

    pub fn difference(&self, xp: &RationalVector, xm: &RationalVector) -> RationalVector {
        &self.iota_plus(xp) - &self.iota_minus(xm)
    }

    pub fn codistance(&self, xp: &RationalVector, xm: &RationalVector) -> SqrtRational {
        SqrtRational::from_square(self.difference(xp, xm).norm_sq())
    }

    /// `h²` and the unnormalized gradient for an ι-difference.
    fn height_data(&self, v: &RationalVector) -> (Q, RationalVector) {
        if let Some(hit) = self.cache.lock().unwrap().get(v) {
            return hit.clone();
        }
        let (p, h) = self.zonotope.project(v);
        let out = (h.square().clone(), v - &p);
        self.cache.lock().unwrap().insert(v.clone(), out.clone());
        out
    }

    pub fn height_sq_of_difference(&self, v: &RationalVector) -> Q {
        self.height_data(v).0
    }

    pub fn height_sq(&self, xp: &RationalVector, xm: &RationalVector) -> Q {
        self.height_sq_of_difference(&self.difference(xp, xm))
    }

    pub fn perturbed_height(&self, xp: &RationalVector, xm: &RationalVector) -> SqrtRational {
        SqrtRational::from_square(self.height_sq(xp, xm))
    }

    /// `μ(ι+ x+, ι− x− + Z)`
    pub fn height_sq_translated_minus(&self, xp: &RationalVector, xm: &RationalVector) -> Q {
        self.zonotope.translated(&self.iota_minus(xm)).distance_sq(&self.iota_plus(xp))
    }

    /// `μ(ι+ x+ − Z, ι− x−)`, using `−Z = Z`.
    pub fn height_sq_translated_plus(&self, xp: &RationalVector, xm: &RationalVector) -> Q {
        self.zonotope.translated(&self.iota_plus(xp)).distance_sq(&self.iota_minus(xm))
    }

    pub fn gradient_of_difference(&self, v: &RationalVector) -> Result<GradientDir> {
        let (h, n) = self.height_data(v);
        if h.is_zero() {
            return Err(Error::ZeroHeight);
        }
        Ok(GradientDir { n })
    }

    pub fn gradient_direction(&self, xp: &RationalVector, xm: &RationalVector) -> Result<GradientDir> {
        self.gradient_of_difference(&self.difference(xp, xm))
    }

    /// Product vertex `[plus id, minus id]`.
    pub fn vertex_difference(&self, v: &[u32]) -> RationalVector {
        self.difference(self.window.coords(v[0]), self.window.coords(v[1]))
    }

    pub fn vertex_height_sq(&self, v: &[u32]) -> Q {
        self.height_sq_of_difference(&self.vertex_difference(v))
    }

    pub fn vertex_gradient(&self, v: &[u32]) -> Result<GradientDir> {
        self.gradient_of_difference(&self.vertex_difference(v))
    }

    /// All cells of `Σ+ × Σ−` inside the window.
    pub fn product_complex(&self) -> PolyComplex {
        PolyComplex::product(vec![self.window.complex.clone(), self.window.complex.clone()])
    }

    /// Image `π(σ)` of the vertices of a product cell in the model space.
    pub fn cell_differences(&self, cell: &PolyCell) -> Vec<RationalVector> {
        cell.vertices().iter().map(|v| self.vertex_difference(v)).collect()
    }

    pub fn max_height_sq(&self, cell: &PolyCell) -> Q {
        cell.vertices().iter().map(|v| self.vertex_height_sq(v)).max().unwrap()
    }

    /// `h` constant on the cell.
    pub fn is_h_horizontal(&self, cell: &PolyCell) -> bool {
        let hs: BTreeSet<Q> = cell.vertices().iter().map(|v| self.vertex_height_sq(v)).collect();
        hs.len() == 1
    }

    /// Face of points of maximal height, read off the vertices.
    pub fn roof(&self, cell: &PolyCell) -> Result<PolyCell> {
        if !is_sufficiently_rich(self.zonotope.generators(), &self.cell_differences(cell)) {
            return Err(Error::InsufficientGenerators);
        }
        let verts = cell.vertices();
        let hs: Vec<Q> = verts.iter().map(|v| self.vertex_height_sq(v)).collect();
        let m = hs.iter().max().unwrap();
        let top: Vec<&Vec<u32>> = verts.iter().zip(&hs).filter(|(_, h)| *h == m).map(|(v, _)| v).collect();
        let factors: Vec<Vec<u32>> = (0..cell.factors.len())
            .map(|i| top.iter().map(|v| v[i]).collect::<BTreeSet<_>>().into_iter().collect())
            .collect();
        let roof = PolyCell::new(factors);
        debug_assert_eq!(roof.vertices().len(), top.len(), "maxima must form a face");
        Ok(roof)
    }

    /// The set of maximal vertices, for checking that it is a face.
    pub fn maximal_vertices(&self, cell: &PolyCell) -> BTreeSet<Vec<u32>> {
        let m = self.max_height_sq(cell);
        cell.vertices().into_iter().filter(|v| self.vertex_height_sq(v) == m).collect()
    }

    /// First-order certificate that the minimum of `h` over the cell sits at a vertex.
    /// Returns the vertex when `⟨∇h(v), π(w) − π(v)⟩ ≥ 0` for every vertex `w`.
    pub fn certified_min_vertex(&self, cell: &PolyCell) -> Option<Vec<u32>> {
        let verts = cell.vertices();
        let v = verts.iter().min_by_key(|v| self.vertex_height_sq(v)).unwrap().clone();
        let (h, n) = self.height_data(&self.vertex_difference(&v));
        if h.is_zero() {
            return Some(v);
        }
        let pv = self.vertex_difference(&v);
        verts.iter().all(|w| !n.dot(&(&self.vertex_difference(w) - &pv)).is_negative()).then_some(v)
    }
}

/// `Z((D + D) ∪ D)`
pub fn perturbation_zonotope(dim: usize, d: &[RationalVector]) -> Result<Zonotope> {
    let mut gens = sum_rich_generators(d, d, dim);
    gens.extend(d.iter().cloned());
    Zonotope::new(dim, gens)
}

/// Reflection of `x` in the wall `⟨·, α⟩ = k`.
pub fn reflect_in_wall(x: &RationalVector, alpha: &RationalVector, k: &Q) -> RationalVector {
    let t = (x.dot(alpha) - k) * Q::from_integer(2.into()) / alpha.norm_sq();
    x.axpy(&-t, alpha)
}

/// Point of the simplex with the given positive integer weights.
pub fn barycentric_point(pts: &[&RationalVector], weights: &[u32]) -> RationalVector {
    let total: u32 = weights.iter().sum();
    let mut p = RationalVector::zeros(pts[0].dim());
    for (x, w) in pts.iter().zip(weights) {
        p = p.axpy(&Q::new((*w).into(), total.into()), x);
    }
    p
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactgeom::qi;

    fn v(xs: &[i64]) -> RationalVector {
        RationalVector::from_ints(xs)
    }

    #[test]
    fn a1_generators() {
        let r = AffineRealization::new(AffineType::A1);
        assert_eq!(make_rich_generators(&r, Richness::AlmostRich).unwrap(), vec![v(&[-1]), v(&[1])]);
        assert_eq!(make_rich_generators(&r, Richness::Rich).unwrap(), vec![v(&[-2]), v(&[-1]), v(&[1]), v(&[2])]);
    }

    #[test]
    fn a1_almost_rich_height() {
        let r = AffineRealization::new(AffineType::A1);
        let d = make_rich_generators(&r, Richness::AlmostRich).unwrap();
        let m = ThinTwinModel::with_generators(AffineType::A1, &qi(3), d, Richness::AlmostRich, v(&[0])).unwrap();
        assert_eq!(m.zonotope.vertices().into_iter().collect::<BTreeSet<_>>(), BTreeSet::from([v(&[-3]), v(&[3])]));
        assert_eq!(m.height_sq_of_difference(&v(&[5])), qi(4));
        assert_eq!(m.gradient_of_difference(&v(&[5])).unwrap().n, v(&[2]));
        assert_eq!(m.height_sq_of_difference(&v(&[2])), qi(0));
        assert!(matches!(m.gradient_of_difference(&v(&[2])), Err(Error::ZeroHeight)));
        assert_eq!(m.codistance(&v(&[5]), &v(&[0])).square(), &qi(25));
        let id = |x: i64| m.window.vertex_id(&v(&[x])).unwrap();
        let edge = PolyCell::new(vec![vec![id(2), id(3)], vec![id(-2)]]);
        assert_eq!(m.roof(&edge).unwrap(), PolyCell::new(vec![vec![id(3)], vec![id(-2)]]));
    }

    #[test]
    fn a1_rich_zonotope() {
        let m = ThinTwinModel::new(AffineType::A1, &qi(3), Richness::Rich).unwrap();
        assert_eq!(m.zonotope.vertices().into_iter().collect::<BTreeSet<_>>(), BTreeSet::from([v(&[-10]), v(&[10])]));
        assert_eq!(m.offset, v(&[-12]));
    }
}
