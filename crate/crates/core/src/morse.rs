//! Lexicographic Morse function on the barycentric subdivision of a twin product,
//! descending links and the sublevel filtration.

use std::cell::RefCell;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::rc::Rc;

use num_traits::Zero;
use serde::Serialize;

use crate::coxcomplex::AffineType;
use crate::error::{Error, Result};
use crate::exactgeom::{ceil_sqrt, q, qstr, Q};
use crate::homology::{greedy_collapse, reduced_homology, BettiReport, CollapseOutcome};
use crate::horolinks::{move_bound, Horo, ProductWindow, Xi};
use crate::polycomplex::{barycentric_subdivide, PolyCell, PolyComplex, SimplicialComplex};
use crate::twin::{Richness, ThinTwinModel};

/// `(max h², dp, dim)`, ordered lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MorseValue {
    pub h_sq: Q,
    /// Half-integer.
    pub depth: Q,
    pub dim: usize,
}

impl fmt::Display for MorseValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", qstr(&self.h_sq), qstr(&self.depth), self.dim)
    }
}

impl Serialize for MorseValue {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        (qstr(&self.h_sq), qstr(&self.depth), self.dim).serialize(s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CellClass {
    ZeroHeight,
    Essential,
    NonEssentialHorizontal,
    NonHorizontal,
}

/// Descending link of `σ̂` split as face part * coface part.
#[derive(Clone, Debug)]
pub struct DescendingLink {
    pub class: CellClass,
    pub essential: bool,
    /// Labels of the subdivision vertices used below.
    pub cells: Vec<PolyCell>,
    /// Chains of descending proper faces.
    pub face_part: SimplicialComplex,
    /// Chains of descending proper cofaces.
    pub coface_part: SimplicialComplex,
    /// Essential cells only: `{τ ∖ σ : τ descending}` in link coordinates, unsubdivided.
    pub unsubdivided: Option<SimplicialComplex>,
    pub horizontal_part: Option<SimplicialComplex>,
    pub vertical_part: Option<SimplicialComplex>,
}

impl DescendingLink {
    pub fn full(&self) -> SimplicialComplex {
        self.face_part.join(&self.coface_part)
    }

    /// Full link with vertices mapped to `index` of their cells.
    pub fn full_labelled(&self, index: &BTreeMap<PolyCell, usize>) -> SimplicialComplex {
        self.full().relabel(|v| index[&self.cells[v as usize]] as u32)
    }
}

/// Twin product `Σ+ × Σ−` with a core region and an enlarged window for depth searches.
pub struct MorseModel {
    pub twin: ThinTwinModel,
    pub core_radius: Q,
    pub enlarged_radius: Q,
    pub y: Rc<ProductWindow>,
    horos: RefCell<HashMap<Xi, Rc<Horo>>>,
    values: RefCell<HashMap<PolyCell, MorseValue>>,
}

impl MorseModel {
    /// Unless `strict`, the window is enlarged by the move bound times the longest edge.
    pub fn new(kind: AffineType, core_radius: &Q, richness: Richness, strict: bool) -> Result<Self> {
        let probe = ThinTwinModel::new(kind, &Q::zero(), richness)?;
        let margin = if strict {
            Q::zero()
        } else {
            let a = &probe.realization.fundamental_alcove;
            let longest = a.iter().flat_map(|x| a.iter().map(move |y| (x - y).norm_sq())).max().unwrap();
            let r = probe.realization.roots.rank();
            Q::from_integer((ceil_sqrt(&longest) * move_bound(&[r, r]) as i64) + 2)
        };
        let enlarged = core_radius + &margin;
        let twin = ThinTwinModel::with_generators(kind, &enlarged, probe.d.clone(), richness, probe.offset.clone())?;
        let y = Rc::new(ProductWindow::new(vec![twin.window.clone(), twin.window.clone()]));
        Ok(MorseModel {
            twin,
            core_radius: core_radius.clone(),
            enlarged_radius: enlarged,
            y,
            horos: RefCell::default(),
            values: RefCell::default(),
        })
    }

    pub fn in_core(&self, c: &PolyCell) -> bool {
        let r2 = &self.core_radius * &self.core_radius;
        c.factors.iter().flatten().all(|&v| self.twin.window.coords(v).norm_sq() <= r2)
    }

    /// Cells of the product inside the core ball.
    pub fn core_cells(&self) -> Vec<PolyCell> {
        let w = &self.twin.window;
        let r2 = &self.core_radius * &self.core_radius;
        let inner: BTreeSet<u32> = (0..w.points().len() as u32).filter(|&v| w.coords(v).norm_sq() <= r2).collect();
        let k = w.complex.full_subcomplex(&inner);
        PolyComplex::product(vec![k.clone(), k]).cells().cloned().collect()
    }

    /// Core cells all of whose cofaces are core cells.
    pub fn is_core_interior(&self, c: &PolyCell) -> bool {
        self.y.star_complete(c) && self.y.cofaces(c).iter().all(|t| self.in_core(t))
    }

    pub fn horo(&self, xi: &Xi) -> Rc<Horo> {
        let key = xi.normalized();
        self.horos.borrow_mut().entry(key.clone()).or_insert_with(|| Rc::new(Horo::new(self.y.clone(), key))).clone()
    }

    /// `ξ = ∇∞h` at an h-horizontal cell of positive height.
    pub fn xi_at(&self, c: &PolyCell) -> Result<Xi> {
        let g = self.twin.vertex_gradient(&c.vertices()[0])?;
        Ok(Xi::from_gradient(&g))
    }

    pub fn classify(&self, c: &PolyCell) -> Result<CellClass> {
        if self.twin.max_height_sq(c).is_zero() {
            return Ok(CellClass::ZeroHeight);
        }
        if !self.twin.is_h_horizontal(c) {
            return Ok(CellClass::NonHorizontal);
        }
        let h = self.horo(&self.xi_at(c)?);
        if !h.is_horizontal(c) {
            return Err(Error::NotHorizontal);
        }
        Ok(if h.is_essential(c)? { CellClass::Essential } else { CellClass::NonEssentialHorizontal })
    }

    pub fn morse_value(&self, c: &PolyCell) -> Result<MorseValue> {
        if let Some(v) = self.values.borrow().get(c) {
            return Ok(v.clone());
        }
        let h_sq = self.twin.max_height_sq(c);
        let depth = if h_sq.is_zero() {
            Q::zero()
        } else if self.twin.is_h_horizontal(c) {
            let h = self.horo(&self.xi_at(c)?);
            if !h.is_horizontal(c) {
                return Err(Error::NotHorizontal);
            }
            Q::from_integer((h.depth(c)? as i64).into())
        } else {
            let roof = self.twin.roof(c)?;
            self.morse_value(&roof)?.depth - q(1, 2)
        };
        let v = MorseValue { h_sq, depth, dim: c.dim() };
        self.values.borrow_mut().insert(c.clone(), v.clone());
        Ok(v)
    }

    pub fn descending_link(&self, c: &PolyCell) -> Result<DescendingLink> {
        if !self.y.star_complete(c) {
            return Err(Error::BoundaryTruncated);
        }
        let v = self.morse_value(c)?;
        let class = self.classify(c)?;
        let mut faces = Vec::new();
        for f in c.faces() {
            if &f != c && self.morse_value(&f)? < v {
                faces.push(f);
            }
        }
        let mut cofaces = Vec::new();
        for t in self.y.cofaces(c) {
            if &t != c && self.morse_value(&t)? < v {
                cofaces.push(t);
            }
        }
        let cells: Vec<PolyCell> = faces.iter().chain(&cofaces).cloned().collect();
        let face_part = chain_complex(&cells, 0, faces.len());
        let coface_part = chain_complex(&cells, faces.len(), cells.len());
        let essential = class == CellClass::Essential;
        let (mut unsubdivided, mut horizontal_part, mut vertical_part) = (None, None, None);
        if essential {
            let h = self.horo(&self.xi_at(c)?);
            let ld = h.link_data(c)?;
            let mut d = SimplicialComplex::new();
            for t in &cofaces {
                d.insert_raw(self.y.difference(t, c));
            }
            horizontal_part = Some(d.full_subcomplex(&ld.hemispheres.horizontal.vertices()));
            vertical_part = Some(d.full_subcomplex(&ld.hemispheres.vertical.vertices()));
            unsubdivided = Some(d);
        }
        Ok(DescendingLink { class, essential, cells, face_part, coface_part, unsubdivided, horizontal_part, vertical_part })
    }

    /// Open hemisphere complex of `Lk σ` with pole `∇_σ h`, extracted from the building directly.
    pub fn open_hemisphere_of_link(&self, c: &PolyCell) -> Result<SimplicialComplex> {
        let b = self.y.link(c)?;
        let polar = b.polar_class_vector(&self.xi_at(c)?.pole());
        Ok(b.hemisphere_complexes(&polar).open)
    }

    /// `{τ ∖ σ : τ horizontal, max h|τ = max h|σ, τ^min = σ, τ ≠ σ}`
    pub fn expected_horizontal_part(&self, c: &PolyCell) -> Result<SimplicialComplex> {
        let h = self.horo(&self.xi_at(c)?);
        let m = self.twin.max_height_sq(c);
        let mut out = SimplicialComplex::new();
        for t in self.y.cofaces(c) {
            if &t != c && h.is_horizontal(&t) && self.twin.max_height_sq(&t) == m && &h.tau_min(&t)? == c {
                out.insert_raw(self.y.difference(&t, c));
            }
        }
        Ok(out)
    }

    /// Dimension of `Lk σ` as `dim Y − dim σ − 1`.
    pub fn link_dim(&self, c: &PolyCell) -> i32 {
        self.y.dim() as i32 - c.dim() as i32 - 1
    }
}

/// Chains (under the face relation) among `cells[lo..hi]`, labelled by position in `cells`.
pub fn chain_complex(cells: &[PolyCell], lo: usize, hi: usize) -> SimplicialComplex {
    let mut order: Vec<usize> = (lo..hi).collect();
    order.sort_by_key(|&i| cells[i].dim());
    let mut k = SimplicialComplex::new();
    let mut stack: Vec<Vec<usize>> = order.iter().map(|&i| vec![i]).collect();
    while let Some(ch) = stack.pop() {
        let last = *ch.last().unwrap();
        k.insert_raw(ch.iter().map(|&x| x as u32).collect());
        for &j in &order {
            if cells[j].dim() > cells[last].dim() && cells[last].is_face_of(&cells[j]) {
                let mut n = ch.clone();
                n.push(j);
                stack.push(n);
            }
        }
    }
    k
}

/// Chains of proper faces of `c` missing the given face.
pub fn punctured_boundary(c: &PolyCell, hole: Option<&PolyCell>) -> (Vec<PolyCell>, SimplicialComplex) {
    let cells: Vec<PolyCell> = c.faces().into_iter().filter(|f| f != c && Some(f) != hole).collect();
    let k = chain_complex(&cells, 0, cells.len());
    (cells, k)
}

#[derive(Clone, Debug, Serialize)]
pub struct CellRecord {
    pub cell: PolyCell,
    pub morse_value: MorseValue,
    pub class: CellClass,
    pub essential: bool,
    pub face_part: BettiReport,
    pub coface_part: BettiReport,
    pub vertical_part: Option<BettiReport>,
    pub horizontal_part: Option<BettiReport>,
    pub collapse: Option<CollapseOutcome>,
}

impl MorseModel {
    pub fn record(&self, c: &PolyCell, dl: &DescendingLink) -> Result<CellRecord> {
        let collapse = (!dl.essential).then(|| greedy_collapse(&dl.full()));
        Ok(CellRecord {
            cell: c.clone(),
            morse_value: self.morse_value(c)?,
            class: dl.class,
            essential: dl.essential,
            face_part: reduced_homology(&dl.face_part),
            coface_part: reduced_homology(&dl.coface_part),
            vertical_part: dl.vertical_part.as_ref().map(reduced_homology),
            horizontal_part: dl.horizontal_part.as_ref().map(reduced_homology),
            collapse,
        })
    }
}

/// Sublevel filtration on the core: levels are the distinct positive-height Morse values,
/// preceded by the whole zero-height part.
pub struct Filtration {
    pub levels: Vec<Option<MorseValue>>,
    /// Size of `Y_i` in barycentric vertices.
    pub sizes: Vec<usize>,
    /// `(level, cell)` for every cell of positive height.
    pub entering: Vec<(usize, PolyCell)>,
}

pub fn filtration(m: &MorseModel) -> Result<Filtration> {
    let cells = m.core_cells();
    let mut vals: BTreeSet<MorseValue> = BTreeSet::new();
    let mut per = Vec::new();
    for c in &cells {
        let v = m.morse_value(c)?;
        if !v.h_sq.is_zero() {
            vals.insert(v.clone());
        }
        per.push((c.clone(), v));
    }
    let mut levels: Vec<Option<MorseValue>> = vec![None];
    levels.extend(vals.into_iter().map(Some));
    let pos: BTreeMap<&MorseValue, usize> = levels.iter().enumerate().filter_map(|(i, l)| l.as_ref().map(|v| (v, i))).collect();
    let mut counts = vec![0usize; levels.len()];
    let mut entering = Vec::new();
    for (c, v) in &per {
        let l = if v.h_sq.is_zero() { 0 } else { pos[v] };
        counts[l] += 1;
        if l > 0 {
            entering.push((l, c.clone()));
        }
    }
    let mut sizes = Vec::new();
    let mut acc = 0;
    for k in counts {
        acc += k;
        sizes.push(acc);
    }
    Ok(Filtration { levels, sizes, entering })
}

/// Compares, for every core-interior cell of positive height, the link of its barycenter inside
/// the sublevel complex it enters with the computed descending link. Returns `(checked, mismatches)`.
pub fn check_attaching(m: &MorseModel, f: &Filtration) -> Result<(usize, Vec<PolyCell>)> {
    let cells = m.core_cells();
    let core = PolyComplex::from_cells(vec![m.twin.window.complex.clone(), m.twin.window.complex.clone()], cells.iter().cloned());
    let sd = barycentric_subdivide(&core);
    let mut value_of = Vec::with_capacity(sd.cells.len());
    for c in &sd.cells {
        value_of.push(m.morse_value(c)?);
    }
    let mut checked = 0;
    let mut bad = Vec::new();
    for (_, c) in &f.entering {
        if !m.is_core_interior(c) {
            continue;
        }
        let i = sd.index[c];
        let v = &value_of[i];
        let keep: BTreeSet<u32> = (0..sd.cells.len()).filter(|&j| &value_of[j] <= v).map(|j| j as u32).collect();
        let sub = sd.complex.full_subcomplex(&keep);
        let lk = sub.link(&[i as u32]);
        let dl = m.descending_link(c)?;
        checked += 1;
        if lk != dl.full_labelled(&sd.index) {
            bad.push(c.clone());
        }
    }
    Ok((checked, bad))
}
