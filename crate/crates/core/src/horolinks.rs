//! Horizontal links with respect to a direction at infinity, `τ^min`, moves and depth.

use std::cell::RefCell;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::rc::Rc;

use num_traits::Zero;
use serde::Serialize;

use crate::coxcomplex::{link_with_types, Window};
use crate::error::{Error, Result};
use crate::exactgeom::RationalVector;
use crate::polycomplex::{PolyCell, PolyComplex, Simplex};
use crate::sphbuild::{join_buildings_at, HemisphereComplexes, Polar, SphericalBuilding};
use crate::twin::GradientDir;

/// Product of affine windows with per-factor coface tables.
#[derive(Debug)]
pub struct ProductWindow {
    pub factors: Vec<Window>,
    cofaces: Vec<HashMap<Simplex, Vec<Simplex>>>,
    /// Link vertex of window vertex `v` in factor `i` is `offsets[i] + v`.
    offsets: Vec<u32>,
}

impl ProductWindow {
    pub fn new(factors: Vec<Window>) -> Self {
        let mut cofaces = Vec::new();
        let mut offsets = Vec::new();
        let mut off = 0u32;
        for w in &factors {
            let mut table: HashMap<Simplex, Vec<Simplex>> = HashMap::new();
            for s in w.complex.simplices() {
                for f in subsets(s) {
                    table.entry(f).or_default().push(s.clone());
                }
            }
            for v in table.values_mut() {
                v.sort();
            }
            cofaces.push(table);
            offsets.push(off);
            off += w.points().len() as u32;
        }
        ProductWindow { factors, cofaces, offsets }
    }

    pub fn dim(&self) -> usize {
        self.factors.iter().map(|w| w.complex.dim().max(0) as usize).sum()
    }

    pub fn complex(&self) -> PolyComplex {
        PolyComplex::product(self.factors.iter().map(|w| w.complex.clone()).collect())
    }

    pub fn contains(&self, c: &PolyCell) -> bool {
        c.factors.len() == self.factors.len() && c.factors.iter().zip(&self.factors).all(|(s, w)| w.complex.contains(s))
    }

    pub fn star_complete(&self, c: &PolyCell) -> bool {
        c.factors.iter().zip(&self.factors).all(|(s, w)| w.star_complete(s))
    }

    /// Cells of the window containing `c`, `c` included.
    pub fn cofaces(&self, c: &PolyCell) -> Vec<PolyCell> {
        let mut acc: Vec<Vec<Simplex>> = vec![vec![]];
        for (s, t) in c.factors.iter().zip(&self.cofaces) {
            let Some(ups) = t.get(s) else { return vec![] };
            let mut next = Vec::with_capacity(acc.len() * ups.len());
            for a in &acc {
                for u in ups {
                    let mut b = a.clone();
                    b.push(u.clone());
                    next.push(b);
                }
            }
            acc = next;
        }
        acc.into_iter().map(|factors| PolyCell { factors }).collect()
    }

    /// Smallest window cell containing both, when it exists.
    pub fn join(&self, a: &PolyCell, b: &PolyCell) -> Option<PolyCell> {
        let u = a.union(b);
        self.contains(&u).then_some(u)
    }

    pub fn to_link(&self, factor: usize, v: u32) -> u32 {
        self.offsets[factor] + v
    }

    pub fn from_link(&self, l: u32) -> (usize, u32) {
        let i = self.offsets.iter().rposition(|&o| o <= l).unwrap();
        (i, l - self.offsets[i])
    }

    /// `τ ∖ σ` in link coordinates.
    pub fn difference(&self, tau: &PolyCell, sigma: &PolyCell) -> Vec<u32> {
        let mut out: Vec<u32> = tau.minus(sigma).into_iter().enumerate().flat_map(|(i, vs)| vs.into_iter().map(move |v| (i, v))).map(|(i, v)| self.to_link(i, v)).collect();
        out.sort_unstable();
        out
    }

    /// `Lk σ = ∗ Lk σ_i` with directions in the product space.
    pub fn link(&self, c: &PolyCell) -> Result<SphericalBuilding> {
        let mut acc: Option<SphericalBuilding> = None;
        for (i, (s, w)) in c.factors.iter().zip(&self.factors).enumerate() {
            let l = link_with_types(w, s)?;
            acc = Some(match acc {
                None => l,
                Some(a) => join_buildings_at(a, l, self.offsets[i]),
            });
        }
        Ok(acc.expect("at least one factor"))
    }

    /// Coordinates of a product vertex.
    pub fn point(&self, v: &[u32]) -> Vec<&RationalVector> {
        v.iter().zip(&self.factors).map(|(x, w)| w.coords(*x)).collect()
    }
}

fn subsets(s: &[u32]) -> Vec<Simplex> {
    let n = s.len();
    (1u32..(1 << n)).map(|bits| (0..n).filter(|i| bits >> i & 1 == 1).map(|i| s[i]).collect()).collect()
}

/// Direction at infinity, one component per factor.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Xi {
    pub parts: Vec<RationalVector>,
}

impl Xi {
    pub fn new(parts: Vec<RationalVector>) -> Self {
        Xi { parts }
    }

    /// `(n, −n)` on `Σ+ × Σ−`.
    pub fn from_gradient(g: &GradientDir) -> Self {
        let (a, b) = g.product();
        Xi { parts: vec![a, b] }
    }

    /// Not constant on any factor.
    pub fn general_position(&self) -> bool {
        self.parts.iter().all(|p| !p.is_zero())
    }

    pub fn pole(&self) -> RationalVector {
        let mut it = self.parts.iter();
        let first = it.next().unwrap().clone();
        it.fold(first, |a, b| a.concat(b))
    }

    /// Same direction up to positive scaling.
    pub fn normalized(&self) -> Xi {
        let pole = self.pole().primitive();
        let mut parts = Vec::new();
        let mut at = 0;
        for p in &self.parts {
            parts.push(pole.slice(at, p.dim()));
            at += p.dim();
        }
        Xi { parts }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MoveKind {
    Up,
    Down,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct MoveRecord {
    pub kind: MoveKind,
    pub from: PolyCell,
    pub to: PolyCell,
}

/// Both criteria for `τ ∖ σ ⊆ Hor Lk σ`, next to the definition itself.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Verdicts {
    pub definition: bool,
    pub geometric: bool,
    pub diagrammatic: bool,
}

pub struct LinkData {
    pub building: SphericalBuilding,
    pub polar: BTreeMap<u32, Polar>,
    pub hemispheres: HemisphereComplexes,
}

/// `(dim Y + 1) · ∏ (2^{dim X_i + 1} − 1)`
pub fn move_bound(factor_dims: &[usize]) -> usize {
    let n: usize = factor_dims.iter().map(|d| (1usize << (d + 1)) - 1).product();
    (factor_dims.iter().sum::<usize>() + 1) * n
}

/// Horizontal-link queries for one frozen `ξ`, memoized.
pub struct Horo {
    pub y: Rc<ProductWindow>,
    pub xi: Xi,
    links: RefCell<HashMap<PolyCell, Rc<LinkData>>>,
    mins: RefCell<HashMap<PolyCell, PolyCell>>,
    depths: RefCell<HashMap<PolyCell, usize>>,
}

impl Horo {
    pub fn new(y: Rc<ProductWindow>, xi: Xi) -> Self {
        assert_eq!(xi.parts.len(), y.factors.len());
        Horo { y, xi, links: RefCell::default(), mins: RefCell::default(), depths: RefCell::default() }
    }

    /// `β` constant on the cell, decided on vertex differences per factor.
    pub fn is_horizontal(&self, c: &PolyCell) -> bool {
        c.factors.iter().zip(&self.y.factors).zip(&self.xi.parts).all(|((s, w), u)| {
            let p0 = w.coords(s[0]);
            s[1..].iter().all(|&v| u.dot(&(w.coords(v) - p0)).is_zero())
        })
    }

    pub fn link_data(&self, sigma: &PolyCell) -> Result<Rc<LinkData>> {
        if let Some(d) = self.links.borrow().get(sigma) {
            return Ok(d.clone());
        }
        let building = self.y.link(sigma)?;
        let polar = building.polar_class_vector(&self.xi.pole());
        let hemispheres = building.hemisphere_complexes(&polar);
        let d = Rc::new(LinkData { building, polar, hemispheres });
        self.links.borrow_mut().insert(sigma.clone(), d.clone());
        Ok(d)
    }

    fn check_pair(&self, tau: &PolyCell, sigma: &PolyCell) -> Result<()> {
        assert!(sigma.is_face_of(tau), "σ must be a face of τ");
        if !self.is_horizontal(tau) {
            return Err(Error::NotHorizontal);
        }
        if !self.y.star_complete(sigma) {
            return Err(Error::BoundaryTruncated);
        }
        Ok(())
    }

    /// `τ ⊸ σ`: the new directions of `τ` at `σ` lie in `Hor Lk σ`.
    pub fn rel(&self, tau: &PolyCell, sigma: &PolyCell) -> Result<bool> {
        self.check_pair(tau, sigma)?;
        let d = self.link_data(sigma)?;
        let s = self.y.difference(tau, sigma);
        Ok(s.is_empty() || d.hemispheres.horizontal.contains(&s))
    }

    pub fn cohorizontal(&self, tau: &PolyCell, sigma: &PolyCell) -> Result<Verdicts> {
        let definition = self.rel(tau, sigma)?;
        let d = self.link_data(sigma)?;
        let s = self.y.difference(tau, sigma);
        let (geometric, diagrammatic) = d.building.horizontality_criteria(&d.polar, &s);
        Ok(Verdicts { definition, geometric, diagrammatic })
    }

    /// `τ_i ⊸ σ_i` in one factor, with that factor's link taken on its own and pole `ξ_i`.
    pub fn rel_factor(&self, i: usize, tau_i: &[u32], sigma_i: &[u32]) -> Result<bool> {
        let w = &self.y.factors[i];
        let l = link_with_types(w, sigma_i)?;
        let polar = l.polar_class_vector(&self.xi.parts[i]);
        let hc = l.hemisphere_complexes(&polar);
        let new: Vec<u32> = tau_i.iter().copied().filter(|v| !sigma_i.contains(v)).collect();
        Ok(new.is_empty() || hc.horizontal.contains(&new))
    }

    /// `τ_i ⊸ σ_i` in every factor.
    pub fn rel_factorwise(&self, tau: &PolyCell, sigma: &PolyCell) -> Result<bool> {
        self.check_pair(tau, sigma)?;
        for i in 0..self.y.factors.len() {
            if !self.rel_factor(i, &tau.factors[i], &sigma.factors[i])? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Whether `(τ ∖ σ)` lies in the vertical part of `Lk σ`.
    pub fn in_vertical_link(&self, tau: &PolyCell, sigma: &PolyCell) -> Result<bool> {
        let d = self.link_data(sigma)?;
        let s = self.y.difference(tau, sigma);
        Ok(s.is_empty() || d.hemispheres.vertical.contains(&s))
    }

    /// All `σ ≤ τ` with `τ ⊸ σ`.
    pub fn cohorizontal_faces(&self, tau: &PolyCell) -> Result<Vec<PolyCell>> {
        let mut out = Vec::new();
        for s in tau.faces() {
            if self.rel(tau, &s)? {
                out.push(s);
            }
        }
        Ok(out)
    }

    pub fn tau_min(&self, tau: &PolyCell) -> Result<PolyCell> {
        if !self.xi.general_position() {
            return Err(Error::NotGeneralPosition);
        }
        if !self.is_horizontal(tau) {
            return Err(Error::NotHorizontal);
        }
        if let Some(m) = self.mins.borrow().get(tau) {
            return Ok(m.clone());
        }
        let t = self.cohorizontal_faces(tau)?;
        let mut m = t[0].clone();
        for s in &t[1..] {
            m = m.intersection(s).ok_or(Error::NotGeneralPosition)?;
        }
        self.mins.borrow_mut().insert(tau.clone(), m.clone());
        Ok(m)
    }

    pub fn is_essential(&self, c: &PolyCell) -> Result<bool> {
        Ok(&self.tau_min(c)? == c)
    }

    pub fn moves_from(&self, c: &PolyCell) -> Result<Vec<MoveRecord>> {
        if !self.xi.general_position() {
            return Err(Error::NotGeneralPosition);
        }
        if !self.is_horizontal(c) {
            return Err(Error::NotHorizontal);
        }
        let mut out = Vec::new();
        for t in self.y.cofaces(c) {
            if &t != c && self.is_horizontal(&t) && &self.tau_min(&t)? == c {
                out.push(MoveRecord { kind: MoveKind::Up, from: c.clone(), to: t });
            }
        }
        for s in c.faces() {
            if &s != c && !self.rel(c, &s)? {
                out.push(MoveRecord { kind: MoveKind::Down, from: c.clone(), to: s });
            }
        }
        Ok(out)
    }

    /// Longest move sequence from `c`, memoized; a revisit on the current path is a cycle.
    pub fn depth(&self, c: &PolyCell) -> Result<usize> {
        let mut on_path = BTreeSet::new();
        self.depth_rec(c, &mut on_path)
    }

    fn depth_rec(&self, c: &PolyCell, on_path: &mut BTreeSet<PolyCell>) -> Result<usize> {
        if let Some(&d) = self.depths.borrow().get(c) {
            return Ok(d);
        }
        if !on_path.insert(c.clone()) {
            return Err(Error::MoveCycle);
        }
        let mut best = 0;
        for m in self.moves_from(c)? {
            best = best.max(1 + self.depth_rec(&m.to, on_path)?);
        }
        on_path.remove(c);
        self.depths.borrow_mut().insert(c.clone(), best);
        Ok(best)
    }

    /// Exhaustive longest path without memoization.
    pub fn depth_bruteforce(&self, c: &PolyCell) -> Result<usize> {
        let mut path = vec![c.clone()];
        self.brute_rec(&mut path)
    }

    fn brute_rec(&self, path: &mut Vec<PolyCell>) -> Result<usize> {
        let c = path.last().unwrap().clone();
        let mut best = 0;
        for m in self.moves_from(&c)? {
            if path.contains(&m.to) {
                return Err(Error::MoveCycle);
            }
            path.push(m.to);
            best = best.max(1 + self.brute_rec(path)?);
            path.pop();
        }
        Ok(best)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coxcomplex::{build_affine_window, AffineType};
    use crate::exactgeom::qi;

    fn a1(r: i64) -> Window {
        build_affine_window(AffineType::A1, &qi(r)).unwrap().1
    }

    fn id(w: &Window, x: i64) -> u32 {
        w.vertex_id(&RationalVector::from_ints(&[x])).unwrap()
    }

    #[test]
    fn bound_values() {
        assert_eq!(move_bound(&[1, 1]), 27);
        assert_eq!(move_bound(&[1, 2]), 84);
    }

    #[test]
    fn cohorizontal_faces_need_not_meet() {
        let y = Rc::new(ProductWindow::new(vec![a1(3), a1(3)]));
        let h = Horo::new(y.clone(), Xi::new(vec![RationalVector::from_ints(&[1]), RationalVector::from_ints(&[0])]));
        let w = &y.factors[0];
        let (v1, v2, w2) = (id(w, 0), id(w, 0), id(w, 1));
        let tau = PolyCell::new(vec![vec![v1], vec![v2, w2]]);
        let s1 = PolyCell::new(vec![vec![v1], vec![v2]]);
        let s2 = PolyCell::new(vec![vec![v1], vec![w2]]);
        assert!(h.rel(&tau, &s1).unwrap() && h.rel(&tau, &s2).unwrap());
        assert!(s1.intersection(&s2).is_none());
        assert!(matches!(h.tau_min(&tau), Err(Error::NotGeneralPosition)));
    }

    #[test]
    fn general_position_vertices_only() {
        let y = Rc::new(ProductWindow::new(vec![a1(3), a1(3)]));
        let h = Horo::new(y.clone(), Xi::new(vec![RationalVector::from_ints(&[1]), RationalVector::from_ints(&[-1])]));
        let w = &y.factors[0];
        let v = PolyCell::new(vec![vec![id(w, 0)], vec![id(w, 1)]]);
        assert!(h.is_horizontal(&v));
        assert_eq!(h.tau_min(&v).unwrap(), v);
        assert!(h.moves_from(&v).unwrap().is_empty());
        assert_eq!(h.depth(&v).unwrap(), 0);
        let e = PolyCell::new(vec![vec![id(w, 0), id(w, 1)], vec![id(w, 1)]]);
        assert!(!h.is_horizontal(&e));
        let far = PolyCell::new(vec![vec![id(w, 3)], vec![id(w, 1)]]);
        assert!(matches!(h.rel(&far, &far), Err(Error::BoundaryTruncated)));
    }
}
