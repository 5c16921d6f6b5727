//! Simplicial and polysimplicial complexes, face lattices and barycentric subdivision.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

pub type Simplex = Vec<u32>;

/// Face-closed set of simplices, each a sorted vertex list.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SimplicialComplex {
    simplices: BTreeSet<Simplex>,
}

fn nonempty_subsets(s: &[u32]) -> impl Iterator<Item = Simplex> + '_ {
    let n = s.len();
    (1u64..(1u64 << n)).map(move |mask| (0..n).filter(|i| mask >> i & 1 == 1).map(|i| s[i]).collect())
}

fn canon(mut s: Simplex) -> Simplex {
    s.sort_unstable();
    s.dedup();
    s
}

impl SimplicialComplex {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_facets<I: IntoIterator<Item = Simplex>>(facets: I) -> Self {
        let mut k = Self::new();
        for f in facets {
            k.add_simplex(f);
        }
        k
    }

    pub fn add_simplex(&mut self, s: Simplex) {
        let s = canon(s);
        if s.is_empty() || self.simplices.contains(&s) {
            return;
        }
        for f in nonempty_subsets(&s) {
            self.simplices.insert(f);
        }
    }

    pub fn contains(&self, s: &[u32]) -> bool {
        self.simplices.contains(s)
    }

    pub fn simplices(&self) -> impl Iterator<Item = &Simplex> {
        self.simplices.iter()
    }

    pub fn len(&self) -> usize {
        self.simplices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.simplices.is_empty()
    }

    pub fn vertices(&self) -> BTreeSet<u32> {
        self.simplices.iter().filter(|s| s.len() == 1).map(|s| s[0]).collect()
    }

    /// Dimension, `-1` for the empty complex.
    pub fn dim(&self) -> i32 {
        self.simplices.iter().map(|s| s.len() as i32 - 1).max().unwrap_or(-1)
    }

    pub fn f_vector(&self) -> Vec<usize> {
        let d = self.dim();
        let mut f = vec![0usize; (d + 1).max(0) as usize];
        for s in &self.simplices {
            f[s.len() - 1] += 1;
        }
        f
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.simplices.iter().map(|s| if s.len() % 2 == 1 { 1 } else { -1 }).sum()
    }

    pub fn of_dim(&self, d: usize) -> Vec<&Simplex> {
        self.simplices.iter().filter(|s| s.len() == d + 1).collect()
    }

    pub fn facets(&self) -> Vec<Simplex> {
        let mut covered: BTreeSet<&[u32]> = BTreeSet::new();
        let mut faces: Vec<Simplex> = Vec::new();
        for t in &self.simplices {
            for i in 0..t.len() {
                let mut f = t.clone();
                f.remove(i);
                faces.push(f);
            }
        }
        covered.extend(faces.iter().map(|f| f.as_slice()));
        self.simplices.iter().filter(|s| !covered.contains(s.as_slice())).cloned().collect()
    }

    pub fn full_subcomplex(&self, verts: &BTreeSet<u32>) -> Self {
        SimplicialComplex {
            simplices: self.simplices.iter().filter(|s| s.iter().all(|v| verts.contains(v))).cloned().collect(),
        }
    }

    /// Simplices `t \ s` for `t ⊋ s` in the complex; `s` must be a simplex.
    pub fn link(&self, s: &[u32]) -> Self {
        let mut out = BTreeSet::new();
        for t in &self.simplices {
            if t.len() > s.len() && is_subset(s, t) {
                out.insert(t.iter().copied().filter(|v| !s.contains(v)).collect::<Simplex>());
            }
        }
        SimplicialComplex { simplices: out }
    }

    /// Join with a complex on a disjoint vertex set.
    pub fn join(&self, other: &Self) -> Self {
        let mut out: BTreeSet<Simplex> = self.simplices.clone();
        out.extend(other.simplices.iter().cloned());
        for a in &self.simplices {
            for b in &other.simplices {
                out.insert(canon(a.iter().chain(b).copied().collect()));
            }
        }
        SimplicialComplex { simplices: out }
    }

    pub fn is_subcomplex_of(&self, other: &Self) -> bool {
        self.simplices.is_subset(&other.simplices)
    }

    pub fn relabel(&self, f: impl Fn(u32) -> u32) -> Self {
        SimplicialComplex { simplices: self.simplices.iter().map(|s| canon(s.iter().map(|&v| f(v)).collect())).collect() }
    }

    pub fn insert_raw(&mut self, s: Simplex) {
        self.simplices.insert(canon(s));
    }

    pub fn is_face_closed(&self) -> bool {
        self.simplices.iter().all(|s| {
            s.len() == 1
                || (0..s.len()).all(|i| {
                    let mut f = s.clone();
                    f.remove(i);
                    self.simplices.contains(&f)
                })
        })
    }

    pub fn to_json(&self) -> ComplexJson {
        ComplexJson {
            vertices: self.vertices().into_iter().collect(),
            cells: self.simplices.iter().map(|s| vec![s.clone()]).collect(),
        }
    }
}

pub fn is_subset(a: &[u32], b: &[u32]) -> bool {
    // both sorted
    let mut j = 0;
    for x in a {
        while j < b.len() && b[j] < *x {
            j += 1;
        }
        if j == b.len() || b[j] != *x {
            return false;
        }
        j += 1;
    }
    true
}

fn union_sorted(a: &[u32], b: &[u32]) -> Simplex {
    canon(a.iter().chain(b).copied().collect())
}

fn intersect_sorted(a: &[u32], b: &[u32]) -> Simplex {
    a.iter().copied().filter(|x| b.binary_search(x).is_ok()).collect()
}

/// Shared JSON complex format: vertex ids and per-factor vertex lists per cell.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexJson {
    pub vertices: Vec<u32>,
    pub cells: Vec<Vec<Vec<u32>>>,
}

impl ComplexJson {
    pub fn to_simplicial(&self) -> SimplicialComplex {
        let mut k = SimplicialComplex::new();
        for c in &self.cells {
            let s: Simplex = c.iter().flatten().copied().collect();
            k.add_simplex(s);
        }
        k
    }
}

/// Product of simplices, one nonempty sorted vertex set per factor.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PolyCell {
    pub factors: Vec<Simplex>,
}

impl PolyCell {
    pub fn new(factors: Vec<Simplex>) -> Self {
        let factors: Vec<Simplex> = factors.into_iter().map(canon).collect();
        assert!(factors.iter().all(|f| !f.is_empty()), "empty factor");
        PolyCell { factors }
    }

    pub fn dim(&self) -> usize {
        self.factors.iter().map(|f| f.len() - 1).sum()
    }

    pub fn is_face_of(&self, other: &PolyCell) -> bool {
        self.factors.iter().zip(&other.factors).all(|(a, b)| is_subset(a, b))
    }

    /// All faces including the cell itself.
    pub fn faces(&self) -> Vec<PolyCell> {
        let mut acc: Vec<Vec<Simplex>> = vec![vec![]];
        for f in &self.factors {
            let subs: Vec<Simplex> = nonempty_subsets(f).collect();
            let mut next = Vec::with_capacity(acc.len() * subs.len());
            for a in &acc {
                for s in &subs {
                    let mut b = a.clone();
                    b.push(s.clone());
                    next.push(b);
                }
            }
            acc = next;
        }
        acc.into_iter().map(|factors| PolyCell { factors }).collect()
    }

    /// Product vertices as per-factor vertex tuples.
    pub fn vertices(&self) -> Vec<Vec<u32>> {
        let mut acc: Vec<Vec<u32>> = vec![vec![]];
        for f in &self.factors {
            let mut next = Vec::new();
            for a in &acc {
                for &v in f {
                    let mut b = a.clone();
                    b.push(v);
                    next.push(b);
                }
            }
            acc = next;
        }
        acc
    }

    pub fn vertex_cell(v: &[u32]) -> PolyCell {
        PolyCell { factors: v.iter().map(|&x| vec![x]).collect() }
    }

    /// Factorwise union (candidate join).
    pub fn union(&self, other: &PolyCell) -> PolyCell {
        PolyCell { factors: self.factors.iter().zip(&other.factors).map(|(a, b)| union_sorted(a, b)).collect() }
    }

    /// Factorwise intersection when nonempty in every factor.
    pub fn intersection(&self, other: &PolyCell) -> Option<PolyCell> {
        let mut fs = Vec::new();
        for (a, b) in self.factors.iter().zip(&other.factors) {
            let i = intersect_sorted(a, b);
            if i.is_empty() {
                return None;
            }
            fs.push(i);
        }
        Some(PolyCell { factors: fs })
    }

    /// Per-factor vertices of `self` not in `face`.
    pub fn minus(&self, face: &PolyCell) -> Vec<Simplex> {
        self.factors.iter().zip(&face.factors).map(|(a, b)| a.iter().copied().filter(|x| !b.contains(x)).collect()).collect()
    }
}

/// Face-closed set of product cells over given factor complexes.
#[derive(Clone, Debug, Default)]
pub struct PolyComplex {
    pub factors: Vec<SimplicialComplex>,
    cells: BTreeSet<PolyCell>,
}

impl PolyComplex {
    /// Full product of the factor complexes.
    pub fn product(factors: Vec<SimplicialComplex>) -> Self {
        let mut cells: Vec<Vec<Simplex>> = vec![vec![]];
        for f in &factors {
            let mut next = Vec::new();
            for a in &cells {
                for s in f.simplices() {
                    let mut b = a.clone();
                    b.push(s.clone());
                    next.push(b);
                }
            }
            cells = next;
        }
        PolyComplex { factors, cells: cells.into_iter().map(|factors| PolyCell { factors }).collect() }
    }

    pub fn from_cells<I: IntoIterator<Item = PolyCell>>(factors: Vec<SimplicialComplex>, it: I) -> Self {
        let mut cells = BTreeSet::new();
        for c in it {
            for f in c.faces() {
                cells.insert(f);
            }
        }
        PolyComplex { factors, cells }
    }

    pub fn cells(&self) -> impl Iterator<Item = &PolyCell> {
        self.cells.iter()
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn contains(&self, c: &PolyCell) -> bool {
        self.cells.contains(c)
    }

    pub fn is_face_closed(&self) -> bool {
        self.cells.iter().all(|c| c.faces().iter().all(|f| self.cells.contains(f)))
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.cells.iter().map(|c| if c.dim() % 2 == 0 { 1 } else { -1 }).sum()
    }

    pub fn cofaces<'a>(&'a self, c: &'a PolyCell) -> impl Iterator<Item = &'a PolyCell> + 'a {
        self.cells.iter().filter(move |t| c.is_face_of(t))
    }

    pub fn to_json(&self) -> ComplexJson {
        let mut vs = BTreeSet::new();
        for c in &self.cells {
            for f in &c.factors {
                vs.extend(f.iter().copied());
            }
        }
        ComplexJson { vertices: vs.into_iter().collect(), cells: self.cells.iter().map(|c| c.factors.clone()).collect() }
    }
}

/// `σ¹ ∨ … ∨ σᵏ` in a complex whose factors are flag complexes.
pub fn join_exists(cells: &[PolyCell], complex: &PolyComplex) -> Option<PolyCell> {
    let first = cells.first()?;
    for (i, a) in cells.iter().enumerate() {
        for b in &cells[i + 1..] {
            let u = a.union(b);
            if !u.factors.iter().zip(&complex.factors).all(|(s, f)| f.contains(s)) {
                return None;
            }
        }
    }
    let mut j = first.clone();
    for c in &cells[1..] {
        j = j.union(c);
    }
    debug_assert!(j.factors.iter().zip(&complex.factors).all(|(s, f)| f.contains(s)));
    Some(j)
}

pub fn meet_and_faces(a: &PolyCell, b: &PolyCell) -> (Option<PolyCell>, bool) {
    (a.intersection(b), a.is_face_of(b))
}

/// Chain of cells, strictly increasing under the face relation.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FlagCell {
    pub chain: Vec<usize>,
}

/// Barycentric subdivision: vertex `i` is `cells[i]`, simplices are strict chains.
#[derive(Clone, Debug)]
pub struct Subdivision {
    pub cells: Vec<PolyCell>,
    pub index: BTreeMap<PolyCell, usize>,
    pub complex: SimplicialComplex,
    /// Proper cofaces of each cell, by index.
    pub up: Vec<Vec<usize>>,
    /// Proper faces of each cell, by index.
    pub down: Vec<Vec<usize>>,
}

impl Subdivision {
    pub fn flags(&self) -> Vec<FlagCell> {
        self.complex.simplices().map(|s| {
            let mut chain: Vec<usize> = s.iter().map(|&v| v as usize).collect();
            chain.sort_by_key(|&i| self.cells[i].dim());
            FlagCell { chain }
        }).collect()
    }

    pub fn neighbours(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        self.up[i].iter().chain(&self.down[i]).copied()
    }
}

pub fn barycentric_subdivide(c: &PolyComplex) -> Subdivision {
    let cells: Vec<PolyCell> = c.cells().cloned().collect();
    let index: BTreeMap<PolyCell, usize> = cells.iter().cloned().enumerate().map(|(i, x)| (x, i)).collect();
    let mut down = vec![Vec::new(); cells.len()];
    let mut up = vec![Vec::new(); cells.len()];
    for (i, t) in cells.iter().enumerate() {
        for f in t.faces() {
            let j = index[&f];
            if j != i {
                down[i].push(j);
                up[j].push(i);
            }
        }
    }
    // chains: extend downward from each top element
    let mut complex = SimplicialComplex::new();
    let mut stack: Vec<Vec<usize>> = (0..cells.len()).map(|i| vec![i]).collect();
    while let Some(ch) = stack.pop() {
        let last = *ch.last().unwrap();
        complex.insert_raw(ch.iter().map(|&x| x as u32).collect());
        for &f in &down[last] {
            let mut n = ch.clone();
            n.push(f);
            stack.push(n);
        }
    }
    Subdivision { cells, index, complex, up, down }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn edge() -> SimplicialComplex {
        SimplicialComplex::from_facets([vec![0, 1]])
    }

    #[test]
    fn subdivide_edge() {
        let c = PolyComplex::product(vec![edge()]);
        let s = barycentric_subdivide(&c);
        assert_eq!(s.complex.f_vector(), vec![3, 2]);
    }

    #[test]
    fn subdivide_square() {
        let c = PolyComplex::product(vec![edge(), edge()]);
        let s = barycentric_subdivide(&c);
        assert_eq!(s.complex.f_vector(), vec![9, 16, 8]);
        assert_eq!(s.complex.euler_characteristic(), c.euler_characteristic());
        assert!(s.complex.is_face_closed());
    }

    #[test]
    fn square_join_and_meet() {
        let c = PolyComplex::product(vec![edge(), edge()]);
        let a = PolyCell::new(vec![vec![0], vec![0]]);
        let b = PolyCell::new(vec![vec![1], vec![1]]);
        assert_eq!(join_exists(&[a.clone(), b.clone()], &c), Some(PolyCell::new(vec![vec![0, 1], vec![0, 1]])));
        assert_eq!(join_exists(&[a.clone()], &c), Some(a.clone()));
        assert_eq!(meet_and_faces(&a, &b), (None, false));
        let sq = PolyCell::new(vec![vec![0, 1], vec![0, 1]]);
        assert_eq!(meet_and_faces(&a, &sq), (Some(a.clone()), true));
    }

    #[test]
    fn triangles_share_edge() {
        let k = SimplicialComplex::from_facets([vec![0, 1, 2], vec![1, 2, 3]]);
        let c = PolyComplex::product(vec![k]);
        let t1 = PolyCell::new(vec![vec![0, 1, 2]]);
        let t2 = PolyCell::new(vec![vec![1, 2, 3]]);
        assert_eq!(meet_and_faces(&t1, &t2).0, Some(PolyCell::new(vec![vec![1, 2]])));
        assert_eq!(join_exists(&[t1, t2], &c), None);
    }

    #[test]
    fn link_and_join() {
        let hex = SimplicialComplex::from_facets((0..6).map(|i| vec![i, (i + 1) % 6]));
        assert_eq!(hex.link(&[0]).f_vector(), vec![2]);
        let two = SimplicialComplex::from_facets([vec![10], vec![11]]);
        let three = SimplicialComplex::from_facets([vec![0], vec![1], vec![2]]);
        assert_eq!(three.join(&two).f_vector(), vec![5, 6]);
    }
}
