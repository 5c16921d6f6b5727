//! Coxeter matrices, rational root systems, affine windows and typed links.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactgeom::{ceil_sqrt, perp_component, q, qi, solve_square, RationalVector, Q};
use crate::polycomplex::{SimplicialComplex, Simplex};
use crate::sphbuild::SphericalBuilding;

// ---------------------------------------------------------------------------
// Coxeter matrices

/// Off-diagonal entries are `Some(m)` with `m >= 2`, or `None` for infinity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoxeterSystem {
    matrix: Vec<Vec<Option<u32>>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CoxeterKind {
    Finite,
    Affine,
    Other,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoxeterComponent {
    pub nodes: Vec<usize>,
    pub kind: CoxeterKind,
    pub label: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub kind: CoxeterKind,
    pub components: Vec<CoxeterComponent>,
}

impl CoxeterSystem {
    pub fn new(matrix: Vec<Vec<Option<u32>>>) -> Result<Self> {
        let n = matrix.len();
        for (i, row) in matrix.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidMatrix("not square".into()));
            }
            for (j, e) in row.iter().enumerate() {
                if *e != matrix[j][i] {
                    return Err(Error::InvalidMatrix("not symmetric".into()));
                }
                match (i == j, e) {
                    (true, Some(1)) => {}
                    (true, _) => return Err(Error::InvalidMatrix("diagonal entry must be 1".into())),
                    (false, Some(m)) if *m < 2 => return Err(Error::InvalidMatrix(format!("entry {m} below 2"))),
                    _ => {}
                }
            }
        }
        Ok(CoxeterSystem { matrix })
    }

    pub fn rank(&self) -> usize {
        self.matrix.len()
    }

    pub fn entry(&self, i: usize, j: usize) -> Option<u32> {
        self.matrix[i][j]
    }

    pub fn matrix(&self) -> &[Vec<Option<u32>>] {
        &self.matrix
    }

    /// Nodes adjacent in the diagram (entry not 2).
    pub fn connected(&self, i: usize, j: usize) -> bool {
        i != j && self.matrix[i][j] != Some(2)
    }

    /// Block-diagonal sum.
    pub fn direct_sum(&self, other: &CoxeterSystem) -> CoxeterSystem {
        let (a, b) = (self.rank(), other.rank());
        let mut m = vec![vec![Some(2); a + b]; a + b];
        for i in 0..a + b {
            m[i][i] = Some(1);
        }
        for i in 0..a {
            for j in 0..a {
                m[i][j] = self.matrix[i][j];
            }
        }
        for i in 0..b {
            for j in 0..b {
                m[a + i][a + j] = other.matrix[i][j];
            }
        }
        CoxeterSystem { matrix: m }
    }

    /// Connected components of the diagram restricted to `nodes`.
    pub fn components_of(&self, nodes: &BTreeSet<usize>) -> Vec<Vec<usize>> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for &s in nodes {
            if seen.contains(&s) {
                continue;
            }
            let mut comp = vec![];
            let mut stack = vec![s];
            seen.insert(s);
            while let Some(x) = stack.pop() {
                comp.push(x);
                for &y in nodes {
                    if !seen.contains(&y) && self.connected(x, y) {
                        seen.insert(y);
                        stack.push(y);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }
}

fn label_of(m: &CoxeterSystem, nodes: &[usize]) -> (CoxeterKind, String) {
    let k = nodes.len();
    if k == 1 {
        return (CoxeterKind::Finite, "A_1".into());
    }
    let mut edges = Vec::new();
    for (a, &i) in nodes.iter().enumerate() {
        for &j in &nodes[a + 1..] {
            if m.connected(i, j) {
                edges.push((i, j, m.entry(i, j)));
            }
        }
    }
    if edges.iter().any(|e| e.2.is_none()) {
        return if k == 2 { (CoxeterKind::Affine, "~A_1".into()) } else { (CoxeterKind::Other, "?".into()) };
    }
    let deg = |v: usize| edges.iter().filter(|e| e.0 == v || e.1 == v).count();
    let lab = |a: usize, b: usize| m.entry(a, b).unwrap();
    if edges.len() >= k {
        // one cycle at most for the known families
        let all3 = edges.iter().all(|e| e.2 == Some(3));
        if edges.len() == k && all3 && nodes.iter().all(|&v| deg(v) == 2) && k >= 3 {
            return (CoxeterKind::Affine, format!("~A_{}", k - 1));
        }
        return (CoxeterKind::Other, "?".into());
    }
    let maxdeg = nodes.iter().map(|&v| deg(v)).max().unwrap();
    if maxdeg <= 2 {
        // path: walk from an end
        let start = *nodes.iter().find(|&&v| deg(v) == 1).unwrap();
        let mut order = vec![start];
        while order.len() < k {
            let last = *order.last().unwrap();
            let next = nodes.iter().copied().find(|&v| !order.contains(&v) && m.connected(last, v)).unwrap();
            order.push(next);
        }
        let labels: Vec<u32> = order.windows(2).map(|w| lab(w[0], w[1])).collect();
        let mut rev = labels.clone();
        rev.reverse();
        let other3 = |ls: &[u32], skip: &[usize]| ls.iter().enumerate().all(|(i, &l)| skip.contains(&i) || l == 3);
        let last = labels.len() - 1;
        if labels.iter().all(|&l| l == 3) {
            return (CoxeterKind::Finite, format!("A_{k}"));
        }
        if k == 2 {
            return match labels[0] {
                4 => (CoxeterKind::Finite, "B_2".into()),
                6 => (CoxeterKind::Finite, "G_2".into()),
                x => (CoxeterKind::Finite, format!("I_2({x})")),
            };
        }
        for ls in [&labels, &rev] {
            if ls[last] == 4 && other3(ls, &[last]) {
                return (CoxeterKind::Finite, format!("B_{k}"));
            }
            if ls[0] == 4 && ls[last] == 4 && other3(ls, &[0, last]) {
                return (CoxeterKind::Affine, format!("~C_{}", k - 1));
            }
            if k == 4 && ls[..] == [3, 4, 3] {
                return (CoxeterKind::Finite, "F_4".into());
            }
            if k == 5 && ls[..] == [3, 3, 4, 3] {
                return (CoxeterKind::Affine, "~F_4".into());
            }
            if k == 3 && ls[..] == [3, 6] {
                return (CoxeterKind::Affine, "~G_2".into());
            }
            if (k == 3 || k == 4) && ls[last] == 5 && other3(ls, &[last]) {
                return (CoxeterKind::Finite, format!("H_{k}"));
            }
        }
        if k == 3 && labels[..] == [4, 4] {
            return (CoxeterKind::Affine, "~C_2".into());
        }
        return (CoxeterKind::Other, "?".into());
    }
    // trees with branching
    let branch: Vec<usize> = nodes.iter().copied().filter(|&v| deg(v) >= 3).collect();
    let arm_lengths = |c: usize| -> Vec<(usize, Vec<u32>)> {
        let mut arms = Vec::new();
        for &n0 in nodes {
            if !m.connected(c, n0) {
                continue;
            }
            let mut len = 1;
            let mut labels = vec![lab(c, n0)];
            let (mut prev, mut cur) = (c, n0);
            while let Some(nx) = nodes.iter().copied().find(|&v| v != prev && m.connected(cur, v)) {
                if deg(cur) != 2 {
                    break;
                }
                labels.push(lab(cur, nx));
                prev = cur;
                cur = nx;
                len += 1;
            }
            arms.push((len, labels));
        }
        arms.sort();
        arms
    };
    if branch.len() == 1 {
        let c = branch[0];
        let arms = arm_lengths(c);
        let lens: Vec<usize> = arms.iter().map(|a| a.0).collect();
        let all3 = edges.iter().all(|e| e.2 == Some(3));
        if deg(c) == 4 && lens == [1, 1, 1, 1] && all3 {
            return (CoxeterKind::Affine, "~D_4".into());
        }
        if deg(c) == 3 {
            if all3 {
                return match lens[..] {
                    [1, 1, x] => (CoxeterKind::Finite, format!("D_{}", x + 3)),
                    [1, 2, 2] => (CoxeterKind::Finite, "E_6".into()),
                    [1, 2, 3] => (CoxeterKind::Finite, "E_7".into()),
                    [1, 2, 4] => (CoxeterKind::Finite, "E_8".into()),
                    [2, 2, 2] => (CoxeterKind::Affine, "~E_6".into()),
                    [1, 3, 3] => (CoxeterKind::Affine, "~E_7".into()),
                    [1, 2, 5] => (CoxeterKind::Affine, "~E_8".into()),
                    _ => (CoxeterKind::Other, "?".into()),
                };
            }
            if lens[0] == 1 && lens[1] == 1 && lens[2] >= 2 {
                let far = &arms[2].1;
                if *far.last().unwrap() == 4 && far[..far.len() - 1].iter().all(|&l| l == 3) && arms[0].1 == [3] && arms[1].1 == [3] {
                    return (CoxeterKind::Affine, format!("~B_{}", k - 1));
                }
            }
        }
    }
    if branch.len() == 2 && edges.iter().all(|e| e.2 == Some(3)) && branch.iter().all(|&b| deg(b) == 3) {
        let leaves = nodes.iter().filter(|&&v| deg(v) == 1).count();
        if leaves == 4 {
            return (CoxeterKind::Affine, format!("~D_{}", k - 1));
        }
    }
    (CoxeterKind::Other, "?".into())
}

pub fn classify_coxeter(m: &CoxeterSystem) -> Result<Classification> {
    CoxeterSystem::new(m.matrix.clone())?;
    let all: BTreeSet<usize> = (0..m.rank()).collect();
    let mut components = Vec::new();
    for nodes in m.components_of(&all) {
        let (kind, label) = label_of(m, &nodes);
        components.push(CoxeterComponent { nodes, kind, label });
    }
    let kind = if components.iter().all(|c| c.kind == CoxeterKind::Finite) {
        CoxeterKind::Finite
    } else if components.iter().all(|c| c.kind == CoxeterKind::Affine) {
        CoxeterKind::Affine
    } else {
        CoxeterKind::Other
    };
    Ok(Classification { kind, components })
}

// ---------------------------------------------------------------------------
// Finite root systems

pub type Matrix = Vec<Vec<Q>>;

pub fn mat_identity(d: usize) -> Matrix {
    (0..d).map(|i| (0..d).map(|j| if i == j { Q::one() } else { Q::zero() }).collect()).collect()
}

pub fn mat_mul(a: &Matrix, b: &Matrix) -> Matrix {
    let n = a.len();
    let m = b[0].len();
    let k = b.len();
    (0..n)
        .map(|i| {
            (0..m)
                .map(|j| {
                    let mut s = Q::zero();
                    for t in 0..k {
                        if !a[i][t].is_zero() && !b[t][j].is_zero() {
                            s += &a[i][t] * &b[t][j];
                        }
                    }
                    s
                })
                .collect()
        })
        .collect()
}

pub fn mat_apply(a: &Matrix, v: &RationalVector) -> RationalVector {
    RationalVector::new(
        a.iter()
            .map(|row| {
                let mut s = Q::zero();
                for (x, y) in row.iter().zip(v.coords()) {
                    if !x.is_zero() && !y.is_zero() {
                        s += x * y;
                    }
                }
                s
            })
            .collect(),
    )
}

/// Linear reflection in the hyperplane orthogonal to `alpha`.
pub fn reflection_matrix(alpha: &RationalVector) -> Matrix {
    let d = alpha.dim();
    let nn = alpha.norm_sq();
    let mut m = mat_identity(d);
    for i in 0..d {
        for j in 0..d {
            m[i][j] -= qi(2) * alpha.get(i) * alpha.get(j) / &nn;
        }
    }
    m
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum FiniteType {
    A1,
    A2,
    A3,
    B2,
    C2,
    G2,
}

impl fmt::Display for FiniteType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            FiniteType::A1 => "A_1",
            FiniteType::A2 => "A_2",
            FiniteType::A3 => "A_3",
            FiniteType::B2 => "B_2",
            FiniteType::C2 => "C_2",
            FiniteType::G2 => "G_2",
        };
        write!(f, "{s}")
    }
}

/// Crystallographic root system with rational coordinates.
#[derive(Clone, Debug)]
pub struct RootSystem {
    pub kind: FiniteType,
    pub ambient_dim: usize,
    pub simple: Vec<RationalVector>,
    pub roots: Vec<RationalVector>,
    pub highest: RationalVector,
    /// Coefficients of the highest root in the simple roots.
    pub marks: Vec<Q>,
    group: Vec<Matrix>,
}

impl RootSystem {
    pub fn new(kind: FiniteType) -> Self {
        let v = RationalVector::from_ints;
        let (simple, highest) = match kind {
            FiniteType::A1 => (vec![v(&[1])], v(&[1])),
            FiniteType::A2 => (vec![v(&[1, -1, 0]), v(&[0, 1, -1])], v(&[1, 0, -1])),
            FiniteType::A3 => (vec![v(&[1, -1, 0, 0]), v(&[0, 1, -1, 0]), v(&[0, 0, 1, -1])], v(&[1, 0, 0, -1])),
            FiniteType::B2 => (vec![v(&[1, -1]), v(&[0, 1])], v(&[1, 1])),
            FiniteType::C2 => (vec![v(&[1, -1]), v(&[0, 2])], v(&[2, 0])),
            FiniteType::G2 => (vec![v(&[1, -1, 0]), v(&[-2, 1, 1])], v(&[-1, -1, 2])),
        };
        let ambient_dim = simple[0].dim();
        let gens: Vec<Matrix> = simple.iter().map(reflection_matrix).collect();
        let group = generate_group(&gens, ambient_dim);
        let mut roots: BTreeSet<RationalVector> = BTreeSet::new();
        for g in &group {
            for a in &simple {
                roots.insert(mat_apply(g, a));
            }
        }
        let roots: Vec<RationalVector> = roots.into_iter().collect();
        // highest root in simple-root coordinates
        let gram: Vec<Vec<Q>> = simple.iter().map(|a| simple.iter().map(|b| a.dot(b)).collect()).collect();
        let rhs: Vec<Q> = simple.iter().map(|a| a.dot(&highest)).collect();
        let marks = solve_square(&gram, &rhs).expect("simple roots independent");
        RootSystem { kind, ambient_dim, simple, roots, highest, marks, group }
    }

    pub fn rank(&self) -> usize {
        self.simple.len()
    }

    /// Elements of the finite Weyl group as matrices.
    pub fn weyl_group(&self) -> &[Matrix] {
        &self.group
    }

    /// Positive roots: positive first nonzero coefficient in simple-root coordinates.
    pub fn positive_roots(&self) -> Vec<RationalVector> {
        self.roots.iter().filter(|r| self.is_positive(r)).cloned().collect()
    }

    fn is_positive(&self, r: &RationalVector) -> bool {
        let gram: Vec<Vec<Q>> = self.simple.iter().map(|a| self.simple.iter().map(|b| a.dot(b)).collect()).collect();
        let rhs: Vec<Q> = self.simple.iter().map(|a| a.dot(r)).collect();
        let c = solve_square(&gram, &rhs).unwrap();
        c.iter().any(|x| x > &Q::zero())
    }

    /// `ω_i` with `⟨ω_i, α_j⟩ = δ_ij`, inside the span of the roots.
    pub fn fundamental_coweights(&self) -> Vec<RationalVector> {
        let r = self.rank();
        let gram: Vec<Vec<Q>> = self.simple.iter().map(|a| self.simple.iter().map(|b| a.dot(b)).collect()).collect();
        (0..r)
            .map(|i| {
                let rhs: Vec<Q> = (0..r).map(|j| if i == j { Q::one() } else { Q::zero() }).collect();
                let c = solve_square(&gram, &rhs).unwrap();
                let mut w = RationalVector::zeros(self.ambient_dim);
                for (ci, a) in c.iter().zip(&self.simple) {
                    w = w.axpy(ci, a);
                }
                w
            })
            .collect()
    }

    /// W-orbit closure of a vector set.
    pub fn orbit_closure(&self, vs: &[RationalVector]) -> Vec<RationalVector> {
        let mut out = BTreeSet::new();
        for g in &self.group {
            for x in vs {
                out.insert(mat_apply(g, x));
            }
        }
        out.into_iter().collect()
    }

    pub fn is_invariant(&self, vs: &[RationalVector]) -> bool {
        let set: BTreeSet<&RationalVector> = vs.iter().collect();
        self.group.iter().all(|g| vs.iter().all(|x| set.contains(&mat_apply(g, x))))
    }
}

fn generate_group(gens: &[Matrix], d: usize) -> Vec<Matrix> {
    let mut seen: BTreeSet<Matrix> = BTreeSet::new();
    let id = mat_identity(d);
    seen.insert(id.clone());
    let mut queue = VecDeque::from([id]);
    while let Some(g) = queue.pop_front() {
        for s in gens {
            let h = mat_mul(s, &g);
            if seen.insert(h.clone()) {
                queue.push_back(h);
            }
        }
    }
    seen.into_iter().collect()
}

// ---------------------------------------------------------------------------
// Affine realizations and windows

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum AffineType {
    A1,
    A2,
    C2,
    G2,
}

impl AffineType {
    pub fn parse(s: &str) -> Result<Self> {
        let t: String = s.chars().filter(|c| c.is_ascii_alphanumeric()).collect::<String>().to_ascii_uppercase();
        match t.trim_start_matches("TILDE").trim_start_matches('T') {
            "A1" => Ok(AffineType::A1),
            "A2" => Ok(AffineType::A2),
            "C2" | "B2" => Ok(AffineType::C2),
            "G2" => Ok(AffineType::G2),
            _ => Err(Error::UnsupportedType(s.to_string())),
        }
    }

    pub fn finite(&self) -> FiniteType {
        match self {
            AffineType::A1 => FiniteType::A1,
            AffineType::A2 => FiniteType::A2,
            AffineType::C2 => FiniteType::C2,
            AffineType::G2 => FiniteType::G2,
        }
    }

    pub fn rank(&self) -> usize {
        match self {
            AffineType::A1 => 1,
            _ => 2,
        }
    }
}

impl fmt::Display for AffineType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            AffineType::A1 => "~A_1",
            AffineType::A2 => "~A_2",
            AffineType::C2 => "~C_2",
            AffineType::G2 => "~G_2",
        };
        write!(f, "{s}")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineMap {
    pub linear: Matrix,
    pub translation: RationalVector,
}

impl AffineMap {
    pub fn identity(d: usize) -> Self {
        AffineMap { linear: mat_identity(d), translation: RationalVector::zeros(d) }
    }

    /// Reflection in `{x : ⟨x, α⟩ = k}`.
    pub fn reflection(alpha: &RationalVector, k: &Q) -> Self {
        let linear = reflection_matrix(alpha);
        let translation = alpha.scale(&(qi(2) * k / alpha.norm_sq()));
        AffineMap { linear, translation }
    }

    pub fn apply(&self, x: &RationalVector) -> RationalVector {
        &mat_apply(&self.linear, x) + &self.translation
    }

    /// `self ∘ other`
    pub fn compose(&self, other: &AffineMap) -> AffineMap {
        AffineMap { linear: mat_mul(&self.linear, &other.linear), translation: self.apply(&other.translation) }
    }
}

#[derive(Clone, Debug)]
pub struct AffineRealization {
    pub kind: AffineType,
    pub roots: RootSystem,
    pub ambient_dim: usize,
    /// `s_0` (affine) first, then `s_1..s_r`.
    pub simple_reflections: Vec<AffineMap>,
    /// Vertex of type `i` at index `i`.
    pub fundamental_alcove: Vec<RationalVector>,
}

impl AffineRealization {
    pub fn new(kind: AffineType) -> Self {
        let roots = RootSystem::new(kind.finite());
        let d = roots.ambient_dim;
        let mut simple_reflections = vec![AffineMap::reflection(&roots.highest, &Q::one())];
        for a in &roots.simple {
            simple_reflections.push(AffineMap::reflection(a, &Q::zero()));
        }
        let mut alcove = vec![RationalVector::zeros(d)];
        for (w, c) in roots.fundamental_coweights().iter().zip(&roots.marks) {
            alcove.push(w.scale(&(Q::one() / c)));
        }
        AffineRealization { kind, roots, ambient_dim: d, simple_reflections, fundamental_alcove: alcove }
    }

    /// Type of alcove vertex `i` is node `i`; node 0 is the affine node.
    pub fn coxeter_system(&self) -> CoxeterSystem {
        let r = self.simple_reflections.len();
        let mut m = vec![vec![Some(2); r]; r];
        for i in 0..r {
            m[i][i] = Some(1);
            for j in 0..r {
                if i != j {
                    m[i][j] = self.order_of_product(i, j);
                }
            }
        }
        CoxeterSystem { matrix: m }
    }

    fn order_of_product(&self, i: usize, j: usize) -> Option<u32> {
        let p = self.simple_reflections[i].compose(&self.simple_reflections[j]);
        let id = AffineMap::identity(self.ambient_dim);
        let mut acc = p.clone();
        for k in 1..=12u32 {
            if acc == id {
                return Some(k);
            }
            acc = acc.compose(&p);
        }
        None
    }

    /// Vectors spanning the realization (the roots' span).
    pub fn span(&self) -> &[RationalVector] {
        &self.roots.simple
    }
}

/// Bounded piece of an affine Coxeter complex: the full subcomplex on vertices in a closed ball.
#[derive(Clone, Debug)]
pub struct Window {
    pub realization: AffineRealization,
    pub radius: Q,
    points: Vec<RationalVector>,
    types: Vec<usize>,
    inside: Vec<bool>,
    index: HashMap<RationalVector, u32>,
    /// Every enumerated alcove (including ones leaving the ball), as sorted vertex ids.
    alcoves: Vec<Simplex>,
    pub complex: SimplicialComplex,
}

impl Window {
    pub fn points(&self) -> &[RationalVector] {
        &self.points
    }

    pub fn coords(&self, v: u32) -> &RationalVector {
        &self.points[v as usize]
    }

    pub fn type_of(&self, v: u32) -> usize {
        self.types[v as usize]
    }

    pub fn is_inside(&self, v: u32) -> bool {
        self.inside[v as usize]
    }

    pub fn vertex_id(&self, x: &RationalVector) -> Option<u32> {
        self.index.get(x).copied()
    }

    pub fn inside_vertices(&self) -> Vec<u32> {
        (0..self.points.len() as u32).filter(|&v| self.inside[v as usize]).collect()
    }

    pub fn alcoves(&self) -> &[Simplex] {
        &self.alcoves
    }

    /// Alcoves of the full complex containing `s`.
    pub fn alcoves_containing<'a>(&'a self, s: &'a [u32]) -> impl Iterator<Item = &'a Simplex> + 'a {
        self.alcoves.iter().filter(move |a| crate::polycomplex::is_subset(s, a))
    }

    /// Whether every alcove containing `s` lies in the window.
    pub fn star_complete(&self, s: &[u32]) -> bool {
        self.complex.contains(s) && self.alcoves_containing(s).all(|a| a.iter().all(|&v| self.inside[v as usize]))
    }

    pub fn barycenter(&self, s: &[u32]) -> RationalVector {
        let d = self.realization.ambient_dim;
        RationalVector::sum(d, s.iter().map(|&v| &self.points[v as usize])).scale(&q(1, s.len() as i64))
    }

    /// Edge vectors spanning the affine hull of `s`.
    pub fn edge_vectors(&self, s: &[u32]) -> Vec<RationalVector> {
        let p0 = &self.points[s[0] as usize];
        s[1..].iter().map(|&v| &self.points[v as usize] - p0).collect()
    }

    /// Direction of link vertex `w` at simplex `s`, perpendicular to `s`.
    pub fn link_direction(&self, s: &[u32], w: u32) -> RationalVector {
        let b = self.barycenter(s);
        let e = self.edge_vectors(s);
        perp_component(&(&self.points[w as usize] - &b), &e).expect("simplex vertices affinely independent")
    }

    /// Window vertices in the closed ball and the cells they span.
    pub fn to_json(&self) -> crate::polycomplex::ComplexJson {
        self.complex.to_json()
    }
}

pub fn build_affine_window(kind: AffineType, radius: &Q) -> Result<(AffineRealization, Window)> {
    let real = AffineRealization::new(kind);
    let r2 = radius * radius;
    let max_sq = real.fundamental_alcove.iter().map(|v| v.norm_sq()).max().unwrap();
    let delta = Q::from_integer(ceil_sqrt(&max_sq) * 2 + 1);
    let outer = radius + &delta;
    let outer2 = &outer * &outer;

    let alcove0: Vec<RationalVector> = real.fundamental_alcove.clone();
    let mut seen: BTreeSet<Vec<RationalVector>> = BTreeSet::new();
    let mut found: Vec<Vec<RationalVector>> = Vec::new();
    let key = |a: &Vec<RationalVector>| {
        let mut k = a.clone();
        k.sort();
        k
    };
    seen.insert(key(&alcove0));
    let mut queue = VecDeque::from([alcove0]);
    while let Some(a) = queue.pop_front() {
        found.push(a.clone());
        for i in 0..a.len() {
            let others: Vec<&RationalVector> = (0..a.len()).filter(|&j| j != i).map(|j| &a[j]).collect();
            let base = others[0];
            let dirs: Vec<RationalVector> = others[1..].iter().map(|w| *w - base).collect();
            let n = perp_component(&(&a[i] - base), &dirs).expect("facet independent");
            let mut b = a.clone();
            b[i] = a[i].axpy(&qi(-2), &n);
            if !b.iter().any(|v| v.norm_sq() <= outer2) {
                continue;
            }
            if seen.insert(key(&b)) {
                queue.push_back(b);
            }
        }
    }

    // canonical vertex ids: by squared norm, then coordinates
    let mut typed: BTreeMap<RationalVector, usize> = BTreeMap::new();
    for a in &found {
        for (t, v) in a.iter().enumerate() {
            if let Some(old) = typed.insert(v.clone(), t) {
                debug_assert_eq!(old, t, "type clash");
            }
        }
    }
    let mut pts: Vec<RationalVector> = typed.keys().cloned().collect();
    pts.sort_by(|a, b| a.norm_sq().cmp(&b.norm_sq()).then_with(|| a.cmp(b)));
    let index: HashMap<RationalVector, u32> = pts.iter().enumerate().map(|(i, p)| (p.clone(), i as u32)).collect();
    let types: Vec<usize> = pts.iter().map(|p| typed[p]).collect();
    let inside: Vec<bool> = pts.iter().map(|p| p.norm_sq() <= r2).collect();
    let mut alcoves: Vec<Simplex> = found
        .iter()
        .map(|a| {
            let mut s: Simplex = a.iter().map(|v| index[v]).collect();
            s.sort_unstable();
            s
        })
        .collect();
    alcoves.sort();
    let mut complex = SimplicialComplex::new();
    for a in &alcoves {
        let inner: Simplex = a.iter().copied().filter(|&v| inside[v as usize]).collect();
        if !inner.is_empty() {
            complex.add_simplex(inner);
        }
    }
    let w = Window { realization: real.clone(), radius: radius.clone(), points: pts, types, inside, index, alcoves, complex };
    Ok((real, w))
}

/// Simplicial link of `s` with diagram types and directions perpendicular to `s`.
pub fn link_with_types(w: &Window, s: &[u32]) -> Result<SphericalBuilding> {
    if !w.star_complete(s) {
        return Err(Error::BoundaryTruncated);
    }
    let link = w.complex.link(s);
    let cox = w.realization.coxeter_system();
    let mut types = BTreeMap::new();
    let mut dirs = BTreeMap::new();
    for v in link.vertices() {
        types.insert(v, w.type_of(v));
        dirs.insert(v, w.link_direction(s, v));
    }
    Ok(SphericalBuilding::thin(link, types, cox, dirs, w.realization.ambient_dim))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inf() -> Option<u32> {
        None
    }

    #[test]
    fn classify_examples() {
        let a2 = CoxeterSystem::new(vec![vec![Some(1), Some(3)], vec![Some(3), Some(1)]]).unwrap();
        let c = classify_coxeter(&a2).unwrap();
        assert_eq!(c.kind, CoxeterKind::Finite);
        assert_eq!(c.components[0].label, "A_2");
        let a1t = CoxeterSystem::new(vec![vec![Some(1), inf()], vec![inf(), Some(1)]]).unwrap();
        let c = classify_coxeter(&a1t).unwrap();
        assert_eq!((c.kind, c.components[0].label.as_str()), (CoxeterKind::Affine, "~A_1"));
        let sum = a2.direct_sum(&a1t);
        let c = classify_coxeter(&sum).unwrap();
        assert_eq!(c.components.len(), 2);
        assert_eq!(c.components[0].kind, CoxeterKind::Finite);
        assert_eq!(c.components[1].kind, CoxeterKind::Affine);
        assert!(CoxeterSystem::new(vec![vec![Some(1), Some(3)], vec![Some(2), Some(1)]]).is_err());
        assert!(CoxeterSystem::new(vec![vec![Some(2)]]).is_err());
    }

    #[test]
    fn realizations_give_affine_diagrams() {
        for (t, label) in [(AffineType::A1, "~A_1"), (AffineType::A2, "~A_2"), (AffineType::C2, "~C_2"), (AffineType::G2, "~G_2")] {
            let r = AffineRealization::new(t);
            for s in &r.simple_reflections {
                assert_eq!(s.compose(s), AffineMap::identity(r.ambient_dim));
            }
            let c = classify_coxeter(&r.coxeter_system()).unwrap();
            assert_eq!(c.components.len(), 1);
            assert_eq!(c.components[0].label, label, "{t}");
        }
    }

    #[test]
    fn a1_window() {
        let (_, w) = build_affine_window(AffineType::A1, &qi(3)).unwrap();
        assert_eq!(w.complex.f_vector(), vec![7, 6]);
        let xs: BTreeSet<i64> = w.inside_vertices().iter().map(|&v| w.coords(v).get(0).to_integer().try_into().unwrap()).collect();
        assert_eq!(xs, (-3..=3).collect());
    }

    #[test]
    fn a2_window_small() {
        let (_, w) = build_affine_window(AffineType::A2, &qi(0)).unwrap();
        assert_eq!(w.complex.f_vector(), vec![1]);
        assert!(w.coords(w.inside_vertices()[0]).is_zero());
    }

    #[test]
    fn links_in_windows() {
        let (_, w) = build_affine_window(AffineType::A1, &qi(3)).unwrap();
        let o = w.vertex_id(&RationalVector::from_ints(&[0])).unwrap();
        let l = link_with_types(&w, &[o]).unwrap();
        assert_eq!(l.complex.f_vector(), vec![2]);
        let far = w.vertex_id(&RationalVector::from_ints(&[3])).unwrap();
        assert_eq!(link_with_types(&w, &[far]).unwrap_err(), Error::BoundaryTruncated);

        let (_, w) = build_affine_window(AffineType::A2, &qi(2)).unwrap();
        let o = w.vertex_id(&RationalVector::zeros(3)).unwrap();
        let l = link_with_types(&w, &[o]).unwrap();
        assert_eq!(l.complex.f_vector(), vec![6, 6]);
        // alternating types around the hexagon
        for e in l.complex.of_dim(1) {
            assert_ne!(l.vertex_type[&e[0]], l.vertex_type[&e[1]]);
        }
        let e = w.complex.of_dim(1).into_iter().find(|e| e.contains(&o)).unwrap().clone();
        assert_eq!(link_with_types(&w, &e).unwrap().complex.f_vector(), vec![2]);
    }
}
