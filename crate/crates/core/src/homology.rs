//! Integral reduced homology through Smith normal form, and a greedy collapse.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polycomplex::{Simplex, SimplicialComplex};

/// Boundary matrices of the augmented chain complex.
#[derive(Clone, Debug)]
pub struct ChainComplex {
    /// `basis[d]` lists the `d`-simplices in order.
    pub basis: Vec<Vec<Simplex>>,
    /// `boundary[d]` maps `C_d -> C_{d-1}` as rows indexed by `(d-1)`-simplices; `boundary[0]` is the augmentation.
    pub boundary: Vec<Vec<Vec<BigInt>>>,
}

impl ChainComplex {
    pub fn new(k: &SimplicialComplex) -> Self {
        let dim = k.dim();
        let mut basis: Vec<Vec<Simplex>> = Vec::new();
        for d in 0..=dim.max(-1) {
            basis.push(k.of_dim(d as usize).into_iter().cloned().collect());
        }
        let mut boundary = Vec::new();
        for d in 0..basis.len() {
            if d == 0 {
                boundary.push(vec![vec![BigInt::one(); basis[0].len()]]);
                continue;
            }
            let idx: BTreeMap<&Simplex, usize> = basis[d - 1].iter().enumerate().map(|(i, s)| (s, i)).collect();
            let mut m = vec![vec![BigInt::zero(); basis[d].len()]; basis[d - 1].len()];
            for (j, s) in basis[d].iter().enumerate() {
                for i in 0..s.len() {
                    let mut f = s.clone();
                    f.remove(i);
                    let sign = if i % 2 == 0 { BigInt::one() } else { -BigInt::one() };
                    m[idx[&f]][j] = sign;
                }
            }
            boundary.push(m);
        }
        ChainComplex { basis, boundary }
    }

    /// `∂_{d} ∘ ∂_{d+1} = 0` for every `d`, including the augmentation.
    pub fn boundary_squares_to_zero(&self) -> bool {
        for d in 1..self.boundary.len() {
            let a = &self.boundary[d - 1];
            let b = &self.boundary[d];
            for row in a {
                for j in 0..b.first().map_or(0, |r| r.len()) {
                    let mut s = BigInt::zero();
                    for (k, x) in row.iter().enumerate() {
                        if !x.is_zero() && !b[k][j].is_zero() {
                            s += x * &b[k][j];
                        }
                    }
                    if !s.is_zero() {
                        return false;
                    }
                }
            }
        }
        true
    }
}

/// Diagonal of the Smith normal form (nonzero invariant factors, positive, dividing chain).
pub fn smith_diagonal(m: &[Vec<BigInt>]) -> Vec<BigInt> {
    let mut a: Vec<Vec<BigInt>> = m.to_vec();
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut diag = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        // pivot of minimal absolute value
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if !a[i][j].is_zero() && best.map_or(true, |(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let mut changed = false;
            for i in t + 1..rows {
                if a[i][t].is_zero() {
                    continue;
                }
                let f = a[i][t].div_floor(&a[t][t]);
                let prow = a[t].clone();
                for (x, y) in a[i].iter_mut().zip(&prow).skip(t) {
                    if !y.is_zero() {
                        *x -= &f * y;
                    }
                }
                if !a[i][t].is_zero() {
                    a.swap(t, i);
                    changed = true;
                }
            }
            for j in t + 1..cols {
                if a[t][j].is_zero() {
                    continue;
                }
                let f = a[t][j].div_floor(&a[t][t]);
                for row in a.iter_mut().skip(t) {
                    if !row[t].is_zero() {
                        let y = row[t].clone();
                        row[j] -= &f * y;
                    }
                }
                if !a[t][j].is_zero() {
                    for row in a.iter_mut() {
                        row.swap(t, j);
                    }
                    changed = true;
                }
            }
            if changed {
                continue;
            }
            // divisibility of the remaining block
            let p = a[t][t].clone();
            let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !(&a[i][j] % &p).is_zero()));
            match bad {
                Some(i) => {
                    let r = a[i].clone();
                    for (x, y) in a[t].iter_mut().zip(&r) {
                        *x += y;
                    }
                }
                None => break,
            }
        }
        diag.push(a[t][t].abs());
        t += 1;
    }
    diag
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BettiReport {
    /// Reduced Betti numbers in degrees `0..=dim`.
    pub betti: Vec<usize>,
    /// Torsion coefficients (> 1) per degree.
    pub torsion: Vec<Vec<String>>,
    /// Reduced homology in degree -1 is `Z` exactly for the empty complex.
    pub empty: bool,
}

impl BettiReport {
    pub fn is_acyclic(&self) -> bool {
        !self.empty && self.betti.iter().all(|&b| b == 0) && self.torsion.iter().all(|t| t.is_empty())
    }

    /// Vanishing of reduced homology in every degree below `n` (degree -1 included).
    pub fn vanishes_below(&self, n: i32) -> bool {
        if n >= 0 && self.empty {
            return false;
        }
        (0..n.max(0) as usize).all(|i| self.betti.get(i).map_or(true, |&b| b == 0) && self.torsion.get(i).map_or(true, |t| t.is_empty()))
    }

    pub fn nonzero_in(&self, n: i32) -> bool {
        if n < 0 {
            return self.empty;
        }
        let i = n as usize;
        self.betti.get(i).map_or(false, |&b| b > 0) || self.torsion.get(i).map_or(false, |t| !t.is_empty())
    }

    /// Euler characteristic read off the reduced Betti numbers.
    pub fn euler_characteristic(&self) -> i64 {
        let mut e = 1i64;
        for (i, b) in self.betti.iter().enumerate() {
            e += if i % 2 == 0 { *b as i64 } else { -(*b as i64) };
        }
        if self.empty {
            e -= 1;
        }
        e
    }
}

pub fn reduced_homology(k: &SimplicialComplex) -> BettiReport {
    if k.is_empty() {
        return BettiReport { betti: vec![], torsion: vec![], empty: true };
    }
    let cc = ChainComplex::new(k);
    let top = cc.basis.len();
    let diags: Vec<Vec<BigInt>> = cc.boundary.iter().map(|m| smith_diagonal(m)).collect();
    let mut betti = Vec::new();
    let mut torsion = Vec::new();
    for d in 0..top {
        let rank_d = diags[d].len();
        let rank_up = if d + 1 < top { diags[d + 1].len() } else { 0 };
        betti.push(cc.basis[d].len() - rank_d - rank_up);
        let tors: Vec<String> = if d + 1 < top {
            diags[d + 1].iter().filter(|x| !x.is_one()).map(|x| x.to_string()).collect()
        } else {
            vec![]
        };
        torsion.push(tors);
    }
    BettiReport { betti, torsion, empty: false }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sphericity {
    ProperlySphericalHomology,
    SphericalHomology,
    Acyclic,
    Other,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SphericityReport {
    pub verdict: Sphericity,
    pub spherical_homology: bool,
    pub properly_spherical_homology: bool,
    pub acyclic: bool,
    pub homology: BettiReport,
}

pub fn sphericity_report(k: &SimplicialComplex, n: i32) -> Result<SphericityReport> {
    if k.dim() != n {
        return Err(Error::DimensionMismatch { expected: n.max(-1) as usize, actual: k.dim().max(-1) as usize });
    }
    Ok(sphericity_unchecked(k, n))
}

/// Same classification without the dimension precondition.
pub fn sphericity_unchecked(k: &SimplicialComplex, n: i32) -> SphericityReport {
    let h = reduced_homology(k);
    let spherical = h.vanishes_below(n);
    let properly = spherical && h.nonzero_in(n);
    let acyclic = h.is_acyclic();
    let verdict = if acyclic {
        Sphericity::Acyclic
    } else if properly {
        Sphericity::ProperlySphericalHomology
    } else if spherical {
        Sphericity::SphericalHomology
    } else {
        Sphericity::Other
    };
    SphericityReport { verdict, spherical_homology: spherical, properly_spherical_homology: properly, acyclic, homology: h }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "outcome", content = "remaining")]
pub enum CollapseOutcome {
    CollapsedToPoint,
    Stuck(usize),
}

/// Removes free faces in lexicographic order until none remain.
pub fn greedy_collapse(k: &SimplicialComplex) -> CollapseOutcome {
    let mut alive: BTreeSet<Simplex> = k.simplices().cloned().collect();
    let mut cof: BTreeMap<Simplex, BTreeSet<Simplex>> = alive.iter().map(|s| (s.clone(), BTreeSet::new())).collect();
    for s in &alive {
        for i in 0..s.len() {
            if s.len() > 1 {
                let mut f = s.clone();
                f.remove(i);
                cof.get_mut(&f).unwrap().insert(s.clone());
            }
        }
    }
    loop {
        let free = alive.iter().find(|s| {
            let c = &cof[*s];
            c.len() == 1 && cof[c.iter().next().unwrap()].is_empty()
        });
        let Some(s) = free.cloned() else { break };
        let t = cof[&s].iter().next().unwrap().clone();
        for x in [&t, &s] {
            alive.remove(x);
            if x.len() > 1 {
                for i in 0..x.len() {
                    let mut f = x.clone();
                    f.remove(i);
                    if let Some(c) = cof.get_mut(&f) {
                        c.remove(x);
                    }
                }
            }
            cof.remove(x);
        }
    }
    if alive.len() == 1 {
        CollapseOutcome::CollapsedToPoint
    } else {
        CollapseOutcome::Stuck(alive.len())
    }
}
