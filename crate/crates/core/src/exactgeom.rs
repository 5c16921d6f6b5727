//! Exact rational vectors, square-root comparisons and small linear algebra over Q.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Q = BigRational;

pub fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// Canonical string form used in reports: `p` or `p/q`.
pub fn qstr(x: &Q) -> String {
    x.to_string()
}

pub fn parse_q(s: &str) -> Option<Q> {
    let s = s.trim();
    if let Some((a, b)) = s.split_once('/') {
        let n: BigInt = a.trim().parse().ok()?;
        let d: BigInt = b.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        Some(Q::new(n, d))
    } else {
        let n: BigInt = s.parse().ok()?;
        Some(Q::from_integer(n))
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RationalVector {
    coords: Vec<Q>,
}

impl RationalVector {
    pub fn new(coords: Vec<Q>) -> Self {
        RationalVector { coords }
    }

    pub fn from_ints(xs: &[i64]) -> Self {
        Self::new(xs.iter().map(|&x| qi(x)).collect())
    }

    pub fn zeros(dim: usize) -> Self {
        Self::new(vec![Q::zero(); dim])
    }

    pub fn unit(dim: usize, i: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.coords[i] = Q::one();
        v
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Q] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<Q> {
        self.coords
    }

    pub fn get(&self, i: usize) -> &Q {
        &self.coords[i]
    }

    pub fn dot(&self, other: &Self) -> Q {
        debug_assert_eq!(self.dim(), other.dim());
        let mut s = Q::zero();
        for (a, b) in self.coords.iter().zip(&other.coords) {
            if !a.is_zero() && !b.is_zero() {
                s += a * b;
            }
        }
        s
    }

    pub fn norm_sq(&self) -> Q {
        self.dot(self)
    }

    pub fn scale(&self, c: &Q) -> Self {
        Self::new(self.coords.iter().map(|a| a * c).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|a| a.is_zero())
    }

    /// `self + c * other`
    pub fn axpy(&self, c: &Q, other: &Self) -> Self {
        Self::new(self.coords.iter().zip(&other.coords).map(|(a, b)| a + c * b).collect())
    }

    pub fn concat(&self, other: &Self) -> Self {
        let mut c = self.coords.clone();
        c.extend(other.coords.iter().cloned());
        Self::new(c)
    }

    pub fn slice(&self, start: usize, len: usize) -> Self {
        Self::new(self.coords[start..start + len].to_vec())
    }

    /// Positive multiple with coprime integer entries; the zero vector stays zero.
    pub fn primitive(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut l = BigInt::one();
        for c in &self.coords {
            l = num_integer::Integer::lcm(&l, c.denom());
        }
        let ints: Vec<BigInt> = self.coords.iter().map(|c| (c * Q::from_integer(l.clone())).to_integer()).collect();
        let mut g = BigInt::zero();
        for x in &ints {
            g = num_integer::Integer::gcd(&g, x);
        }
        Self::new(ints.into_iter().map(|x| Q::from_integer(x / &g)).collect())
    }

    pub fn sum<'a, I: IntoIterator<Item = &'a RationalVector>>(dim: usize, it: I) -> Self {
        let mut acc = Self::zeros(dim);
        for v in it {
            for (a, b) in acc.coords.iter_mut().zip(&v.coords) {
                *a += b;
            }
        }
        acc
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.coords.iter().map(qstr).collect()
    }
}

impl fmt::Debug for RationalVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", c)?;
        }
        write!(f, ")")
    }
}

impl<'a> Add<&'a RationalVector> for &'a RationalVector {
    type Output = RationalVector;
    fn add(self, rhs: &'a RationalVector) -> RationalVector {
        RationalVector::new(self.coords.iter().zip(&rhs.coords).map(|(a, b)| a + b).collect())
    }
}

impl<'a> Sub<&'a RationalVector> for &'a RationalVector {
    type Output = RationalVector;
    fn sub(self, rhs: &'a RationalVector) -> RationalVector {
        RationalVector::new(self.coords.iter().zip(&rhs.coords).map(|(a, b)| a - b).collect())
    }
}

impl<'a> Neg for &'a RationalVector {
    type Output = RationalVector;
    fn neg(self) -> RationalVector {
        RationalVector::new(self.coords.iter().map(|a| -a).collect())
    }
}

/// A nonnegative real stored through its square.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct SqrtRational {
    square: Q,
}

impl SqrtRational {
    pub fn from_square(square: Q) -> Self {
        assert!(!square.is_negative(), "negative square");
        SqrtRational { square }
    }

    pub fn from_value(x: &Q) -> Self {
        Self::from_square(x * x)
    }

    pub fn zero() -> Self {
        Self::from_square(Q::zero())
    }

    pub fn square(&self) -> &Q {
        &self.square
    }

    pub fn is_zero(&self) -> bool {
        self.square.is_zero()
    }
}

impl PartialOrd for SqrtRational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for SqrtRational {
    fn cmp(&self, other: &Self) -> Ordering {
        self.square.cmp(&other.square)
    }
}

pub fn cmp_sqrt(a: &SqrtRational, b: &SqrtRational) -> Ordering {
    a.square.cmp(&b.square)
}

/// Orders `(a + b) / 2` against `c`.
pub fn cmp_sum_sqrt(a: &SqrtRational, b: &SqrtRational, c: &SqrtRational) -> Ordering {
    // (√A + √B)/2 vs √C  <=>  A + B + 2√(AB) vs 4C  <=>  2√(AB) vs 4C - A - B
    let (sa, sb, sc) = (&a.square, &b.square, &c.square);
    let k = qi(4) * sc - sa - sb;
    if k.is_negative() {
        return Ordering::Greater;
    }
    let lhs = qi(4) * sa * sb;
    let rhs = &k * &k;
    lhs.cmp(&rhs)
}

/// `v` minus its orthogonal projection onto `span(span)`.
pub fn perp_component(v: &RationalVector, span: &[RationalVector]) -> Result<RationalVector> {
    if span.is_empty() {
        return Ok(v.clone());
    }
    let gram: Vec<Vec<Q>> = span.iter().map(|a| span.iter().map(|b| a.dot(b)).collect()).collect();
    let rhs: Vec<Q> = span.iter().map(|a| a.dot(v)).collect();
    let c = solve_square(&gram, &rhs).ok_or(Error::DegenerateSpan)?;
    let mut out = v.clone();
    for (ci, a) in c.iter().zip(span) {
        out = out.axpy(&-ci, a);
    }
    Ok(out)
}

/// Solves `m x = rhs` for square nonsingular `m`; `None` when singular.
pub fn solve_square(m: &[Vec<Q>], rhs: &[Q]) -> Option<Vec<Q>> {
    let n = m.len();
    let mut a: Vec<Vec<Q>> = m
        .iter()
        .zip(rhs)
        .map(|(row, r)| {
            let mut row = row.clone();
            row.push(r.clone());
            row
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, piv);
        let p = a[col][col].clone();
        for x in a[col].iter_mut() {
            *x /= &p;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                let pivot_row = a[col].clone();
                for (x, y) in a[r].iter_mut().zip(&pivot_row) {
                    if !y.is_zero() {
                        *x -= &f * y;
                    }
                }
            }
        }
    }
    Some(a.into_iter().map(|row| row[n].clone()).collect())
}

/// Reduced row echelon form; returns the pivot columns.
pub fn rref(m: &mut [Vec<Q>]) -> Vec<usize> {
    let rows = m.len();
    if rows == 0 {
        return vec![];
    }
    let cols = m[0].len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let pv = m[r][c].clone();
        for x in m[r].iter_mut() {
            *x /= &pv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                let prow = m[r].clone();
                for (x, y) in m[i].iter_mut().zip(&prow) {
                    if !y.is_zero() {
                        *x -= &f * y;
                    }
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(vs: &[RationalVector]) -> usize {
    if vs.is_empty() {
        return 0;
    }
    let mut m: Vec<Vec<Q>> = vs.iter().map(|v| v.coords.clone()).collect();
    rref(&mut m).len()
}

/// Indices of a maximal linearly independent subfamily, chosen greedily in order.
pub fn independent_subset(vs: &[RationalVector]) -> Vec<usize> {
    let mut chosen: Vec<usize> = Vec::new();
    let mut basis: Vec<RationalVector> = Vec::new();
    for (i, v) in vs.iter().enumerate() {
        let r = reduce_against(v, &basis);
        if !r.is_zero() {
            basis.push(r);
            chosen.push(i);
        }
    }
    chosen
}

/// Component of `v` orthogonal to an orthogonal family `orth` (Gram–Schmidt step).
fn reduce_against(v: &RationalVector, orth: &[RationalVector]) -> RationalVector {
    let mut r = v.clone();
    for b in orth {
        let c = r.dot(b) / b.norm_sq();
        if !c.is_zero() {
            r = r.axpy(&-c, b);
        }
    }
    r
}

/// Orthogonal (not normalized) basis of the span of `vs`.
pub fn orthogonal_basis(vs: &[RationalVector]) -> Vec<RationalVector> {
    let mut basis: Vec<RationalVector> = Vec::new();
    for v in vs {
        let r = reduce_against(v, &basis);
        if !r.is_zero() {
            basis.push(r);
        }
    }
    basis
}

/// Orthogonal projection onto the span of an arbitrary (possibly dependent) family.
pub fn project_onto_span(v: &RationalVector, vs: &[RationalVector]) -> RationalVector {
    let basis = orthogonal_basis(vs);
    &reduce_against(v, &basis).neg() + v
}

/// Orthogonal basis of the orthogonal complement of `span(vs)` inside `span(ambient)`.
pub fn complement_basis(vs: &[RationalVector], ambient: &[RationalVector]) -> Vec<RationalVector> {
    let mut basis = orthogonal_basis(vs);
    let k = basis.len();
    for a in ambient {
        let r = reduce_against(a, &basis);
        if !r.is_zero() {
            basis.push(r);
        }
    }
    basis.split_off(k)
}

/// Coefficients of `v` in the basis `basis` if `v` lies in the span, assuming independence.
pub fn coordinates_in(v: &RationalVector, basis: &[RationalVector]) -> Option<Vec<Q>> {
    let gram: Vec<Vec<Q>> = basis.iter().map(|a| basis.iter().map(|b| a.dot(b)).collect()).collect();
    let rhs: Vec<Q> = basis.iter().map(|a| a.dot(v)).collect();
    let c = solve_square(&gram, &rhs)?;
    let mut back = RationalVector::zeros(v.dim());
    for (ci, b) in c.iter().zip(basis) {
        back = back.axpy(ci, b);
    }
    if &back == v {
        Some(c)
    } else {
        None
    }
}

/// Affine coordinates of `p` with respect to affinely independent points, if `p` lies in their hull plane.
pub fn affine_coordinates(p: &RationalVector, pts: &[RationalVector]) -> Option<Vec<Q>> {
    let base = &pts[0];
    let dirs: Vec<RationalVector> = pts[1..].iter().map(|w| w - base).collect();
    let c = coordinates_in(&(p - base), &dirs)?;
    let mut out = vec![Q::one() - c.iter().fold(Q::zero(), |s, x| s + x)];
    out.extend(c);
    Some(out)
}

pub fn sign(x: &Q) -> i8 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

/// Smallest nonnegative integer `k` with `k*k >= x`.
pub fn ceil_sqrt(x: &Q) -> BigInt {
    if !x.is_positive() {
        return BigInt::zero();
    }
    let c = x.ceil().to_integer();
    let mut k = c.sqrt();
    while Q::from_integer(&k * &k) < *x {
        k += 1;
    }
    k
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sqrt_examples() {
        let s = |x: Q| SqrtRational::from_square(x);
        assert_eq!(cmp_sqrt(&s(qi(4)), &s(qi(9))), Ordering::Less);
        assert_eq!(cmp_sqrt(&s(qi(2)), &s(qi(2))), Ordering::Equal);
        assert_eq!(cmp_sqrt(&s(qi(5)), &s(q(49, 10))), Ordering::Greater);
    }

    #[test]
    fn sum_sqrt_examples() {
        let s = |x: Q| SqrtRational::from_square(x);
        assert_eq!(cmp_sum_sqrt(&s(qi(1)), &s(qi(1)), &s(qi(1))), Ordering::Equal);
        assert_eq!(cmp_sum_sqrt(&s(qi(4)), &s(qi(16)), &s(qi(4))), Ordering::Greater);
        // sqrt(18)/2 = sqrt(9/2)
        assert_eq!(cmp_sum_sqrt(&s(qi(2)), &s(qi(8)), &s(q(9, 2))), Ordering::Equal);
        assert_eq!(cmp_sum_sqrt(&s(qi(2)), &s(qi(8)), &s(q(46, 10))), Ordering::Less);
    }

    #[test]
    fn perp_examples() {
        let v = RationalVector::from_ints;
        assert_eq!(perp_component(&v(&[1, 1]), &[v(&[1, 0])]).unwrap(), v(&[0, 1]));
        assert_eq!(perp_component(&v(&[3, 0]), &[]).unwrap(), v(&[3, 0]));
        let r = perp_component(&v(&[1, 2, 3]), &[v(&[1, 1, 0]), v(&[0, 0, 1])]).unwrap();
        assert_eq!(r, RationalVector::new(vec![q(-1, 2), q(1, 2), qi(0)]));
        assert_eq!(perp_component(&v(&[1, 2]), &[v(&[1, 1]), v(&[2, 2])]), Err(Error::DegenerateSpan));
    }

    #[test]
    fn primitive_and_ceil_sqrt() {
        let v = RationalVector::new(vec![q(2, 3), q(-4, 3)]);
        assert_eq!(v.primitive(), RationalVector::from_ints(&[1, -2]));
        assert_eq!(ceil_sqrt(&qi(10)), BigInt::from(4));
        assert_eq!(ceil_sqrt(&qi(9)), BigInt::from(3));
        assert_eq!(ceil_sqrt(&q(1, 4)), BigInt::from(1));
    }

    #[test]
    fn parse_roundtrip() {
        for s in ["3", "-7/2", "0"] {
            assert_eq!(qstr(&parse_q(s).unwrap()), s);
        }
        assert!(parse_q("1/0").is_none());
    }
}
